//! Curve inputs and their classification: degeneracy, places at infinity,
//! parametrizations through a known point.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::arith::{prime_to_s_part, rational_sqrt, squarefree_part, PrimeSet, Rat};
use crate::error::{Error, Result};
use crate::poly::{rational_roots, PolyQ, RatFunc, UPoly, Var};
use crate::quad::QuadElem;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CurveInput {
    Implicit {
        f: PolyQ,
        irreducibility_asserted: bool,
    },
    Parametrized {
        coords: Vec<RatFunc<Rat>>,
        properness_asserted: bool,
    },
}

impl CurveInput {
    pub fn implicit(f: PolyQ, irreducibility_asserted: bool) -> Result<Self> {
        if f.uses(Var::T) {
            return Err(Error::InvalidInput(
                "an implicit curve may only use x and y".into(),
            ));
        }
        if f.degree() == 0 {
            return Err(Error::InvalidInput(
                "the curve equation must have degree >= 1".into(),
            ));
        }
        Ok(CurveInput::Implicit {
            f,
            irreducibility_asserted,
        })
    }

    pub fn parametrized(coords: Vec<RatFunc<Rat>>, properness_asserted: bool) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::InvalidInput(
                "a parametrization needs at least 2 coordinates".into(),
            ));
        }
        if coords.iter().all(RatFunc::is_constant) {
            return Err(Error::InvalidInput("all coordinates are constant".into()));
        }
        Ok(CurveInput::Parametrized {
            coords,
            properness_asserted,
        })
    }

    /// Parse an equation f(x, y) = 0 given as the text of f.
    pub fn parse_implicit(text: &str, irreducibility_asserted: bool) -> Result<Self> {
        Self::implicit(crate::poly::parse_curve(text)?, irreducibility_asserted)
    }

    /// Parse comma-separated coordinate functions of t.
    pub fn parse_param(text: &str, properness_asserted: bool) -> Result<Self> {
        Self::parametrized(crate::poly::parse_ratfunc_list(text)?, properness_asserted)
    }

    /// Number of affine coordinates.
    pub fn dimension(&self) -> usize {
        match self {
            CurveInput::Implicit { .. } => 2,
            CurveInput::Parametrized { coords, .. } => coords.len(),
        }
    }

    /// Exact membership test for a point (and its parameter, if any).
    pub fn contains(&self, p: &AffinePoint) -> bool {
        match self {
            CurveInput::Implicit { f, .. } => {
                p.coords.len() == 2 && f.eval_xy(&p.coords[0], &p.coords[1]).is_zero()
            }
            CurveInput::Parametrized { coords, .. } => {
                let Some(t) = &p.param_value else {
                    return false;
                };
                p.coords.len() == coords.len()
                    && coords
                        .iter()
                        .zip(&p.coords)
                        .all(|(r, x)| r.eval(t).as_ref() == Some(x))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AffinePoint {
    pub coords: Vec<Rat>,
    pub param_value: Option<Rat>,
}

impl AffinePoint {
    pub fn plane(x: Rat, y: Rat) -> Self {
        AffinePoint {
            coords: vec![x, y],
            param_value: None,
        }
    }

    /// Largest coordinate height.
    pub fn height(&self) -> num_bigint::BigUint {
        self.coords
            .iter()
            .map(Rat::height)
            .max()
            .unwrap_or_default()
    }

    pub fn is_s_integral(&self, s: &PrimeSet) -> bool {
        self.coords.iter().all(|c| crate::arith::is_s_integer(c, s))
    }
}

impl fmt::Display for AffinePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = coordinate_names(self.coords.len());
        for (i, (n, c)) in names.iter().zip(&self.coords).enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{n} = {c}")?;
        }
        Ok(())
    }
}

/// "x", "y" in the plane, "x1".."xn" otherwise.
pub fn coordinate_names(n: usize) -> Vec<String> {
    if n == 2 {
        vec!["x".into(), "y".into()]
    } else {
        (1..=n).map(|i| format!("x{i}")).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Classification {
    Line,
    ConicSmooth,
    /// Number of distinct points at infinity of the projective closure.
    HigherDegree(usize),
    Degenerate(String),
}

/// The symmetric matrix of the homogenized conic, as rows.
fn conic_matrix(f: &PolyQ) -> [[Rat; 3]; 3] {
    let half = Rat::new(1, 2);
    let c = |i, j| f.coeff_xy(i, j);
    let (a, b, cc) = (c(2, 0), &c(1, 1) * &half, c(0, 2));
    let (d, e, g) = (&c(1, 0) * &half, &c(0, 1) * &half, c(0, 0));
    [[a, b.clone(), d.clone()], [b, cc, e.clone()], [d, e, g]]
}

fn det3(m: &[[Rat; 3]; 3]) -> Rat {
    let minor = |i: usize, j: usize, k: usize, l: usize| &m[1][i] * &m[2][j] - &m[1][k] * &m[2][l];
    &m[0][0] * &minor(1, 2, 2, 1) - &m[0][1] * &minor(0, 2, 2, 0) + &m[0][2] * &minor(0, 1, 1, 0)
}

/// Distinct roots over the algebraic closure of the top-degree form.
pub fn leading_root_count(f: &PolyQ) -> usize {
    let d = f.degree();
    let top = f.homogeneous_part(d);
    // dehomogenize at y = 1: the coefficient of x^i y^(d-i) goes to z^i
    let coeffs: Vec<Rat> = (0..=d).map(|i| top.coeff_xy(i, d - i)).collect();
    let g = UPoly::new(coeffs);
    let finite = g.squarefree_part().degree().unwrap_or(0);
    finite + usize::from(top.coeff_xy(d, 0).is_zero())
}

pub fn classify_implicit(f: &PolyQ) -> Result<Classification> {
    if f.uses(Var::T) {
        return Err(Error::InvalidInput(
            "an implicit curve may only use x and y".into(),
        ));
    }
    Ok(match f.degree() {
        0 => {
            return Err(Error::InvalidInput(
                "the curve equation must have degree >= 1".into(),
            ))
        }
        1 => Classification::Line,
        2 => {
            if det3(&conic_matrix(f)).is_zero() {
                Classification::Degenerate("reducible or singular conic".into())
            } else {
                Classification::ConicSmooth
            }
        }
        _ => Classification::HigherDegree(leading_root_count(f)),
    })
}

/// A point of the parameter line.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Pole {
    Finite(Rat),
    Infinity,
}

/// A rational place at infinity, either as a pole of a parametrization or as
/// a direction (x : y) of a plane curve.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Place {
    Param(Pole),
    Direction(Rat, Rat),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InfinityData {
    OnePlace(Place),
    TwoRational([Place; 2]),
    /// `alpha` is a root (parameter value or slope x/y) with positive
    /// sqrt(D) component; `factor` is its monic minimal polynomial.
    TwoConjugate {
        d: i64,
        alpha: QuadElem,
        factor: UPoly<Rat>,
    },
    ThreeOrMore,
    Unknown,
}

impl InfinityData {
    pub fn label(&self) -> &'static str {
        match self {
            InfinityData::OnePlace(_) => "one place at infinity",
            InfinityData::TwoRational(_) => "two rational places at infinity",
            InfinityData::TwoConjugate { .. } => "two conjugate places at infinity",
            InfinityData::ThreeOrMore => "at least three places at infinity",
            InfinityData::Unknown => "places at infinity not determined",
        }
    }
}

/// Root of the monic irreducible quadratic t^2 + p t + r with positive
/// sqrt(D) component, together with D.
fn conjugate_root(factor: &UPoly<Rat>) -> Result<(i64, QuadElem)> {
    let factor = factor.monic();
    let (p, r) = (factor.coeff(1), factor.coeff(0));
    let disc = &p * &p - Rat::from(4) * &r;
    let sf = squarefree_part(&(disc.numer() * disc.denom()))?;
    let d = sf
        .to_i64()
        .ok_or_else(|| Error::InvalidInput(format!("discriminant {sf} out of range")))?;
    let f = rational_sqrt(&(&disc / &Rat::from(d)))
        .ok_or_else(|| Error::Contract("discriminant is not D times a square".into()))?;
    let half = Rat::new(1, 2);
    let alpha = QuadElem::new(-(&p * &half), &f * &half, d)?;
    Ok((d, alpha))
}

/// Places at infinity of a smooth conic, from its top-degree form.
pub fn infinity_of_conic(f: &PolyQ) -> Result<InfinityData> {
    if classify_implicit(f)? != Classification::ConicSmooth {
        return Err(Error::Contract(
            "infinity_of_conic needs a smooth conic".into(),
        ));
    }
    let (a, b, c) = (f.coeff_xy(2, 0), f.coeff_xy(1, 1), f.coeff_xy(0, 2));
    let disc = &b * &b - Rat::from(4) * &a * &c;
    // the form a z^2 + b z + c in z = x/y
    if a.is_zero() {
        // b z + c, plus the direction (1 : 0)
        if b.is_zero() {
            return Ok(InfinityData::OnePlace(Place::Direction(
                Rat::one(),
                Rat::zero(),
            )));
        }
        return Ok(InfinityData::TwoRational([
            Place::Direction(-(&c / &b), Rat::one()),
            Place::Direction(Rat::one(), Rat::zero()),
        ]));
    }
    let form = UPoly::new(vec![c, b.clone(), a.clone()]);
    if disc.is_zero() {
        let z = -(&b / &(Rat::from(2) * &a));
        return Ok(InfinityData::OnePlace(Place::Direction(z, Rat::one())));
    }
    if rational_sqrt(&disc).is_some() {
        let roots = rational_roots(&form)?;
        return Ok(InfinityData::TwoRational([
            Place::Direction(roots[0].clone(), Rat::one()),
            Place::Direction(roots[1].clone(), Rat::one()),
        ]));
    }
    let factor = form.monic();
    let (d, alpha) = conjugate_root(&factor)?;
    Ok(InfinityData::TwoConjugate { d, alpha, factor })
}

fn lcm(a: &UPoly<Rat>, b: &UPoly<Rat>) -> UPoly<Rat> {
    let g = a.gcd(b);
    a.mul(b).div_rem(&g).0.monic()
}

/// Poles of a parametrization on the projective parameter line.
pub fn poles_of_parametrization(coords: &[RatFunc<Rat>]) -> Result<InfinityData> {
    let mut den = UPoly::one();
    for r in coords {
        den = lcm(&den, r.den());
    }
    let finite = den.squarefree_part();
    let at_infinity = coords.iter().any(RatFunc::has_pole_at_infinity);
    let nfinite = finite.degree().unwrap_or(0);
    Ok(match (nfinite, at_infinity) {
        (0, false) => {
            return Err(Error::Contract(
                "a nonconstant parametrization has a pole".into(),
            ))
        }
        (0, true) => InfinityData::OnePlace(Place::Param(Pole::Infinity)),
        (1, false) => InfinityData::OnePlace(Place::Param(Pole::Finite(
            rational_roots(&finite)?[0].clone(),
        ))),
        (1, true) => InfinityData::TwoRational([
            Place::Param(Pole::Finite(rational_roots(&finite)?[0].clone())),
            Place::Param(Pole::Infinity),
        ]),
        (2, false) => {
            let roots = rational_roots(&finite)?;
            if roots.len() == 2 {
                InfinityData::TwoRational([
                    Place::Param(Pole::Finite(roots[0].clone())),
                    Place::Param(Pole::Finite(roots[1].clone())),
                ])
            } else {
                let (d, alpha) = conjugate_root(&finite)?;
                InfinityData::TwoConjugate {
                    d,
                    alpha,
                    factor: finite,
                }
            }
        }
        _ => InfinityData::ThreeOrMore,
    })
}

/// A parametrization together with the parameter of a chosen base point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Parametrization {
    pub coords: Vec<RatFunc<Rat>>,
    pub base_param: Rat,
}

/// Lines through P on a smooth conic, parametrized by slope. When the
/// tangent at P is vertical the roles of x and y are swapped, so that P
/// always sits at a finite parameter.
pub fn parametrize_conic(f: &PolyQ, p: &AffinePoint) -> Result<Parametrization> {
    let (px, py) = (&p.coords[0], &p.coords[1]);
    if !f.eval_xy(px, py).is_zero() {
        return Err(Error::Contract(format!("({px}, {py}) is not on the conic")));
    }
    let fx = f.partial_derivative(Var::X).eval_xy(px, py);
    let fy = f.partial_derivative(Var::Y).eval_xy(px, py);
    let (a, b, c) = (f.coeff_xy(2, 0), f.coeff_xy(1, 1), f.coeff_xy(0, 2));
    let swapped = fy.is_zero();
    // direction (1, m), or (m, 1) when swapped
    let (l, q, base) = if swapped {
        (
            UPoly::new(vec![fy.clone(), fx.clone()]),
            UPoly::new(vec![c, b, a]),
            Rat::zero(),
        )
    } else {
        (
            UPoly::new(vec![fx.clone(), fy.clone()]),
            UPoly::new(vec![a, b, c]),
            -(&fx / &fy),
        )
    };
    if q.is_zero() {
        return Err(Error::Contract("conic without quadratic part".into()));
    }
    let s = RatFunc::new(l.neg(), q)?;
    let m = RatFunc::var();
    let along = s.mul(&m);
    let (dx, dy) = if swapped { (along, s) } else { (s, along) };
    let x = dx.add(&RatFunc::constant(px.clone()));
    let y = dy.add(&RatFunc::constant(py.clone()));
    if !f.compose_xy(&x, &y).is_zero() {
        return Err(Error::InvariantViolation(
            "conic parametrization does not satisfy f".into(),
        ));
    }
    Ok(Parametrization {
        coords: vec![x, y],
        base_param: base,
    })
}

/// Affine parametrization of the line a x + b y + c = 0.
pub fn parametrize_line(f: &PolyQ, p: &AffinePoint) -> Result<Parametrization> {
    if f.degree() != 1 {
        return Err(Error::Contract("parametrize_line needs a line".into()));
    }
    let (a, b, c) = (f.coeff_xy(1, 0), f.coeff_xy(0, 1), f.coeff_xy(0, 0));
    let (coords, base) = if !b.is_zero() {
        let y = RatFunc::from_poly(UPoly::new(vec![-(&c / &b), -(&a / &b)]));
        (vec![RatFunc::var(), y], p.coords[0].clone())
    } else {
        let x = RatFunc::constant(-(&c / &a));
        (vec![x, RatFunc::var()], p.coords[1].clone())
    };
    Ok(Parametrization {
        coords,
        base_param: base,
    })
}

/// Integer coefficients (A, B, C) of a x + b y + c with gcd 1.
fn primitive_line(f: &PolyQ) -> (BigInt, BigInt, BigInt) {
    let cs = [f.coeff_xy(1, 0), f.coeff_xy(0, 1), f.coeff_xy(0, 0)];
    let l = cs.iter().fold(BigInt::from(1), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = cs.iter().map(|c| c.numer() * (&l / c.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    (&ints[0] / &g, &ints[1] / &g, &ints[2] / &g)
}

/// Exact existence test for S-integral points on a line: solvable iff the
/// prime-to-S part of gcd(A, B) divides C. Returns a point when solvable.
pub fn line_point(f: &PolyQ, s: &PrimeSet) -> Result<Option<AffinePoint>> {
    if f.degree() != 1 {
        return Err(Error::Contract("line_point needs a line".into()));
    }
    let (a, b, c) = primitive_line(f);
    let eg = a.extended_gcd(&b);
    let g = eg.gcd.abs();
    let g_prime = BigInt::from(prime_to_s_part(g.magnitude(), s));
    if !(&c % &g_prime).is_zero() {
        return Ok(None);
    }
    // a*u + b*v = gcd
    let scale = Rat::new(-c, eg.gcd.clone());
    let x = &scale * &Rat::from_int(eg.x);
    let y = &scale * &Rat::from_int(eg.y);
    let pt = AffinePoint::plane(x, y);
    debug_assert!(f.eval_xy(&pt.coords[0], &pt.coords[1]).is_zero());
    debug_assert!(pt.is_s_integral(s));
    Ok(Some(pt))
}
