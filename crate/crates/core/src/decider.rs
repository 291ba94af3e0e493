//! The decision procedure: classify the curve, check the conditions on S,
//! find a base point and build a witness that generates infinitely many
//! S-integral points.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::One;

use crate::arith::{mult_order, PrimeSet, Rat};
use crate::curve::{
    classify_implicit, infinity_of_conic, line_point, parametrize_conic, parametrize_line,
    poles_of_parametrization, AffinePoint, Classification, CurveInput, InfinityData,
    Parametrization, Place, Pole,
};
use crate::engine::search_point;
use crate::error::{Error, Result};
use crate::poly::{clearing_constant, mobius_substitute, to_laurent, LaurentPoly, Mobius, RatFunc};
use crate::quad::{norm_one_generator, quad_order_mod, splitting_type, QuadElem, SplitType};

pub const DEFAULT_SEARCH_BOUND: u64 = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Case {
    /// One place at infinity.
    I1,
    /// Two places at infinity, both rational.
    I2K,
    /// Two places at infinity, conjugate over a quadratic field.
    I2L,
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Case::I1 => "I1",
            Case::I2K => "I2K",
            Case::I2L => "I2L",
        })
    }
}

/// How the stream of parameter values theta is produced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Generator {
    /// theta = step * k for k = 1, -1, 2, -2, ...
    Integers { step: BigUint },
    /// theta = p^(step * k) for k = 1, 2, ...
    SUnitPower { p: u64, step: BigUint },
    /// theta = gamma^(step * k) for k = 1, 2, ...
    NormOnePower { gamma: QuadElem, step: BigUint },
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Integers { step } => write!(f, "multiples of {step}"),
            Generator::SUnitPower { p, step } => write!(f, "powers of {p}^{step}"),
            Generator::NormOnePower { gamma, step } => write!(f, "powers of ({gamma})^{step}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub case: Case,
    pub d: Option<i64>,
    pub base_point: AffinePoint,
    pub parametrization: Parametrization,
    /// t = M(u); u is 0 (I1) or 1 (I2K, I2L) at the base point.
    pub mobius: Mobius,
    pub fs: Vec<LaurentPoly>,
    /// Clearing constant; coprime to every prime of S.
    pub n: BigUint,
    pub generator: Generator,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FiniteReason {
    ThreePlusPlacesAtInfinity,
    UnitRankObstruction,
    NoSplitPlace,
    EmptyLine,
}

impl FiniteReason {
    pub fn code(&self) -> &'static str {
        match self {
            FiniteReason::ThreePlusPlacesAtInfinity => "three-plus-places-at-infinity",
            FiniteReason::UnitRankObstruction => "unit-rank-obstruction",
            FiniteReason::NoSplitPlace => "no-split-place",
            FiniteReason::EmptyLine => "empty-line",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Infinite(Box<Witness>),
    Finite { reason: FiniteReason, text: String },
    Unknown { reason: String, bound: u64 },
    Error(String),
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Infinite(_) => "infinite",
            Verdict::Finite { .. } => "finite",
            Verdict::Unknown { .. } => "unknown",
            Verdict::Error(_) => "error",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Verdict::Infinite(_) => 0,
            Verdict::Finite { .. } => 1,
            Verdict::Unknown { .. } => 2,
            Verdict::Error(_) => 3,
        }
    }
}

/// A verdict together with the user assumptions it depends on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decision {
    pub verdict: Verdict,
    pub reason: String,
    pub assumptions: Vec<String>,
}

/// Which construction applies, or why none can.
fn branch(inf: &InfinityData, s: &PrimeSet) -> std::result::Result<Case, (FiniteReason, String)> {
    match inf {
        InfinityData::OnePlace(_) => Ok(Case::I1),
        InfinityData::TwoRational(_) if s.is_empty() => Err((
            FiniteReason::UnitRankObstruction,
            "unit-rank obstruction: |S| = 1".to_string(),
        )),
        InfinityData::TwoRational(_) => Ok(Case::I2K),
        InfinityData::TwoConjugate { d, .. } => {
            if *d > 0
                || s.primes()
                    .iter()
                    .any(|&p| splitting_type(*d, p) == SplitType::Split)
            {
                Ok(Case::I2L)
            } else {
                Err((
                    FiniteReason::NoSplitPlace,
                    format!(
                        "no split place: Q(sqrt({d})) is imaginary and no prime of S splits in it"
                    ),
                ))
            }
        }
        InfinityData::ThreeOrMore => Err((
            FiniteReason::ThreePlusPlacesAtInfinity,
            "at least three places at infinity".to_string(),
        )),
        InfinityData::Unknown => unreachable!("callers resolve unknown infinity data"),
    }
}

fn infinite_reason(case: Case, w: &Witness, s: &PrimeSet) -> String {
    match case {
        Case::I1 => "one place at infinity and an S-integral point".to_string(),
        Case::I2K => format!(
            "two rational places at infinity, |S| = {} and an S-integral point",
            s.place_count()
        ),
        Case::I2L => {
            let d = w.d.expect("I2L witness has D");
            if d > 0 {
                format!("conjugate places over Q(sqrt({d})), real place splits, and an S-integral point")
            } else {
                format!("conjugate places over Q(sqrt({d})), a prime of S splits, and an S-integral point")
            }
        }
    }
}

pub fn decide(input: &CurveInput, s: &PrimeSet, bound: u64) -> Decision {
    let mut assumptions = Vec::new();
    match input {
        CurveInput::Implicit {
            irreducibility_asserted: true,
            ..
        } => assumptions.push("curve asserted irreducible".to_string()),
        CurveInput::Parametrized {
            properness_asserted: true,
            ..
        } => assumptions.push("parametrization asserted proper".to_string()),
        _ => {}
    }
    let verdict = match decide_inner(input, s, bound) {
        Ok(v) => v,
        Err(Error::WorkBudget(msg)) => Verdict::Unknown {
            reason: format!("work budget exceeded: {msg}"),
            bound,
        },
        Err(e) => Verdict::Error(e.to_string()),
    };
    let reason = match &verdict {
        Verdict::Infinite(w) => infinite_reason(w.case, w, s),
        Verdict::Finite { text, .. } => text.clone(),
        Verdict::Unknown { reason, .. } => reason.clone(),
        Verdict::Error(msg) => msg.clone(),
    };
    Decision {
        verdict,
        reason,
        assumptions,
    }
}

fn no_point(bound: u64) -> Verdict {
    Verdict::Unknown {
        reason: format!("no S-integral point found within search bound {bound}"),
        bound,
    }
}

fn decide_inner(input: &CurveInput, s: &PrimeSet, bound: u64) -> Result<Verdict> {
    if bound == 0 {
        return Err(Error::InvalidInput("search bound must be positive".into()));
    }
    match input {
        CurveInput::Implicit {
            f,
            irreducibility_asserted,
        } => match classify_implicit(f)? {
            Classification::Line => {
                let Some(exact) = line_point(f, s)? else {
                    return Ok(Verdict::Finite {
                        reason: FiniteReason::EmptyLine,
                        text: "the line has no S-integral points".into(),
                    });
                };
                let p = search_point(input, s, bound)?.unwrap_or(exact);
                let par = parametrize_line(f, &p)?;
                let w = build_witness(Case::I1, s, &par, p)?;
                Ok(Verdict::Infinite(Box::new(w)))
            }
            Classification::ConicSmooth => {
                let inf = infinity_of_conic(f)?;
                let case = match branch(&inf, s) {
                    Ok(c) => c,
                    Err((reason, text)) => return Ok(Verdict::Finite { reason, text }),
                };
                let Some(p) = search_point(input, s, bound)? else {
                    return Ok(no_point(bound));
                };
                let par = parametrize_conic(f, &p)?;
                let w = build_witness(case, s, &par, p)?;
                if let (InfinityData::TwoConjugate { d, .. }, Some(wd)) = (&inf, w.d) {
                    if *d != wd {
                        return Err(Error::InvariantViolation(format!(
                            "conic field D = {d} but parametrization field D = {wd}"
                        )));
                    }
                }
                Ok(Verdict::Infinite(Box::new(w)))
            }
            Classification::Degenerate(why) => {
                Err(Error::InvalidInput(format!("degenerate conic: {why}")))
            }
            Classification::HigherDegree(k) if k >= 3 && *irreducibility_asserted => {
                Ok(Verdict::Finite {
                    reason: FiniteReason::ThreePlusPlacesAtInfinity,
                    text: format!("at least three places at infinity ({k} distinct directions)"),
                })
            }
            Classification::HigherDegree(k) => Ok(Verdict::Unknown {
                reason: if k >= 3 {
                    format!(
                        "{k} directions at infinity, but irreducibility is not asserted; \
                         pass --assert-irreducible or supply a parametrization"
                    )
                } else {
                    "curves of degree >= 3 are only decided from a parametrization".into()
                },
                bound,
            }),
        },
        CurveInput::Parametrized {
            coords,
            properness_asserted,
        } => {
            let inf = poles_of_parametrization(coords)?;
            let case = match branch(&inf, s) {
                Ok(c) => c,
                Err((reason, text)) if *properness_asserted => {
                    return Ok(Verdict::Finite { reason, text })
                }
                Err((_, text)) => {
                    return Ok(Verdict::Unknown {
                        reason: format!(
                            "{text}; finiteness needs a proper parametrization (--assert-proper)"
                        ),
                        bound,
                    })
                }
            };
            let Some(p) = search_point(input, s, bound)? else {
                return Ok(no_point(bound));
            };
            let par = Parametrization {
                coords: coords.clone(),
                base_param: p.param_value.clone().expect("parametrized points carry t"),
            };
            let w = build_witness(case, s, &par, p)?;
            Ok(Verdict::Infinite(Box::new(w)))
        }
    }
}

fn q(r: &Rat) -> QuadElem {
    QuadElem::rational(r.clone())
}

fn has_pole(r: &RatFunc<Rat>, pole: &Pole) -> bool {
    match pole {
        Pole::Finite(t) => r.eval(t).is_none(),
        Pole::Infinity => r.has_pole_at_infinity(),
    }
}

fn poles_of(inf: &InfinityData) -> Result<Vec<Pole>> {
    let as_pole = |p: &Place| match p {
        Place::Param(pole) => Ok(pole.clone()),
        Place::Direction(..) => Err(Error::Contract("expected parameter poles".into())),
    };
    match inf {
        InfinityData::OnePlace(p) => Ok(vec![as_pole(p)?]),
        InfinityData::TwoRational([a, b]) => Ok(vec![as_pole(a)?, as_pole(b)?]),
        _ => Ok(Vec::new()),
    }
}

/// The substitution t = M(u) moving the poles to the standard places and
/// the base parameter to u = 0 (one place) or u = 1 (two places).
fn normalizing_mobius(
    case: Case,
    par: &Parametrization,
    inf: &InfinityData,
) -> Result<(Mobius, Option<i64>)> {
    let tp = &par.base_param;
    let one = QuadElem::from_int(1);
    let zero = QuadElem::from_int(0);
    match case {
        Case::I1 => {
            let poles = poles_of(inf)?;
            let m = match &poles[..] {
                [Pole::Infinity] => Mobius::new(one.clone(), q(tp), zero, one)?,
                [Pole::Finite(t0)] => {
                    // u = 1/(t - t0) - 1/(tp - t0)
                    let sp = (tp - t0).recip();
                    Mobius::new(q(t0), q(&(t0 * &sp + Rat::one())), one, q(&sp))?
                }
                _ => {
                    return Err(Error::InvariantViolation(
                        "one-place case without a single pole".into(),
                    ))
                }
            };
            Ok((m, None))
        }
        Case::I2K => {
            let poles = poles_of(inf)?;
            let [p1, p2] = &poles[..] else {
                return Err(Error::InvariantViolation(
                    "two-place case without two poles".into(),
                ));
            };
            // u has its pole at t2 and its zero at t1
            let mut t2 = p2.clone();
            let mut t1 = p1.clone();
            for r in &par.coords {
                let (h1, h2) = (has_pole(r, p1), has_pole(r, p2));
                if h1 != h2 {
                    if h1 {
                        std::mem::swap(&mut t1, &mut t2);
                    }
                    break;
                }
            }
            let m = match (&t1, &t2) {
                (Pole::Finite(a), Pole::Finite(b)) => {
                    let sp = (tp - a) / (tp - b);
                    Mobius::new(q(&(&sp * b)), q(&-a), q(&sp), q(&Rat::from(-1)))?
                }
                (Pole::Finite(a), Pole::Infinity) => {
                    let sp = tp - a;
                    Mobius::new(q(&sp), q(a), zero, one)?
                }
                (Pole::Infinity, Pole::Finite(b)) => {
                    let sp = (tp - b).recip();
                    Mobius::new(q(&(b * &sp)), one, q(&sp), zero)?
                }
                _ => return Err(Error::InvariantViolation("both poles at infinity".into())),
            };
            Ok((m, None))
        }
        Case::I2L => {
            let InfinityData::TwoConjugate { d, alpha, .. } = inf else {
                return Err(Error::InvariantViolation(
                    "conjugate case without conjugate poles".into(),
                ));
            };
            let tq = q(tp);
            let abar = alpha.conj();
            let sp = &(&tq - alpha) / &(&tq - &abar);
            let m = Mobius::new(&sp * &abar, -alpha, sp, QuadElem::from_int(-1))?;
            Ok((m, Some(*d)))
        }
    }
}

/// Laurent polynomials, clearing constant and generator for a base point.
pub fn build_witness(
    case: Case,
    s: &PrimeSet,
    par: &Parametrization,
    p: AffinePoint,
) -> Result<Witness> {
    let inf = poles_of_parametrization(&par.coords)?;
    let expected = matches!(
        (&inf, case),
        (InfinityData::OnePlace(_), Case::I1)
            | (InfinityData::TwoRational(_), Case::I2K)
            | (InfinityData::TwoConjugate { .. }, Case::I2L)
    );
    if !expected {
        return Err(Error::InvariantViolation(format!(
            "parametrization has {} but the case is {case}",
            inf.label()
        )));
    }
    let (mobius, d) = normalizing_mobius(case, par, &inf)?;
    let fs = par
        .coords
        .iter()
        .map(|r| to_laurent(&mobius_substitute(&r.lift(), &mobius)?))
        .collect::<Result<Vec<_>>>()?;

    let u_base = QuadElem::from_int(if case == Case::I1 { 0 } else { 1 });
    for (f, x) in fs.iter().zip(&p.coords) {
        let at_base = if case == Case::I1 {
            f.coeff(0)
        } else {
            f.eval(&u_base)?
        };
        if at_base != q(x) {
            return Err(Error::InvariantViolation(format!(
                "witness gives {at_base} at the base point instead of {x}"
            )));
        }
        let shape_ok = match case {
            Case::I1 => f.is_polynomial() && f.is_rational(),
            Case::I2K => f.is_rational(),
            Case::I2L => f.is_skew_symmetric(),
        };
        if !shape_ok {
            return Err(Error::InvariantViolation(format!(
                "{f} has the wrong shape for case {case}"
            )));
        }
    }

    let n = clearing_constant(&fs, s);
    let generator = match case {
        Case::I1 => Generator::Integers { step: n.clone() },
        Case::I2K => {
            let p = s
                .smallest()
                .ok_or_else(|| Error::Contract("I2K needs a prime in S".into()))?;
            let step = if n.is_one() {
                BigUint::one()
            } else {
                mult_order(&BigInt::from(p), &n)?
            };
            Generator::SUnitPower { p, step }
        }
        Case::I2L => {
            let d = d.expect("conjugate case has D");
            let gamma = norm_one_generator(d, s)?.ok_or_else(|| {
                Error::Contract(format!("no norm-one unit of infinite order for D = {d}"))
            })?;
            let step = if n.is_one() {
                BigUint::one()
            } else {
                quad_order_mod(&gamma, &n)?
            };
            Generator::NormOnePower { gamma, step }
        }
    };
    Ok(Witness {
        case,
        d,
        base_point: p,
        parametrization: par.clone(),
        mobius,
        fs,
        n,
        generator,
    })
}
