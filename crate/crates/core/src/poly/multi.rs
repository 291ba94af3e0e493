use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::arith::Rat;
use crate::poly::upoly::{RatFunc, UPoly};

/// Variables of the input language, in canonical order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    X = 0,
    Y = 1,
    T = 2,
}

impl Var {
    pub const ALL: [Var; 3] = [Var::X, Var::Y, Var::T];

    pub fn name(self) -> &'static str {
        match self {
            Var::X => "x",
            Var::Y => "y",
            Var::T => "t",
        }
    }

    pub fn from_name(s: &str) -> Option<Var> {
        match s {
            "x" => Some(Var::X),
            "y" => Some(Var::Y),
            "t" => Some(Var::T),
            _ => None,
        }
    }
}

/// Exponents of (x, y, t).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub [u32; 3]);

impl Monomial {
    pub const ONE: Monomial = Monomial([0, 0, 0]);

    pub fn var(v: Var) -> Self {
        let mut e = [0; 3];
        e[v as usize] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn exp(&self, v: Var) -> u32 {
        self.0[v as usize]
    }

    fn mul(&self, other: &Self) -> Self {
        Monomial([
            self.0[0] + other.0[0],
            self.0[1] + other.0[1],
            self.0[2] + other.0[2],
        ])
    }
}

/// Graded order: higher total degree first, then lexicographically larger
/// exponent vector first.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .degree()
            .cmp(&self.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial in x, y, t with rational coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct PolyQ {
    terms: BTreeMap<Monomial, Rat>,
}

impl PolyQ {
    pub fn zero() -> Self {
        PolyQ::default()
    }

    pub fn constant(c: Rat) -> Self {
        Self::from_terms([(Monomial::ONE, c)])
    }

    pub fn var(v: Var) -> Self {
        Self::from_terms([(Monomial::var(v), Rat::one())])
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Rat)>) -> Self {
        let mut map: BTreeMap<Monomial, Rat> = BTreeMap::new();
        for (m, c) in terms {
            let e = map.entry(m).or_insert_with(Rat::zero);
            *e = &*e + &c;
        }
        map.retain(|_, c| !c.is_zero());
        PolyQ { terms: map }
    }

    /// Terms in canonical (printing) order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rat {
        self.terms.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    /// Coefficient of x^i y^j.
    pub fn coeff_xy(&self, i: u32, j: u32) -> Rat {
        self.coeff(&Monomial([i, j, 0]))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; 0 for constants and for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.keys().map(|m| m.exp(v)).max().unwrap_or(0)
    }

    pub fn uses(&self, v: Var) -> bool {
        self.degree_in(v) > 0
    }

    pub fn constant_value(&self) -> Option<Rat> {
        match self.terms.len() {
            0 => Some(Rat::zero()),
            1 => self.terms.get(&Monomial::ONE).cloned(),
            _ => None,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .chain(other.terms.iter())
                .map(|(m, c)| (*m, c.clone())),
        )
    }

    pub fn neg(&self) -> Self {
        PolyQ {
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::from_terms(self.terms.iter().flat_map(|(m1, c1)| {
            other
                .terms
                .iter()
                .map(move |(m2, c2)| (m1.mul(m2), c1 * c2))
        }))
    }

    pub fn scale(&self, c: &Rat) -> Self {
        Self::from_terms(self.terms.iter().map(|(m, x)| (*m, x * c)))
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::constant(Rat::one());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// The homogeneous component of the given degree.
    pub fn homogeneous_part(&self, deg: u32) -> Self {
        PolyQ {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == deg)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// Evaluate at x, y (t must not occur).
    pub fn eval_xy(&self, x: &Rat, y: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for (m, c) in &self.terms {
            acc = acc + c * &x.pow(m.0[0] as i32) * y.pow(m.0[1] as i32);
        }
        acc
    }

    /// Write f = sum_j c_j * main^j and return the c_j as univariate
    /// polynomials in `other` (t must not occur).
    pub fn coeffs_in(&self, main: Var, other: Var) -> Vec<UPoly<Rat>> {
        let deg = self.degree_in(main) as usize;
        let mut buckets: Vec<Vec<Rat>> = vec![Vec::new(); deg + 1];
        for (m, c) in &self.terms {
            let j = m.exp(main) as usize;
            let i = m.exp(other) as usize;
            let b = &mut buckets[j];
            if b.len() <= i {
                b.resize(i + 1, Rat::zero());
            }
            b[i] = &b[i] + c;
        }
        buckets.into_iter().map(UPoly::new).collect()
    }

    /// Univariate view when only t occurs.
    pub fn to_upoly_t(&self) -> Option<UPoly<Rat>> {
        if self.uses(Var::X) || self.uses(Var::Y) {
            return None;
        }
        let deg = self.degree_in(Var::T) as usize;
        let mut v = vec![Rat::zero(); deg + 1];
        for (m, c) in &self.terms {
            v[m.exp(Var::T) as usize] = c.clone();
        }
        Some(UPoly::new(v))
    }

    /// f(x(m), y(m)) for rational functions x, y.
    pub fn compose_xy(&self, x: &RatFunc<Rat>, y: &RatFunc<Rat>) -> RatFunc<Rat> {
        let mut acc = RatFunc::constant(Rat::zero());
        for (m, c) in &self.terms {
            let mut term = RatFunc::constant(c.clone());
            term = term.mul(&x.pow(m.0[0] as i64).expect("nonnegative power"));
            term = term.mul(&y.pow(m.0[1] as i64).expect("nonnegative power"));
            acc = acc.add(&term);
        }
        acc
    }

    pub fn partial_derivative(&self, v: Var) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .filter(|(m, _)| m.exp(v) > 0)
                .map(|(m, c)| {
                    let mut e = m.0;
                    e[v as usize] -= 1;
                    (Monomial(e), c * &Rat::from(m.exp(v) as i64))
                }),
        )
    }
}

fn fmt_monomial(m: &Monomial) -> String {
    let mut parts = Vec::new();
    for v in Var::ALL {
        match m.exp(v) {
            0 => {}
            1 => parts.push(v.name().to_string()),
            e => parts.push(format!("{}^{e}", v.name())),
        }
    }
    parts.join("*")
}

impl fmt::Display for PolyQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mono = fmt_monomial(m);
            if mono.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{mono}")?;
            } else if abs.is_integer() {
                write!(f, "{abs}*{mono}")?;
            } else {
                write!(f, "({abs})*{mono}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for PolyQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> PolyQ {
        PolyQ::var(Var::X)
    }
    fn y() -> PolyQ {
        PolyQ::var(Var::Y)
    }

    #[test]
    fn canonical_printing() {
        let f = x()
            .pow(2)
            .sub(&y().pow(2).scale(&Rat::from(2)))
            .sub(&PolyQ::constant(Rat::one()));
        assert_eq!(f.to_string(), "x^2 - 2*y^2 - 1");
        let g = x().pow(2).add(&y().scale(&Rat::new(1, 2)));
        assert_eq!(g.to_string(), "x^2 + (1/2)*y");
        assert_eq!(PolyQ::zero().to_string(), "0");
        let h = x().mul(&y()).neg().add(&PolyQ::constant(Rat::new(-3, 4)));
        assert_eq!(h.to_string(), "-x*y - 3/4");
    }

    #[test]
    fn degrees_and_parts() {
        let f = x()
            .pow(2)
            .mul(&y())
            .add(&x().mul(&y().pow(2)))
            .sub(&PolyQ::constant(Rat::one()));
        assert_eq!(f.degree(), 3);
        assert_eq!(f.homogeneous_part(3).to_string(), "x^2*y + x*y^2");
        assert_eq!(f.degree_in(Var::Y), 2);
        let cs = f.coeffs_in(Var::Y, Var::X);
        assert_eq!(cs.len(), 3);
        assert_eq!(cs[0], UPoly::constant(Rat::from(-1)));
        assert_eq!(cs[2], UPoly::var());
    }

    #[test]
    fn compose_with_parametrization() {
        // x^2 + y^2 - 1 at ((1-m^2)/(1+m^2), 2m/(1+m^2)) vanishes identically
        let f = x()
            .pow(2)
            .add(&y().pow(2))
            .sub(&PolyQ::constant(Rat::one()));
        let den = UPoly::new(vec![Rat::one(), Rat::zero(), Rat::one()]);
        let xm = RatFunc::new(
            UPoly::new(vec![Rat::one(), Rat::zero(), Rat::from(-1)]),
            den.clone(),
        )
        .unwrap();
        let ym = RatFunc::new(UPoly::new(vec![Rat::zero(), Rat::from(2)]), den).unwrap();
        assert!(f.compose_xy(&xm, &ym).is_zero());
    }
}
