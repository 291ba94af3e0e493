use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;

use crate::arith::{prime_to_s_part, PrimeSet, Rat};
use crate::error::{Error, Result};
use crate::poly::upoly::{RatFunc, UPoly};
use crate::quad::QuadElem;
use crate::scalar::Scalar;

/// A Laurent polynomial in U with coefficients in Q or one Q(sqrt(D)).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, QuadElem>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    /// Drops zero coefficients and sums repeated exponents.
    pub fn from_terms(terms: impl IntoIterator<Item = (i64, QuadElem)>) -> Self {
        let mut map: BTreeMap<i64, QuadElem> = BTreeMap::new();
        for (e, c) in terms {
            let entry = map.entry(e).or_insert_with(|| QuadElem::from_int(0));
            *entry = &*entry + &c;
        }
        map.retain(|_, c| !c.is_zero());
        LaurentPoly { terms: map }
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &QuadElem)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn coeff(&self, e: i64) -> QuadElem {
        self.terms
            .get(&e)
            .cloned()
            .unwrap_or_else(|| QuadElem::from_int(0))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// No negative exponents.
    pub fn is_polynomial(&self) -> bool {
        self.min_exp().is_none_or(|e| e >= 0)
    }

    pub fn is_rational(&self) -> bool {
        self.terms.values().all(QuadElem::is_rational)
    }

    /// The common field tag of the coefficients, if any is irrational.
    pub fn field(&self) -> Option<i64> {
        self.terms.values().find_map(QuadElem::d)
    }

    /// Coefficient-wise conjugate F^tau.
    pub fn conj(&self) -> Self {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, c.conj())).collect(),
        }
    }

    /// F(U^-1).
    pub fn reversed(&self) -> Self {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (-e, c.clone())).collect(),
        }
    }

    /// Horner in U over the nonnegative part and in U^-1 over the rest.
    pub fn eval(&self, theta: &QuadElem) -> Result<QuadElem> {
        if theta.is_zero() {
            return Err(Error::ZeroArgument);
        }
        let horner = |x: &QuadElem, exps: &mut dyn Iterator<Item = (i64, &QuadElem)>| {
            let mut acc = QuadElem::from_int(0);
            let mut last: Option<i64> = None;
            for (e, c) in exps {
                if let Some(l) = last {
                    acc = &acc * &x.pow(l - e);
                }
                acc = &acc + c;
                last = Some(e);
            }
            if let Some(l) = last {
                acc = &acc * &x.pow(l);
            }
            acc
        };
        let pos = horner(
            theta,
            &mut self
                .terms
                .iter()
                .rev()
                .filter(|(e, _)| **e >= 0)
                .map(|(e, c)| (*e, c)),
        );
        let inv = theta.inv();
        let neg = horner(
            &inv,
            &mut self
                .terms
                .iter()
                .filter(|(e, _)| **e < 0)
                .map(|(e, c)| (-*e, c)),
        );
        Ok(&pos + &neg)
    }

    /// F^tau(U) == F(U^-1).
    pub fn is_skew_symmetric(&self) -> bool {
        self.conj() == self.reversed()
    }

    pub fn to_ratfunc(&self) -> RatFunc<QuadElem> {
        let shift = self.min_exp().map_or(0, |e| e.min(0));
        let width = self.max_exp().map_or(0, |e| e - shift) as usize;
        let mut coeffs = vec![QuadElem::from_int(0); width + 1];
        for (e, c) in &self.terms {
            coeffs[(e - shift) as usize] = c.clone();
        }
        let num = UPoly::new(coeffs);
        let den = UPoly::monomial(QuadElem::from_int(1), (-shift) as usize);
        RatFunc::new(num, den).expect("monomial denominator")
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mono = match e {
                0 => String::new(),
                1 => "U".to_string(),
                _ => format!("U^{e}"),
            };
            if mono.is_empty() {
                write!(f, "({c})")?;
            } else if c.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "({c})*{mono}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Exact Laurent expansion of a rational function whose denominator is a
/// unit times a power of t.
pub fn to_laurent(r: &RatFunc<QuadElem>) -> Result<LaurentPoly> {
    let den = r.den();
    let k = den.t_adic_valuation();
    if den.degree() != Some(k) {
        return Err(Error::PoleElsewhere);
    }
    let lead = den.lead().expect("nonzero denominator").inv();
    Ok(LaurentPoly::from_terms(
        r.num()
            .coeffs()
            .iter()
            .enumerate()
            .map(|(i, c)| (i as i64 - k as i64, c.mul(&lead))),
    ))
}

/// Least N with N * F having S-integral coefficients for every F: the lcm of
/// the prime-to-S parts of all coefficient component denominators.
pub fn clearing_constant(fs: &[LaurentPoly], s: &PrimeSet) -> BigUint {
    let mut n = BigUint::one();
    for f in fs {
        for (_, c) in f.terms() {
            for comp in [c.a(), c.b()] {
                n = n.lcm(&prime_to_s_part(comp.denom().magnitude(), s));
            }
        }
    }
    n
}

/// Rational coefficient of a rational Laurent polynomial, for display.
pub fn rational_coeffs(f: &LaurentPoly) -> Option<Vec<(i64, Rat)>> {
    f.terms().map(|(e, c)| c.to_rat().map(|r| (e, r))).collect()
}
