use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{factorize, rational_sqrt, Rat};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Dense univariate polynomial, coefficients stored lowest degree first
/// with no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct UPoly<F> {
    coeffs: Vec<F>,
}

impl<F: Scalar> UPoly<F> {
    pub fn new(mut coeffs: Vec<F>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn zero() -> Self {
        UPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(F::one())
    }

    pub fn constant(c: F) -> Self {
        Self::new(vec![c])
    }

    /// The polynomial t.
    pub fn var() -> Self {
        Self::new(vec![F::zero(), F::one()])
    }

    /// c * t^k
    pub fn monomial(c: F, k: usize) -> Self {
        let mut v = vec![F::zero(); k];
        v.push(c);
        Self::new(v)
    }

    /// a*t + b
    pub fn linear(a: F, b: F) -> Self {
        Self::new(vec![b, a])
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> F {
        self.coeffs.get(i).cloned().unwrap_or_else(F::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn lead(&self) -> Option<&F> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &F) -> F {
        let mut acc = F::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i).add(&other.coeff(i))).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i).sub(&other.coeff(i))).collect())
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.neg()).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![F::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, c: &F) -> Self {
        Self::new(self.coeffs.iter().map(|x| x.mul(c)).collect())
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Panics if `d` is zero.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by zero polynomial");
        let inv_lead = d.lead().unwrap().inv();
        let mut rem = self.coeffs.clone();
        let Some(nd) = self.degree().filter(|&n| n >= dd) else {
            return (Self::zero(), self.clone());
        };
        let mut quot = vec![F::zero(); nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let c = rem[k + dd].mul(&inv_lead);
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[k + j] = rem[k + j].sub(&c.mul(dc));
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    pub fn monic(&self) -> Self {
        match self.lead() {
            Some(l) => self.scale(&l.inv()),
            None => Self::zero(),
        }
    }

    /// Monic gcd; gcd(0, 0) = 0.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.mul(&F::from_rat(Rat::from(i as i64))))
                .collect(),
        )
    }

    /// Product of the distinct irreducible factors, made monic.
    pub fn squarefree_part(&self) -> Self {
        if self.is_constant() {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    pub fn map<G: Scalar>(&self, f: impl Fn(&F) -> G) -> UPoly<G> {
        UPoly::new(self.coeffs.iter().map(f).collect())
    }

    /// Largest k with t^k dividing self (0 for the zero polynomial).
    pub fn t_adic_valuation(&self) -> usize {
        self.coeffs.iter().take_while(|c| c.is_zero()).count()
    }

    pub(crate) fn fmt_in(&self, var: &str, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
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

impl<F: Scalar> fmt::Display for UPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_in("t", f)
    }
}

impl<F: Scalar> fmt::Debug for UPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Clear denominators: a primitive integer polynomial with the same roots
/// (positive leading coefficient).
pub fn primitive_integer_coeffs(p: &UPoly<Rat>) -> Vec<BigInt> {
    let mut l = BigInt::one();
    for c in p.coeffs() {
        l = l.lcm(c.denom());
    }
    let mut ints: Vec<BigInt> = p
        .coeffs()
        .iter()
        .map(|c| c.numer() * (&l / c.denom()))
        .collect();
    let mut g = BigInt::zero();
    for c in &ints {
        g = g.gcd(c);
    }
    if !g.is_zero() {
        for c in ints.iter_mut() {
            *c = &*c / &g;
        }
    }
    if ints.last().is_some_and(|c| c.is_negative()) {
        for c in ints.iter_mut() {
            *c = -&*c;
        }
    }
    ints
}

fn divisors(n: &BigUint) -> Result<Vec<BigUint>> {
    let mut out = vec![BigUint::one()];
    for (p, e) in factorize(n)? {
        let mut next = Vec::with_capacity(out.len() * (e as usize + 1));
        for d in &out {
            let mut v = d.clone();
            next.push(v.clone());
            for _ in 0..e {
                v *= &p;
                next.push(v.clone());
            }
        }
        out = next;
    }
    Ok(out)
}

/// Distinct rational roots, ascending. Degree <= 2 is solved directly;
/// higher degrees use the rational root test, which factors the extreme
/// coefficients.
pub fn rational_roots(p: &UPoly<Rat>) -> Result<Vec<Rat>> {
    let mut roots = Vec::new();
    match p.degree() {
        None => return Err(Error::Contract("roots of the zero polynomial".into())),
        Some(0) => {}
        Some(1) => roots.push(-(p.coeff(0) / p.coeff(1))),
        Some(2) => {
            let (a, b, c) = (p.coeff(2), p.coeff(1), p.coeff(0));
            let disc = &b * &b - Rat::from(4) * &a * &c;
            if let Some(r) = rational_sqrt(&disc) {
                let two_a = Rat::from(2) * &a;
                roots.push((-&b + &r) / &two_a);
                if !r.is_zero() {
                    roots.push((-&b - &r) / &two_a);
                }
            }
        }
        Some(_) => {
            let v = p.t_adic_valuation();
            if v > 0 {
                roots.push(Rat::zero());
            }
            let ints = primitive_integer_coeffs(p);
            let ints = &ints[v..];
            let a0 = ints[0].magnitude();
            let an = ints[ints.len() - 1].magnitude();
            let eval = |x: &Rat| {
                let mut acc = Rat::zero();
                for c in ints.iter().rev() {
                    acc = acc * x + Rat::from_int(c.clone());
                }
                acc.is_zero()
            };
            let dens = divisors(an)?;
            for num in divisors(a0)? {
                for den in &dens {
                    if !num.gcd(den).is_one() {
                        continue;
                    }
                    for sign in [1i32, -1] {
                        let x =
                            Rat::new(BigInt::from(num.clone()) * sign, BigInt::from(den.clone()));
                        if eval(&x) {
                            roots.push(x);
                        }
                    }
                }
            }
        }
    }
    roots.sort();
    roots.dedup();
    Ok(roots)
}

/// A reduced quotient of polynomials with monic denominator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc<F> {
    num: UPoly<F>,
    den: UPoly<F>,
}

impl<F: Scalar> RatFunc<F> {
    pub fn new(num: UPoly<F>, den: UPoly<F>) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::InvalidInput(
                "rational function with zero denominator".into(),
            ));
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_zero() || g.is_constant() {
            (num, den)
        } else {
            (num.div_rem(&g).0, den.div_rem(&g).0)
        };
        let l = den.lead().unwrap().inv();
        Ok(RatFunc {
            num: num.scale(&l),
            den: den.scale(&l),
        })
    }

    pub fn from_poly(p: UPoly<F>) -> Self {
        RatFunc {
            num: p,
            den: UPoly::one(),
        }
    }

    pub fn constant(c: F) -> Self {
        Self::from_poly(UPoly::constant(c))
    }

    pub fn var() -> Self {
        Self::from_poly(UPoly::var())
    }

    pub fn num(&self) -> &UPoly<F> {
        &self.num
    }

    pub fn den(&self) -> &UPoly<F> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    /// None at a pole.
    pub fn eval(&self, x: &F) -> Option<F> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(x).div(&d))
    }

    /// Value at the projective point (p : q); q = 0 is t = infinity.
    pub fn eval_projective(&self, p: &F, q: &F) -> Option<F> {
        let k = self.num.coeffs().len().max(self.den.coeffs().len());
        let hom = |poly: &UPoly<F>| {
            let mut acc = F::zero();
            for j in 0..k {
                let c = poly.coeff(j);
                if c.is_zero() {
                    continue;
                }
                let mut term = c;
                for _ in 0..j {
                    term = term.mul(p);
                }
                for _ in j + 1..k {
                    term = term.mul(q);
                }
                acc = acc.add(&term);
            }
            acc
        };
        let d = hom(&self.den);
        if d.is_zero() {
            return None;
        }
        Some(hom(&self.num).div(&d))
    }

    /// True when t = infinity is a pole.
    pub fn has_pole_at_infinity(&self) -> bool {
        self.num.degree().unwrap_or(0) > self.den.degree().unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
        Self::new(num, self.den.mul(&other.den)).expect("nonzero denominators")
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::new(self.num.mul(&other.num), self.den.mul(&other.den)).expect("nonzero denominators")
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::InvalidInput("division by zero".into()));
        }
        Self::new(self.num.mul(&other.den), self.den.mul(&other.num))
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 {
            Self::constant(F::one()).div(self)?
        } else {
            self.clone()
        };
        let k = e.unsigned_abs() as u32;
        Ok(RatFunc {
            num: base.num.pow(k),
            den: base.den.pow(k),
        })
    }

    pub fn map<G: Scalar>(&self, f: impl Fn(&F) -> G) -> RatFunc<G> {
        RatFunc::new(self.num.map(&f), self.den.map(&f)).expect("nonzero denominator")
    }
}

impl RatFunc<Rat> {
    pub fn lift(&self) -> RatFunc<crate::quad::QuadElem> {
        RatFunc {
            num: self.num.map(|c| crate::quad::QuadElem::rational(c.clone())),
            den: self.den.map(|c| crate::quad::QuadElem::rational(c.clone())),
        }
    }
}

impl<F: Scalar> fmt::Display for RatFunc<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_constant() {
            return self.num.fmt_in("t", f);
        }
        write!(f, "(")?;
        self.num.fmt_in("t", f)?;
        write!(f, ")/(")?;
        self.den.fmt_in("t", f)?;
        write!(f, ")")
    }
}

impl<F: Scalar> fmt::Debug for RatFunc<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> UPoly<Rat> {
        UPoly::new(c.iter().map(|&x| Rat::from(x)).collect())
    }

    #[test]
    fn division_and_gcd() {
        let a = p(&[-1, 0, 1]); // t^2 - 1
        let b = p(&[1, 1]); // t + 1
        let (q, r) = a.div_rem(&b);
        assert_eq!(q, p(&[-1, 1]));
        assert!(r.is_zero());
        assert_eq!(a.gcd(&p(&[2, 2])), b);
        assert_eq!(p(&[1, 0, 1]).gcd(&b), p(&[1]));
    }

    #[test]
    fn squarefree() {
        // (t-1)^2 (t+2)
        let f = p(&[-1, 1]).pow(2).mul(&p(&[2, 1]));
        assert_eq!(f.squarefree_part(), p(&[-1, 1]).mul(&p(&[2, 1])));
    }

    #[test]
    fn ratfunc_reduces_and_normalizes() {
        let r = RatFunc::new(p(&[-2, 0, 2]), p(&[3, 3])).unwrap();
        assert_eq!(r.num(), &p(&[-2, 2]).scale(&Rat::new(1, 3)));
        assert_eq!(r.den(), &p(&[1]));
        assert!(RatFunc::new(p(&[1]), p(&[])).is_err());
        let r = RatFunc::new(p(&[0, 1]), p(&[1, 0, 2])).unwrap();
        assert_eq!(
            r.den(),
            &UPoly::new(vec![Rat::new(1, 2), Rat::zero(), Rat::one()])
        );
    }

    #[test]
    fn projective_evaluation() {
        // (2t + 1)/(t - 3) at infinity is 2
        let r = RatFunc::new(p(&[1, 2]), p(&[-3, 1])).unwrap();
        assert_eq!(
            r.eval_projective(&Rat::one(), &Rat::zero()),
            Some(Rat::from(2))
        );
        assert_eq!(r.eval_projective(&Rat::from(3), &Rat::one()), None);
        assert_eq!(
            r.eval_projective(&Rat::from(4), &Rat::from(2)),
            r.eval(&Rat::from(2))
        );
    }

    #[test]
    fn rational_root_search() {
        // 6t^3 - 11t^2 + 6t - 1 = (t-1)(2t-1)(3t-1)
        let f = p(&[-1, 6, -11, 6]);
        assert_eq!(
            rational_roots(&f).unwrap(),
            vec![Rat::new(1, 3), Rat::new(1, 2), Rat::one()]
        );
        assert_eq!(rational_roots(&p(&[-2, 0, 1])).unwrap(), vec![]);
        assert_eq!(
            rational_roots(&p(&[0, 0, 0, 1])).unwrap(),
            vec![Rat::zero()]
        );
        assert_eq!(
            rational_roots(&p(&[4, 0, -5, 0, 1])).unwrap(),
            vec![Rat::from(-2), Rat::from(-1), Rat::one(), Rat::from(2)]
        );
    }
}
