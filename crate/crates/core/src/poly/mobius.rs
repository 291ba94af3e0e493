use std::fmt;

use crate::error::{Error, Result};
use crate::poly::upoly::{RatFunc, UPoly};
use crate::quad::QuadElem;

/// The substitution t = (a*u + b) / (c*u + d).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mobius {
    pub a: QuadElem,
    pub b: QuadElem,
    pub c: QuadElem,
    pub d: QuadElem,
}

impl Mobius {
    pub fn new(a: QuadElem, b: QuadElem, c: QuadElem, d: QuadElem) -> Result<Self> {
        let m = Mobius { a, b, c, d };
        if m.det().is_zero() {
            return Err(Error::DegenerateMobius);
        }
        Ok(m)
    }

    pub fn identity() -> Self {
        Mobius {
            a: QuadElem::from_int(1),
            b: QuadElem::from_int(0),
            c: QuadElem::from_int(0),
            d: QuadElem::from_int(1),
        }
    }

    pub fn det(&self) -> QuadElem {
        &(&self.a * &self.d) - &(&self.b * &self.c)
    }

    /// Matrix product: substituting `self` then `inner` for u.
    pub fn compose(&self, inner: &Mobius) -> Mobius {
        Mobius {
            a: &(&self.a * &inner.a) + &(&self.b * &inner.c),
            b: &(&self.a * &inner.b) + &(&self.b * &inner.d),
            c: &(&self.c * &inner.a) + &(&self.d * &inner.c),
            d: &(&self.c * &inner.b) + &(&self.d * &inner.d),
        }
    }

    /// Image of u as a projective pair (numerator, denominator).
    pub fn apply_projective(&self, u: &QuadElem) -> (QuadElem, QuadElem) {
        (&(&self.a * u) + &self.b, &(&self.c * u) + &self.d)
    }

    /// None when u maps to infinity.
    pub fn apply(&self, u: &QuadElem) -> Option<QuadElem> {
        let (p, q) = self.apply_projective(u);
        (!q.is_zero()).then(|| &p / &q)
    }
}

impl fmt::Display for Mobius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "t = (({})*u + ({})) / (({})*u + ({}))",
            self.a, self.b, self.c, self.d
        )
    }
}

impl fmt::Debug for Mobius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// R((a*u + b)/(c*u + d)) as a reduced rational function of u.
pub fn mobius_substitute(r: &RatFunc<QuadElem>, m: &Mobius) -> Result<RatFunc<QuadElem>> {
    if m.det().is_zero() {
        return Err(Error::DegenerateMobius);
    }
    let k = r
        .num()
        .coeffs()
        .len()
        .max(r.den().coeffs().len())
        .saturating_sub(1);
    let top = UPoly::linear(m.a.clone(), m.b.clone());
    let bottom = UPoly::linear(m.c.clone(), m.d.clone());
    let top_pows: Vec<_> = (0..=k as u32).map(|j| top.pow(j)).collect();
    let bottom_pows: Vec<_> = (0..=k as u32).map(|j| bottom.pow(j)).collect();
    let hom = |p: &UPoly<QuadElem>| {
        let mut acc = UPoly::zero();
        for (j, c) in p.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let term = top_pows[j].mul(&bottom_pows[k - j]).scale(c);
            acc = acc.add(&term);
        }
        acc
    };
    RatFunc::new(hom(r.num()), hom(r.den()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Rat;

    fn qi(n: i64) -> QuadElem {
        QuadElem::from_int(n)
    }

    fn t() -> RatFunc<QuadElem> {
        RatFunc::var()
    }

    #[test]
    fn identity_and_inversion() {
        assert_eq!(mobius_substitute(&t(), &Mobius::identity()).unwrap(), t());
        let inv = Mobius::new(qi(0), qi(1), qi(1), qi(0)).unwrap();
        let got = mobius_substitute(&t(), &inv).unwrap();
        assert_eq!(got, RatFunc::constant(qi(1)).div(&t()).unwrap());
    }

    #[test]
    fn degenerate_is_rejected() {
        assert_eq!(
            Mobius::new(qi(1), qi(2), qi(2), qi(4)),
            Err(Error::DegenerateMobius)
        );
        let m = Mobius {
            a: qi(1),
            b: qi(1),
            c: qi(1),
            d: qi(1),
        };
        assert_eq!(mobius_substitute(&t(), &m), Err(Error::DegenerateMobius));
    }

    #[test]
    fn circle_becomes_laurent() {
        // (1 - t^2)/(1 + t^2) under t = i(u-1)/(u+1) is (u + 1/u)/2
        let i = QuadElem::sqrt_d(-1).unwrap();
        let r = RatFunc::new(
            UPoly::new(vec![qi(1), qi(0), qi(-1)]),
            UPoly::new(vec![qi(1), qi(0), qi(1)]),
        )
        .unwrap();
        let m = Mobius::new(i.clone(), -&i, qi(1), qi(1)).unwrap();
        let got = mobius_substitute(&r, &m).unwrap();
        let half = QuadElem::rational(Rat::new(1, 2));
        let want = RatFunc::new(UPoly::new(vec![half.clone(), qi(0), half]), UPoly::var()).unwrap();
        assert_eq!(got, want);
        for u in [2i64, 3, -5, 7, 11] {
            let u = QuadElem::rational(Rat::new(u, 3));
            let lhs = got.eval(&u).unwrap();
            let rhs = r.eval(&m.apply(&u).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn matrix() -> impl Strategy<Value = Mobius> {
            prop::array::uniform4(-6i64..=6)
                .prop_filter("nondegenerate", |m| m[0] * m[3] != m[1] * m[2])
                .prop_map(|m| Mobius::new(qi(m[0]), qi(m[1]), qi(m[2]), qi(m[3])).unwrap())
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(200))]
            #[test]
            fn substitution_respects_composition(
                m1 in matrix(),
                m2 in matrix(),
                num in prop::collection::vec(-5i64..=5, 1..4),
                den in prop::collection::vec(-5i64..=5, 1..4),
                points in prop::collection::vec((-20i64..=20, 1i64..=9), 5),
            ) {
                let num = UPoly::new(num.into_iter().map(qi).collect());
                let den = UPoly::new(den.into_iter().map(qi).collect());
                prop_assume!(!den.is_zero());
                let r = RatFunc::new(num, den).unwrap();
                let two_step = mobius_substitute(&mobius_substitute(&r, &m1).unwrap(), &m2).unwrap();
                let one_step = mobius_substitute(&r, &m1.compose(&m2)).unwrap();
                for (a, b) in points {
                    let u = QuadElem::rational(Rat::new(a, b));
                    prop_assert_eq!(two_step.eval(&u), one_step.eval(&u));
                }
                prop_assert_eq!(two_step, one_step);
            }
        }
    }
}
