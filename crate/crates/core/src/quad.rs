//! Arithmetic in Q(sqrt(D)), prime splitting, Pell units and the norm-one
//! generators used to walk the kernel of the norm map.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{factorize_u64, is_prime_u64, kronecker, reduce_order, Rat};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Largest number of `b` candidates a representation search may visit.
pub const DEFAULT_SEARCH_BUDGET: u64 = 20_000_000;

/// An element a + b*sqrt(D). Rational elements (b = 0) carry no field tag,
/// so they combine freely with elements of any Q(sqrt(D)); two irrational
/// elements must agree on D.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadElem {
    a: Rat,
    b: Rat,
    // 0 exactly when b = 0
    d: i64,
}

pub fn is_squarefree(d: i64) -> bool {
    if d == 0 {
        return false;
    }
    match factorize_u64(d.unsigned_abs()) {
        Ok(f) => f.iter().all(|&(_, e)| e == 1),
        Err(_) => false,
    }
}

pub fn check_discriminant(d: i64) -> Result<()> {
    if d == 1 || !is_squarefree(d) {
        return Err(Error::InvalidDiscriminant(d));
    }
    Ok(())
}

impl QuadElem {
    pub fn new(a: Rat, b: Rat, d: i64) -> Result<Self> {
        check_discriminant(d)?;
        Ok(Self::raw(a, b, d))
    }

    fn raw(a: Rat, b: Rat, d: i64) -> Self {
        let d = if b.is_zero() { 0 } else { d };
        QuadElem { a, b, d }
    }

    pub fn rational(a: Rat) -> Self {
        QuadElem {
            a,
            b: Rat::zero(),
            d: 0,
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::rational(Rat::from(n))
    }

    /// sqrt(D) itself.
    pub fn sqrt_d(d: i64) -> Result<Self> {
        Self::new(Rat::zero(), Rat::one(), d)
    }

    pub fn a(&self) -> &Rat {
        &self.a
    }

    pub fn b(&self) -> &Rat {
        &self.b
    }

    /// The field tag, absent for rational elements.
    pub fn d(&self) -> Option<i64> {
        (self.d != 0).then_some(self.d)
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn to_rat(&self) -> Option<Rat> {
        self.is_rational().then(|| self.a.clone())
    }

    pub fn conj(&self) -> Self {
        Self::raw(self.a.clone(), -&self.b, self.d)
    }

    pub fn norm(&self) -> Rat {
        &self.a * &self.a - Rat::from(self.d) * &self.b * &self.b
    }

    pub fn trace(&self) -> Rat {
        Rat::from(2) * &self.a
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    /// Panics on zero.
    pub fn inv(&self) -> Self {
        let n = self.norm();
        assert!(!n.is_zero(), "inverse of zero");
        Self::raw(&self.a / &n, -(&self.b / &n), self.d)
    }

    pub fn pow(&self, e: i64) -> Self {
        let base = if e < 0 { self.inv() } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = QuadElem::from_int(1);
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            e >>= 1;
            if e > 0 {
                sq = &sq * &sq;
            }
        }
        acc
    }

    pub fn pow_big(&self, e: &BigUint) -> Self {
        let mut acc = QuadElem::from_int(1);
        let bits = e.bits();
        for i in (0..bits).rev() {
            acc = &acc * &acc;
            if e.bit(i) {
                acc = &acc * self;
            }
        }
        acc
    }

    fn joint_d(&self, other: &Self) -> i64 {
        match (self.d, other.d) {
            (0, d) | (d, 0) => d,
            (d1, d2) => {
                assert_eq!(d1, d2, "mixing elements of Q(sqrt({d1})) and Q(sqrt({d2}))");
                d1
            }
        }
    }

    /// True for a root of unity, using that roots of unity in a quadratic
    /// field have order dividing 4 or 6.
    pub fn is_root_of_unity(&self) -> bool {
        (1..=6).any(|k| self.pow(k).is_one())
    }
}

impl fmt::Display for QuadElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        let b = if self.b.is_one() {
            String::new()
        } else if self.b.is_integer() {
            format!("{}*", self.b)
        } else {
            format!("({})*", self.b)
        };
        let rad = format!("sqrt({})", self.d);
        if self.a.is_zero() {
            write!(f, "{b}{rad}")
        } else if self.a.is_integer() {
            write!(f, "{} + {b}{rad}", self.a)
        } else {
            write!(f, "({}) + {b}{rad}", self.a)
        }
    }
}

impl fmt::Debug for QuadElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl From<Rat> for QuadElem {
    fn from(r: Rat) -> Self {
        QuadElem::rational(r)
    }
}

impl Add<&QuadElem> for &QuadElem {
    type Output = QuadElem;
    fn add(self, rhs: &QuadElem) -> QuadElem {
        let d = self.joint_d(rhs);
        QuadElem::raw(&self.a + &rhs.a, &self.b + &rhs.b, d)
    }
}

impl Sub<&QuadElem> for &QuadElem {
    type Output = QuadElem;
    fn sub(self, rhs: &QuadElem) -> QuadElem {
        let d = self.joint_d(rhs);
        QuadElem::raw(&self.a - &rhs.a, &self.b - &rhs.b, d)
    }
}

impl Mul<&QuadElem> for &QuadElem {
    type Output = QuadElem;
    fn mul(self, rhs: &QuadElem) -> QuadElem {
        let d = self.joint_d(rhs);
        let a = &self.a * &rhs.a + Rat::from(d) * &self.b * &rhs.b;
        let b = &self.a * &rhs.b + &self.b * &rhs.a;
        QuadElem::raw(a, b, d)
    }
}

impl Div<&QuadElem> for &QuadElem {
    type Output = QuadElem;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &QuadElem) -> QuadElem {
        self * &rhs.inv()
    }
}

impl Neg for &QuadElem {
    type Output = QuadElem;
    fn neg(self) -> QuadElem {
        QuadElem::raw(-&self.a, -&self.b, self.d)
    }
}

impl Scalar for QuadElem {
    fn zero() -> Self {
        QuadElem::from_int(0)
    }
    fn one() -> Self {
        QuadElem::from_int(1)
    }
    fn from_rat(r: Rat) -> Self {
        QuadElem::rational(r)
    }
    fn is_zero(&self) -> bool {
        QuadElem::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Self {
        QuadElem::inv(self)
    }
}

// ---------------------------------------------------------------------------
// Splitting of primes

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SplitType {
    Split,
    Inert,
    Ramified,
}

/// Discriminant of Q(sqrt(d)).
pub fn field_discriminant(d: i64) -> i64 {
    if d.rem_euclid(4) == 1 {
        d
    } else {
        4 * d
    }
}

pub fn splitting_type(d: i64, p: u64) -> SplitType {
    match kronecker(field_discriminant(d), p as i64) {
        1 => SplitType::Split,
        -1 => SplitType::Inert,
        _ => SplitType::Ramified,
    }
}

/// Whether the real place of Q splits in Q(sqrt(d)).
pub fn infinite_place_splits(d: i64) -> bool {
    d > 0
}

// ---------------------------------------------------------------------------
// Pell equation

/// Fundamental solution (x, y) of x^2 - d*y^2 = 1 for nonsquare d > 1, from
/// the continued fraction of sqrt(d).
pub fn pell_solution(d: u64) -> Result<(BigUint, BigUint)> {
    let root = d.sqrt();
    if d < 2 || root * root == d {
        return Err(Error::Contract(format!(
            "Pell equation needs nonsquare d > 1, got {d}"
        )));
    }
    let dd = BigInt::from(d);
    let a0 = BigInt::from(root);
    let (mut m, mut q, mut a) = (BigInt::zero(), BigInt::one(), a0.clone());
    // convergents h/k
    let (mut h_prev, mut h) = (BigInt::one(), a0.clone());
    let (mut k_prev, mut k) = (BigInt::zero(), BigInt::one());
    loop {
        let n = &h * &h - &dd * &k * &k;
        if n.is_one() {
            return Ok((h.to_biguint().unwrap(), k.to_biguint().unwrap()));
        }
        if n == -BigInt::one() {
            let x = &h * &h + &dd * &k * &k;
            let y = BigInt::from(2) * &h * &k;
            return Ok((x.to_biguint().unwrap(), y.to_biguint().unwrap()));
        }
        m = &q * &a - &m;
        q = (&dd - &m * &m) / &q;
        a = (&a0 + &m) / &q;
        let h_next = &a * &h + &h_prev;
        let k_next = &a * &k + &k_prev;
        h_prev = std::mem::replace(&mut h, h_next);
        k_prev = std::mem::replace(&mut k, k_next);
    }
}

/// The fundamental unit of norm 1 in Z[sqrt(d)] for squarefree d > 1.
pub fn pell_fundamental(d: i64) -> Result<QuadElem> {
    check_discriminant(d)?;
    if d < 2 {
        return Err(Error::Contract(format!(
            "pell_fundamental needs d > 1, got {d}"
        )));
    }
    let (x, y) = pell_solution(d as u64)?;
    QuadElem::new(
        Rat::from_int(BigInt::from(x)),
        Rat::from_int(BigInt::from(y)),
        d,
    )
}

// ---------------------------------------------------------------------------
// Elements above split primes

/// Elements a + b*sqrt(d) of Z[sqrt(d)] with a^2 - d*b^2 = target or -target,
/// a, b >= 0, in order of increasing b (and for each b, norm +target first).
/// For d > 0 the search covers every class modulo the Pell unit.
fn representations(d: i64, target: &BigUint, budget: u64) -> Result<Vec<(BigInt, BigInt)>> {
    let dd = BigInt::from(d);
    let t = BigInt::from(target.clone());
    let bound: BigUint = if d < 0 {
        (target / d.unsigned_abs()).sqrt()
    } else {
        // Any solution class has a member with b <= y1*sqrt(|N|/(2(x1-1))).
        let (x1, y1) = pell_solution(d as u64)?;
        (&y1 * &y1 * target / (BigUint::from(2u32) * (x1 - 1u32))).sqrt() + 1u32
    };
    let bound = bound
        .to_u64()
        .filter(|&b| b <= budget)
        .ok_or_else(|| Error::WorkBudget(format!("norm search up to {target} in Q(sqrt({d}))")))?;
    let mut out = Vec::new();
    for b in 0..=bound {
        let b = BigInt::from(b);
        let db2 = &dd * &b * &b;
        let mut cands = vec![&t + &db2];
        if d > 0 {
            cands.push(&db2 - &t);
        }
        for a2 in cands {
            if a2.is_negative() {
                continue;
            }
            let a = a2.sqrt();
            if a.clone() * &a == a2 {
                out.push((a, b.clone()));
            }
        }
    }
    Ok(out)
}

/// An element of Z[sqrt(d)] whose norm is p or -p, for p split in Q(sqrt(d)).
pub fn split_prime_element(d: i64, p: u64) -> Result<QuadElem> {
    check_discriminant(d)?;
    if !is_prime_u64(p) {
        return Err(Error::NotPrime(p));
    }
    if splitting_type(d, p) != SplitType::Split {
        return Err(Error::NotSplit { d, p });
    }
    let reps = representations(d, &BigUint::from(p), DEFAULT_SEARCH_BUDGET)?;
    match reps.into_iter().next() {
        Some((a, b)) => QuadElem::new(Rat::from_int(a), Rat::from_int(b), d),
        None => Err(Error::WorkBudget(format!(
            "no element of norm ±{p} in Z[sqrt({d})]"
        ))),
    }
}

/// Largest power p^k tried when p itself is not a norm from Z[sqrt(d)].
const MAX_PRIME_POWER: u32 = 24;

/// gamma = pi / conj(pi) for the first pi in Z[sqrt(d)] of norm ±p^k (k
/// ascending) that makes gamma of infinite order.
fn split_prime_unit(d: i64, p: u64) -> Result<QuadElem> {
    for k in 1..=MAX_PRIME_POWER {
        let target = BigUint::from(p).pow(k);
        for (a, b) in representations(d, &target, DEFAULT_SEARCH_BUDGET)? {
            let pi = QuadElem::new(Rat::from_int(a), Rat::from_int(b), d)?;
            let gamma = &pi / &pi.conj();
            if !gamma.is_root_of_unity() {
                return Ok(gamma);
            }
        }
    }
    Err(Error::WorkBudget(format!(
        "no norm-one unit above {p} in Q(sqrt({d})) up to p^{MAX_PRIME_POWER}"
    )))
}

/// An element of infinite order in the kernel of the norm from the T-units
/// of Q(sqrt(d)) to the S-units of Q, if that kernel is infinite.
pub fn norm_one_generator(d: i64, s: &crate::arith::PrimeSet) -> Result<Option<QuadElem>> {
    check_discriminant(d)?;
    let gamma = if d > 0 {
        pell_fundamental(d)?
    } else {
        let mut found = None;
        let mut last_err = None;
        for &p in s.primes() {
            if splitting_type(d, p) != SplitType::Split {
                continue;
            }
            match split_prime_unit(d, p) {
                Ok(g) => {
                    found = Some(g);
                    break;
                }
                Err(e) => last_err = Some(e),
            }
        }
        match (found, last_err) {
            (Some(g), _) => g,
            (None, Some(e)) => return Err(e),
            (None, None) => return Ok(None),
        }
    };
    if !gamma.norm().is_one() || gamma.is_root_of_unity() {
        return Err(Error::InvariantViolation(format!(
            "norm-one generator {gamma} failed its checks"
        )));
    }
    Ok(Some(gamma))
}

// ---------------------------------------------------------------------------
// Orders modulo m

/// Residue of an element of Z[1/n][sqrt(d)] in (Z/m)[sqrt(d)], n coprime to m.
#[derive(Clone, Debug, PartialEq, Eq)]
struct QuadResidue {
    x: BigUint,
    y: BigUint,
}

fn reduce_rat(r: &Rat, m: &BigUint) -> Result<BigUint> {
    let mi = BigInt::from(m.clone());
    let den = r.denom().mod_floor(&mi);
    let inv = mod_inverse(&den, &mi).ok_or_else(|| Error::NotInvertible(m.to_string()))?;
    let num = r.numer().mod_floor(&mi);
    Ok(((num * inv).mod_floor(&mi)).to_biguint().unwrap())
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    if !e.gcd.is_one() {
        return None;
    }
    Some(e.x.mod_floor(m))
}

fn residue_mul(u: &QuadResidue, v: &QuadResidue, d: &BigUint, m: &BigUint) -> QuadResidue {
    QuadResidue {
        x: (&u.x * &v.x + d * &u.y * &v.y) % m,
        y: (&u.x * &v.y + &u.y * &v.x) % m,
    }
}

fn residue_pow(g: &QuadResidue, e: &BigUint, d: &BigUint, m: &BigUint) -> QuadResidue {
    let mut acc = QuadResidue {
        x: BigUint::one() % m,
        y: BigUint::zero(),
    };
    for i in (0..e.bits()).rev() {
        acc = residue_mul(&acc, &acc, d, m);
        if e.bit(i) {
            acc = residue_mul(&acc, g, d, m);
        }
    }
    acc
}

/// Order of the unit group of Z[sqrt(d)]/(m).
fn unit_group_order(d: i64, m: &BigUint) -> Result<BigUint> {
    let mut order = BigUint::one();
    for (p, e) in crate::arith::factorize(m)? {
        let pu = p
            .to_u64()
            .ok_or_else(|| Error::WorkBudget(format!("modulus prime {p}")))?;
        let local = if pu == 2 || (d.rem_euclid(pu as i64)) == 0 {
            p.clone() * (&p - 1u32)
        } else if kronecker(d, pu as i64) == 1 {
            (&p - 1u32) * (&p - 1u32)
        } else {
            &p * &p - 1u32
        };
        order *= local * p.pow(2 * (e - 1));
    }
    Ok(order)
}

/// Least e >= 1 with gamma^e = 1 in Z[sqrt(d)]/(m), for gamma whose
/// component denominators are coprime to m.
pub fn quad_order_mod(gamma: &QuadElem, m: &BigUint) -> Result<BigUint> {
    if m < &BigUint::from(2u32) {
        return Err(Error::Contract("quad_order_mod needs m >= 2".into()));
    }
    let d = gamma.d;
    let dm = BigInt::from(d)
        .mod_floor(&BigInt::from(m.clone()))
        .to_biguint()
        .unwrap();
    let g = QuadResidue {
        x: reduce_rat(&gamma.a, m)?,
        y: reduce_rat(&gamma.b, m)?,
    };
    let norm = (BigInt::from(&g.x * &g.x) - BigInt::from(&dm * &g.y * &g.y))
        .mod_floor(&BigInt::from(m.clone()));
    if !norm.gcd(&BigInt::from(m.clone())).is_one() {
        return Err(Error::NotInvertible(m.to_string()));
    }
    let one = QuadResidue {
        x: BigUint::one(),
        y: BigUint::zero(),
    };
    let group = unit_group_order(d, m)?;
    reduce_order(group, |e| residue_pow(&g, e, &dm, m) == one)
}

/// True if z - 1 lies in m * Z[1/n][sqrt(D)] for denominators n coprime to m.
pub fn congruent_to_one(z: &QuadElem, m: &BigUint) -> bool {
    let a1 = z.a() - &Rat::one();
    let divisible = |r: &Rat| {
        let den_ok = r.denom().magnitude().gcd(m).is_one();
        den_ok && (r.numer().magnitude() % m).is_zero()
    };
    divisible(&a1) && divisible(z.b())
}
