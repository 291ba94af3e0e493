//! Exact rationals and the elementary number theory the rest of the crate
//! leans on: Kronecker symbols, factorization, multiplicative orders and
//! S-integrality.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// An arbitrary-precision rational number, always in lowest terms with a
/// positive denominator.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Rat(BigRational);

impl Rat {
    /// Panics if `den` is zero.
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Self {
        let den = den.into();
        assert!(!den.is_zero(), "zero denominator");
        Rat(BigRational::new(num.into(), den))
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Rat(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Rat(BigRational::zero())
    }

    pub fn one() -> Self {
        Rat(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    /// Always positive.
    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Self {
        Rat(self.0.abs())
    }

    /// Panics on zero.
    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "reciprocal of zero");
        Rat(self.0.recip())
    }

    pub fn pow(&self, e: i32) -> Self {
        Rat(num_traits::Pow::pow(&self.0, e))
    }

    /// max(|num|, den), the naive height.
    pub fn height(&self) -> BigUint {
        let n = self.numer().magnitude();
        let d = self.denom().magnitude();
        if n > d {
            n.clone()
        } else {
            d.clone()
        }
    }

    /// Numerator and denominator as decimal strings.
    pub fn to_pair_strings(&self) -> [String; 2] {
        [self.numer().to_string(), self.denom().to_string()]
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidInput(format!("not a rational number: '{s}'"));
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s.trim(), "1"),
        };
        let n: BigInt = n.parse().map_err(|_| bad())?;
        let d: BigInt = d.parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        Ok(Rat::new(n, d))
    }
}

impl PartialOrd for Rat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rat {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.cmp(&other.0)
    }
}

impl From<i64> for Rat {
    fn from(n: i64) -> Self {
        Rat::from_int(n)
    }
}

impl From<BigInt> for Rat {
    fn from(n: BigInt) -> Self {
        Rat::from_int(n)
    }
}

macro_rules! rat_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&Rat> for &Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                Rat((&self.0).$method(&rhs.0))
            }
        }
        impl $trait<Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat(self.0.$method(rhs.0))
            }
        }
        impl $trait<&Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                Rat(self.0.$method(&rhs.0))
            }
        }
        impl $trait<Rat> for &Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat((&self.0).$method(rhs.0))
            }
        }
    };
}

rat_binop!(Add, add);
rat_binop!(Sub, sub);
rat_binop!(Mul, mul);
rat_binop!(Div, div);

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-&self.0)
    }
}

/// The finite primes of S. The infinite place is always implicitly present.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct PrimeSet {
    primes: Vec<u64>,
}

impl PrimeSet {
    pub fn empty() -> Self {
        PrimeSet::default()
    }

    /// Sorts the input. Rejects non-primes and repeated entries.
    pub fn new(primes: impl IntoIterator<Item = u64>) -> Result<Self> {
        let mut v: Vec<u64> = primes.into_iter().collect();
        for &p in &v {
            if !is_prime_u64(p) {
                return Err(Error::NotPrime(p));
            }
        }
        v.sort_unstable();
        if v.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidInput("duplicate prime in S".into()));
        }
        Ok(PrimeSet { primes: v })
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn contains(&self, p: u64) -> bool {
        self.primes.binary_search(&p).is_ok()
    }

    /// Number of finite primes.
    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    /// |S| counting the infinite place.
    pub fn place_count(&self) -> usize {
        self.primes.len() + 1
    }

    pub fn smallest(&self) -> Option<u64> {
        self.primes.first().copied()
    }
}

/// Comma-separated primes, e.g. "2,5"; the empty string is the empty set.
impl FromStr for PrimeSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut v = Vec::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let p: u64 = part
                .parse()
                .map_err(|_| Error::InvalidInput(format!("'{part}' is not a prime number")))?;
            v.push(p);
        }
        PrimeSet::new(v)
    }
}

impl fmt::Display for PrimeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, p) in self.primes.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "}}")
    }
}

// ---------------------------------------------------------------------------
// Primality

const MR_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin for all 64-bit inputs.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &MR_BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Miller-Rabin with the fixed 12-prime witness set. Deterministic below
/// 3.3 * 10^24, probabilistic above.
pub fn is_prime(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    'witness: for &a in &MR_BASES {
        if (n % a).is_zero() {
            return false;
        }
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

// ---------------------------------------------------------------------------
// Kronecker symbol

/// The Kronecker symbol (a|n), defined for every pair of integers.
pub fn kronecker(a: i64, n: i64) -> i8 {
    let mut a = a as i128;
    let mut n = n as i128;
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    let mut result: i8 = 1;
    if n < 0 {
        n = -n;
        if a < 0 {
            result = -result;
        }
    }
    let twos = n.trailing_zeros();
    if twos > 0 {
        if a % 2 == 0 {
            return 0;
        }
        n >>= twos;
        let r = a.rem_euclid(8);
        if twos % 2 == 1 && (r == 3 || r == 5) {
            result = -result;
        }
    }
    // Jacobi symbol (a|n) for odd positive n.
    a = a.rem_euclid(n);
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            let r = n % 8;
            if r == 3 || r == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

// ---------------------------------------------------------------------------
// Factorization

/// Default cap on Pollard-rho iterations per split attempt.
pub const DEFAULT_RHO_BUDGET: u64 = 1 << 22;

const TRIAL_LIMIT: u64 = 1 << 12;

/// Factor `n >= 1` into `(prime, exponent)` pairs with increasing primes.
pub fn factorize(n: &BigUint) -> Result<Vec<(BigUint, u32)>> {
    factorize_with_budget(n, DEFAULT_RHO_BUDGET)
}

pub fn factorize_with_budget(n: &BigUint, rho_budget: u64) -> Result<Vec<(BigUint, u32)>> {
    if n.is_zero() {
        return Err(Error::Contract("factorize(0)".into()));
    }
    let mut primes: Vec<BigUint> = Vec::new();
    let mut rest = n.clone();
    if let Some(small) = rest.to_u64() {
        for p in factor_u64(small, rho_budget)? {
            primes.push(BigUint::from(p));
        }
    } else {
        let mut d = 2u64;
        while d < TRIAL_LIMIT {
            while (&rest % d).is_zero() {
                primes.push(BigUint::from(d));
                rest /= d;
            }
            d += if d == 2 { 1 } else { 2 };
        }
        if let Some(small) = rest.to_u64() {
            for p in factor_u64(small, rho_budget)? {
                primes.push(BigUint::from(p));
            }
        } else {
            split_big(rest, rho_budget, &mut primes)?;
        }
    }
    primes.sort();
    let mut out: Vec<(BigUint, u32)> = Vec::new();
    for p in primes {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    Ok(out)
}

/// Convenience wrapper for machine-sized inputs.
pub fn factorize_u64(n: u64) -> Result<Vec<(u64, u32)>> {
    if n == 0 {
        return Err(Error::Contract("factorize(0)".into()));
    }
    let mut primes = factor_u64(n, DEFAULT_RHO_BUDGET)?;
    primes.sort_unstable();
    let mut out: Vec<(u64, u32)> = Vec::new();
    for p in primes {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    Ok(out)
}

fn factor_u64(mut n: u64, budget: u64) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d < TRIAL_LIMIT && d * d <= n {
        while n.is_multiple_of(d) {
            out.push(d);
            n /= d;
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n == 1 {
        return Ok(out);
    }
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime_u64(m) {
            out.push(m);
            continue;
        }
        let f = rho_u64(m, budget)?;
        stack.push(f);
        stack.push(m / f);
    }
    Ok(out)
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Brent's variant of Pollard rho; returns a nontrivial factor of composite n.
fn rho_u64(n: u64, budget: u64) -> Result<u64> {
    if n.is_multiple_of(2) {
        return Ok(2);
    }
    let mut spent = 0u64;
    for c in 1..64u64 {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut g) = (2u64, 2u64, 1u64);
        let mut q = 1u64;
        let mut ys = 2u64;
        let mut r = 1u64;
        const M: u64 = 128;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..M.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd_u64(q, n);
                k += M;
            }
            r *= 2;
            spent += r;
            if spent > budget {
                return Err(Error::WorkBudget(format!("could not factor {n}")));
            }
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd_u64(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return Ok(g);
        }
    }
    Err(Error::WorkBudget(format!("could not factor {n}")))
}

fn split_big(n: BigUint, budget: u64, out: &mut Vec<BigUint>) -> Result<()> {
    if n.is_one() {
        return Ok(());
    }
    if let Some(small) = n.to_u64() {
        out.extend(factor_u64(small, budget)?.into_iter().map(BigUint::from));
        return Ok(());
    }
    if is_prime(&n) {
        out.push(n);
        return Ok(());
    }
    let f = rho_big(&n, budget)?;
    let g = &n / &f;
    split_big(f, budget, out)?;
    split_big(g, budget, out)
}

fn rho_big(n: &BigUint, budget: u64) -> Result<BigUint> {
    let one = BigUint::one();
    for c in 1..32u64 {
        let c = BigUint::from(c);
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut x = BigUint::from(2u32);
        let mut y = x.clone();
        let mut steps = 0u64;
        loop {
            x = f(&x);
            y = f(&f(&y));
            let diff = if x > y { &x - &y } else { &y - &x };
            let g = diff.gcd(n);
            if g == *n {
                break;
            }
            if g != one {
                return Ok(g);
            }
            steps += 1;
            if steps > budget {
                return Err(Error::WorkBudget(format!("could not factor {n}")));
            }
        }
    }
    Err(Error::WorkBudget(format!("could not factor {n}")))
}

/// Squarefree part of a nonzero integer, sign preserved.
pub fn squarefree_part(n: &BigInt) -> Result<BigInt> {
    if n.is_zero() {
        return Err(Error::Contract("squarefree part of 0".into()));
    }
    let mut out = BigInt::one();
    for (p, e) in factorize(n.magnitude())? {
        if e % 2 == 1 {
            out *= BigInt::from(p);
        }
    }
    if n.is_negative() {
        out = -out;
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Multiplicative orders

/// Carmichael function of m, from its factorization.
pub fn carmichael(m: &BigUint) -> Result<BigUint> {
    let mut l = BigUint::one();
    for (p, e) in factorize(m)? {
        let two = BigUint::from(2u32);
        let lp = if p == two {
            match e {
                1 => BigUint::one(),
                2 => two,
                _ => BigUint::one() << (e - 2),
            }
        } else {
            (&p - 1u32) * num_traits::pow(p.clone(), (e - 1) as usize)
        };
        l = l.lcm(&lp);
    }
    Ok(l)
}

/// Smallest divisor `e` of `exponent` with `is_identity(e)`; `exponent`
/// must already be a multiple of the order.
pub(crate) fn reduce_order(
    exponent: BigUint,
    is_identity: impl Fn(&BigUint) -> bool,
) -> Result<BigUint> {
    let mut e = exponent;
    for (q, _) in factorize(&e)? {
        while (&e % &q).is_zero() {
            let cand = &e / &q;
            if is_identity(&cand) {
                e = cand;
            } else {
                break;
            }
        }
    }
    Ok(e)
}

/// Least e >= 1 with a^e = 1 (mod m).
pub fn mult_order(a: &BigInt, m: &BigUint) -> Result<BigUint> {
    if m < &BigUint::from(2u32) {
        return Err(Error::Contract("mult_order needs m >= 2".into()));
    }
    let mi = BigInt::from(m.clone());
    let a = a.mod_floor(&mi).to_biguint().expect("nonnegative residue");
    if !a.gcd(m).is_one() {
        return Err(Error::NotInvertible(m.to_string()));
    }
    let lambda = carmichael(m)?;
    reduce_order(lambda, |e| a.modpow(e, m).is_one())
}

// ---------------------------------------------------------------------------
// S-integers

pub fn rational_sqrt(q: &Rat) -> Option<Rat> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().magnitude();
    let d = q.denom().magnitude();
    let rn = n.sqrt();
    if &(&rn * &rn) != n {
        return None;
    }
    let rd = d.sqrt();
    if &(&rd * &rd) != d {
        return None;
    }
    Some(Rat::new(BigInt::from(rn), BigInt::from(rd)))
}

/// Split `n` into its S-part and the part coprime to S.
pub fn s_split(n: &BigUint, s: &PrimeSet) -> (BigUint, BigUint) {
    let mut rest = n.clone();
    let mut s_part = BigUint::one();
    if rest.is_zero() {
        return (s_part, rest);
    }
    for &p in s.primes() {
        while (&rest % p).is_zero() {
            rest /= p;
            s_part *= p;
        }
    }
    (s_part, rest)
}

pub fn prime_to_s_part(n: &BigUint, s: &PrimeSet) -> BigUint {
    s_split(n, s).1
}

pub fn is_s_integer(q: &Rat, s: &PrimeSet) -> bool {
    prime_to_s_part(q.denom().magnitude(), s).is_one()
}

/// True if every prime factor of `n` lies in S.
pub fn is_s_smooth(n: u64, s: &PrimeSet) -> bool {
    if n == 0 {
        return false;
    }
    let mut n = n;
    for &p in s.primes() {
        while n.is_multiple_of(p) {
            n /= p;
        }
    }
    n == 1
}

/// Positive S-smooth integers up to `bound`, ascending.
pub fn s_smooth_up_to(bound: u64, s: &PrimeSet) -> Vec<u64> {
    let mut out = vec![1u64];
    for &p in s.primes() {
        let mut next = Vec::new();
        for &b in &out {
            let mut v = b;
            while let Some(w) = v.checked_mul(p).filter(|w| *w <= bound) {
                next.push(w);
                v = w;
            }
        }
        out.extend(next);
    }
    out.retain(|&b| b <= bound);
    out.sort_unstable();
    out
}
