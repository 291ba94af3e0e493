//! Point generation from a witness, and the brute-force lattice enumerator.

use std::cmp::Ordering;
use std::collections::HashSet;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::arith::{s_smooth_up_to, PrimeSet, Rat};
use crate::curve::{AffinePoint, CurveInput};
use crate::decider::{Generator, Witness};
use crate::error::{Error, Result};
use crate::poly::{rational_roots, PolyQ, RatFunc, UPoly, Var};
use crate::quad::{congruent_to_one, QuadElem};

// ---------------------------------------------------------------------------
// Search lattice

/// Order inside a level: smaller |numerator| first, then positive before
/// negative, then smaller denominator.
pub fn walk_cmp(a: &Rat, b: &Rat) -> Ordering {
    a.numer()
        .magnitude()
        .cmp(b.numer().magnitude())
        .then_with(|| a.is_negative().cmp(&b.is_negative()))
        .then_with(|| a.denom().cmp(b.denom()))
}

fn walk_cmp_all(a: &[Rat], b: &[Rat]) -> Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| walk_cmp(x, y))
        .find(|o| o.is_ne())
        .unwrap_or_else(|| a.len().cmp(&b.len()))
}

/// Search order for base points: height, then coordinates in walk order.
pub fn search_cmp(a: &AffinePoint, b: &AffinePoint) -> Ordering {
    a.height()
        .cmp(&b.height())
        .then_with(|| walk_cmp_all(&a.coords, &b.coords))
}

/// Output order for enumerations: height, then coordinates numerically,
/// then the parameter in walk order.
pub fn enumerate_cmp(a: &AffinePoint, b: &AffinePoint) -> Ordering {
    a.height()
        .cmp(&b.height())
        .then_with(|| a.coords.cmp(&b.coords))
        .then_with(|| match (&a.param_value, &b.param_value) {
            (Some(x), Some(y)) => walk_cmp(x, y),
            (x, y) => x.is_some().cmp(&y.is_some()),
        })
}

/// Rationals a/b in lowest terms with |a| <= H and 1 <= b <= H, taken
/// either with all denominators or with S-smooth ones only. Level h holds
/// the values with max(|a|, b) = h.
#[derive(Clone, Debug)]
pub struct Lattice {
    bound: u64,
    dens: Option<Vec<u64>>,
}

impl Lattice {
    pub fn s_integral(bound: u64, s: &PrimeSet) -> Self {
        Lattice {
            bound,
            dens: Some(s_smooth_up_to(bound, s)),
        }
    }

    pub fn all(bound: u64) -> Self {
        Lattice { bound, dens: None }
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    /// The values of level h, in walk order.
    pub fn level(&self, h: u64) -> Vec<Rat> {
        let mut out = Vec::new();
        let mut push = |a: u64, b: u64| {
            out.push(Rat::new(a, b));
            if a != 0 {
                out.push(Rat::new(-BigInt::from(a), b));
            }
        };
        let mut visit = |b: u64| {
            if b == h {
                for a in 0..=h {
                    if a.gcd(&b) == 1 {
                        push(a, b);
                    }
                }
            } else if h.gcd(&b) == 1 {
                push(h, b);
            }
        };
        match &self.dens {
            Some(dens) => dens.iter().take_while(|b| **b <= h).for_each(|b| visit(*b)),
            None => (1..=h).for_each(visit),
        }
        out.sort_by(walk_cmp);
        out
    }
}

/// f(v, y) or f(x, v) as a polynomial in the remaining variable.
struct Sweep {
    fixed: Var,
    coeffs: Vec<UPoly<Rat>>,
}

impl Sweep {
    fn new(f: &PolyQ, fixed: Var) -> Self {
        let free = if fixed == Var::X { Var::Y } else { Var::X };
        Sweep {
            fixed,
            coeffs: f.coeffs_in(free, fixed),
        }
    }

    /// Points with the fixed coordinate equal to v; None when the whole
    /// line lies on the curve.
    fn points(&self, v: &Rat) -> Result<Option<Vec<AffinePoint>>> {
        let p = UPoly::new(self.coeffs.iter().map(|c| c.eval(v)).collect());
        if p.is_zero() {
            return Ok(None);
        }
        let mut roots = rational_roots(&p)?;
        roots.sort_by(walk_cmp);
        Ok(Some(
            roots
                .into_iter()
                .map(|r| {
                    if self.fixed == Var::X {
                        AffinePoint::plane(v.clone(), r)
                    } else {
                        AffinePoint::plane(r, v.clone())
                    }
                })
                .collect(),
        ))
    }
}

fn param_point(coords: &[RatFunc<Rat>], t: &Rat) -> Option<AffinePoint> {
    let values: Option<Vec<Rat>> = coords.iter().map(|r| r.eval(t)).collect();
    values.map(|coords| AffinePoint {
        coords,
        param_value: Some(t.clone()),
    })
}

/// All S-integral points of the curve found at one lattice level.
fn level_hits(
    input: &CurveInput,
    s: &PrimeSet,
    lattice: &Lattice,
    h: u64,
) -> Result<Vec<AffinePoint>> {
    let mut hits = Vec::new();
    match input {
        CurveInput::Implicit { f, .. } => {
            for fixed in [Var::X, Var::Y] {
                let sweep = Sweep::new(f, fixed);
                for v in lattice.level(h) {
                    if let Some(pts) = sweep.points(&v)? {
                        hits.extend(pts.into_iter().filter(|p| p.is_s_integral(s)));
                    }
                }
            }
        }
        CurveInput::Parametrized { coords, .. } => {
            for t in lattice.level(h) {
                if let Some(p) = param_point(coords, &t) {
                    if p.is_s_integral(s) {
                        hits.push(p);
                    }
                }
            }
        }
    }
    Ok(hits)
}

fn lattice_for(input: &CurveInput, s: &PrimeSet, bound: u64) -> Lattice {
    match input {
        CurveInput::Implicit { .. } => Lattice::s_integral(bound, s),
        CurveInput::Parametrized { .. } => Lattice::all(bound),
    }
}

/// The first S-integral point in search order within the lattice of bound
/// H. For plane curves this is the point of least height (ties broken by
/// walk order); for parametrizations, the image of the first parameter
/// value in walk order.
pub fn search_point(input: &CurveInput, s: &PrimeSet, bound: u64) -> Result<Option<AffinePoint>> {
    let lattice = lattice_for(input, s, bound);
    match input {
        CurveInput::Implicit { .. } => {
            let mut best: Option<AffinePoint> = None;
            for h in 1..=bound {
                for p in level_hits(input, s, &lattice, h)? {
                    if best.as_ref().is_none_or(|b| search_cmp(&p, b).is_lt()) {
                        best = Some(p);
                    }
                }
                // every point of height <= h has been seen by now
                if best
                    .as_ref()
                    .is_some_and(|b| b.height() <= BigUint::from(h))
                {
                    break;
                }
            }
            Ok(best)
        }
        CurveInput::Parametrized { .. } => {
            const CHUNK: u64 = 64;
            let mut start = 1;
            while start <= bound {
                let end = (start + CHUNK - 1).min(bound);
                let found = (start..=end)
                    .into_par_iter()
                    .map(|h| Ok(level_hits(input, s, &lattice, h)?.into_iter().next()))
                    .collect::<Result<Vec<_>>>()?;
                if let Some(p) = found.into_iter().flatten().next() {
                    return Ok(Some(p));
                }
                start = end + 1;
            }
            Ok(None)
        }
    }
}

/// Every S-integral point whose x-coordinate or y-coordinate (or parameter,
/// for parametrizations) lies in the lattice of bound H, sorted by height
/// and then numerically, without repetitions.
pub fn enumerate_points(input: &CurveInput, s: &PrimeSet, bound: u64) -> Result<Vec<AffinePoint>> {
    let lattice = lattice_for(input, s, bound);
    let levels = (1..=bound)
        .into_par_iter()
        .map(|h| level_hits(input, s, &lattice, h))
        .collect::<Result<Vec<_>>>()?;
    let mut pts: Vec<AffinePoint> = levels.into_iter().flatten().collect();
    pts.sort_by(enumerate_cmp);
    pts.dedup_by(|a, b| a.coords == b.coords);
    Ok(pts)
}

// ---------------------------------------------------------------------------
// Streams from a witness

/// The parameter values theta fed into the Laurent polynomials.
#[derive(Clone, Debug)]
pub struct ThetaStream {
    generator: Generator,
    index: u64,
    base: QuadElem,
    current: QuadElem,
}

impl ThetaStream {
    pub fn new(w: &Witness) -> Self {
        let base = match &w.generator {
            Generator::Integers { step } => {
                QuadElem::rational(Rat::from_int(BigInt::from(step.clone())))
            }
            Generator::SUnitPower { p, step } => QuadElem::rational(Rat::from_int(BigInt::from(
                num_traits::pow(BigUint::from(*p), usize_of(step)),
            ))),
            Generator::NormOnePower { gamma, step } => gamma.pow_big(step),
        };
        ThetaStream {
            generator: w.generator.clone(),
            index: 0,
            current: QuadElem::from_int(1),
            base,
        }
    }
}

fn usize_of(n: &BigUint) -> usize {
    usize::try_from(n).expect("step fits in usize")
}

impl Iterator for ThetaStream {
    type Item = QuadElem;

    fn next(&mut self) -> Option<QuadElem> {
        let i = self.index;
        self.index += 1;
        Some(match self.generator {
            Generator::Integers { .. } => {
                let k = (i / 2 + 1) as i64;
                let k = if i.is_multiple_of(2) { k } else { -k };
                &self.base * &QuadElem::from_int(k)
            }
            _ => {
                self.current = &self.current * &self.base;
                self.current.clone()
            }
        })
    }
}

/// Whether theta lies in the congruence class the witness requires.
pub fn theta_in_class(w: &Witness, theta: &QuadElem) -> bool {
    let n = &w.n;
    match &w.generator {
        Generator::Integers { .. } => theta
            .to_rat()
            .is_some_and(|r| r.is_integer() && (r.numer() % BigInt::from(n.clone())).is_zero()),
        Generator::SUnitPower { .. } => {
            theta.to_rat().is_some() && (n.is_one() || congruent_to_one(theta, n))
        }
        Generator::NormOnePower { .. } => {
            theta.norm().is_one() && (n.is_one() || congruent_to_one(theta, n))
        }
    }
}

/// The point for one theta, checked exactly against the witness, the
/// parametrization it came from and the curve.
pub fn point_at(
    w: &Witness,
    input: &CurveInput,
    s: &PrimeSet,
    theta: &QuadElem,
) -> Result<AffinePoint> {
    let fail = |what: &str| Error::InvariantViolation(format!("{what} at theta = {theta}"));
    if !theta_in_class(w, theta) {
        return Err(fail("theta outside its congruence class"));
    }
    let mut coords = Vec::with_capacity(w.fs.len());
    for f in &w.fs {
        let v = f.eval(theta)?;
        coords.push(
            v.to_rat()
                .ok_or_else(|| fail("coordinate with nonzero sqrt(D) part"))?,
        );
    }
    let (pn, pd) = w.mobius.apply_projective(theta);
    let t = if pd.is_zero() {
        None
    } else {
        Some(
            (&pn / &pd)
                .to_rat()
                .ok_or_else(|| fail("irrational parameter"))?,
        )
    };
    for (r, x) in w.parametrization.coords.iter().zip(&coords) {
        let v = match &t {
            Some(t) => r.eval(t),
            None => r.eval_projective(&Rat::one(), &Rat::zero()),
        };
        if v.as_ref() != Some(x) {
            return Err(fail("point differs from the parametrization"));
        }
    }
    let point = AffinePoint {
        coords,
        param_value: match input {
            CurveInput::Implicit { .. } => None,
            CurveInput::Parametrized { .. } => t,
        },
    };
    let on_curve = match (input, &point.param_value) {
        (CurveInput::Parametrized { .. }, None) => true,
        _ => input.contains(&point),
    };
    if !on_curve {
        return Err(fail("point not on the curve"));
    }
    if !point.is_s_integral(s) {
        return Err(fail("point is not S-integral"));
    }
    Ok(point)
}

/// The first `count` distinct points of the witness stream, each verified.
pub fn generate_points(
    w: &Witness,
    input: &CurveInput,
    s: &PrimeSet,
    count: usize,
) -> Result<Vec<AffinePoint>> {
    let mut out = Vec::with_capacity(count);
    let mut seen = HashSet::new();
    let limit = 20 * count + 100;
    for theta in ThetaStream::new(w).take(limit) {
        let p = point_at(w, input, s, &theta)?;
        if seen.insert(p.coords.clone()) {
            out.push(p);
            if out.len() == count {
                return Ok(out);
            }
        }
    }
    Err(Error::InvariantViolation(format!(
        "only {} distinct points among {limit} stream values",
        out.len()
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_curve, parse_ratfunc_list};

    fn implicit(s: &str) -> CurveInput {
        CurveInput::implicit(parse_curve(s).unwrap(), false).unwrap()
    }

    fn param(s: &str) -> CurveInput {
        CurveInput::parametrized(parse_ratfunc_list(s).unwrap(), false).unwrap()
    }

    fn pt(x: i64, y: i64) -> Vec<Rat> {
        vec![Rat::from(x), Rat::from(y)]
    }

    fn coords(ps: &[AffinePoint]) -> Vec<Vec<Rat>> {
        ps.iter().map(|p| p.coords.clone()).collect()
    }

    #[test]
    fn lattice_levels() {
        let l = Lattice::all(10);
        let show = |v: Vec<Rat>| {
            v.iter()
                .map(|r| r.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        };
        assert_eq!(show(l.level(1)), "0 1 -1");
        assert_eq!(show(l.level(2)), "1/2 -1/2 2 -2");
        assert_eq!(show(l.level(3)), "1/3 -1/3 2/3 -2/3 3 3/2 -3 -3/2");
        let s3 = Lattice::s_integral(10, &PrimeSet::new([3]).unwrap());
        assert_eq!(show(s3.level(2)), "2 -2");
        assert_eq!(show(s3.level(3)), "1/3 -1/3 2/3 -2/3 3 -3");
        // every rational of height <= H appears exactly once
        let mut all: Vec<Rat> = (1..=12).flat_map(|h| l.level(h)).collect();
        let n = all.len();
        all.sort();
        all.dedup();
        assert_eq!(all.len(), n);
        let mut brute = Vec::new();
        for b in 1..=12i64 {
            for a in -12i64..=12 {
                if a.gcd(&b) == 1 {
                    brute.push(Rat::new(a, b));
                }
            }
        }
        brute.sort();
        assert_eq!(all, brute);
    }

    #[test]
    fn search_examples() {
        let s0 = PrimeSet::empty();
        let p = search_point(&implicit("x^2 - 2*y^2 - 1"), &s0, 10)
            .unwrap()
            .unwrap();
        assert_eq!(p.coords, pt(1, 0));
        assert!(search_point(&implicit("x^2 + y^2 - 3"), &s0, 50)
            .unwrap()
            .is_none());
        let p = search_point(&param("t^2, t^3"), &s0, 3).unwrap().unwrap();
        assert_eq!(p.coords, pt(0, 0));
        assert_eq!(p.param_value, Some(Rat::zero()));
        let p = search_point(&implicit("x + 2*y - 5"), &s0, 100)
            .unwrap()
            .unwrap();
        assert_eq!(p.coords, pt(1, 2));
        let s2 = PrimeSet::new([2]).unwrap();
        let p = search_point(&implicit("2*x + 4*y - 1"), &s2, 100)
            .unwrap()
            .unwrap();
        assert_eq!(p.coords, vec![Rat::new(1, 2), Rat::zero()]);
    }

    #[test]
    fn search_returns_least_height() {
        // the y-sweep meets (100, 0) first, but (7, 1) has smaller height
        let f = implicit("x + 93*y - 100");
        let p = search_point(&f, &PrimeSet::empty(), 200).unwrap().unwrap();
        assert_eq!(p.coords, pt(7, 1));
    }

    #[test]
    fn enumerate_examples() {
        let s0 = PrimeSet::empty();
        let got = enumerate_points(&implicit("x^2 + y^2 - 1"), &s0, 100).unwrap();
        assert_eq!(coords(&got), vec![pt(-1, 0), pt(0, -1), pt(0, 1), pt(1, 0)]);
        let got = enumerate_points(&implicit("x*y - 1"), &s0, 100).unwrap();
        assert_eq!(coords(&got), vec![pt(-1, -1), pt(1, 1)]);
        let got = enumerate_points(&implicit("x + 2*y - 5"), &s0, 3).unwrap();
        for p in &got {
            assert!(p.coords[0].is_integer() && p.coords[1].is_integer());
        }
        // odd x with |x| <= 3 from the x-sweep, plus the y-sweep's |y| <= 3
        let xs: HashSet<i64> = got
            .iter()
            .map(|p| i64::try_from(p.coords[0].numer()).unwrap())
            .collect();
        for x in [-3, -1, 1, 3] {
            assert!(xs.contains(&x));
        }
        let got = enumerate_points(&implicit("x^2 - 2*y^2 - 1"), &s0, 100).unwrap();
        for p in [pt(1, 0), pt(3, 2), pt(17, 12), pt(99, 70)] {
            assert!(coords(&got).contains(&p));
        }
        assert!(enumerate_points(&implicit("x^2 - 2*y^2 - 3"), &s0, 1000)
            .unwrap()
            .is_empty());
    }

    /// Independent oracle for integral points on a conic: loop over x and
    /// test y by integer square roots.
    #[test]
    fn enumerate_matches_integer_oracle() {
        let f = implicit("x^2 - 3*y^2 - 1");
        let got = enumerate_points(&f, &PrimeSet::empty(), 300).unwrap();
        let mut want = Vec::new();
        for x in -300i64..=300 {
            let rhs = x * x - 1;
            if rhs % 3 != 0 {
                continue;
            }
            let y2 = rhs / 3;
            if y2 < 0 {
                continue;
            }
            let y = (y2 as f64).sqrt().round() as i64;
            if y * y == y2 {
                want.push(pt(x, y));
                if y != 0 {
                    want.push(pt(x, -y));
                }
            }
        }
        // points with |y| <= 300 but |x| > 300 come from the y-sweep
        for y in -300i64..=300 {
            let x2 = 3 * y * y + 1;
            let x = (x2 as f64).sqrt().round() as i64;
            if x * x == x2 && x > 300 {
                want.push(pt(x, y));
                want.push(pt(-x, y));
            }
        }
        let mut want_sorted: Vec<AffinePoint> = want
            .into_iter()
            .map(|c| AffinePoint {
                coords: c,
                param_value: None,
            })
            .collect();
        want_sorted.sort_by(enumerate_cmp);
        want_sorted.dedup();
        assert_eq!(got, want_sorted);
    }

    #[test]
    fn enumerate_independent_of_thread_count() {
        let f = implicit("x^2 + x*y + y^2 - 7");
        let s = PrimeSet::new([3]).unwrap();
        let run = |n| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .unwrap()
                .install(|| enumerate_points(&f, &s, 200).unwrap())
        };
        let one = run(1);
        assert!(!one.is_empty());
        assert_eq!(one, run(4));
        assert_eq!(one, enumerate_points(&f, &s, 200).unwrap());
    }

    #[test]
    fn parametrized_enumeration() {
        let got = enumerate_points(&param("t^2, t^3"), &PrimeSet::empty(), 5).unwrap();
        let want: Vec<Vec<Rat>> = (-5i64..=5).map(|t| pt(t * t, t * t * t)).collect();
        let mut want_points: Vec<AffinePoint> = want
            .into_iter()
            .map(|c| AffinePoint {
                coords: c,
                param_value: None,
            })
            .collect();
        want_points.sort_by(enumerate_cmp);
        assert_eq!(coords(&got), coords(&want_points));
    }
}
