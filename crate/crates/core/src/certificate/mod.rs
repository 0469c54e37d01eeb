//! Both sides of the sharp inequality for finitely supported coefficients,
//! the upper bound for the left side, and the parameter systems that make
//! the bound close.

mod bound;
mod exact;
mod systems;
mod theorem;

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{Interval, KahanSum};
use crate::spectrum::{classify_brute_force, ClassifiedPoint, PointClass, SpectrumSet, Subtype};

pub use bound::{compute_s_upper_bound, trivial_coefficients, UpperBound};
pub use exact::{compute_s_exact, prepare_spectrum, SExact, MAX_SUPPORT};
pub use systems::{
    check_systems, RowCheck, SystemId, SystemInstance, SystemReport, SystemsOutcome, ASSUMED_F_DISTINCT,
    ASSUMED_F_NN0, ASSUMED_F_NNM, ASSUMED_F_NNN, ASSUMED_F_N00,
};
pub use theorem::{run_trials, verify_theorem, TheoremVerdict, TrialConfig, TrialOutcome, TrialsReport};

/// Three-valued outcome of a numerical `<=` check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Fails,
    Indeterminate,
}

impl Verdict {
    /// `lhs <= rhs` where `rhs` is only known to lie in `[rhs_lo, rhs_hi]`.
    pub fn le(lhs: f64, rhs_lo: f64, rhs_hi: f64) -> Self {
        if lhs <= rhs_lo {
            Verdict::Holds
        } else if lhs > rhs_hi {
            Verdict::Fails
        } else {
            Verdict::Indeterminate
        }
    }

    /// Sign of `margin` against a symmetric error `budget`.
    pub fn from_margin(margin: f64, budget: f64) -> Self {
        if margin > budget {
            Verdict::Holds
        } else if margin < -budget {
            Verdict::Fails
        } else {
            Verdict::Indeterminate
        }
    }
}

/// Fourier coefficients `f̂(n)` on a finite set of frequencies.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CoefficientVector {
    entries: BTreeMap<i128, Complex64>,
}

impl CoefficientVector {
    pub fn new(entries: BTreeMap<i128, Complex64>) -> Self {
        Self { entries }
    }

    /// `f̂(0) = 1`, everything else zero.
    pub fn constant() -> Self {
        Self::from_pairs([(0, Complex64::new(1.0, 0.0))])
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (i128, Complex64)>) -> Self {
        let mut entries = BTreeMap::new();
        for (n, c) in pairs {
            *entries.entry(n).or_insert(Complex64::new(0.0, 0.0)) += c;
        }
        Self { entries }
    }

    pub fn entries(&self) -> &BTreeMap<i128, Complex64> {
        &self.entries
    }

    pub fn get(&self, n: i128) -> Complex64 {
        self.entries.get(&n).copied().unwrap_or_default()
    }

    pub fn abs2(&self, n: i128) -> f64 {
        self.get(n).norm_sqr()
    }

    /// Frequencies with a non-zero coefficient, ascending.
    pub fn support(&self) -> Vec<i128> {
        self.entries.iter().filter(|(_, c)| c.norm_sqr() > 0.0).map(|(n, _)| *n).collect()
    }

    /// `Σ |f̂(n)|²`.
    pub fn mass(&self) -> f64 {
        self.entries.values().map(|c| c.norm_sqr()).collect::<KahanSum>().value()
    }

    pub fn check_support(&self, a: &SpectrumSet) -> Result<()> {
        match self.support().into_iter().find(|n| !a.contains(*n)) {
            Some(n) => Err(Error::SupportOutsideSpectrum(n)),
            None => Ok(()),
        }
    }
}

/// A spectrum together with the class of every triple sum.
#[derive(Debug, Clone)]
pub struct SpectrumContext {
    spectrum: SpectrumSet,
    points: BTreeMap<i128, ClassifiedPoint>,
}

impl SpectrumContext {
    pub fn new(spectrum: SpectrumSet) -> Result<Self> {
        let points = classify_brute_force(&spectrum)?.into_iter().map(|p| (p.d, p)).collect();
        Ok(Self { spectrum, points })
    }

    pub fn spectrum(&self) -> &SpectrumSet {
        &self.spectrum
    }

    pub fn point(&self, d: i128) -> Option<&ClassifiedPoint> {
        self.points.get(&d)
    }

    /// Exceptional points, ascending.
    pub fn exceptions(&self) -> impl Iterator<Item = &ClassifiedPoint> {
        self.points.values().filter(|p| p.class == PointClass::Exception)
    }

    pub fn subtype(&self, d: i128) -> Option<Subtype> {
        self.points.get(&d).and_then(|p| p.subtype)
    }

    pub fn is_exception(&self, d: i128) -> bool {
        self.subtype(d).is_some()
    }

    /// `D ∈ k·A`, the dilate.
    pub fn in_dilate(&self, d: i128, k: i128) -> bool {
        d % k == 0 && self.spectrum.contains(d / k)
    }
}

/// The b-family and the ε_D choices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateParams {
    pub b: f64,
    pub eps: BTreeMap<i128, f64>,
}

impl CertificateParams {
    pub fn new(b: f64, eps: BTreeMap<i128, f64>) -> Result<Self> {
        if !(b > 1.0) || !b.is_finite() {
            return Err(Error::Range(format!("b = {b} must be a finite number > 1")));
        }
        if let Some((d, e)) = eps.iter().find(|(_, e)| !(**e > 0.0) || !e.is_finite()) {
            return Err(Error::Range(format!("eps at D = {d} is {e}, must be positive")));
        }
        Ok(Self { b, eps })
    }

    pub fn eps(&self, d: i128) -> Result<f64> {
        self.eps.get(&d).copied().ok_or(Error::MissingEpsilon(d))
    }

    /// Exponent on `ε_D` in the A1 term for the representation `D = 2n₁ + n₂`.
    pub fn a_exponent(ctx: &SpectrumContext, d: i128, n2: i128) -> i32 {
        if !ctx.in_dilate(d, 2) {
            0
        } else if n2 == 0 {
            1
        } else {
            -1
        }
    }
}

/// `r³s <= b/(2b-2) r⁴ + 1/(2b-2) s⁴ + (b-3)/(2b-2) r²s²`, up to a few ulps.
pub fn check_basic_inequality(r: f64, s: f64, b: f64) -> Result<bool> {
    if !(b > 1.0) || !b.is_finite() {
        return Err(Error::Range(format!("b = {b} must be a finite number > 1")));
    }
    if r < 0.0 || s < 0.0 {
        return Err(Error::Range("r and s must be non-negative".into()));
    }
    let (lhs, rhs) = basic_inequality_sides(r, s, b);
    let scale = r.powi(4) + s.powi(4) + (r * s).powi(2);
    Ok(lhs <= rhs + 8.0 * f64::EPSILON * scale * (1.0 + b.abs() / (b - 1.0)))
}

/// Both sides of the basic inequality.
pub fn basic_inequality_sides(r: f64, s: f64, b: f64) -> (f64, f64) {
    let den = 2.0 * b - 2.0;
    let lhs = r * r * r * s;
    let rhs = (b * r.powi(4) + s.powi(4) + (b - 3.0) * r * r * s * s) / den;
    (lhs, rhs)
}

/// `(Σ|f̂|²)³` and the nine-term grouping of the same sum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Norm6 {
    pub cube: f64,
    pub grouped: f64,
}

pub fn compute_norm6(f: &CoefficientVector) -> Norm6 {
    let m = f.mass();
    let u = symmetric_hull(f);
    let w = |n: i128| f.abs2(n);
    let w0 = w(0);
    let mut s = KahanSum::new();
    for &n1 in &u {
        for &n2 in &u {
            for &n3 in &u {
                if n1.abs() != n2.abs() && n1.abs() != n3.abs() && n2.abs() != n3.abs() {
                    s.add(w(n1) * w(n2) * w(n3));
                }
            }
        }
    }
    for &n1 in u.iter().filter(|n| **n != 0) {
        for &n2 in u.iter().filter(|n| **n != 0 && n.abs() != n1.abs()) {
            s.add(3.0 * w(n1) * w(n1) * w(n2));
            s.add(3.0 * w(n1) * w(n2) * w(-n2));
        }
        s.add(w(n1).powi(3));
        s.add(3.0 * w(n1) * w(n1) * w0);
        s.add(3.0 * w(n1) * w(-n1) * w0);
        s.add(3.0 * w(n1) * w0 * w0);
        s.add(3.0 * w(n1) * w(n1) * w(-n1));
    }
    s.add(w0.powi(3));
    Norm6 { cube: m * m * m, grouped: s.value() }
}

/// Support, its negatives and 0, ascending.
pub(crate) fn symmetric_hull(f: &CoefficientVector) -> Vec<i128> {
    let mut u: Vec<i128> = f.support().into_iter().flat_map(|n| [n, -n]).chain([0]).collect();
    u.sort_unstable();
    u.dedup();
    u
}

/// Values of `b` allowed by the two b-dependent trivial rows given a lower
/// bound `f_nn0` on every `F(n, n, 0)`.
///
/// Row `9(b+1)/(b-1) + 9 <= 3F` gives `b >= F/(F-6)`; row
/// `9(b-3)/(b-1) + 18 <= 3F` gives `b <= (3-d)/(1-d)` with `d = (F-6)/3`
/// (no upper limit once `d >= 1`).
pub fn feasible_b_interval(f_nn0: f64) -> Result<Interval> {
    if !(f_nn0 > 6.0) {
        return Err(Error::Infeasible(format!(
            "9(b+1)/(b-1) + 9 <= 3F(n,n,0) has no solution b > 1 when F(n,n,0) = {f_nn0} <= 6"
        )));
    }
    let lo = f_nn0 / (f_nn0 - 6.0);
    let d = (f_nn0 - 6.0) / 3.0;
    let hi = if d < 1.0 { (3.0 - d) / (1.0 - d) } else { f64::INFINITY };
    if lo > hi {
        return Err(Error::Infeasible(format!(
            "9(b-3)/(b-1) + 18 <= 3F(n,n,0) needs b <= {hi}, but the other row needs b >= {lo}"
        )));
    }
    Ok(Interval::new(lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn basic_inequality_examples() {
        let (l, r) = basic_inequality_sides(1.0, 1.0, 5.0);
        assert_eq!(l, 1.0);
        assert!((r - 1.0).abs() <= 1e-15);
        assert!(check_basic_inequality(1.0, 1.0, 5.0).unwrap());
        assert!(check_basic_inequality(3.0, 0.0, 2.0).unwrap());
        assert!(check_basic_inequality(1.0, 1.0, 1.0).is_err());
        assert!(check_basic_inequality(-1.0, 1.0, 2.0).is_err());
    }

    #[test]
    fn basic_inequality_random() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20_000 {
            let (r, s) = (rng.gen_range(0.0..10.0), rng.gen_range(0.0..10.0));
            for b in [1.5, 4.2, 5.0, 6.66, 50.0] {
                assert!(check_basic_inequality(r, s, b).unwrap(), "{r} {s} {b}");
            }
        }
    }

    #[test]
    fn norm6_examples() {
        let one = compute_norm6(&CoefficientVector::constant());
        assert_eq!((one.cube, one.grouped), (1.0, 1.0));
        let f = CoefficientVector::from_pairs([(1, Complex64::new(1.0, 0.0)), (-1, Complex64::new(1.0, 0.0))]);
        let n = compute_norm6(&f);
        assert_eq!((n.cube, n.grouped), (8.0, 8.0));
    }

    #[test]
    fn norm6_grouping_matches_cube() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let pool = [0i128, 1, -1, 5, -5, 25, -25, 125];
        for _ in 0..1000 {
            let mut pairs = Vec::new();
            for &n in &pool {
                if rng.gen_bool(0.7) {
                    pairs.push((n, Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0))));
                }
            }
            let f = CoefficientVector::from_pairs(pairs);
            let n = compute_norm6(&f);
            assert!((n.cube - n.grouped).abs() <= 1e-12 * n.cube.max(1e-300), "{n:?}");
        }
    }

    #[test]
    fn b_window() {
        let w = feasible_b_interval(7.94).unwrap();
        assert!((w.lo - 4.0928).abs() < 1e-4, "{w:?}");
        assert!((w.hi - 6.6604).abs() < 1e-4, "{w:?}");
        assert!(w.contains(6.66) && w.contains(5.0));
        // The lower endpoint 4.2 corresponds to F(n,n,0) = 7.875.
        assert!((feasible_b_interval(7.875).unwrap().lo - 4.2).abs() < 1e-12);
        assert!(feasible_b_interval(6.0).is_err());
        assert!(feasible_b_interval(11.0).unwrap().hi.is_infinite());
    }

    #[test]
    fn params_validation() {
        assert!(CertificateParams::new(1.0, BTreeMap::new()).is_err());
        assert!(CertificateParams::new(2.0, [(3, 0.0)].into()).is_err());
        let p = CertificateParams::new(2.0, [(3, 0.5)].into()).unwrap();
        assert_eq!(p.eps(3).unwrap(), 0.5);
        assert!(matches!(p.eps(4), Err(Error::MissingEpsilon(4))));
    }

    #[test]
    fn support_check() {
        let a = SpectrumSet::geometric(5, 2, 1).unwrap();
        let f = CoefficientVector::from_pairs([(2, Complex64::new(1.0, 0.0))]);
        assert!(matches!(f.check_support(&a), Err(Error::SupportOutsideSpectrum(2))));
        let zero = CoefficientVector::from_pairs([(2, Complex64::new(0.0, 0.0))]);
        assert!(zero.check_support(&a).is_ok());
    }
}
