use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::exact::to_i64;
use super::{feasible_b_interval, trivial_coefficients, CertificateParams, SpectrumContext, Verdict};
use crate::error::{Error, Result};
use crate::integrals::DIRECT_ORDER_LIMIT;
use crate::integrals::Integrals;
use crate::numeric::Interval;
use crate::spectrum::{ClassifiedPoint, Subtype, TripleRep};

// Lower bounds taken as given for orders beyond the computable window.
pub const ASSUMED_F_N00: f64 = 5.0;
pub const ASSUMED_F_NN0: f64 = 10.8;
pub const ASSUMED_F_NNN: f64 = 3.2;
/// `F(n, n, m)` with both orders in the spectrum.
pub const ASSUMED_F_NNM: f64 = 13.2;
/// `F(n, m, k)`, all distinct and in the spectrum.
pub const ASSUMED_F_DISTINCT: f64 = 21.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SystemId {
    Trivial,
    S2,
    S3,
    S4,
    S5,
}

/// One row `lhs <= factor·F(triple)` of the global system.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RowCheck {
    pub row: u8,
    pub triple: [i128; 3],
    pub lhs: f64,
    pub rhs_lo: f64,
    pub rhs_hi: f64,
    pub verdict: Verdict,
    /// `F` came from a stated bound rather than a computation.
    pub assumed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemInstance {
    pub d: i128,
    pub system: SystemId,
    pub reps: [TripleRep; 2],
    /// Feasible `ε_D`; unbounded for points that only need the global rows.
    pub interval: Interval,
    pub eps: f64,
    /// The customary fixed ε for this shape, checked against `interval`.
    pub reference_eps: Option<f64>,
    pub reference_eps_feasible: Option<bool>,
    pub feasible: bool,
    pub assumed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemReport {
    pub system: SystemId,
    pub instances: usize,
    pub intervals: Vec<(i128, Interval)>,
    pub pass: bool,
    /// Smallest interval width, or smallest row slack for the global system.
    pub tightest_margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemsOutcome {
    pub b: f64,
    pub b_window: Option<Interval>,
    pub b_in_window: bool,
    pub trivial_rows: Vec<RowCheck>,
    pub instances: Vec<SystemInstance>,
    pub reports: Vec<SystemReport>,
    pub params: CertificateParams,
    pub pass: bool,
}

#[derive(Debug, Clone, Copy)]
struct FBound {
    lo: f64,
    hi: f64,
    assumed: bool,
}

fn in_window(t: [i128; 3]) -> bool {
    t.iter().all(|v| v.unsigned_abs() <= DIRECT_ORDER_LIMIT as u128)
}

fn f_bound(eng: &Integrals, t: [i128; 3]) -> Result<FBound> {
    if in_window(t) {
        let f = eng.f(to_i64(t[0])?, to_i64(t[1])?, to_i64(t[2])?)?;
        return Ok(FBound { lo: f.lo, hi: f.hi, assumed: false });
    }
    let mut a = t.map(|v| v.unsigned_abs());
    a.sort_unstable_by(|x, y| y.cmp(x));
    let lo = match a {
        [_, 0, 0] => ASSUMED_F_N00,
        [x, y, 0] if x == y => ASSUMED_F_NN0,
        [x, y, z] if x == y && y == z => ASSUMED_F_NNN,
        [x, y, z] if x == y || y == z => ASSUMED_F_NNM,
        _ => ASSUMED_F_DISTINCT,
    };
    Ok(FBound { lo, hi: f64::INFINITY, assumed: true })
}

#[derive(Debug, Clone, Copy)]
enum Shape {
    /// Repeat-free `n`, doubled `m1`, single `m2`.
    S2 { n: [i128; 3], m1: i128, m2: i128 },
    S3 { n: [i128; 3], m1: i128 },
    /// `(n1, n1, 0)` against `(m1, m1, m2)`.
    S4 { n1: i128, m1: i128, m2: i128 },
    /// `(n1, n1, n2)` against `(m1, m1, m1)`.
    S5 { n1: i128, n2: i128, m1: i128 },
    /// Both doubled with non-zero singles; only the global rows are needed.
    Covered,
}

fn shape(ctx: &SpectrumContext, p: &ClassifiedPoint) -> Result<(Shape, [TripleRep; 2])> {
    let unmatched = || Error::UnmatchedShape(p.d);
    let (x, y) = p.essential_pair(ctx.spectrum()).ok_or_else(unmatched)?;
    let distinct_abs = |a: i128, b: i128| a != 0 && a.abs() != b.abs();
    let s = match p.subtype {
        Some(Subtype::A2) => {
            let (free, rep) = if x.has_repeat() { (y, x) } else { (x, y) };
            let (m1, m2) = rep.double_and_single().ok_or_else(unmatched)?;
            if m1 == m2 && m1 != 0 {
                Shape::S3 { n: free.elems, m1 }
            } else if distinct_abs(m1, m2) {
                Shape::S2 { n: free.elems, m1, m2 }
            } else {
                return Err(unmatched());
            }
        }
        Some(Subtype::A1) => {
            let (a, b) = (x.double_and_single().ok_or_else(unmatched)?, y.double_and_single().ok_or_else(unmatched)?);
            let (tri, other) = if a.0 == a.1 { (Some(a), b) } else if b.0 == b.1 { (Some(b), a) } else { (None, a) };
            if let Some((m1, _)) = tri {
                let (n1, n2) = other;
                if m1 == 0 || n2 == 0 || !distinct_abs(n1, n2) {
                    return Err(unmatched());
                }
                Shape::S5 { n1, n2, m1 }
            } else {
                let (zero, rest) = if a.1 == 0 { (Some(a), b) } else if b.1 == 0 { (Some(b), a) } else { (None, a) };
                match zero {
                    Some((n1, _)) if n1 != 0 && rest.1 != 0 && distinct_abs(rest.0, rest.1) => {
                        Shape::S4 { n1, m1: rest.0, m2: rest.1 }
                    }
                    None if [a, b].iter().all(|(d, s)| distinct_abs(*d, *s) && *s != 0) => Shape::Covered,
                    _ => return Err(unmatched()),
                }
            }
        }
        None => return Err(unmatched()),
    };
    Ok((s, [x, y]))
}

fn global_rows(eng: &Integrals, ctx: &SpectrumContext, b: f64) -> Result<Vec<RowCheck>> {
    let (c_plus, c_minus) = trivial_coefficients(b);
    let lam = ctx.spectrum().lambdas();
    let pos = &lam[1..];
    let mut spec: Vec<(u8, [i128; 3], f64, f64)> = Vec::new();
    for &n in pos {
        spec.push((1, [n, n, n], 9.0, 3.0));
        spec.push((2, [n, 0, 0], 15.0, 3.0));
        spec.push((3, [n, n, 0], c_minus + 18.0, 3.0));
        spec.push((4, [n, n, 0], c_plus + 9.0, 3.0));
    }
    for &m1 in pos {
        for &m2 in pos.iter().filter(|m| **m != m1) {
            spec.push((5, [m1, m1, m2], 27.0, 3.0));
        }
    }
    for i in 0..lam.len() {
        for j in 0..i {
            for k in 0..j {
                spec.push((6, [lam[i], lam[j], lam[k]], 15.0, 1.0));
            }
        }
    }
    prefetch(eng, spec.iter().map(|s| s.1))?;
    spec.into_iter()
        .map(|(row, triple, lhs, factor)| {
            let f = f_bound(eng, triple)?;
            let (rhs_lo, rhs_hi) = (factor * f.lo, factor * f.hi);
            Ok(RowCheck { row, triple, lhs, rhs_lo, rhs_hi, verdict: Verdict::le(lhs, rhs_lo, rhs_hi), assumed: f.assumed })
        })
        .collect()
}

fn prefetch(eng: &Integrals, triples: impl Iterator<Item = [i128; 3]>) -> Result<()> {
    let mut list: Vec<[i64; 3]> = vec![[0, 0, 0]];
    for t in triples.filter(|t| in_window(*t)) {
        list.push([to_i64(t[0])?, to_i64(t[1])?, to_i64(t[2])?]);
    }
    eng.prefetch(&list)
}

fn triples_of(s: &Shape) -> Vec<[i128; 3]> {
    match *s {
        Shape::S2 { n, m1, m2 } => vec![n, [m1, m1, m2]],
        Shape::S3 { n, m1 } => vec![n, [m1, m1, m1]],
        Shape::S4 { n1, m1, m2 } => vec![[n1, n1, 0], [m1, m1, m2]],
        Shape::S5 { n1, n2, m1 } => vec![[n1, n1, n2], [m1, m1, m1]],
        Shape::Covered => vec![],
    }
}

/// Lower bound `6/(F - 15)` from `15 + 6/ε <= F`, infinite when `F <= 15`.
fn lower_from_15(f: f64) -> f64 {
    if f > 15.0 {
        6.0 / (f - 15.0)
    } else {
        f64::INFINITY
    }
}

/// Lower bound `3/(F - 6)` from `9(2 + 1/ε) <= 3F`.
fn lower_from_6(f: f64) -> f64 {
    if f > 6.0 {
        3.0 / (f - 6.0)
    } else {
        f64::INFINITY
    }
}

fn instance(eng: &Integrals, d: i128, s: Shape, reps: [TripleRep; 2], b: f64) -> Result<SystemInstance> {
    let c_plus9 = trivial_coefficients(b).0 / 9.0;
    let fs = triples_of(&s).into_iter().map(|t| f_bound(eng, t)).collect::<Result<Vec<_>>>()?;
    let assumed = fs.iter().any(|f| f.assumed);
    let (system, interval, reference_eps) = match s {
        Shape::S2 { m2, .. } => {
            let hi = fs[1].lo / 3.0 - 1.0 - if m2 != 0 { 1.0 } else { c_plus9 };
            (SystemId::S2, Interval::new(lower_from_15(fs[0].lo), hi), Some(if m2 != 0 { 2.0 } else { 1.0 }))
        }
        Shape::S3 { .. } => (SystemId::S3, Interval::new(lower_from_15(fs[0].lo), fs[1].lo - 1.0), Some(2.0)),
        Shape::S4 { n1, .. } => {
            let hi = fs[0].lo / 3.0 - c_plus9 - 1.0;
            (SystemId::S4, Interval::new(lower_from_6(fs[1].lo), hi), (n1.abs() >= 3).then_some(1.0))
        }
        Shape::S5 { .. } => (SystemId::S5, Interval::new(lower_from_6(fs[0].lo), fs[1].lo - 1.0), Some(1.0)),
        Shape::Covered => (SystemId::Trivial, Interval::new(0.0, f64::INFINITY), None),
    };
    let feasible = !interval.is_empty() && interval.hi > 0.0;
    let eps = if matches!(s, Shape::Covered) { 1.0 } else { interval.midpoint() };
    Ok(SystemInstance {
        d,
        system,
        reps,
        interval,
        eps,
        reference_eps,
        reference_eps_feasible: reference_eps.map(|e| interval.contains(e)),
        feasible,
        assumed,
    })
}

/// Checks the global rows at `b`, places every exception of the truncation
/// in its system and computes the feasible `ε_D` interval for it.
pub fn check_systems(eng: &Integrals, ctx: &SpectrumContext, b: f64) -> Result<SystemsOutcome> {
    if !(b > 1.0) || !b.is_finite() {
        return Err(Error::Range(format!("b = {b} must be a finite number > 1")));
    }
    let shapes = ctx.exceptions().map(|p| shape(ctx, p).map(|(s, r)| (p.d, s, r))).collect::<Result<Vec<_>>>()?;
    prefetch(eng, shapes.iter().flat_map(|(_, s, _)| triples_of(s)))?;
    let trivial_rows = global_rows(eng, ctx, b)?;
    let instances =
        shapes.into_iter().map(|(d, s, r)| instance(eng, d, s, r, b)).collect::<Result<Vec<SystemInstance>>>()?;

    let nn0_lo = trivial_rows.iter().filter(|r| r.row == 3).map(|r| r.rhs_lo / 3.0).fold(f64::INFINITY, f64::min);
    let b_window = if nn0_lo.is_finite() { feasible_b_interval(nn0_lo).ok() } else { None };
    let b_in_window = b_window.map_or(nn0_lo.is_infinite(), |w| w.contains(b));

    let mut reports = Vec::new();
    let slack = trivial_rows.iter().map(|r| r.rhs_lo - r.lhs).fold(f64::INFINITY, f64::min);
    reports.push(SystemReport {
        system: SystemId::Trivial,
        instances: trivial_rows.len(),
        intervals: Vec::new(),
        pass: trivial_rows.iter().all(|r| r.verdict != Verdict::Fails)
            && instances.iter().filter(|i| i.system == SystemId::Trivial).all(|i| i.feasible),
        tightest_margin: slack,
    });
    for id in [SystemId::S2, SystemId::S3, SystemId::S4, SystemId::S5] {
        let of: Vec<&SystemInstance> = instances.iter().filter(|i| i.system == id).collect();
        reports.push(SystemReport {
            system: id,
            instances: of.len(),
            intervals: of.iter().map(|i| (i.d, i.interval)).collect(),
            pass: of.iter().all(|i| i.feasible),
            tightest_margin: of.iter().map(|i| i.interval.width()).fold(f64::INFINITY, f64::min),
        });
    }
    let eps: BTreeMap<i128, f64> = instances.iter().filter(|i| i.feasible).map(|i| (i.d, i.eps)).collect();
    let params = CertificateParams::new(b, eps)?;
    let pass = reports.iter().all(|r| r.pass);
    Ok(SystemsOutcome { b, b_window, b_in_window, trivial_rows, instances, reports, params, pass })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrals::DirectQuadrature;
    use crate::spectrum::SpectrumSet;

    fn quick() -> Integrals {
        Integrals::new(DirectQuadrature::with_r_max(2000.0))
    }

    fn ctx(l: Vec<i128>) -> SpectrumContext {
        SpectrumContext::new(SpectrumSet::new(l).unwrap()).unwrap()
    }

    #[test]
    fn dispatch_examples() {
        let c = ctx(vec![0, 1, 4, 16]);
        let get = |d| shape(&c, c.point(d).unwrap()).unwrap().0;
        assert!(matches!(get(2), Shape::S4 { n1: 1, m1: -1, m2: 4 }));
        assert!(matches!(get(3), Shape::S3 { m1: 1, .. }));
        let c5 = ctx(vec![0, 1, 5, 25]);
        assert!(matches!(shape(&c5, c5.point(3).unwrap()).unwrap().0, Shape::S5 { n1: -1, n2: 5, m1: 1 }));
    }

    #[test]
    fn every_random_exception_has_a_system() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        let mut seen = std::collections::HashSet::new();
        for i in 0..300 {
            let a = crate::spectrum::random_lacunary(&mut rng, 2 + i % 8, i % 4 != 0).unwrap();
            let c = SpectrumContext::new(a).unwrap();
            for p in c.exceptions() {
                let (s, _) = shape(&c, p).unwrap_or_else(|e| panic!("{:?}: {e}", c.spectrum().lambdas()));
                seen.insert(std::mem::discriminant(&s));
            }
        }
        assert_eq!(seen.len(), 5);
    }

    #[test]
    fn s2_with_zero_single() {
        // 13 = 3*4 + 1, so 8 = 4 + 4 + 0 = 13 - 4 - 1.
        let eng = Integrals::new(DirectQuadrature::with_r_max(2e4));
        let c = ctx(vec![0, 1, 4, 13]);
        assert!(matches!(shape(&c, c.point(8).unwrap()).unwrap().0, Shape::S2 { m1: 4, m2: 0, .. }));
        let out = check_systems(&eng, &c, 6.66).unwrap();
        let i = out.instances.iter().find(|i| i.d == 8).unwrap();
        assert_eq!(i.system, SystemId::S2);
        assert_eq!(i.reference_eps, Some(1.0));
        assert_eq!(i.reference_eps_feasible, Some(true), "{i:?}");
    }

    #[test]
    fn a4_a5_systems_pass() {
        // A loose tail bound narrows the b-window below 6.66.
        let eng = Integrals::new(DirectQuadrature::with_r_max(2e4));
        for l in [vec![0, 1, 4, 16, 64], vec![0, 1, 5, 25, 125]] {
            let out = check_systems(&eng, &ctx(l.clone()), 6.66).unwrap();
            assert!(out.pass, "{l:?}: {:?}", out.reports);
            assert!(out.b_in_window);
            assert!(out.instances.iter().all(|i| i.reference_eps_feasible != Some(false)), "{:?}", out.instances);
            assert_eq!(out.params.eps.len(), out.instances.len());
        }
    }

    #[test]
    fn b_outside_window_fails_rows() {
        let eng = quick();
        let out = check_systems(&eng, &ctx(vec![0, 1, 4, 16]), 7.5).unwrap();
        assert!(!out.b_in_window);
        assert!(!out.pass);
        assert!(out.trivial_rows.iter().any(|r| r.row == 3 && r.verdict == Verdict::Fails));
    }

    #[test]
    fn assumed_bounds_beyond_window() {
        let eng = quick();
        let f = f_bound(&eng, [1024, 1024, 0]).unwrap();
        assert!(f.assumed && f.lo == ASSUMED_F_NN0);
        assert_eq!(f_bound(&eng, [4096, 1024, 4]).unwrap().lo, ASSUMED_F_DISTINCT);
        assert_eq!(f_bound(&eng, [4096, 4096, 1]).unwrap().lo, ASSUMED_F_NNM);
    }
}
