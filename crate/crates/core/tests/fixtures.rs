use std::collections::BTreeMap;
use std::f64::consts::PI;

use lacuna_core::certificate::{compute_norm6, compute_s_exact, compute_s_upper_bound, verify_theorem, check_systems};
use lacuna_core::integrals::{build_table, DirectQuadrature, QuadratureTable};
use lacuna_core::{CoefficientVector, Integrals, SextetIndex, SpectrumContext, SpectrumSet, Verdict};
use num_complex::Complex64;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Sum over every ordered sextet with matching triple sums.
fn s_by_ordered_sextets(eng: &Integrals, f: &CoefficientVector) -> f64 {
    let sup = f.support();
    let mut by_sum: BTreeMap<i128, Vec<([i128; 3], Complex64)>> = BTreeMap::new();
    for &a in &sup {
        for &b in &sup {
            for &d in &sup {
                by_sum.entry(a + b + d).or_default().push(([a, b, d], f.get(a) * f.get(b) * f.get(d)));
            }
        }
    }
    let mut total = c(0.0, 0.0);
    for group in by_sum.values() {
        for (t, x) in group {
            for (u, y) in group {
                let idx = SextetIndex::new([t[0], t[1], t[2], u[0], u[1], u[2]].map(|v| v as i64)).unwrap();
                total += x * y.conj() * eng.i_direct(&idx).unwrap().value;
            }
        }
    }
    assert!(total.im.abs() <= 1e-12 * total.re.abs());
    total.re
}

#[test]
fn grouped_s_matches_ordered_sextet_sum() {
    let eng = Integrals::new(DirectQuadrature::with_r_max(400.0));
    let ctx = SpectrumContext::new(SpectrumSet::geometric(5, 2, 1).unwrap()).unwrap();
    let f = CoefficientVector::from_pairs([(0, c(0.7, -0.2)), (1, c(-0.4, 0.9)), (-1, c(0.3, 0.1)), (5, c(-1.1, 0.5))]);
    let grouped = compute_s_exact(&eng, &ctx, &f).unwrap();
    let ordered = s_by_ordered_sextets(&eng, &f);
    assert!((grouped.s - ordered).abs() <= 1e-12 * ordered.abs(), "{} vs {ordered}", grouped.s);
}

#[test]
fn radial_ratio_is_c_opt() {
    let eng = Integrals::new(DirectQuadrature::with_r_max(400.0));
    let ctx = SpectrumContext::new(SpectrumSet::new(vec![0]).unwrap()).unwrap();
    let f = CoefficientVector::from_pairs([(0, c(0.6, 0.8) * 1.7)]);
    let s = compute_s_exact(&eng, &ctx, &f).unwrap().s;
    let n6 = compute_norm6(&f).cube;
    let ratio = (2.0 * PI).powi(7) * s / ((2.0 * PI).powi(3) * n6);
    let copt = eng.c_opt().unwrap().value;
    assert!((ratio - copt).abs() <= 1e-12 * copt, "{ratio} {copt}");
}

#[test]
fn frozen_integrals() {
    let eng = Integrals::default();
    // Direct quadrature to R = 1e5; scipy to R = 4000 agrees within its tail.
    let i0 = eng.script_i(0, 0, 0).unwrap();
    assert!((i0.value - 0.336_827_155_472).abs() < 1e-10, "{i0:?}");
    assert!(i0.error_bound < 3e-6);
    let copt = eng.c_opt().unwrap();
    assert!((copt.value - 524.960_432_802).abs() < 1e-7, "{copt:?}");
    let f = eng.f(1, 1, 0).unwrap();
    assert!((f.value - 7.948_722_668).abs() < 1e-8, "{f:?}");
    let mixed = eng.i_direct(&SextetIndex::new([1, 1, 1, 5, -1, -1]).unwrap()).unwrap();
    assert!((mixed.value + 1.155_105_6e-5).abs() < 1e-11, "{mixed:?}");
}

#[test]
fn regression_pm_one_on_a5() {
    let eng = Integrals::default();
    let ctx = SpectrumContext::new(SpectrumSet::geometric(5, 4, 1).unwrap()).unwrap();
    let f = CoefficientVector::from_pairs([(1, c(1.0, 0.0)), (-1, c(1.0, 0.0))]);
    let v = verify_theorem(&eng, &ctx, &f).unwrap();
    assert_eq!(v.verdict, Verdict::Holds);
    assert!((v.margin - 0.597_608_711_79).abs() < 1e-9, "{v:?}");
    assert!((v.exact.s_e - 0.209_700_853_20).abs() < 1e-9, "{v:?}");
    let sys = check_systems(&eng, &ctx, 6.66).unwrap();
    let ub = compute_s_upper_bound(&eng, &ctx, &f, &sys.params).unwrap();
    assert!(v.exact.s <= ub.value + ub.error_bound + v.exact.error_bound);
}

#[test]
fn table_cache_roundtrip_on_disk() {
    let t = build_table(16).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("table.bin");
    t.write_to(std::fs::File::create(&path).unwrap()).unwrap();
    let back = QuadratureTable::read_from(std::io::BufReader::new(std::fs::File::open(&path).unwrap())).unwrap();
    assert_eq!(t, back);
    let mut bytes = std::fs::read(&path).unwrap();
    bytes.push(0);
    assert!(QuadratureTable::read_from(bytes.as_slice()).is_err());
}
