//! One PASS/FAIL line per acceptance criterion.
//!
//! Criteria listed in `EXPECTED_FAILURES` are reported as FAIL but do not
//! change the exit status; any other failure does.

use std::collections::BTreeSet;
use std::time::Instant;

use lacuna_core::bessel::{eval_jn, j1_zeros, normalization_residual};
use lacuna_core::certificate::{
    basic_inequality_sides, check_basic_inequality, check_systems, feasible_b_interval, run_trials,
    verify_theorem, SystemId, TrialConfig,
};
use lacuna_core::integrals::{lemma8_gap_sweep, threshold_suite};
use lacuna_core::spectrum::{classify_brute_force, cross_check, random_lacunary, PointClass};
use lacuna_core::{CoefficientVector, Integrals, Interval, SpectrumContext, SpectrumSet, Verdict};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// The b-window lower endpoint 4.2 does not follow from F(n,n,0) >= 7.94.
const EXPECTED_FAILURES: &[u32] = &[5];

struct Outcome {
    id: u32,
    pass: bool,
}

fn report(id: u32, title: &str, pass: bool, detail: String, t: Instant) -> Outcome {
    let tag = if pass { "PASS" } else { "FAIL" };
    println!("{tag} criterion {id}: {title}: {detail} [{:.1}s]", t.elapsed().as_secs_f64());
    Outcome { id, pass }
}

fn criterion_1(eng: &Integrals) -> Outcome {
    let t = Instant::now();
    let r = lemma8_gap_sweep(eng, 40).unwrap();
    let pass = r.pass && r.oracle_error <= 1e-5 && t.elapsed().as_secs() <= 600;
    let detail = format!(
        "{} triples, gap in [{:.3e}, {:.3e}], oracle error {:.2e}, {} failures",
        r.rows.len(),
        r.min_gap.gap,
        r.max_gap.gap,
        r.oracle_error,
        r.failures
    );
    report(1, "diagonal minus table gap in (0, 1e-2) for max order <= 40", pass, detail, t)
}

fn criterion_2(eng: &Integrals) -> Outcome {
    let t = Instant::now();
    let f = eng.f(1, 0, 0).unwrap();
    let pass = (f.value - 5.0).abs() <= 2e-2;
    report(2, "|F(1,0,0) - 5| <= 2e-2", pass, format!("F = {:.12} in [{:.6}, {:.6}]", f.value, f.lo, f.hi), t)
}

fn criterion_3(eng: &Integrals) -> Outcome {
    let t = Instant::now();
    let r = threshold_suite(eng).unwrap();
    let wanted = ["F(n,n,0) > 7.94", "F(n,n,0) > 10.8", "F(n,n,n) > 3.2", "F(n,n,m) > 10", "F(n,m,k) > 18"];
    let fams: Vec<_> = r.families.iter().filter(|f| wanted.iter().any(|w| f.name.starts_with(w))).collect();
    let pass = fams.len() == wanted.len() && fams.iter().all(|f| f.pass);
    let detail = fams
        .iter()
        .map(|f| format!("{} min lo {:.4} at {:?}", f.name.split(", ").next().unwrap(), f.min_lo, f.argmin))
        .collect::<Vec<_>>()
        .join("; ");
    report(3, "threshold table on interval lower endpoints", pass, detail, t)
}

fn geometric_exceptions(base: i128, mults: &[i128], lmax: i128) -> BTreeSet<i128> {
    let mut out = BTreeSet::new();
    for &m in mults {
        let mut v = m;
        while v <= lmax {
            out.insert(v);
            out.insert(-v);
            v *= base;
        }
    }
    out
}

fn criterion_4() -> Outcome {
    let t = Instant::now();
    let mut spectra = vec![SpectrumSet::geometric(4, 6, 1).unwrap(), SpectrumSet::geometric(5, 6, 1).unwrap()];
    for base in 6..=12 {
        spectra.push(SpectrumSet::geometric(base, 5, 1).unwrap());
    }
    for l in [vec![0, 1, 4, 13, 40], vec![0, 1, 10, 100], vec![0, 2, 8, 32, 128], vec![0, 3, 12, 48, 193]] {
        spectra.push(SpectrumSet::new(l).unwrap());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for i in 0..50 {
        spectra.push(random_lacunary(&mut rng, 3 + i % 6, i % 2 == 0).unwrap());
    }
    let mut problems = Vec::new();
    let mut exceptions = 0;
    for a in &spectra {
        let c = cross_check(a).unwrap();
        if !c.agree {
            problems.push(format!("{:?} disagree {c:?}", a.lambdas()));
        }
        for p in classify_brute_force(a).unwrap().iter().filter(|p| p.class == PointClass::Exception) {
            exceptions += 1;
            let trivial = p.reps.len() - p.nontrivial_reps(a).len();
            if p.nontrivial_reps(a).len() + (trivial > 0) as usize != 2 {
                problems.push(format!("{:?} D={} not exactly two", a.lambdas(), p.d));
            }
            let (x, y) = p.essential_pair(a).unwrap();
            if !(x.has_repeat() || y.has_repeat()) {
                problems.push(format!("{:?} D={} without repeat", a.lambdas(), p.d));
            }
        }
    }
    let safe = |a: &SpectrumSet| -> BTreeSet<i128> {
        classify_brute_force(a)
            .unwrap()
            .into_iter()
            .filter(|p| p.class == PointClass::Exception && p.boundary_safe)
            .map(|p| p.d)
            .collect()
    };
    let a4_ok = safe(&spectra[0]) == geometric_exceptions(4, &[2, 3], 1024);
    let a5_ok = safe(&spectra[1]) == geometric_exceptions(5, &[3], 3125);
    let pass = problems.is_empty() && a4_ok && a5_ok && t.elapsed().as_secs() <= 60;
    let detail = format!(
        "{} spectra, {} exceptions, A4 pattern {}, A5 pattern {}, {} problems",
        spectra.len(),
        exceptions,
        a4_ok,
        a5_ok,
        problems.len()
    );
    for p in problems.iter().take(5) {
        println!("    {p}");
    }
    report(4, "brute force and lemma enumeration agree", pass, detail, t)
}

fn criterion_5(eng: &Integrals) -> Outcome {
    let t = Instant::now();
    let w = feasible_b_interval(7.94).unwrap();
    let round3 = |v: f64| (v * 1e3).round() / 1e3;
    let lower_ok = round3(w.lo) == 4.2;
    let upper_ok = round3(w.hi) == round3(6.6604) && (w.hi - 6.6604).abs() < 1e-4;
    let mut eps_ok = true;
    let mut eps_detail = Vec::new();
    for (l, quoted) in [(vec![0, 1, 4, 16], Interval::new(0.270, 0.289)), (vec![0, 2, 8, 32], Interval::new(0.110, 0.490))] {
        let ctx = SpectrumContext::new(SpectrumSet::new(l).unwrap()).unwrap();
        let out = check_systems(eng, &ctx, 6.66).unwrap();
        let lam1 = ctx.spectrum().lambdas()[1];
        let inst = out.instances.iter().filter(|i| i.system == SystemId::S4 && i.d.abs() == 2 * lam1);
        let mut any = false;
        for i in inst {
            any = true;
            eps_ok &= i.interval.contains_interval(&quoted);
            eps_detail.push(format!("|n1|={lam1}: [{:.4}, {:.4}]", i.interval.lo, i.interval.hi));
        }
        eps_ok &= any;
    }
    eps_detail.dedup();
    let pass = lower_ok && upper_ok && eps_ok;
    let detail = format!(
        "b-window [{:.4}, {:.4}] vs [4.2, 6.6604] (lower {}, upper {}); System4 eps {} ({})",
        w.lo,
        w.hi,
        if lower_ok { "ok" } else { "off" },
        if upper_ok { "ok" } else { "off" },
        eps_detail.join(", "),
        if eps_ok { "contain quoted windows" } else { "miss quoted windows" }
    );
    report(5, "certificate windows", pass, detail, t)
}

fn criteria_6_7(eng: &Integrals) -> (Outcome, Outcome) {
    let t = Instant::now();
    let mut chain = 0;
    let mut total = 0;
    let mut holds = 0;
    let mut min_rel = f64::INFINITY;
    let mut min_slack = f64::INFINITY;
    for (base, seed) in [(4, 41u64), (5, 51)] {
        let ctx = SpectrumContext::new(SpectrumSet::geometric(base, 4, 1).unwrap()).unwrap();
        let sys = check_systems(eng, &ctx, 6.66).unwrap();
        assert!(sys.pass, "systems fail for A{base}");
        let rep = run_trials(eng, &ctx, &sys, &TrialConfig { trials: 500, seed, max_support: 9, adversarial_every: 4 })
            .unwrap();
        total += rep.trials;
        chain += rep.chain_violations;
        holds += rep.holds;
        min_rel = min_rel.min(rep.min_relative_margin);
        for o in &rep.outcomes {
            min_slack = min_slack.min(o.chain_slack / o.theorem.lhs);
        }
    }
    let ctx0 = SpectrumContext::new(SpectrumSet::geometric(5, 4, 1).unwrap()).unwrap();
    let eq = verify_theorem(eng, &ctx0, &CoefficientVector::constant()).unwrap();
    let eq_ok = eq.equality_within_budget && eq.support_zero_only && eq.verdict == Verdict::Indeterminate;
    let c6 = report(
        6,
        "S_exact <= upper bound + budget",
        chain == 0 && total == 1000,
        format!("{total} vectors on A4/A5 depth 4, {chain} violations, min relative slack {min_slack:.3e}"),
        t,
    );
    let c7 = report(
        7,
        "theorem holds beyond budget for nonconstant f",
        holds == total && total == 1000 && eq_ok,
        format!(
            "{holds}/{total} hold, min margin/rhs {min_rel:.4}; constant f: margin {:.1e}, budget {:.1e}, equality within budget {}",
            eq.margin, eq.error_budget, eq.equality_within_budget
        ),
        t,
    );
    (c6, c7)
}

fn criterion_8() -> Outcome {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let bs = [1.5, 4.2, 5.0, 6.66, 50.0];
    let mut bad = 0;
    for i in 0..100_000 {
        let (r, s) = (rng.gen_range(0.0..10.0), rng.gen_range(0.0..10.0));
        if !check_basic_inequality(r, s, bs[i % bs.len()]).unwrap() {
            bad += 1;
        }
    }
    let (l, rhs) = basic_inequality_sides(1.0, 1.0, 5.0);
    let eq = (l - rhs).abs();
    report(8, "basic inequality", bad == 0 && eq <= 1e-15, format!("100000 samples, {bad} violations, b=5 equality gap {eq:.1e}"), t)
}

fn criterion_9() -> Outcome {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let zeros = j1_zeros(1001).unwrap();
    let (mut sym, mut rec, mut norm, mut cert) = (0, 0.0f64, 0.0f64, 0);
    for _ in 0..1000 {
        let n: i64 = rng.gen_range(1..=532);
        let x: f64 = rng.gen_range(0.5..3200.0);
        let (a, b, c) = (eval_jn(n - 1, x).unwrap(), eval_jn(n, x).unwrap(), eval_jn(n + 1, x).unwrap());
        if eval_jn(-n, x).unwrap() != if n % 2 == 0 { b } else { -b } {
            sym += 1;
        }
        let scale = a.abs().max(b.abs()).max(c.abs());
        if scale > 0.0 {
            rec = rec.max((a + c - 2.0 * n as f64 / x * b).abs() / scale);
        }
        norm = norm.max(normalization_residual(x).unwrap().abs());
        let r = rng.gen_range(1..=1000);
        let sigma = zeros.zeros()[r];
        if eval_jn(1, sigma - 1e-8).unwrap() * eval_jn(1, sigma + 1e-8).unwrap() >= 0.0 {
            cert += 1;
        }
    }
    let pass = sym == 0 && rec <= 1e-9 && norm <= 1e-9 && cert == 0;
    let detail = format!(
        "1000 points: symmetry mismatches {sym}, max recurrence residual {rec:.1e}, max normalization residual {norm:.1e}, zero certificates failed {cert}"
    );
    report(9, "Bessel invariants", pass, detail, t)
}

fn main() {
    let eng = Integrals::default();
    let mut out = vec![criterion_1(&eng), criterion_2(&eng), criterion_3(&eng), criterion_4(), criterion_5(&eng)];
    let (c6, c7) = criteria_6_7(&eng);
    out.extend([c6, c7, criterion_8(), criterion_9()]);
    let failed: Vec<u32> = out.iter().filter(|o| !o.pass).map(|o| o.id).collect();
    let unexpected: Vec<u32> = failed.iter().copied().filter(|id| !EXPECTED_FAILURES.contains(id)).collect();
    let fixed: Vec<u32> = EXPECTED_FAILURES.iter().copied().filter(|id| !failed.contains(id)).collect();
    println!(
        "acceptance: {} PASS, {} FAIL {:?}; expected failures {:?}, unexpected {:?}",
        out.len() - failed.len(),
        failed.len(),
        failed,
        EXPECTED_FAILURES,
        unexpected
    );
    if !fixed.is_empty() {
        println!("note: criteria {fixed:?} were expected to fail but passed");
    }
    if !unexpected.is_empty() {
        std::process::exit(1);
    }
}
