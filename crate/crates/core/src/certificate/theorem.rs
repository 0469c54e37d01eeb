use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::exact::to_i64;
use super::{
    compute_s_exact, compute_s_upper_bound, prepare_spectrum, CoefficientVector, SExact, SpectrumContext,
    SystemsOutcome, Verdict, MAX_SUPPORT,
};
use crate::error::Result;
use crate::integrals::Integrals;

/// `S <= 𝓘(0,0,0)·(Σ|f̂|²)³` checked against the combined error budget.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoremVerdict {
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub error_budget: f64,
    pub verdict: Verdict,
    pub equality_within_budget: bool,
    pub support_zero_only: bool,
    pub exact: SExact,
}

pub fn verify_theorem(eng: &Integrals, ctx: &SpectrumContext, f: &CoefficientVector) -> Result<TheoremVerdict> {
    let exact = compute_s_exact(eng, ctx, f)?;
    let i0 = eng.script_i(0, 0, 0)?;
    let m3 = f.mass().powi(3);
    let rhs = i0.value * m3;
    let margin = rhs - exact.s;
    // Rounding in the two sums on top of the integral errors.
    let rounding = 64.0 * f64::EPSILON * (rhs.abs() + exact.s.abs());
    let error_budget = exact.error_bound + i0.error_bound * m3 + rounding;
    let support = f.support();
    Ok(TheoremVerdict {
        lhs: exact.s,
        rhs,
        margin,
        error_budget,
        verdict: Verdict::from_margin(margin, error_budget),
        equality_within_budget: margin.abs() <= error_budget,
        support_zero_only: support.iter().all(|n| *n == 0),
        exact,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialConfig {
    pub trials: usize,
    pub seed: u64,
    /// Upper limit on the support size of each random vector.
    pub max_support: usize,
    /// Every `adversarial_every`-th trial concentrates on exception frequencies.
    pub adversarial_every: usize,
}

impl Default for TrialConfig {
    fn default() -> Self {
        Self { trials: 100, seed: 0, max_support: 9, adversarial_every: 4 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialOutcome {
    pub index: usize,
    pub seed: u64,
    pub adversarial: bool,
    pub support: Vec<i128>,
    pub theorem: TheoremVerdict,
    pub upper_bound: f64,
    pub upper_error: f64,
    /// `upper + budgets - S`; negative means the chain broke.
    pub chain_slack: f64,
    pub chain_ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialsReport {
    pub trials: usize,
    pub holds: usize,
    pub fails: usize,
    pub indeterminate: usize,
    pub chain_violations: usize,
    /// Smallest `margin / rhs` over the trials.
    pub min_relative_margin: f64,
    pub outcomes: Vec<TrialOutcome>,
}

fn gaussian(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

fn random_vector(ctx: &SpectrumContext, rng: &mut ChaCha8Rng, max_support: usize, adversarial: bool) -> CoefficientVector {
    let el = ctx.spectrum().elements();
    let exceptions: Vec<_> = ctx.exceptions().collect();
    let mut pool: Vec<i128> = if adversarial && !exceptions.is_empty() {
        let p = exceptions[rng.gen_range(0..exceptions.len())];
        let mut v: Vec<i128> = p.reps.iter().flat_map(|r| r.elems).collect();
        v.sort_unstable();
        v.dedup();
        v
    } else {
        let k = rng.gen_range(1..=max_support.min(el.len()));
        el.choose_multiple(rng, k).copied().collect()
    };
    pool.truncate(max_support);
    if pool.iter().all(|n| *n == 0) {
        let nz: Vec<i128> = el.iter().copied().filter(|n| *n != 0).collect();
        if let Some(&n) = nz.choose(rng) {
            pool.push(n);
        }
    }
    CoefficientVector::from_pairs(pool.into_iter().map(|n| (n, gaussian(rng))))
}

/// Random coefficient vectors on `ctx`, checking the theorem and the
/// derivation chain `S <= upper bound` with the parameters in `systems`.
pub fn run_trials(
    eng: &Integrals,
    ctx: &SpectrumContext,
    systems: &SystemsOutcome,
    cfg: &TrialConfig,
) -> Result<TrialsReport> {
    let max_support = cfg.max_support.clamp(1, MAX_SUPPORT);
    let el = ctx.spectrum().elements();
    prepare_spectrum(eng, el)?;
    let mut all = Vec::with_capacity(el.len().pow(3));
    for &a in el {
        for &b in el {
            for &c in el {
                all.push([to_i64(a)?, to_i64(b)?, to_i64(c)?]);
            }
        }
    }
    eng.prefetch(&all)?;

    let mut root = ChaCha8Rng::seed_from_u64(cfg.seed);
    let seeds: Vec<u64> = (0..cfg.trials).map(|_| root.gen()).collect();
    let outcomes = seeds
        .par_iter()
        .enumerate()
        .map(|(index, &seed)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let adversarial = cfg.adversarial_every > 0 && index % cfg.adversarial_every == cfg.adversarial_every - 1;
            let f = random_vector(ctx, &mut rng, max_support, adversarial);
            let theorem = verify_theorem(eng, ctx, &f)?;
            let ub = compute_s_upper_bound(eng, ctx, &f, &systems.params)?;
            let chain_slack = ub.value + ub.error_bound + theorem.exact.error_bound - theorem.exact.s;
            Ok(TrialOutcome {
                index,
                seed,
                adversarial,
                support: f.support(),
                theorem,
                upper_bound: ub.value,
                upper_error: ub.error_bound,
                chain_slack,
                chain_ok: chain_slack >= 0.0,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let count = |v: Verdict| outcomes.iter().filter(|o| o.theorem.verdict == v).count();
    Ok(TrialsReport {
        trials: outcomes.len(),
        holds: count(Verdict::Holds),
        fails: count(Verdict::Fails),
        indeterminate: count(Verdict::Indeterminate),
        chain_violations: outcomes.iter().filter(|o| !o.chain_ok).count(),
        min_relative_margin: outcomes.iter().map(|o| o.theorem.margin / o.theorem.rhs).fold(f64::INFINITY, f64::min),
        outcomes,
    })
}
