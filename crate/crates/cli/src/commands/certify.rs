use std::collections::BTreeMap;
use std::fmt::Write;
use std::path::Path;

use lacuna_core::certificate::{
    check_systems, compute_s_upper_bound, run_trials, verify_theorem, SystemsOutcome, TheoremVerdict, TrialConfig,
    TrialsReport, UpperBound,
};
use lacuna_core::{CoefficientVector, SpectrumContext, Verdict};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::build_spectrum;
use crate::args::{CertifyArgs, CoeffPreset};
use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::output::{num, Report, Table};

#[derive(Debug, Deserialize)]
struct CoeffRow {
    n: i64,
    re: f64,
    im: f64,
}

pub fn read_coefficients(path: &Path) -> CliResult<CoefficientVector> {
    let mut r = csv::ReaderBuilder::new().trim(csv::Trim::All).from_path(path)?;
    let header = r.headers()?.clone();
    if header.iter().collect::<Vec<_>>() != ["n", "re", "im"] {
        return Err(CliError::Usage(format!("{}: expected header n,re,im", path.display())));
    }
    let mut entries = BTreeMap::new();
    for row in r.deserialize() {
        let row: CoeffRow = row?;
        if !(row.re.is_finite() && row.im.is_finite()) {
            return Err(CliError::Usage(format!("{}: non-finite coefficient at n = {}", path.display(), row.n)));
        }
        if entries.insert(row.n as i128, Complex64::new(row.re, row.im)).is_some() {
            return Err(CliError::Usage(format!("{}: frequency {} listed twice", path.display(), row.n)));
        }
    }
    Ok(CoefficientVector::new(entries))
}

fn preset(p: CoeffPreset) -> CoefficientVector {
    match p {
        CoeffPreset::Const => CoefficientVector::constant(),
        CoeffPreset::PmOne => CoefficientVector::from_pairs([(1, Complex64::new(1.0, 0.0)), (-1, Complex64::new(1.0, 0.0))]),
    }
}

#[derive(Debug, Serialize)]
struct CoefficientCheck {
    support: Vec<i128>,
    theorem: TheoremVerdict,
    upper_bound: UpperBound,
    chain_slack: f64,
    chain_ok: bool,
    /// Holds, or equality within the error budget for a constant.
    accepted: bool,
}

fn verdict_str(v: Verdict) -> &'static str {
    match v {
        Verdict::Holds => "holds",
        Verdict::Fails => "FAILS",
        Verdict::Indeterminate => "indeterminate",
    }
}

fn systems_text(s: &SystemsOutcome, text: &mut String) {
    let status = if s.b_in_window { "inside" } else { "VIOLATION: b outside the feasible window" };
    let _ = match s.b_window {
        Some(w) => writeln!(text, "b = {} window [{:.4}, {:.4}]: {status}", s.b, w.lo, w.hi),
        None if s.b_in_window => writeln!(text, "b = {}: no constraining row", s.b),
        None => writeln!(text, "b = {}: VIOLATION: the feasible window is empty", s.b),
    };
    for r in &s.reports {
        let _ = writeln!(
            text,
            "system {:<8} instances {:>3}  {}",
            format!("{:?}", r.system),
            r.instances,
            if r.pass { "pass" } else { "FAIL" }
        );
    }
    for row in s.trivial_rows.iter().filter(|r| r.verdict == Verdict::Fails) {
        let _ = writeln!(
            text,
            "  row {} at {:?}: {:.6} > {:.6}",
            row.row, row.triple, row.lhs, row.rhs_hi
        );
    }
    for i in s.instances.iter().filter(|i| !i.feasible) {
        let _ = writeln!(text, "  D = {} ({:?}): empty epsilon interval [{:.4}, {:.4}]", i.d, i.system, i.interval.lo, i.interval.hi);
    }
}

pub fn run(args: &CertifyArgs, cfg: &RunConfig) -> CliResult<Report> {
    let a = build_spectrum(&args.spec)?;
    let coeffs = match (&args.coeff, &args.coeff_file) {
        (Some(p), _) => Some(preset(*p)),
        (None, Some(path)) => Some(read_coefficients(path)?),
        (None, None) => None,
    };
    if let Some(f) = &coeffs {
        f.check_support(&a)?;
    }
    let trials = match (args.trials, &coeffs) {
        (Some(n), _) => Some(n),
        (None, None) => Some(TrialConfig::default().trials),
        (None, Some(_)) => None,
    };

    let eng = cfg.engine()?;
    let ctx = SpectrumContext::new(a)?;
    let systems = check_systems(&eng, &ctx, args.b)?;

    let coefficient = match &coeffs {
        Some(f) => {
            let theorem = verify_theorem(&eng, &ctx, f)?;
            let upper_bound = compute_s_upper_bound(&eng, &ctx, f, &systems.params)?;
            let chain_slack = upper_bound.value + upper_bound.error_bound + theorem.exact.error_bound - theorem.exact.s;
            let accepted = theorem.verdict == Verdict::Holds
                || (theorem.support_zero_only && theorem.equality_within_budget);
            Some(CoefficientCheck { support: f.support(), theorem, upper_bound, chain_slack, chain_ok: chain_slack >= 0.0, accepted })
        }
        None => None,
    };
    let trial_report: Option<TrialsReport> = match trials {
        Some(n) => {
            let tc = TrialConfig { trials: n, seed: args.seed, max_support: args.max_support, ..TrialConfig::default() };
            Some(run_trials(&eng, &ctx, &systems, &tc)?)
        }
        None => None,
    };

    let coeff_ok = coefficient.as_ref().is_none_or(|c| c.accepted && c.chain_ok);
    let trials_ok = trial_report.as_ref().is_none_or(|t| t.holds == t.trials && t.chain_violations == 0);
    let pass = systems.pass && systems.b_in_window && coeff_ok && trials_ok;

    let mut text = format!("spectrum [{}]\n", ctx.spectrum().lambdas().iter().map(|l| l.to_string()).collect::<Vec<_>>().join(", "));
    systems_text(&systems, &mut text);
    let mut table = Table::new(&["kind", "index", "support", "lhs", "rhs", "margin", "error_budget", "verdict", "chain_slack"]);
    if let Some(c) = &coefficient {
        let t = &c.theorem;
        let eq = if t.support_zero_only && t.equality_within_budget { " (equality within budget)" } else { "" };
        let _ = writeln!(
            text,
            "coefficients: S = {:?}, rhs = {:?}, margin {:e} ± {:e}: {}{eq}; chain slack {:e}",
            t.lhs,
            t.rhs,
            t.margin,
            t.error_budget,
            verdict_str(t.verdict),
            c.chain_slack
        );
        table.push(row("coefficients", 0, &c.support, t, c.chain_slack));
    }
    if let Some(r) = &trial_report {
        let _ = writeln!(
            text,
            "trials: {} run, {} hold, {} fail, {} indeterminate, {} chain violations, min margin/rhs {:.6}",
            r.trials, r.holds, r.fails, r.indeterminate, r.chain_violations, r.min_relative_margin
        );
        for o in &r.outcomes {
            table.push(row("trial", o.index, &o.support, &o.theorem, o.chain_slack));
        }
    }
    let _ = writeln!(text, "{}", if pass { "PASS" } else { "FAIL" });

    let body = json!({
        "spectrum": ctx.spectrum().lambdas(),
        "b": systems.b,
        "b_window": systems.b_window,
        "b_in_window": systems.b_in_window,
        "systems": systems.reports,
        "instances": systems.instances,
        "trivial_rows": systems.trivial_rows,
        "epsilon": systems.params.eps,
        "coefficients": coefficient,
        "trials": trial_report,
    });
    Report::new("certify", pass, body, table, text)
}

fn row(kind: &str, index: usize, support: &[i128], t: &TheoremVerdict, slack: f64) -> Vec<String> {
    vec![
        kind.to_owned(),
        index.to_string(),
        support.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(" "),
        num(t.lhs),
        num(t.rhs),
        num(t.margin),
        num(t.error_budget),
        verdict_str(t.verdict).to_lowercase(),
        num(slack),
    ]
}
