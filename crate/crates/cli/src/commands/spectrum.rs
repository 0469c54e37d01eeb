use std::collections::BTreeMap;
use std::fmt::Write;

use lacuna_core::spectrum::{classify_brute_force, cross_check, exceptions_via_lemma, is_p2_set, Family};
use lacuna_core::{PointClass, SpectrumSet, Subtype};
use serde::Serialize;
use serde_json::json;

use super::build_spectrum;
use crate::args::SpectrumCmd;
use crate::config::RunConfig;
use crate::error::CliResult;
use crate::output::{Report, Table};

#[derive(Debug, Serialize)]
struct PointOut {
    #[serde(rename = "D")]
    d: i128,
    class: PointClass,
    subtype: Option<Subtype>,
    families: Vec<Family>,
    reps: Vec<[i128; 3]>,
    boundary_safe: bool,
}

#[derive(Debug, Default, Serialize)]
struct Summary {
    points: usize,
    unique: usize,
    trivial: usize,
    exceptions: usize,
    boundary_safe_exceptions: usize,
    a1: usize,
    a2: usize,
}

fn join<T: std::fmt::Display>(v: impl IntoIterator<Item = T>, sep: &str) -> String {
    v.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(sep)
}

fn rep_str(r: &[i128; 3]) -> String {
    format!("{{{}}}", join(r, ","))
}

fn classify(a: &SpectrumSet, want_cross: bool, all: bool) -> CliResult<Report> {
    let points = classify_brute_force(a)?;
    let families: BTreeMap<i128, Vec<Family>> = exceptions_via_lemma(a).into_iter().map(|p| (p.d, p.families)).collect();
    let mut summary = Summary { points: points.len(), ..Summary::default() };
    let mut out = Vec::new();
    for p in points {
        match p.class {
            PointClass::Unique => summary.unique += 1,
            PointClass::Trivial => summary.trivial += 1,
            PointClass::Exception => {
                summary.exceptions += 1;
                summary.boundary_safe_exceptions += p.boundary_safe as usize;
                match p.subtype {
                    Some(Subtype::A1) => summary.a1 += 1,
                    Some(Subtype::A2) => summary.a2 += 1,
                    None => {}
                }
            }
        }
        if all || p.class == PointClass::Exception {
            out.push(PointOut {
                d: p.d,
                class: p.class,
                subtype: p.subtype,
                families: families.get(&p.d).cloned().unwrap_or_default(),
                reps: p.reps.iter().map(|r| r.elems).collect(),
                boundary_safe: p.boundary_safe,
            });
        }
    }
    let cc = if want_cross { Some(cross_check(a)?) } else { None };
    let pass = cc.as_ref().is_none_or(|c| c.agree);

    let mut t = Table::new(&["D", "class", "subtype", "families", "reps", "boundary_safe"]);
    let mut text = format!(
        "lambdas [{}]: {} points, {} exceptions ({} boundary-safe, A1 {}, A2 {})\n",
        join(a.lambdas(), ", "),
        summary.points,
        summary.exceptions,
        summary.boundary_safe_exceptions,
        summary.a1,
        summary.a2
    );
    for p in &out {
        let class = serde_json::to_value(p.class)?.as_str().unwrap_or_default().to_owned();
        let subtype = p.subtype.map(|s| format!("{s:?}")).unwrap_or_default();
        let fams = join(p.families.iter().map(|f| format!("{f:?}")), " ");
        let reps = join(p.reps.iter().map(rep_str), " ");
        let _ = writeln!(
            text,
            "D = {:>8}  {class:<9} {subtype:<2}  {reps}  [{fams}]{}",
            p.d,
            if p.boundary_safe { "" } else { "  (boundary)" }
        );
        t.push(vec![p.d.to_string(), class, subtype, fams, reps, p.boundary_safe.to_string()]);
    }
    if let Some(c) = &cc {
        let _ = writeln!(
            text,
            "cross-check: {} on {} boundary-safe exceptions (brute only {:?}, lemma only {:?}, mismatched {:?})",
            if c.agree { "agree" } else { "DISAGREE" },
            c.checked,
            c.brute_only,
            c.lemma_only,
            c.rep_mismatch
        );
    }
    let body = json!({ "spectrum": a.lambdas(), "points": out, "summary": summary, "cross_check": cc });
    Report::new("spectrum classify", pass, body, t, text)
}

pub fn run(cmd: &SpectrumCmd, _cfg: &RunConfig) -> CliResult<Report> {
    match cmd {
        SpectrumCmd::Classify { spec, cross_check, all } => classify(&build_spectrum(spec)?, *cross_check, *all),
        SpectrumCmd::P2 { spec } => {
            let a = build_spectrum(spec)?;
            let r = is_p2_set(&a);
            let mut t = Table::new(&["holds", "D", "pair_a", "pair_b"]);
            let text = match &r.witness {
                None => {
                    t.push(vec!["true".into(), String::new(), String::new(), String::new()]);
                    "P2: holds".to_owned()
                }
                Some((d, p, q)) => {
                    t.push(vec!["false".into(), d.to_string(), join(p, " "), join(q, " ")]);
                    format!("P2: fails at D = {d}: {p:?} and {q:?}")
                }
            };
            Report::new("spectrum p2", r.holds, json!({ "spectrum": a.lambdas(), "p2": r }), t, text)
        }
    }
}
