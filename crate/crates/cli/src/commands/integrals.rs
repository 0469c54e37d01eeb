use std::fmt::Write;

use lacuna_core::integrals::{lemma8_gap_sweep, threshold_suite};
use lacuna_core::{IntegralValue, SextetIndex};
use serde_json::json;

use crate::args::{IntegralsCmd, Suite};
use crate::config::RunConfig;
use crate::error::CliResult;
use crate::output::{num, Report, Table};

fn triple(v: &[i64]) -> [i64; 3] {
    [v[0], v[1], v[2]]
}

fn method(v: &IntegralValue) -> String {
    serde_json::to_value(v.method).ok().and_then(|m| m.as_str().map(str::to_owned)).unwrap_or_default()
}

fn value_report(command: &'static str, orders: &[i64], v: IntegralValue) -> CliResult<Report> {
    let names: &[&'static str] = if orders.len() == 3 { &["k", "m", "n"] } else { &["n1", "n2", "n3", "n4", "n5", "n6"] };
    let mut header = names.to_vec();
    header.extend(["value", "error", "method"]);
    let mut t = Table::new(&header);
    let mut row: Vec<String> = orders.iter().map(i64::to_string).collect();
    row.extend([num(v.value), num(v.error_bound), method(&v)]);
    t.push(row);
    let text = format!("{:?} ± {:e} [{}]", v.value, v.error_bound, method(&v));
    Report::new(command, true, json!({ "orders": orders, "integral": v }), t, text)
}

pub fn run(cmd: &IntegralsCmd, cfg: &RunConfig) -> CliResult<Report> {
    match cmd {
        IntegralsCmd::Tilde(t) => {
            let [k, m, n] = triple(&t.orders);
            let eng = cfg.engine_with_table()?;
            value_report("integrals tilde", &t.orders, eng.i_tilde(k, m, n)?)
        }
        IntegralsCmd::Direct { orders } => {
            let idx = SextetIndex::new([orders[0], orders[1], orders[2], orders[3], orders[4], orders[5]])?;
            value_report("integrals direct", orders, cfg.engine()?.i_direct(&idx)?)
        }
        IntegralsCmd::Script(t) => {
            let [a, b, c] = triple(&t.orders);
            value_report("integrals script", &t.orders, cfg.engine()?.script_i(a, b, c)?)
        }
        IntegralsCmd::F(t) => {
            let [a, b, c] = triple(&t.orders);
            let f = cfg.engine()?.f(a, b, c)?;
            let mut tab = Table::new(&["k", "m", "n", "value", "lo", "hi"]);
            tab.push(vec![a.to_string(), b.to_string(), c.to_string(), num(f.value), num(f.lo), num(f.hi)]);
            let text = format!("F({a},{b},{c}) = {:?} in [{:?}, {:?}]", f.value, f.lo, f.hi);
            Report::new("integrals f", true, json!({ "orders": t.orders, "f": f }), tab, text)
        }
        IntegralsCmd::Copt => {
            let v = cfg.engine()?.c_opt()?;
            let mut t = Table::new(&["value", "error", "method"]);
            t.push(vec![num(v.value), num(v.error_bound), method(&v)]);
            let text = format!("c_opt = {:?} ± {:e}", v.value, v.error_bound);
            Report::new("integrals copt", true, json!({ "c_opt": v }), t, text)
        }
        IntegralsCmd::Sweep { suite: Suite::BoundsF, .. } => {
            let r = threshold_suite(&cfg.engine()?)?;
            let mut t = Table::new(&["family", "threshold", "strict", "rows", "min_lo", "argmin", "failures", "pass"]);
            let mut text = format!(
                "F(1,0,0) = {:?} in [{:?}, {:?}]: {}\n",
                r.equality.value,
                r.equality.lo,
                r.equality.hi,
                if r.equality_pass { "pass" } else { "FAIL" }
            );
            for f in &r.families {
                let argmin = format!("{:?}", f.argmin);
                t.push(vec![
                    f.name.clone(),
                    num(f.threshold),
                    f.strict.to_string(),
                    f.rows.to_string(),
                    num(f.min_lo),
                    argmin.clone(),
                    f.failures.len().to_string(),
                    f.pass.to_string(),
                ]);
                let _ = writeln!(
                    text,
                    "{:<4}  rows {:>5}  min F_lo {:.6} at {argmin:<12}  {}",
                    if f.pass { "pass" } else { "FAIL" },
                    f.rows,
                    f.min_lo,
                    f.name
                );
            }
            Report::new("integrals sweep", r.pass, json!({ "suite": "bounds-f", "report": r }), t, text)
        }
        IntegralsCmd::Sweep { suite: Suite::Lemma8, max_order } => {
            let r = lemma8_gap_sweep(&cfg.engine_with_table()?, *max_order)?;
            let mut t = Table::new(&["k", "m", "n", "direct", "direct_error", "tilde", "gap", "pass"]);
            for row in &r.rows {
                let [k, m, n] = row.triple;
                t.push(vec![
                    k.to_string(),
                    m.to_string(),
                    n.to_string(),
                    num(row.direct.value),
                    num(row.direct.error_bound),
                    num(row.tilde.value),
                    num(row.gap),
                    row.pass.to_string(),
                ]);
            }
            let text = format!(
                "{} triples up to order {}: min gap {:e} at {:?}, max gap {:e} at {:?}, {} failures: {}",
                r.rows.len(),
                r.max_order,
                r.min_gap.gap,
                r.min_gap.triple,
                r.max_gap.gap,
                r.max_gap.triple,
                r.failures,
                if r.pass { "pass" } else { "FAIL" }
            );
            Report::new("integrals sweep", r.pass, json!({ "suite": "lemma8", "report": r }), t, text)
        }
    }
}
