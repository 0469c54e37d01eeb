use std::fmt::Write;

use serde_json::json;

use crate::args::BesselCmd;
use crate::config::RunConfig;
use crate::error::CliResult;
use crate::output::{num, Report, Table};

pub fn run(cmd: &BesselCmd, cfg: &RunConfig) -> CliResult<Report> {
    match *cmd {
        BesselCmd::Eval { n, x } => {
            let value = cfg.bessel.eval_jn(n, x)?;
            let mut t = Table::new(&["n", "x", "value"]);
            t.push(vec![n.to_string(), num(x), num(value)]);
            Report::new("bessel eval", true, json!({ "n": n, "x": x, "value": value }), t, format!("{value:?}"))
        }
        BesselCmd::Zeros { count } => {
            let z = cfg.bessel.j1_zeros(count)?;
            let mut t = Table::new(&["r", "sigma", "j0"]);
            let mut text = String::new();
            for (r, (s, j0)) in z.zeros().iter().zip(z.j0_at_zeros()).enumerate() {
                t.push(vec![r.to_string(), num(*s), num(*j0)]);
                let _ = writeln!(text, "{r} {s:?}");
            }
            Report::new("bessel zeros", true, json!({ "count": z.count(), "zeros": z.zeros(), "j0": z.j0_at_zeros() }), t, text)
        }
    }
}
