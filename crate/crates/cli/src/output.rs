use std::fs::File;
use std::io::{self, BufWriter, Write};

use serde::Serialize;
use serde_json::{Map, Value};

use crate::args::Format;
use crate::config::RunConfig;
use crate::error::CliResult;

pub const SCHEMA: &str = "lacuna-verify/1";

/// Rows for `--format csv`.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Self { header: header.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }
}

/// What a command produced. `pass = false` maps to exit code 1.
#[derive(Debug)]
pub struct Report {
    pub command: &'static str,
    pub pass: bool,
    pub body: Map<String, Value>,
    pub table: Table,
    pub text: String,
}

impl Report {
    pub fn new(command: &'static str, pass: bool, body: impl Serialize, table: Table, text: String) -> CliResult<Self> {
        let body = match serde_json::to_value(body)? {
            Value::Object(m) => m,
            other => {
                let mut m = Map::new();
                m.insert("result".into(), other);
                m
            }
        };
        Ok(Self { command, pass, body, table, text })
    }

    pub fn to_json(&self, cfg: &RunConfig) -> CliResult<Value> {
        let mut m = Map::new();
        m.insert("schema".into(), SCHEMA.into());
        m.insert("command".into(), self.command.into());
        m.insert("config".into(), serde_json::to_value(cfg)?);
        m.insert("pass".into(), self.pass.into());
        for (k, v) in &self.body {
            m.insert(k.clone(), v.clone());
        }
        Ok(Value::Object(m))
    }

    pub fn emit(&self, cfg: &RunConfig) -> CliResult<()> {
        let sink: Box<dyn Write> = match &cfg.output {
            Some(p) => Box::new(File::create(p)?),
            None => Box::new(io::stdout().lock()),
        };
        let mut w = BufWriter::new(sink);
        match cfg.format {
            Format::Json => {
                serde_json::to_writer_pretty(&mut w, &self.to_json(cfg)?)?;
                writeln!(w)?;
            }
            Format::Csv => {
                let mut c = csv::Writer::from_writer(&mut w);
                c.write_record(&self.table.header)?;
                for r in &self.table.rows {
                    c.write_record(r)?;
                }
                c.flush()?;
            }
            Format::Text => {
                w.write_all(self.text.as_bytes())?;
                if !self.text.ends_with('\n') {
                    writeln!(w)?;
                }
            }
        }
        w.flush()?;
        Ok(())
    }
}

/// Shortest round-trip representation, as in the JSON output.
pub fn num(x: f64) -> String {
    format!("{x:?}")
}
