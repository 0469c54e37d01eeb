//! Finite-window checks of the lower bounds on `F` and of the one-sided gap
//! between the diagonal integrals and their table approximation.

use serde::{Deserialize, Serialize};

use super::{DiagonalSource, FValue, IntegralValue, Integrals, LEMMA8_ERROR};
use crate::error::Result;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdFamily {
    pub name: String,
    pub threshold: f64,
    /// Strict `>` when true, `>=` otherwise.
    pub strict: bool,
    pub rows: usize,
    pub min_lo: f64,
    pub argmin: [i64; 3],
    pub failures: Vec<[i64; 3]>,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdReport {
    /// `F(1,0,0)`, expected to equal 5.
    pub equality: FValue,
    pub equality_tol: f64,
    pub equality_pass: bool,
    pub families: Vec<ThresholdFamily>,
    pub pass: bool,
}

struct Family {
    name: &'static str,
    threshold: f64,
    strict: bool,
    triples: Vec<[i64; 3]>,
}

fn families() -> Vec<Family> {
    let mut out = Vec::new();
    out.push(Family {
        name: "F(n,0,0) >= 5, 2 <= n <= 40",
        threshold: 5.0,
        strict: false,
        triples: (2..=40).map(|n| [n, 0, 0]).collect(),
    });
    out.push(Family {
        name: "F(n,n,0) > 7.94, 1 <= n <= 20",
        threshold: 7.94,
        strict: true,
        triples: (1..=20).map(|n| [n, n, 0]).collect(),
    });
    out.push(Family {
        name: "F(n,n,0) > 10.8, 3 <= n <= 21",
        threshold: 10.8,
        strict: true,
        triples: (3..=21).map(|n| [n, n, 0]).collect(),
    });
    out.push(Family {
        name: "F(n,n,n) > 3.2, 1 <= n <= 40",
        threshold: 3.2,
        strict: true,
        triples: (1..=40).map(|n| [n, n, n]).collect(),
    });
    let mut nnm = Vec::new();
    for n in 1..=30 {
        for m in 1..=30 {
            if n != m && (n, m) != (1, 2) {
                nnm.push([n, n, m]);
            }
        }
    }
    out.push(Family {
        name: "F(n,n,m) > 10, 1 <= n != m <= 30, (n,m) != (1,2)",
        threshold: 10.0,
        strict: true,
        triples: nnm,
    });
    let mut nmk = Vec::new();
    for n in 0..=30 {
        for m in 0..n {
            for k in 0..m {
                if (n, m, k) != (3, 2, 0) {
                    nmk.push([n, m, k]);
                }
            }
        }
    }
    out.push(Family {
        name: "F(n,m,k) > 18, 0 <= k < m < n <= 30, (n,m,k) != (3,2,0)",
        threshold: 18.0,
        strict: true,
        triples: nmk,
    });
    out
}

/// Every triple the threshold suite touches, for a single prefetch.
pub fn threshold_triples() -> Vec<[i64; 3]> {
    let mut all: Vec<[i64; 3]> = families().into_iter().flat_map(|f| f.triples).collect();
    all.push([0, 0, 0]);
    all.push([1, 0, 0]);
    all
}

pub fn threshold_suite(eng: &Integrals) -> Result<ThresholdReport> {
    eng.prefetch(&threshold_triples())?;
    let equality = eng.f(1, 0, 0)?;
    let equality_tol = 2e-2;
    let equality_pass = (equality.value - 5.0).abs() <= equality_tol;
    let mut out = Vec::new();
    for fam in families() {
        let mut min_lo = f64::INFINITY;
        let mut argmin = [0; 3];
        let mut failures = Vec::new();
        for t in &fam.triples {
            let f = eng.f(t[0], t[1], t[2])?;
            if f.lo < min_lo {
                min_lo = f.lo;
                argmin = *t;
            }
            let ok = if fam.strict { f.lo > fam.threshold } else { f.lo >= fam.threshold };
            if !ok {
                failures.push(*t);
            }
        }
        out.push(ThresholdFamily {
            name: fam.name.to_string(),
            threshold: fam.threshold,
            strict: fam.strict,
            rows: fam.triples.len(),
            min_lo,
            argmin,
            pass: failures.is_empty(),
            failures,
        });
    }
    let pass = equality_pass && out.iter().all(|f| f.pass);
    Ok(ThresholdReport { equality, equality_tol, equality_pass, families: out, pass })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapRow {
    pub triple: [u32; 3],
    pub direct: IntegralValue,
    pub tilde: IntegralValue,
    pub gap: f64,
    pub pass: bool,
}

impl GapRow {
    pub fn gap_lo(&self) -> f64 {
        self.gap - self.direct.error_bound
    }

    pub fn gap_hi(&self) -> f64 {
        self.gap + self.direct.error_bound
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapReport {
    pub max_order: u32,
    pub oracle_error: f64,
    pub rows: Vec<GapRow>,
    pub min_gap: GapRow,
    pub max_gap: GapRow,
    pub failures: usize,
    pub pass: bool,
}

/// Gap between the direct diagonal integral and the table value.
pub fn lemma8_gap(eng: &Integrals, k: u32, m: u32, n: u32) -> Result<GapRow> {
    let direct = eng.direct().diagonal_many(&[sorted([k, m, n])])?[0];
    gap_row(eng, sorted([k, m, n]), direct)
}

fn sorted(mut t: [u32; 3]) -> [u32; 3] {
    t.sort_unstable();
    t
}

fn gap_row(eng: &Integrals, t: [u32; 3], direct: IntegralValue) -> Result<GapRow> {
    let tilde = eng.i_tilde(t[0] as i64, t[1] as i64, t[2] as i64)?;
    let gap = direct.value - tilde.value;
    let mut row = GapRow { triple: t, direct, tilde, gap, pass: false };
    row.pass = row.gap_lo() > 0.0 && row.gap_hi() < LEMMA8_ERROR;
    Ok(row)
}

/// All sorted triples with entries up to `max_order`, in one quadrature sweep.
pub fn lemma8_gap_sweep(eng: &Integrals, max_order: u32) -> Result<GapReport> {
    let mut triples = Vec::new();
    for a in 0..=max_order {
        for b in a..=max_order {
            for c in b..=max_order {
                triples.push([a, b, c]);
            }
        }
    }
    // Through the memo when it holds direct values, so later F lookups reuse them.
    let direct = if eng.source() == DiagonalSource::Direct {
        let keys: Vec<[i64; 3]> = triples.iter().map(|t| t.map(i64::from)).collect();
        eng.prefetch(&keys)?;
        keys.iter().map(|k| eng.script_i(k[0], k[1], k[2])).collect::<Result<Vec<_>>>()?
    } else {
        eng.direct().diagonal_many(&triples)?
    };
    let rows = triples.iter().zip(direct).map(|(t, d)| gap_row(eng, *t, d)).collect::<Result<Vec<_>>>()?;
    let min_gap = *rows.iter().min_by(|a, b| a.gap.total_cmp(&b.gap)).unwrap();
    let max_gap = *rows.iter().max_by(|a, b| a.gap.total_cmp(&b.gap)).unwrap();
    let failures = rows.iter().filter(|r| !r.pass).count();
    Ok(GapReport {
        max_order,
        oracle_error: eng.direct().error_bound(),
        rows,
        min_gap,
        max_gap,
        failures,
        pass: failures == 0,
    })
}
