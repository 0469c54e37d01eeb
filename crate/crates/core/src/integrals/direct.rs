//! Truncated oscillatory quadrature of `int_0^R prod_i J_{n_i}(r) r dr`.
//!
//! The interval is cut into panels of length `pi/4` (halved on refinement),
//! each integrated with a fixed Gauss-Legendre rule. Several integrals that
//! share a Bessel row are accumulated in one sweep over the nodes.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::gauss::gauss_legendre;
use super::{IntegralValue, Method, SextetIndex};
use crate::bessel::BesselConfig;
use crate::error::{Error, Result};
use crate::numeric::KahanSum;

/// Largest order accepted by the direct evaluator.
pub const DIRECT_ORDER_LIMIT: u32 = 532;
pub const MIN_R_MAX: f64 = 100.0;

const PANELS_PER_CHUNK: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DirectQuadrature {
    pub r_max: f64,
    /// Absolute agreement required between successive panel halvings.
    pub tol: f64,
    pub gl_order: usize,
    pub max_halvings: u32,
    pub bessel: BesselConfig,
}

impl Default for DirectQuadrature {
    fn default() -> Self {
        Self { r_max: 1.0e5, tol: 1e-8, gl_order: 10, max_halvings: 4, bessel: BesselConfig::default() }
    }
}

/// Something that consumes a Bessel row at each quadrature node.
pub(crate) trait Kernel: Sync {
    fn len(&self) -> usize;
    fn max_order(&self) -> usize;
    /// `acc[i] += weight * integrand_i(row)`.
    fn accumulate(&self, row: &[f64], weight: f64, acc: &mut [f64]);
}

/// Diagonal integrands `J_a^2 J_b^2 J_c^2`.
///
/// Triples are grouped by `(a, b)` into runs of consecutive `c` so that the
/// innermost loop is a contiguous multiply-add.
pub(crate) struct DiagonalKernel {
    runs: Vec<Run>,
    len: usize,
    max_order: usize,
}

struct Run {
    a: usize,
    b: usize,
    c0: usize,
    out0: usize,
    count: usize,
}

impl DiagonalKernel {
    /// `triples` must be in the order results are wanted; each is used as given.
    pub(crate) fn new(triples: &[[u32; 3]]) -> Self {
        let mut runs: Vec<Run> = Vec::new();
        let mut max_order = 0;
        for (i, t) in triples.iter().enumerate() {
            let [a, b, c] = t.map(|v| v as usize);
            max_order = max_order.max(a).max(b).max(c);
            if let Some(last) = runs.last_mut() {
                if last.a == a && last.b == b && last.c0 + last.count == c && last.out0 + last.count == i {
                    last.count += 1;
                    continue;
                }
            }
            runs.push(Run { a, b, c0: c, out0: i, count: 1 });
        }
        Self { runs, len: triples.len(), max_order }
    }
}

impl Kernel for DiagonalKernel {
    fn len(&self) -> usize {
        self.len
    }

    fn max_order(&self) -> usize {
        self.max_order
    }

    fn accumulate(&self, row: &[f64], weight: f64, acc: &mut [f64]) {
        // Rows passed in here are squared already.
        for run in &self.runs {
            let pab = weight * row[run.a] * row[run.b];
            let src = &row[run.c0..run.c0 + run.count];
            let dst = &mut acc[run.out0..run.out0 + run.count];
            for (d, s) in dst.iter_mut().zip(src) {
                *d += pab * s;
            }
        }
    }
}

/// Signed sextet integrands `prod_i J_{n_i}`.
pub(crate) struct SextetKernel {
    idx: Vec<([usize; 6], f64)>,
    max_order: usize,
}

impl SextetKernel {
    pub(crate) fn new(sextets: &[SextetIndex]) -> Self {
        let mut max_order = 0;
        let idx = sextets
            .iter()
            .map(|s| {
                let mut sign = 1.0;
                let mut abs = [0usize; 6];
                for (slot, n) in abs.iter_mut().zip(s.orders()) {
                    if n < 0 && n % 2 != 0 {
                        sign = -sign;
                    }
                    *slot = n.unsigned_abs() as usize;
                    max_order = max_order.max(*slot);
                }
                (abs, sign)
            })
            .collect();
        Self { idx, max_order }
    }
}

impl Kernel for SextetKernel {
    fn len(&self) -> usize {
        self.idx.len()
    }

    fn max_order(&self) -> usize {
        self.max_order
    }

    fn accumulate(&self, row: &[f64], weight: f64, acc: &mut [f64]) {
        for (a, (k, sign)) in acc.iter_mut().zip(&self.idx) {
            let p = row[k[0]] * row[k[1]] * row[k[2]] * row[k[3]] * row[k[4]] * row[k[5]];
            *a += sign * weight * p;
        }
    }
}

impl DirectQuadrature {
    pub fn with_r_max(r_max: f64) -> Self {
        Self { r_max, ..Self::default() }
    }

    /// Analytic tail bound from `|J_n(r)| <= sqrt(2 / (pi r))`.
    pub fn tail_bound(&self) -> f64 {
        (2.0 / PI).powi(3) / self.r_max
    }

    pub fn error_bound(&self) -> f64 {
        self.tol + self.tail_bound()
    }

    fn validate(&self, max_order: usize) -> Result<()> {
        if !(self.r_max >= MIN_R_MAX) || !self.r_max.is_finite() {
            return Err(Error::Range(format!("R_max={} must be >= {MIN_R_MAX}", self.r_max)));
        }
        if !(self.tol > 0.0) {
            return Err(Error::Range(format!("tol={} must be positive", self.tol)));
        }
        if max_order > DIRECT_ORDER_LIMIT as usize {
            return Err(Error::Range(format!("order {max_order} exceeds {DIRECT_ORDER_LIMIT}")));
        }
        Ok(())
    }

    pub fn i_direct(&self, idx: &SextetIndex) -> Result<IntegralValue> {
        Ok(self.i_direct_many(std::slice::from_ref(idx))?.remove(0))
    }

    pub fn i_direct_many(&self, sextets: &[SextetIndex]) -> Result<Vec<IntegralValue>> {
        let kernel = SextetKernel::new(sextets);
        self.run(&kernel, false)
    }

    /// `I(a,a,b,b,c,c)` for each triple, orders taken as given (non-negative).
    pub fn diagonal_many(&self, triples: &[[u32; 3]]) -> Result<Vec<IntegralValue>> {
        let kernel = DiagonalKernel::new(triples);
        self.run(&kernel, true)
    }

    fn run<K: Kernel>(&self, kernel: &K, squared: bool) -> Result<Vec<IntegralValue>> {
        if kernel.len() == 0 {
            return Ok(Vec::new());
        }
        self.validate(kernel.max_order())?;
        let mut h = PI / 4.0;
        let mut prev = self.pass(kernel, h, squared)?;
        let mut diff = f64::INFINITY;
        for _ in 0..self.max_halvings {
            h *= 0.5;
            let cur = self.pass(kernel, h, squared)?;
            diff = prev.iter().zip(&cur).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            prev = cur;
            if diff <= self.tol {
                let err = self.error_bound();
                return Ok(prev
                    .into_iter()
                    .map(|value| IntegralValue {
                        value,
                        error_bound: err,
                        method: Method::DirectTruncated,
                        guaranteed: true,
                    })
                    .collect());
            }
        }
        Err(Error::Quadrature { panels: (self.r_max / h).ceil() as usize, estimate: diff, tol: self.tol })
    }

    fn pass<K: Kernel>(&self, kernel: &K, h: f64, squared: bool) -> Result<Vec<f64>> {
        let (gx, gw) = gauss_legendre(self.gl_order);
        let r_max = self.r_max;
        let n_panels = (r_max / h).ceil() as usize;
        let chunks: Vec<usize> = (0..n_panels).step_by(PANELS_PER_CHUNK).collect();
        let width = kernel.max_order() + 1;
        let partials = chunks
            .par_iter()
            .map(|&start| {
                let end = (start + PANELS_PER_CHUNK).min(n_panels);
                let mut acc = vec![0.0; kernel.len()];
                let mut row = vec![0.0; width];
                for p in start..end {
                    let a = p as f64 * h;
                    let b = ((p + 1) as f64 * h).min(r_max);
                    let half = 0.5 * (b - a);
                    let mid = 0.5 * (a + b);
                    for (t, w) in gx.iter().zip(&gw) {
                        let r = mid + half * t;
                        self.bessel.row_into(r, &mut row)?;
                        if squared {
                            row.iter_mut().for_each(|v| *v *= *v);
                        }
                        kernel.accumulate(&row, w * half * r, &mut acc);
                    }
                }
                Ok(acc)
            })
            .collect::<Result<Vec<Vec<f64>>>>()?;
        let mut sums = vec![KahanSum::new(); kernel.len()];
        for part in &partials {
            for (s, v) in sums.iter_mut().zip(part) {
                s.add(*v);
            }
        }
        Ok(sums.iter().map(KahanSum::value).collect())
    }
}
