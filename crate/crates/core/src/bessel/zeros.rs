use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::asymptotic::{hankel_j0_j1, HANKEL_MIN_ARG};
use super::BesselConfig;
use crate::error::{Error, Result};

pub const MAX_ZEROS: usize = 5000;

/// Non-negative zeros of `J_1`, starting with `sigma_0 = 0`, together with
/// `J_0` at each zero (the Lemma-style quadrature weight needs it).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroSequence {
    zeros: Vec<f64>,
    j0_at: Vec<f64>,
}

impl ZeroSequence {
    pub(crate) fn from_parts(zeros: Vec<f64>, j0_at: Vec<f64>) -> Self {
        Self { zeros, j0_at }
    }

    pub fn zeros(&self) -> &[f64] {
        &self.zeros
    }

    pub fn j0_at_zeros(&self) -> &[f64] {
        &self.j0_at
    }

    pub fn count(&self) -> usize {
        self.zeros.len()
    }
}

pub fn j1_zeros(count: usize) -> Result<ZeroSequence> {
    BesselConfig::default().j1_zeros(count)
}

impl BesselConfig {
    pub(crate) fn j0_j1(&self, x: f64) -> Result<(f64, f64)> {
        if x >= HANKEL_MIN_ARG {
            return Ok(hankel_j0_j1(x));
        }
        let row = self.batch_unchecked(1, x)?;
        Ok((row[0], row[1]))
    }

    pub fn j1_zeros(&self, count: usize) -> Result<ZeroSequence> {
        if count == 0 || count > MAX_ZEROS {
            return Err(Error::Range(format!("zero count {count} outside 1..={MAX_ZEROS}")));
        }
        let mut zeros = Vec::with_capacity(count);
        let mut j0_at = Vec::with_capacity(count);
        zeros.push(0.0);
        j0_at.push(1.0);
        for r in 1..count {
            let z = self.refine_zero(r)?;
            if z <= *zeros.last().unwrap() {
                return Err(Error::ZeroFinding { r, reason: "zeros not increasing".into() });
            }
            zeros.push(z);
            j0_at.push(self.j0_j1(z)?.0);
        }
        Ok(ZeroSequence { zeros, j0_at })
    }

    fn refine_zero(&self, r: usize) -> Result<f64> {
        let fail = |reason: &str| Error::ZeroFinding { r, reason: reason.to_string() };
        let guess = mcmahon(r);
        let (mut lo, mut hi) = (guess - 0.5, guess + 0.5);
        let j1 = |x: f64| self.j0_j1(x).map(|v| v.1);
        let f_lo = j1(lo)?;
        let f_hi = j1(hi)?;
        if f_lo == 0.0 {
            return Ok(lo);
        }
        if f_hi == 0.0 {
            return Ok(hi);
        }
        if f_lo.signum() == f_hi.signum() {
            return Err(fail("no sign change in predicted window"));
        }
        let lo_sign = f_lo.signum();
        let mut x = guess;
        let mut best = (f64::INFINITY, x);
        for _ in 0..200 {
            let (j0, j1x) = self.j0_j1(x)?;
            if j1x.abs() < best.0 {
                best = (j1x.abs(), x);
            }
            if j1x == 0.0 {
                break;
            }
            if j1x.signum() == lo_sign {
                lo = x;
            } else {
                hi = x;
            }
            let deriv = j0 - j1x / x;
            let newton = x - j1x / deriv;
            let next = if newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
            if next == x || hi - lo <= 4.0 * f64::EPSILON * hi {
                break;
            }
            x = next;
        }
        if best.0 > self.zero_tol {
            return Err(fail("residual above tolerance"));
        }
        Ok(best.1)
    }
}

/// McMahon's expansion for the r-th positive zero of `J_1`.
fn mcmahon(r: usize) -> f64 {
    let beta = (r as f64 + 0.25) * PI;
    let b1 = 1.0 / beta;
    let b2 = b1 * b1;
    beta - 0.375 * b1 + 0.0234375 * b1 * b2 - 0.230_263_671_875 * b1 * b2 * b2
}
