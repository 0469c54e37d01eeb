//! Bessel functions of the first kind for integer order.
//!
//! Small arguments (relative to the order) are summed from the power series;
//! everything else goes through Miller's downward recurrence normalised with
//! `J_0^2 + 2 sum_k J_k^2 = 1`. The sign of the normalisation constant is
//! taken from the linear identity `J_0 + 2 sum_k J_{2k} = 1`.

mod asymptotic;
mod zeros;

pub use zeros::{j1_zeros, ZeroSequence};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::KahanSum;

/// Largest supported order magnitude.
pub const MAX_ORDER: u32 = 1200;
/// Largest supported argument for the public evaluators.
pub const MAX_ARG: f64 = 1.0e4;

/// Arguments below this use the series when filling a whole row, since the
/// downward recurrence coefficients `2k/x` would overflow.
const TINY_ARG: f64 = 1.0e-6;
const RESCALE_AT: f64 = 1.0e100;
const RESCALE_BY: f64 = 1.0e-100;

/// An integer order, possibly negative.
///
/// Negative orders are evaluated through `J_{-n} = (-1)^n J_n`, so the
/// magnitude is bitwise identical to the positive order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BesselOrder(i32);

impl BesselOrder {
    pub fn new(n: i64) -> Result<Self> {
        if n.unsigned_abs() > MAX_ORDER as u64 {
            return Err(Error::Range(format!("order {n} outside |n| <= {MAX_ORDER}")));
        }
        Ok(Self(n as i32))
    }

    pub fn get(self) -> i32 {
        self.0
    }

    pub fn magnitude(self) -> u32 {
        self.0.unsigned_abs()
    }

    /// Sign picked up when reflecting to the non-negative order.
    pub fn reflection_sign(self) -> f64 {
        if self.0 < 0 && self.0 % 2 != 0 {
            -1.0
        } else {
            1.0
        }
    }
}

/// Tunables for the evaluators. Defaults are what every module uses.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BesselConfig {
    /// Series is used for `x <= series_cutoff` or `x² <= |n| + 1`. Past that
    /// the alternating terms cancel by roughly `exp(x²/(2n+2))`.
    pub series_cutoff: f64,
    /// Miller start order is `n_max + ceil(start_factor * x) + start_offset`.
    pub start_factor: f64,
    pub start_offset: usize,
    /// Target residual `|J_1(sigma_r)|` for refined zeros.
    pub zero_tol: f64,
}

impl Default for BesselConfig {
    fn default() -> Self {
        Self { series_cutoff: 12.0, start_factor: 1.3, start_offset: 40, zero_tol: 1e-13 }
    }
}

/// `J_n(x)` with the default configuration.
pub fn eval_jn(n: i64, x: f64) -> Result<f64> {
    BesselConfig::default().eval_jn(n, x)
}

/// `[J_0(x), ..., J_{n_max}(x)]` with the default configuration.
pub fn eval_jn_batch(n_max: u32, x: f64) -> Result<Vec<f64>> {
    BesselConfig::default().eval_jn_batch(n_max, x)
}

/// See [`BesselConfig::normalization_residual`].
pub fn normalization_residual(x: f64) -> Result<f64> {
    BesselConfig::default().normalization_residual(x)
}

fn check_arg(n: i64, x: f64) -> Result<()> {
    if !x.is_finite() || x < 0.0 {
        return Err(Error::Range(format!("argument x={x} must be finite and non-negative")));
    }
    if x > MAX_ARG {
        return Err(Error::Range(format!("argument x={x} exceeds {MAX_ARG}")));
    }
    let _ = n;
    Ok(())
}

impl BesselConfig {
    pub fn eval_jn(&self, n: i64, x: f64) -> Result<f64> {
        let order = BesselOrder::new(n)?;
        check_arg(n, x)?;
        let v = self.jn_nonneg(order.magnitude(), x)?;
        Ok(order.reflection_sign() * v)
    }

    /// Fills `J_0 .. J_{n_max}` with a single downward recurrence pass.
    pub fn eval_jn_batch(&self, n_max: u32, x: f64) -> Result<Vec<f64>> {
        if n_max > MAX_ORDER {
            return Err(Error::Range(format!("order {n_max} outside |n| <= {MAX_ORDER}")));
        }
        check_arg(n_max as i64, x)?;
        self.batch_unchecked(n_max as usize, x)
    }

    /// `J_0(x)² + 2 Σ_{k=1}^{K} J_k(x)² - 1` with `K = ⌈x + 40 + 8 x^{1/3}⌉`.
    ///
    /// The tail past `x + 40` is still ~1e-7 near `x = 3000`; the extra
    /// `x^{1/3}` covers the transition region.
    pub fn normalization_residual(&self, x: f64) -> Result<f64> {
        check_arg(0, x)?;
        let k_max = (x + 40.0 + 8.0 * x.cbrt()).ceil() as usize;
        let row = self.batch_unchecked(k_max, x)?;
        let mut s = KahanSum::new();
        s.add(row[0] * row[0] - 1.0);
        for v in &row[1..] {
            s.add(2.0 * v * v);
        }
        Ok(s.value())
    }

    /// `J_n(x)` for `n >= 0` without the public argument cap.
    pub(crate) fn jn_nonneg(&self, n: u32, x: f64) -> Result<f64> {
        if x == 0.0 {
            return Ok(if n == 0 { 1.0 } else { 0.0 });
        }
        if x <= self.series_cutoff || x * x <= n as f64 + 1.0 {
            return Ok(series(n, x));
        }
        let mut keep = [0.0];
        self.miller(n as usize, x, MillerTarget::Single(n as usize, &mut keep))?;
        Ok(keep[0])
    }

    pub(crate) fn batch_unchecked(&self, n_max: usize, x: f64) -> Result<Vec<f64>> {
        let mut out = vec![0.0; n_max + 1];
        self.batch_into(x, &mut out)?;
        Ok(out)
    }

    /// Writes `J_0(x) .. J_{out.len()-1}(x)` into `out`.
    pub(crate) fn batch_into(&self, x: f64, out: &mut [f64]) -> Result<()> {
        if out.is_empty() {
            return Ok(());
        }
        if x == 0.0 {
            out.fill(0.0);
            out[0] = 1.0;
            return Ok(());
        }
        if x < TINY_ARG {
            for (k, v) in out.iter_mut().enumerate() {
                *v = series(k as u32, x);
            }
            return Ok(());
        }
        let n_max = out.len() - 1;
        self.miller(n_max, x, MillerTarget::Row(out))
    }

    fn miller(&self, n_max: usize, x: f64, target: MillerTarget<'_>) -> Result<()> {
        let start = n_max + (self.start_factor * x).ceil() as usize + self.start_offset;
        let fail = |reason| Error::Evaluation { n: n_max as i64, x, reason };

        let (row, single): (&mut [f64], Option<usize>) = match target {
            MillerTarget::Row(row) => (row, None),
            MillerTarget::Single(n, slot) => (slot, Some(n)),
        };
        let store = |k: usize, v: f64, row: &mut [f64]| match single {
            None => row[k] = v,
            Some(n) if n == k => row[0] = v,
            Some(_) => {}
        };
        row.fill(0.0);

        let mut squares = KahanSum::new();
        let mut linear = KahanSum::new();
        let mut f_above = 0.0_f64;
        let mut f_k = 1.0_f64;
        let mut k = start;
        loop {
            if k <= n_max {
                store(k, f_k, row);
            }
            if k == 0 {
                squares.add(f_k * f_k);
                linear.add(f_k);
                break;
            }
            squares.add(2.0 * f_k * f_k);
            if k % 2 == 0 {
                linear.add(2.0 * f_k);
            }
            let f_below = (2.0 * k as f64 / x) * f_k - f_above;
            f_above = f_k;
            f_k = f_below;
            k -= 1;
            if f_k.abs() > RESCALE_AT {
                f_k *= RESCALE_BY;
                f_above *= RESCALE_BY;
                squares.scale(RESCALE_BY * RESCALE_BY);
                linear.scale(RESCALE_BY);
                match single {
                    None if k < n_max => row[k + 1..].iter_mut().for_each(|v| *v *= RESCALE_BY),
                    None => {}
                    Some(n) if n > k => row[0] *= RESCALE_BY,
                    Some(_) => {}
                }
            }
            if !f_k.is_finite() {
                return Err(fail("recurrence overflow"));
            }
        }

        let norm2 = squares.value();
        if !(norm2 > 0.0) || !norm2.is_finite() {
            return Err(fail("normalisation underflow"));
        }
        let sign = if linear.value() < 0.0 { -1.0 } else { 1.0 };
        let scale = sign / norm2.sqrt();
        row.iter_mut().for_each(|v| *v *= scale);
        Ok(())
    }

    /// Row `J_0 .. J_{out.len()-1}` at `x`, using the Hankel expansion plus
    /// upward recurrence when `x` is comfortably past the largest order.
    pub(crate) fn row_into(&self, x: f64, out: &mut [f64]) -> Result<()> {
        let n_max = out.len().saturating_sub(1);
        if asymptotic::upward_is_safe(n_max, x) {
            asymptotic::upward_row(x, out);
            Ok(())
        } else {
            self.batch_into(x, out)
        }
    }
}

enum MillerTarget<'a> {
    Row(&'a mut [f64]),
    Single(usize, &'a mut [f64]),
}

fn ln_factorial(n: u32) -> f64 {
    (2..=n).map(|j| (j as f64).ln()).sum()
}

/// Power series `sum_k (-1)^k (x/2)^{2k+n} / (k! (k+n)!)`.
fn series(n: u32, x: f64) -> f64 {
    if x == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    let half = 0.5 * x;
    let ln_t0 = n as f64 * half.ln() - ln_factorial(n);
    if ln_t0 < -740.0 {
        return 0.0;
    }
    let q = half * half;
    let mut term = ln_t0.exp();
    let mut sum = KahanSum::new();
    let mut peak = term.abs();
    let mut k = 0u32;
    loop {
        sum.add(term);
        k += 1;
        let ratio = q / (k as f64 * (k + n) as f64);
        term *= -ratio;
        peak = peak.max(term.abs());
        if ratio < 1.0 && term.abs() <= 1e-18 * peak {
            break;
        }
        if k > 10_000 {
            break;
        }
    }
    sum.value()
}
