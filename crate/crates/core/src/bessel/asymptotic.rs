//! Large-argument evaluation: Hankel's expansion for `J_0`, `J_1`, then
//! forward recurrence, which is stable while the order stays below `x`.

use std::f64::consts::PI;

/// Smallest argument at which the Hankel series is trusted to 1e-15.
pub(crate) const HANKEL_MIN_ARG: f64 = 40.0;

pub(crate) fn upward_is_safe(n_max: usize, x: f64) -> bool {
    x >= HANKEL_MIN_ARG && 2.0 * n_max as f64 <= x
}

/// `(P, Q)` of Hankel's expansion for order `nu` in {0, 1}.
fn hankel_pq(nu: u32, x: f64) -> (f64, f64) {
    let mu = 4.0 * (nu * nu) as f64;
    let inv8x = 1.0 / (8.0 * x);
    let mut p = 0.0;
    let mut q = 0.0;
    // a_k / x^k, built incrementally: a_k = a_{k-1} (mu - (2k-1)^2) / (8k).
    let mut term = 1.0;
    let mut last = f64::INFINITY;
    for k in 0..60u32 {
        if k > 0 {
            let odd = (2 * k - 1) as f64;
            term *= (mu - odd * odd) * inv8x / k as f64;
        }
        let mag = term.abs();
        if mag > last {
            break;
        }
        last = mag;
        // P takes even k with sign (-1)^{k/2}, Q odd k with sign (-1)^{(k-1)/2}.
        match k % 4 {
            0 => p += term,
            1 => q += term,
            2 => p -= term,
            _ => q -= term,
        }
        if mag < 1e-17 {
            break;
        }
    }
    (p, q)
}

/// `(J_0(x), J_1(x))` for `x >= HANKEL_MIN_ARG`.
pub(crate) fn hankel_j0_j1(x: f64) -> (f64, f64) {
    let (s, c) = x.sin_cos();
    let amp = (2.0 / (PI * x)).sqrt() * std::f64::consts::FRAC_1_SQRT_2;
    let (p0, q0) = hankel_pq(0, x);
    let (p1, q1) = hankel_pq(1, x);
    // chi_0 = x - pi/4, chi_1 = x - 3pi/4, expanded to avoid reducing x - const.
    let (cos0, sin0) = (c + s, s - c);
    let (cos1, sin1) = (s - c, -(s + c));
    (amp * (p0 * cos0 - q0 * sin0), amp * (p1 * cos1 - q1 * sin1))
}

pub(crate) fn upward_row(x: f64, out: &mut [f64]) {
    let (j0, j1) = hankel_j0_j1(x);
    out[0] = j0;
    if out.len() > 1 {
        out[1] = j1;
    }
    let two_over_x = 2.0 / x;
    for k in 1..out.len().saturating_sub(1) {
        out[k + 1] = (k as f64 * two_over_x) * out[k] - out[k - 1];
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bessel::oracle::jn_trapezoid;

    #[test]
    fn hankel_against_oracle() {
        for &x in &[40.0, 41.3, 99.9, 512.0, 3000.5, 9999.0, 15000.0] {
            let (j0, j1) = hankel_j0_j1(x);
            assert!((j0 - jn_trapezoid(0, x)).abs() < 1e-14, "x={x}");
            assert!((j1 - jn_trapezoid(1, x)).abs() < 1e-14, "x={x}");
        }
    }
}
