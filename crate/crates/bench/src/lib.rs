//! Shared inputs for the benchmarks.

use lacuna_core::{CoefficientVector, SpectrumContext, SpectrumSet};
use num_complex::Complex64;

/// Powers of `base` truncated at `depth`, already classified.
pub fn geometric_context(base: i128, depth: usize) -> SpectrumContext {
    SpectrumContext::new(SpectrumSet::geometric(base, depth, 1).expect("valid base")).expect("classifiable")
}

/// A deterministic dense vector on the first `k` elements of the spectrum.
pub fn dense_vector(ctx: &SpectrumContext, k: usize) -> CoefficientVector {
    CoefficientVector::from_pairs(
        ctx.spectrum().elements().iter().take(k).enumerate().map(|(i, &n)| (n, Complex64::new(1.0 / (1 + i) as f64, (i % 3) as f64 - 1.0))),
    )
}
