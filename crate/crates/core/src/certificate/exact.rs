use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{CoefficientVector, SpectrumContext};
use crate::error::{Error, Result};
use crate::integrals::{Integrals, SextetIndex};
use crate::numeric::KahanSum;
use crate::spectrum::TripleRep;

/// Largest support `compute_s_exact` accepts.
pub const MAX_SUPPORT: usize = 11;

/// `(2π)^{-7} ‖f̂σ‖⁶` split by the class of the triple sum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SExact {
    pub s: f64,
    pub error_bound: f64,
    /// Contribution of unique and trivial points.
    pub s_p3: f64,
    /// Contribution of exceptional points.
    pub s_e: f64,
    /// Imaginary part left after summation.
    pub imag: f64,
}

pub(crate) fn to_i64(n: i128) -> Result<i64> {
    i64::try_from(n).map_err(|_| Error::Range(format!("frequency {n} out of range")))
}

fn tri(t: &TripleRep) -> Result<[i64; 3]> {
    Ok([to_i64(t.elems[0])?, to_i64(t.elems[1])?, to_i64(t.elems[2])?])
}

/// Unordered triples of `support` grouped by sum, each with `p(T) Π f̂`.
fn weighted_triples(f: &CoefficientVector, support: &[i128]) -> BTreeMap<i128, Vec<(TripleRep, Complex64)>> {
    let mut out: BTreeMap<i128, Vec<(TripleRep, Complex64)>> = BTreeMap::new();
    for i in 0..support.len() {
        for j in i..support.len() {
            for k in j..support.len() {
                let t = TripleRep::new([support[i], support[j], support[k]]);
                let a = f.get(support[i]) * f.get(support[j]) * f.get(support[k]) * t.perm_count as f64;
                out.entry(t.sum).or_default().push((t, a));
            }
        }
    }
    out
}

/// Evaluates every integral that `compute_s_exact` can need for coefficient
/// vectors supported anywhere in `frequencies`.
pub fn prepare_spectrum(eng: &Integrals, frequencies: &[i128]) -> Result<()> {
    let dummy = CoefficientVector::from_pairs(frequencies.iter().map(|&n| (n, Complex64::new(1.0, 0.0))));
    let groups = weighted_triples(&dummy, frequencies);
    let mut diag = Vec::new();
    let mut sext = Vec::new();
    for reps in groups.values() {
        for (i, (t, _)) in reps.iter().enumerate() {
            diag.push(tri(t)?);
            for (u, _) in &reps[i + 1..] {
                sext.push(SextetIndex::from_triples(tri(t)?, tri(u)?)?);
            }
        }
    }
    eng.prefetch(&diag)?;
    eng.prefetch_sextets(&sext)
}

/// `Σ_D |Σ_{T: ΣT = D} p(T) f̂^T|²`-type expansion with the Bessel weights:
/// diagonal pairs use the diagonal integral, mixed pairs the direct sextet.
pub fn compute_s_exact(eng: &Integrals, ctx: &SpectrumContext, f: &CoefficientVector) -> Result<SExact> {
    f.check_support(ctx.spectrum())?;
    let support = f.support();
    if support.len() > MAX_SUPPORT {
        return Err(Error::SizeCap { what: "coefficient support", got: support.len(), cap: MAX_SUPPORT });
    }
    prepare_spectrum(eng, &support)?;
    let groups = weighted_triples(f, &support);
    let (mut re, mut im, mut err) = (KahanSum::new(), KahanSum::new(), KahanSum::new());
    let (mut p3, mut ex) = (KahanSum::new(), KahanSum::new());
    for (&d, reps) in &groups {
        let mut part = KahanSum::new();
        for (t, a) in reps {
            for (u, c) in reps {
                let iv = if t == u {
                    let [x, y, z] = tri(t)?;
                    eng.script_i(x, y, z)?
                } else {
                    eng.i_direct(&SextetIndex::from_triples(tri(t)?, tri(u)?)?)?
                };
                let w = a * c.conj();
                re.add(w.re * iv.value);
                im.add(w.im * iv.value);
                part.add(w.re * iv.value);
                err.add(w.norm() * iv.error_bound);
            }
        }
        if ctx.is_exception(d) {
            ex.add(part.value());
        } else {
            p3.add(part.value());
        }
    }
    Ok(SExact { s: re.value(), error_bound: err.value(), s_p3: p3.value(), s_e: ex.value(), imag: im.value() })
}
