use serde::{Deserialize, Serialize};

use super::exact::to_i64;
use super::{symmetric_hull, CertificateParams, CoefficientVector, SpectrumContext};
use crate::error::Result;
use crate::integrals::Integrals;
use crate::numeric::KahanSum;
use crate::spectrum::Subtype;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UpperBound {
    pub value: f64,
    pub error_bound: f64,
    /// Value of each of the eleven sums, in display order.
    pub sums: [f64; 11],
}

/// `(9(b+1)/(b-1), 9(b-3)/(b-1))`, the weights on the `(n, n, 0)` sums.
pub fn trivial_coefficients(b: f64) -> (f64, f64) {
    (9.0 * (b + 1.0) / (b - 1.0), 9.0 * (b - 3.0) / (b - 1.0))
}

struct Acc<'a> {
    eng: &'a Integrals,
    sums: [KahanSum; 11],
    err: KahanSum,
}

impl Acc<'_> {
    fn add(&mut self, which: usize, coef: f64, mono: f64, n: [i128; 3]) -> Result<()> {
        if coef * mono == 0.0 {
            return Ok(());
        }
        let iv = self.eng.script_i(to_i64(n[0])?, to_i64(n[1])?, to_i64(n[2])?)?;
        self.sums[which].add(coef * mono * iv.value);
        self.err.add((coef * mono).abs() * iv.error_bound);
        Ok(())
    }
}

/// The eleven-sum upper bound for `S`, term by term.
///
/// Indicators come from the class of the relevant triple sum `D`; `ε_D` is
/// looked up only for terms whose monomial is non-zero.
pub fn compute_s_upper_bound(
    eng: &Integrals,
    ctx: &SpectrumContext,
    f: &CoefficientVector,
    params: &CertificateParams,
) -> Result<UpperBound> {
    f.check_support(ctx.spectrum())?;
    let u = symmetric_hull(f);
    let nz: Vec<i128> = u.iter().copied().filter(|n| *n != 0).collect();
    let w = |n: i128| f.abs2(n);
    let w0 = w(0);
    let b = params.b;
    let (c_plus, c_minus) = trivial_coefficients(b);
    let is = |d: i128, s: Subtype| ctx.subtype(d) == Some(s);
    let mut acc = Acc { eng, sums: Default::default(), err: KahanSum::new() };

    let mut triples = Vec::new();
    for &n1 in &u {
        for &n2 in &u {
            for &n3 in &u {
                triples.push([n1, n2, n3]);
            }
        }
    }
    let triples = triples
        .iter()
        .map(|t| Ok([to_i64(t[0])?, to_i64(t[1])?, to_i64(t[2])?]))
        .collect::<Result<Vec<_>>>()?;
    eng.prefetch(&triples)?;

    for &n1 in &u {
        for &n2 in &u {
            for &n3 in &u {
                if n1.abs() == n2.abs() || n1.abs() == n3.abs() || n2.abs() == n3.abs() {
                    continue;
                }
                let mono = w(n1) * w(n2) * w(n3);
                if mono == 0.0 {
                    continue;
                }
                let d = n1 + n2 + n3;
                let extra = if is(d, Subtype::A2) { 6.0 / params.eps(d)? } else { 0.0 };
                acc.add(0, 15.0 + extra, mono, [n1, n2, n3])?;
            }
        }
    }

    for &n1 in &nz {
        for &n2 in u.iter().filter(|n| n.abs() != n1.abs()) {
            let mono = w(n1) * w(n1) * w(n2);
            if mono == 0.0 {
                continue;
            }
            let d = 2 * n1 + n2;
            let eps = if ctx.is_exception(d) { params.eps(d)? } else { 1.0 };
            let mut c2 = 1.0 + (n2 != 0) as i32 as f64;
            if is(d, Subtype::A2) {
                c2 += eps;
            }
            acc.add(1, 9.0 * c2, mono, [n1, n1, n2])?;
            let mut c3 = 0.0;
            if is(d, Subtype::A1) {
                if ctx.in_dilate(d, 3) {
                    c3 = 1.0 / eps;
                } else {
                    c3 = eps.powi(CertificateParams::a_exponent(ctx, d, n2));
                }
            }
            acc.add(2, 9.0 * c3, mono, [n1, n1, n2])?;
        }
    }

    for &n1 in &nz {
        let d = 3 * n1;
        let c = match ctx.subtype(d) {
            Some(_) => 1.0 + params.eps(d)?,
            None => 1.0,
        };
        acc.add(3, c, w(n1).powi(3), [n1, n1, n1])?;
    }

    for &n1 in &u {
        for &n2 in u.iter().filter(|n| n.abs() != n1.abs()) {
            let c = if n2 == 0 { 9.0 } else { 18.0 };
            acc.add(4, c, w(n1) * w(n2) * w(-n2), [n1, n2, n2])?;
        }
    }

    for &n1 in &nz {
        for &n2 in nz.iter().filter(|n| n.abs() != n1.abs()) {
            acc.add(5, 9.0, w(n1) * w(-n1) * w(n2), [n1, n1, n2])?;
        }
    }

    for &n1 in &nz {
        acc.add(6, c_plus, w(n1) * w(n1) * w0, [n1, n1, 0])?;
        acc.add(7, c_minus, w(n1) * w(-n1) * w0, [n1, n1, 0])?;
        acc.add(8, 6.0, w(n1) * w0 * w0, [n1, 0, 0])?;
        acc.add(9, 9.0, w(n1) * w(n1) * w(-n1), [n1, n1, n1])?;
    }
    acc.add(10, 1.0, w0.powi(3), [0, 0, 0])?;

    let sums = acc.sums.map(|s| s.value());
    let value = sums.iter().copied().collect::<KahanSum>().value();
    Ok(UpperBound { value, error_bound: acc.err.value(), sums })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certificate::compute_s_exact;
    use crate::integrals::DirectQuadrature;
    use crate::spectrum::SpectrumSet;
    use num_complex::Complex64;
    use rand::{Rng, SeedableRng};
    use std::collections::BTreeMap;

    fn quick() -> Integrals {
        Integrals::new(DirectQuadrature::with_r_max(400.0))
    }

    #[test]
    fn b5_coefficients() {
        assert_eq!(trivial_coefficients(5.0), (13.5, 4.5));
    }

    #[test]
    fn constant_is_equality() {
        let eng = quick();
        let ctx = SpectrumContext::new(SpectrumSet::geometric(5, 2, 1).unwrap()).unwrap();
        let p = CertificateParams::new(6.66, BTreeMap::new()).unwrap();
        let f = CoefficientVector::constant();
        let ub = compute_s_upper_bound(&eng, &ctx, &f, &p).unwrap();
        let s = compute_s_exact(&eng, &ctx, &f).unwrap();
        assert_eq!(ub.value, s.s);
        assert!(ub.sums[..10].iter().all(|v| *v == 0.0));
    }

    #[test]
    fn no_exceptions_needs_no_eps() {
        let eng = quick();
        let ctx = SpectrumContext::new(SpectrumSet::new(vec![0, 1, 10, 100]).unwrap()).unwrap();
        assert_eq!(ctx.exceptions().count(), 0);
        let p = CertificateParams::new(6.66, BTreeMap::new()).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(8);
        for _ in 0..10 {
            let f = CoefficientVector::from_pairs(
                ctx.spectrum().elements().iter().map(|&n| (n, Complex64::new(rng.gen_range(-1.0..1.0), 0.0))).collect::<Vec<_>>(),
            );
            let ub = compute_s_upper_bound(&eng, &ctx, &f, &p).unwrap();
            let s = compute_s_exact(&eng, &ctx, &f).unwrap();
            assert!(s.s_e == 0.0);
            assert!(s.s <= ub.value + ub.error_bound + s.error_bound, "{s:?} {ub:?}");
            // Without exceptions the eps-dependent parts vanish.
            assert_eq!(ub.sums[2], 0.0);
        }
    }

    #[test]
    fn missing_eps_is_reported() {
        let eng = quick();
        let ctx = SpectrumContext::new(SpectrumSet::geometric(5, 2, 1).unwrap()).unwrap();
        let p = CertificateParams::new(6.66, BTreeMap::new()).unwrap();
        let f = CoefficientVector::from_pairs([(1, Complex64::new(1.0, 0.0)), (5, Complex64::new(1.0, 0.0))]);
        assert!(matches!(
            compute_s_upper_bound(&eng, &ctx, &f, &p),
            Err(crate::error::Error::MissingEpsilon(_))
        ));
    }
}
