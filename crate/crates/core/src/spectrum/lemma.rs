//! Exceptions produced from the two Diophantine equations
//!
//!   λ_{n+1}       = 3 λ_n + λ_m + λ_k,   0 <= λ_m <= λ_k <= λ_n, λ_k > 0
//!   λ_{n+1} + λ_m = 3 λ_n + λ_k,         0 <= λ_m <  λ_k <= λ_n
//!
//! by moving three terms to each side in the eight possible ways.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{classify_brute_force, ClassifiedPoint, PointClass, SpectrumSet, Subtype, TripleRep};
use crate::error::Result;

/// Rearrangement families, numbered by position in the lemma's list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    I,
    II,
    III,
    IV,
    V,
    VI,
    VII,
    VIII,
}

fn instances(l: i128, a: i128, m: i128, k: i128, first: bool) -> [(Family, [i128; 3], [i128; 3]); 4] {
    if first {
        [
            (Family::I, [l, -a, -a], [a, m, k]),
            (Family::II, [l, -a, -m], [a, a, k]),
            (Family::III, [l, -a, -k], [a, a, m]),
            (Family::IV, [l, -m, -k], [a, a, a]),
        ]
    } else {
        [
            (Family::V, [l, -a, -a], [a, -m, k]),
            (Family::VI, [l, -a, m], [a, a, k]),
            (Family::VII, [l, -a, -k], [a, a, -m]),
            (Family::VIII, [l, m, -k], [a, a, a]),
        ]
    }
}

/// Exceptions of the truncation predicted by the lemma, ascending in `D`,
/// each with both representations and its family tags.
pub fn exceptions_via_lemma(a: &SpectrumSet) -> Vec<ClassifiedPoint> {
    let lam = a.lambdas();
    let mut found: BTreeMap<i128, (BTreeSet<TripleRep>, BTreeSet<Family>)> = BTreeMap::new();
    for n in 0..lam.len().saturating_sub(1) {
        let (ln, l_next) = (lam[n], lam[n + 1]);
        for (ki, &lk) in lam.iter().enumerate() {
            if lk > ln {
                break;
            }
            for &lm in &lam[..=ki] {
                let first = lk > 0 && 3 * ln + lm + lk == l_next;
                let second = lm < lk && l_next + lm == 3 * ln + lk;
                for (eq, hit) in [(true, first), (false, second)] {
                    if !hit {
                        continue;
                    }
                    for (fam, x, y) in instances(l_next, ln, lm, lk, eq) {
                        for sign in [1i128, -1] {
                            let tx = TripleRep::new(x.map(|v| sign * v));
                            let ty = TripleRep::new(y.map(|v| sign * v));
                            if tx == ty {
                                continue;
                            }
                            let entry = found.entry(tx.sum).or_default();
                            entry.0.insert(tx);
                            entry.0.insert(ty);
                            entry.1.insert(fam);
                        }
                    }
                }
            }
        }
    }
    let limit = a.lambda_max();
    found
        .into_iter()
        .map(|(d, (reps, fams))| {
            let reps: Vec<TripleRep> = reps.into_iter().collect();
            let subtype = if reps.iter().all(TripleRep::has_repeat) { Subtype::A1 } else { Subtype::A2 };
            ClassifiedPoint {
                d,
                reps,
                class: PointClass::Exception,
                subtype: Some(subtype),
                families: fams.into_iter().collect(),
                boundary_safe: d.abs() <= limit,
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossCheck {
    pub checked: usize,
    pub brute_only: Vec<i128>,
    pub lemma_only: Vec<i128>,
    /// Same `D` on both sides but different representation pairs.
    pub rep_mismatch: Vec<i128>,
    pub agree: bool,
}

/// Compares the two routes on boundary-safe points.
pub fn cross_check(a: &SpectrumSet) -> Result<CrossCheck> {
    let brute: BTreeMap<i128, Vec<TripleRep>> = classify_brute_force(a)?
        .into_iter()
        .filter(|p| p.class == PointClass::Exception && p.boundary_safe)
        .map(|p| {
            let (x, y) = p.essential_pair(a).unwrap();
            (p.d, vec![x, y])
        })
        .collect();
    let lemma: BTreeMap<i128, Vec<TripleRep>> =
        exceptions_via_lemma(a).into_iter().filter(|p| p.boundary_safe).map(|p| (p.d, p.reps)).collect();
    let brute_only: Vec<i128> = brute.keys().filter(|d| !lemma.contains_key(d)).copied().collect();
    let lemma_only: Vec<i128> = lemma.keys().filter(|d| !brute.contains_key(d)).copied().collect();
    let rep_mismatch: Vec<i128> =
        brute.iter().filter(|(d, r)| lemma.get(d).is_some_and(|l| l != *r)).map(|(d, _)| *d).collect();
    let agree = brute_only.is_empty() && lemma_only.is_empty() && rep_mismatch.is_empty();
    Ok(CrossCheck { checked: brute.len().max(lemma.len()), brute_only, lemma_only, rep_mismatch, agree })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a5_collapses_to_first_family_pattern() {
        let a5 = SpectrumSet::geometric(5, 4, 1).unwrap();
        let ex = exceptions_via_lemma(&a5);
        let safe: Vec<i128> = ex.iter().filter(|p| p.boundary_safe).map(|p| p.d).collect();
        assert_eq!(safe, vec![-75, -15, -3, 3, 15, 75]);
        let three = ex.iter().find(|p| p.d == 3).unwrap();
        assert_eq!(three.reps, vec![TripleRep::new([5, -1, -1]), TripleRep::new([1, 1, 1])]);
        assert_eq!(three.subtype, Some(Subtype::A1));
    }

    #[test]
    fn a4_examples() {
        let a4 = SpectrumSet::geometric(4, 4, 1).unwrap();
        let ex = exceptions_via_lemma(&a4);
        let two = ex.iter().find(|p| p.d == 2).unwrap();
        assert_eq!(two.reps, vec![TripleRep::new([4, -1, -1]), TripleRep::new([0, 1, 1])]);
        let three = ex.iter().find(|p| p.d == 3).unwrap();
        assert_eq!(three.reps, vec![TripleRep::new([4, -1, 0]), TripleRep::new([1, 1, 1])]);
        assert!(cross_check(&a4).unwrap().agree);
    }

    #[test]
    fn no_solutions_for_sparse_set() {
        let a = SpectrumSet::new(vec![0, 1, 10, 100]).unwrap();
        assert!(exceptions_via_lemma(&a).is_empty());
        let c = cross_check(&a).unwrap();
        assert!(c.agree && c.checked == 0);
    }

    #[test]
    fn random_spectra_agree() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
        let mut with_exceptions = 0;
        for i in 0..300 {
            let a = super::super::random_lacunary(&mut rng, 2 + i % 9, i % 3 != 0).unwrap();
            let c = cross_check(&a).unwrap();
            assert!(c.agree, "{:?}: {c:?}", a.lambdas());
            with_exceptions += (c.checked > 0) as usize;
            for p in classify_brute_force(&a).unwrap() {
                if p.class == PointClass::Exception {
                    let (x, y) = p.essential_pair(&a).unwrap();
                    assert!(x.has_repeat() || y.has_repeat());
                }
            }
        }
        assert!(with_exceptions > 100);
    }
}
