//! Finite truncations `{0, ±λ_1, ..., ±λ_N}` of symmetric lacunary spectra
//! and the arithmetic of their triple sums.

mod classify;
mod lemma;
mod p2;
mod random;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use classify::{classify_brute_force, ClassifiedPoint, PointClass, Subtype};
pub use lemma::{cross_check, exceptions_via_lemma, CrossCheck, Family};
pub use p2::{is_p2_set, P2Report};
pub use random::random_lacunary;

/// Largest number of elements `enumerate_reps` accepts.
pub const MAX_ELEMENTS: usize = 2000;

/// Smallest consecutive ratio `λ_{n+1}/λ_n` over `n >= 1`, as a fraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ratio {
    pub num: i128,
    pub den: i128,
}

impl Ratio {
    pub fn as_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumSet {
    lambdas: Vec<i128>,
    ratio: Option<Ratio>,
    elements: Vec<i128>,
}

impl SpectrumSet {
    /// Validates `λ_0 = 0`, strict increase, and `λ_{n+1} > 3 λ_n` for `n >= 1`.
    pub fn new(lambdas: Vec<i128>) -> Result<Self> {
        if lambdas.first() != Some(&0) {
            return Err(Error::Validation { index: 0, reason: "lambda_0 must be 0".into() });
        }
        for i in 1..lambdas.len() {
            if lambdas[i] <= lambdas[i - 1] {
                return Err(Error::Validation { index: i, reason: "sequence must be strictly increasing".into() });
            }
            if i >= 2 {
                let triple = lambdas[i - 1].checked_mul(3).ok_or(Error::Overflow("3 * lambda"))?;
                if lambdas[i] <= triple {
                    return Err(Error::Validation {
                        index: i,
                        reason: format!("lambda_{i} = {} is not > 3 * lambda_{} = {triple}", lambdas[i], i - 1),
                    });
                }
            }
        }
        Self::assemble(lambdas)
    }

    /// `[0, s, s q, ..., s q^{depth-1}]` for integer base `q >= 4`.
    pub fn geometric(base: i128, depth: usize, scale: i128) -> Result<Self> {
        if base < 4 {
            return Err(Error::Validation { index: 2, reason: format!("base {base} must be >= 4") });
        }
        if scale < 1 {
            return Err(Error::Validation { index: 1, reason: format!("scale {scale} must be positive") });
        }
        let mut lambdas = vec![0];
        let mut v = scale;
        for i in 0..depth {
            if i > 0 {
                v = v.checked_mul(base).ok_or(Error::Overflow("geometric spectrum"))?;
            }
            lambdas.push(v);
        }
        Self::new(lambdas)
    }

    /// Skips the ratio check; for constructing counterexamples in tests.
    pub fn new_unchecked(lambdas: Vec<i128>) -> Self {
        Self::assemble(lambdas).expect("unchecked spectrum overflowed")
    }

    fn assemble(lambdas: Vec<i128>) -> Result<Self> {
        // Triple sums must stay representable.
        if lambdas.iter().any(|l| l.checked_mul(3).is_none()) {
            return Err(Error::Overflow("triple sums exceed 128 bits"));
        }
        let ratio = lambdas
            .windows(2)
            .skip(1)
            .map(|w| Ratio { num: w[1], den: w[0] })
            .min_by(|a, b| (a.num * b.den).cmp(&(b.num * a.den)));
        let mut elements: Vec<i128> = lambdas.iter().flat_map(|&l| [l, -l]).collect();
        elements.sort_unstable();
        elements.dedup();
        Ok(Self { lambdas, ratio, elements })
    }

    pub fn lambdas(&self) -> &[i128] {
        &self.lambdas
    }

    pub fn ratio(&self) -> Option<Ratio> {
        self.ratio
    }

    /// Sorted symmetric element list.
    pub fn elements(&self) -> &[i128] {
        &self.elements
    }

    pub fn contains(&self, x: i128) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    pub fn lambda_max(&self) -> i128 {
        *self.lambdas.last().unwrap()
    }

    /// Every λ multiplied by `k > 0`.
    pub fn scaled(&self, k: i128) -> Result<Self> {
        let lambdas =
            self.lambdas.iter().map(|l| l.checked_mul(k).ok_or(Error::Overflow("scaled spectrum"))).collect::<Result<_>>()?;
        Self::new(lambdas)
    }
}

/// An unordered triple of spectrum elements with its sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TripleRep {
    /// Ascending.
    pub elems: [i128; 3],
    pub sum: i128,
    /// Number of distinct orderings: 1, 3 or 6.
    pub perm_count: u8,
}

impl TripleRep {
    pub fn new(mut elems: [i128; 3]) -> Self {
        elems.sort_unstable();
        let distinct = 1 + (elems[1] != elems[0]) as u8 + (elems[2] != elems[1]) as u8;
        let perm_count = match distinct {
            3 => 6,
            2 => 3,
            _ => 1,
        };
        Self { elems, sum: elems[0] + elems[1] + elems[2], perm_count }
    }

    pub fn has_repeat(&self) -> bool {
        self.perm_count < 6
    }

    /// `{d, m, -m}` for some `m`.
    pub fn is_trivial_for(&self, d: i128) -> bool {
        let [a, b, c] = self.elems;
        (a == d && b == -c) || (b == d && a == -c) || (c == d && a == -b)
    }

    /// For a triple with a repeated element, `(repeated, single)`.
    pub fn double_and_single(&self) -> Option<(i128, i128)> {
        let [a, b, c] = self.elems;
        if a == b {
            Some((a, c))
        } else if b == c {
            Some((b, a))
        } else {
            None
        }
    }

    /// Largest element magnitude.
    pub fn max_abs(&self) -> i128 {
        self.elems.iter().map(|v| v.abs()).max().unwrap()
    }
}

/// All unordered triples grouped by sum, with the truncation safety limit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Enumeration {
    pub points: BTreeMap<i128, Vec<TripleRep>>,
    /// `|D| <= safe_limit` cannot change class when larger λ are appended.
    pub safe_limit: i128,
}

impl Enumeration {
    pub fn is_safe(&self, d: i128) -> bool {
        d.abs() <= self.safe_limit
    }

    pub fn triple_count(&self) -> usize {
        self.points.values().map(Vec::len).sum()
    }
}

/// Groups every unordered triple by its sum.
///
/// A point is boundary-safe when `|D| + margin <= λ_N`: any triple using an
/// element beyond `λ_N` either has the form `{x, m, -m}` or a sum of
/// magnitude above `λ_N`, so such points keep their class in every
/// extension of the truncation.
pub fn enumerate_reps(a: &SpectrumSet, boundary_margin: i128) -> Result<Enumeration> {
    let el = a.elements();
    if el.len() > MAX_ELEMENTS {
        return Err(Error::SizeCap { what: "spectrum elements", got: el.len(), cap: MAX_ELEMENTS });
    }
    let mut points: BTreeMap<i128, Vec<TripleRep>> = BTreeMap::new();
    for i in 0..el.len() {
        for j in i..el.len() {
            for k in j..el.len() {
                let t = TripleRep::new([el[i], el[j], el[k]]);
                points.entry(t.sum).or_default().push(t);
            }
        }
    }
    Ok(Enumeration { points, safe_limit: a.lambda_max() - boundary_margin.max(0) })
}
