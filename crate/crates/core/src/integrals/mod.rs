//! Sextet Bessel integrals `I(n_1..n_6) = int_0^inf prod J_{n_i}(r) r dr`,
//! their diagonal specialisation, the 1001-node table approximation, the
//! ratio `F`, and the conjectured sharp constant.

mod direct;
mod gauss;
mod table;
mod thresholds;

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::Interval;

pub use direct::{DirectQuadrature, DIRECT_ORDER_LIMIT, MIN_R_MAX};
pub use gauss::gauss_legendre;
pub use table::{build_table, QuadratureTable, LEMMA8_ERROR, LEMMA8_ORDER_LIMIT, TABLE_NODES};
pub use thresholds::{
    lemma8_gap, lemma8_gap_sweep, threshold_suite, threshold_triples, GapReport, GapRow, ThresholdFamily,
    ThresholdReport,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    QuadratureLemma8,
    DirectTruncated,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegralValue {
    pub value: f64,
    pub error_bound: f64,
    pub method: Method,
    /// False when the stated bound is not backed by a proven estimate.
    pub guaranteed: bool,
}

impl IntegralValue {
    pub fn lo(&self) -> f64 {
        self.value - self.error_bound
    }

    pub fn hi(&self) -> f64 {
        self.value + self.error_bound
    }

    pub fn interval(&self) -> Interval {
        Interval::new(self.lo(), self.hi())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SextetIndex([i32; 6]);

impl SextetIndex {
    pub fn new(n: [i64; 6]) -> Result<Self> {
        let mut out = [0i32; 6];
        for (o, v) in out.iter_mut().zip(n) {
            if v.unsigned_abs() > DIRECT_ORDER_LIMIT as u64 {
                return Err(Error::Range(format!("order {v} exceeds {DIRECT_ORDER_LIMIT}")));
            }
            *o = v as i32;
        }
        Ok(Self(out))
    }

    pub fn zero() -> Self {
        Self([0; 6])
    }

    /// `(a, a, b, b, c, c)`.
    pub fn diagonal(a: i64, b: i64, c: i64) -> Result<Self> {
        Self::new([a, a, b, b, c, c])
    }

    /// Concatenation of two triples.
    pub fn from_triples(t: [i64; 3], u: [i64; 3]) -> Result<Self> {
        Self::new([t[0], t[1], t[2], u[0], u[1], u[2]])
    }

    pub fn orders(&self) -> [i32; 6] {
        self.0
    }

    fn canonical(&self) -> [i32; 6] {
        let mut k = self.0;
        k.sort_unstable();
        k
    }
}

/// `F = I(0,0,0) / I(n_1,n_2,n_3)` with the interval implied by both error
/// bounds. `lo` is what downstream checks rely on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FValue {
    pub value: f64,
    pub lo: f64,
    pub hi: f64,
}

/// How the diagonal integrals are produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiagonalSource {
    /// Direct truncated quadrature with its tail bound.
    #[default]
    Direct,
    /// Table sum shifted by half the one-sided 1e-2 gap, error 5e-3.
    Lemma8Centered,
}

/// Memoising front end over the direct quadrature and the table.
#[derive(Debug)]
pub struct Integrals {
    direct: DirectQuadrature,
    source: DiagonalSource,
    table: OnceLock<Arc<QuadratureTable>>,
    diag: Mutex<HashMap<[u32; 3], IntegralValue>>,
    sext: Mutex<HashMap<[i32; 6], IntegralValue>>,
}

impl Default for Integrals {
    fn default() -> Self {
        Self::new(DirectQuadrature::default())
    }
}

fn diag_key(n1: i64, n2: i64, n3: i64) -> Result<[u32; 3]> {
    let mut k = [0u32; 3];
    for (o, v) in k.iter_mut().zip([n1, n2, n3]) {
        if v.unsigned_abs() > DIRECT_ORDER_LIMIT as u64 {
            return Err(Error::Range(format!("order {v} exceeds {DIRECT_ORDER_LIMIT}")));
        }
        *o = v.unsigned_abs() as u32;
    }
    k.sort_unstable();
    Ok(k)
}

impl Integrals {
    pub fn new(direct: DirectQuadrature) -> Self {
        Self {
            direct,
            source: DiagonalSource::Direct,
            table: OnceLock::new(),
            diag: Mutex::new(HashMap::new()),
            sext: Mutex::new(HashMap::new()),
        }
    }

    pub fn with_source(mut self, source: DiagonalSource) -> Self {
        self.source = source;
        self
    }

    /// Supplies a prebuilt (for example disk-cached) table.
    pub fn with_table(self, table: Arc<QuadratureTable>) -> Self {
        let _ = self.table.set(table);
        self
    }

    pub fn direct(&self) -> &DirectQuadrature {
        &self.direct
    }

    pub fn source(&self) -> DiagonalSource {
        self.source
    }

    /// The table, built with order cap 532 on first use.
    pub fn table(&self) -> Result<Arc<QuadratureTable>> {
        if let Some(t) = self.table.get() {
            return Ok(t.clone());
        }
        let built = Arc::new(QuadratureTable::build(&self.direct.bessel, LEMMA8_ORDER_LIMIT)?);
        Ok(self.table.get_or_init(|| built).clone())
    }

    pub fn i_tilde(&self, k: i64, m: i64, n: i64) -> Result<IntegralValue> {
        let [a, b, c] = diag_key(k, m, n)?;
        self.table()?.i_tilde(a, b, c)
    }

    /// Memoised direct evaluation of a single sextet.
    pub fn i_direct(&self, idx: &SextetIndex) -> Result<IntegralValue> {
        self.prefetch_sextets(std::slice::from_ref(idx))?;
        Ok(self.sext.lock().unwrap()[&idx.canonical()])
    }

    /// Evaluates every missing sextet in one quadrature sweep.
    pub fn prefetch_sextets(&self, idx: &[SextetIndex]) -> Result<()> {
        let mut missing: Vec<[i32; 6]> = {
            let memo = self.sext.lock().unwrap();
            idx.iter().map(SextetIndex::canonical).filter(|k| !memo.contains_key(k)).collect()
        };
        missing.sort_unstable();
        missing.dedup();
        if missing.is_empty() {
            return Ok(());
        }
        let list: Vec<SextetIndex> = missing.iter().map(|k| SextetIndex(*k)).collect();
        let vals = self.direct.i_direct_many(&list)?;
        let mut memo = self.sext.lock().unwrap();
        for (k, v) in missing.into_iter().zip(vals) {
            memo.insert(k, v);
        }
        Ok(())
    }

    /// `I(n_1,n_1,n_2,n_2,n_3,n_3)`; signs and order of arguments are irrelevant.
    pub fn script_i(&self, n1: i64, n2: i64, n3: i64) -> Result<IntegralValue> {
        let key = diag_key(n1, n2, n3)?;
        self.prefetch_keys(vec![key])?;
        Ok(self.diag.lock().unwrap()[&key])
    }

    /// Fills the memo for many triples at once.
    pub fn prefetch(&self, triples: &[[i64; 3]]) -> Result<()> {
        let keys = triples.iter().map(|t| diag_key(t[0], t[1], t[2])).collect::<Result<Vec<_>>>()?;
        self.prefetch_keys(keys)
    }

    fn prefetch_keys(&self, keys: Vec<[u32; 3]>) -> Result<()> {
        let mut missing: Vec<[u32; 3]> = {
            let memo = self.diag.lock().unwrap();
            keys.into_iter().filter(|k| !memo.contains_key(k)).collect()
        };
        missing.sort_unstable();
        missing.dedup();
        if missing.is_empty() {
            return Ok(());
        }
        let vals = match self.source {
            DiagonalSource::Direct => self.direct.diagonal_many(&missing)?,
            DiagonalSource::Lemma8Centered => {
                let table = self.table()?;
                let mut out = Vec::with_capacity(missing.len());
                let mut far = Vec::new();
                for k in &missing {
                    if k[2] <= LEMMA8_ORDER_LIMIT.min(table.order_cap()) {
                        let t = table.i_tilde(k[0], k[1], k[2])?;
                        let half = 0.5 * LEMMA8_ERROR;
                        out.push(Some(IntegralValue { value: t.value + half, error_bound: half, ..t }));
                    } else {
                        far.push(*k);
                        out.push(None);
                    }
                }
                let mut far_vals = self.direct.diagonal_many(&far)?.into_iter();
                out.into_iter().map(|v| v.unwrap_or_else(|| far_vals.next().unwrap())).collect()
            }
        };
        let mut memo = self.diag.lock().unwrap();
        for (k, v) in missing.into_iter().zip(vals) {
            memo.insert(k, v);
        }
        Ok(())
    }

    pub fn f(&self, n1: i64, n2: i64, n3: i64) -> Result<FValue> {
        let num = self.script_i(0, 0, 0)?;
        let den = self.script_i(n1, n2, n3)?;
        if !(den.lo() > 0.0) {
            return Err(Error::Infeasible(format!(
                "I({n1},{n2},{n3}) = {} +- {} is not bounded away from zero",
                den.value, den.error_bound
            )));
        }
        Ok(FValue { value: num.value / den.value, lo: num.lo() / den.hi(), hi: num.hi() / den.lo() })
    }

    /// `(2 pi)^4 int_0^inf J_0^6 r dr`.
    pub fn c_opt(&self) -> Result<IntegralValue> {
        let v = self.i_direct(&SextetIndex::zero())?;
        let s = (2.0 * PI).powi(4);
        Ok(IntegralValue { value: s * v.value, error_bound: s * v.error_bound, ..v })
    }

    /// `sqrt(I(n1,n2,n3) I(n4,n5,n6))` from the upper interval ends.
    pub fn cauchy_schwarz_bound(&self, idx: &SextetIndex) -> Result<f64> {
        let n = idx.orders().map(i64::from);
        let a = self.script_i(n[0], n[1], n[2])?;
        let b = self.script_i(n[3], n[4], n[5])?;
        Ok((a.hi() * b.hi()).sqrt())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> Integrals {
        Integrals::new(DirectQuadrature::with_r_max(300.0))
    }

    #[test]
    fn script_i_sign_and_permutation_invariant() {
        let e = quick();
        let a = e.script_i(-3, 2, 0).unwrap();
        assert_eq!(a, e.script_i(3, 2, 0).unwrap());
        assert_eq!(a, e.script_i(0, -3, -2).unwrap());
        assert!(e.script_i(533, 0, 0).is_err());
    }

    #[test]
    fn f_of_origin_is_one() {
        let f = quick().f(0, 0, 0).unwrap();
        assert_eq!(f.value, 1.0);
        assert!(f.lo < 1.0 && f.hi > 1.0);
    }

    #[test]
    fn cauchy_schwarz_on_all_small_sextets() {
        // I depends only on the multiset of orders; check it against the
        // minimum bound over all 3+3 splits.
        let e = Integrals::new(DirectQuadrature::with_r_max(200.0));
        let vals: Vec<i64> = (-6..=6).collect();
        let mut sextets = Vec::new();
        let mut cur = Vec::new();
        fn rec(vals: &[i64], start: usize, cur: &mut Vec<i64>, out: &mut Vec<[i64; 6]>) {
            if cur.len() == 6 {
                out.push(cur.clone().try_into().unwrap());
                return;
            }
            for i in start..vals.len() {
                cur.push(vals[i]);
                rec(vals, i, cur, out);
                cur.pop();
            }
        }
        rec(&vals, 0, &mut cur, &mut sextets);
        let idx: Vec<_> = sextets.iter().map(|s| SextetIndex::new(*s).unwrap()).collect();
        e.prefetch_sextets(&idx).unwrap();
        let mut diag = Vec::new();
        for a in 0..=6 {
            for b in a..=6 {
                for c in b..=6 {
                    diag.push([a, b, c]);
                }
            }
        }
        e.prefetch(&diag).unwrap();
        let err = e.direct().error_bound();
        for s in &sextets {
            let v = e.i_direct(&SextetIndex::new(*s).unwrap()).unwrap().value;
            for mask in 0u32..64 {
                if mask.count_ones() != 3 {
                    continue;
                }
                let (mut l, mut r) = (Vec::new(), Vec::new());
                for (i, n) in s.iter().enumerate() {
                    if mask & (1 << i) != 0 {
                        l.push(*n)
                    } else {
                        r.push(*n)
                    }
                }
                let b = e
                    .cauchy_schwarz_bound(&SextetIndex::from_triples([l[0], l[1], l[2]], [r[0], r[1], r[2]]).unwrap())
                    .unwrap();
                assert!(v <= b + err, "{s:?}");
            }
        }
    }

    #[test]
    fn lemma8_centered_source() {
        let e = Integrals::new(DirectQuadrature::with_r_max(300.0)).with_source(DiagonalSource::Lemma8Centered);
        let v = e.script_i(0, 0, 0).unwrap();
        assert_eq!(v.method, Method::QuadratureLemma8);
        assert_eq!(v.error_bound, 5e-3);
        let t = e.i_tilde(0, 0, 0).unwrap();
        assert_eq!(v.value, t.value + 5e-3);
    }
}
