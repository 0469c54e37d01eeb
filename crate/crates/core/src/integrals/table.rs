//! The 1001-node discrete approximation to the diagonal integrals, built on
//! the zeros of `J_1`.

use std::io::{Read, Write};

use crate::bessel::{BesselConfig, ZeroSequence, MAX_ORDER};
use crate::error::{Error, Result};
use crate::numeric::KahanSum;

use super::{IntegralValue, Method};

pub const TABLE_NODES: usize = 1001;
/// Largest order for which the table sum carries the 1e-2 guarantee.
pub const LEMMA8_ORDER_LIMIT: u32 = 532;
pub const LEMMA8_ERROR: f64 = 1e-2;

const MAGIC: &[u8; 8] = b"LACUNAQT";
const VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureTable {
    zeros: ZeroSequence,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    order_cap: u32,
    /// Row-major `J_k(nodes[r])` for `k <= order_cap`.
    cache: Vec<f64>,
}

pub fn build_table(order_cap: u32) -> Result<QuadratureTable> {
    QuadratureTable::build(&BesselConfig::default(), order_cap)
}

impl QuadratureTable {
    pub fn build(cfg: &BesselConfig, order_cap: u32) -> Result<Self> {
        if order_cap > MAX_ORDER {
            return Err(Error::Range(format!("order_cap {order_cap} exceeds {MAX_ORDER}")));
        }
        let zeros = cfg.j1_zeros(TABLE_NODES)?;
        let width = order_cap as usize + 1;
        let mut cache = vec![0.0; TABLE_NODES * width];
        let nodes: Vec<f64> = zeros.zeros().iter().map(|s| s / 3.0).collect();
        for (row, &x) in cache.chunks_mut(width).zip(&nodes) {
            cfg.batch_into(x, row)?;
        }
        Self::assemble(zeros, order_cap, cache)
    }

    fn assemble(zeros: ZeroSequence, order_cap: u32, cache: Vec<f64>) -> Result<Self> {
        let nodes = zeros.zeros().iter().map(|s| s / 3.0).collect();
        let mut weights = Vec::with_capacity(zeros.count());
        for (r, &j0) in zeros.j0_at_zeros().iter().enumerate() {
            if !(j0.abs() > 1e-3) {
                return Err(Error::ZeroFinding { r, reason: format!("|J_0(sigma_r)| = {j0:e} too small") });
            }
            weights.push((2.0 / 9.0) / (j0 * j0));
        }
        Ok(Self { zeros, nodes, weights, order_cap, cache })
    }

    pub fn order_cap(&self) -> u32 {
        self.order_cap
    }

    pub fn zeros(&self) -> &ZeroSequence {
        &self.zeros
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Cached `J_0 .. J_{order_cap}` at node `r`.
    pub fn row(&self, r: usize) -> &[f64] {
        let w = self.order_cap as usize + 1;
        &self.cache[r * w..(r + 1) * w]
    }

    /// `(2/9) sum_r J_k^2 J_m^2 J_n^2 (sigma_r/3) / J_0^2(sigma_r)`.
    ///
    /// Carries the 1e-2 bound only for orders up to the smaller of the cap
    /// and 532; past 532 the value is returned but flagged as unguaranteed.
    pub fn i_tilde(&self, k: u32, m: u32, n: u32) -> Result<IntegralValue> {
        let top = k.max(m).max(n);
        if top > self.order_cap {
            return Err(Error::Range(format!("order {top} exceeds table cap {}", self.order_cap)));
        }
        // Fixed multiplication order keeps the result bitwise symmetric.
        let mut ord = [k as usize, m as usize, n as usize];
        ord.sort_unstable();
        let [k, m, n] = ord;
        let mut s = KahanSum::new();
        for (r, w) in self.weights.iter().enumerate() {
            let row = self.row(r);
            let p = row[k] * row[m] * row[n];
            s.add(w * p * p);
        }
        Ok(IntegralValue {
            value: s.value(),
            error_bound: LEMMA8_ERROR,
            method: Method::QuadratureLemma8,
            guaranteed: top <= LEMMA8_ORDER_LIMIT,
        })
    }

    pub fn write_to<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        w.write_all(MAGIC)?;
        w.write_all(&VERSION.to_le_bytes())?;
        w.write_all(&(self.zeros.count() as u64).to_le_bytes())?;
        w.write_all(&self.order_cap.to_le_bytes())?;
        for v in self.zeros.zeros().iter().chain(self.zeros.j0_at_zeros()).chain(&self.cache) {
            w.write_all(&v.to_le_bytes())?;
        }
        w.flush()
    }

    pub fn read_from<R: Read>(mut r: R) -> Result<Self> {
        let bad = |reason: &str| Error::Cache { path: String::new(), reason: reason.to_string() };
        let mut magic = [0u8; 8];
        r.read_exact(&mut magic)?;
        if &magic != MAGIC {
            return Err(bad("bad magic"));
        }
        let mut u4 = [0u8; 4];
        let mut u8b = [0u8; 8];
        r.read_exact(&mut u4)?;
        if u32::from_le_bytes(u4) != VERSION {
            return Err(bad("unsupported version"));
        }
        r.read_exact(&mut u8b)?;
        let count = u64::from_le_bytes(u8b) as usize;
        if count != TABLE_NODES {
            return Err(bad("unexpected node count"));
        }
        r.read_exact(&mut u4)?;
        let order_cap = u32::from_le_bytes(u4);
        if order_cap > MAX_ORDER {
            return Err(bad("order cap out of range"));
        }
        let mut read_vec = |len: usize| -> Result<Vec<f64>> {
            let mut buf = vec![0u8; len * 8];
            r.read_exact(&mut buf)?;
            Ok(buf.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().unwrap())).collect())
        };
        let zeros = read_vec(count)?;
        let j0 = read_vec(count)?;
        let cache = read_vec(count * (order_cap as usize + 1))?;
        let mut trailing = [0u8; 1];
        if r.read(&mut trailing)? != 0 {
            return Err(bad("trailing bytes"));
        }
        Self::assemble(ZeroSequence::from_parts(zeros, j0), order_cap, cache)
    }
}
