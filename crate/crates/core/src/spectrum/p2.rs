use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::SpectrumSet;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct P2Report {
    pub holds: bool,
    /// Smallest non-zero `D` (positive first) with two different pairs, and those pairs.
    pub witness: Option<(i128, [i128; 2], [i128; 2])>,
}

/// Every non-zero pair sum must have a single representation; `D = 0` is
/// always allowed.
pub fn is_p2_set(a: &SpectrumSet) -> P2Report {
    let el = a.elements();
    let mut pairs: BTreeMap<i128, Vec<[i128; 2]>> = BTreeMap::new();
    for i in 0..el.len() {
        for j in i..el.len() {
            pairs.entry(el[i] + el[j]).or_default().push([el[i], el[j]]);
        }
    }
    let witness = pairs
        .into_iter()
        .filter(|(d, p)| *d != 0 && p.len() > 1)
        .min_by_key(|(d, _)| (d.abs(), *d < 0))
        .map(|(d, p)| (d, p[0], p[1]));
    P2Report { holds: witness.is_none(), witness }
}
