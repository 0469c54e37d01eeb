use serde::{Deserialize, Serialize};

use super::{enumerate_reps, Family, SpectrumSet, TripleRep};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PointClass {
    Unique,
    Trivial,
    Exception,
}

/// `A1`: both representations repeat an element. `A2`: one does not.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Subtype {
    A1,
    A2,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifiedPoint {
    pub d: i128,
    /// All representations, ascending.
    pub reps: Vec<TripleRep>,
    pub class: PointClass,
    pub subtype: Option<Subtype>,
    /// Lemma families this point belongs to; filled by the lemma route.
    pub families: Vec<Family>,
    pub boundary_safe: bool,
}

impl ClassifiedPoint {
    /// Representations not of the form `{D, m, -m}`.
    pub fn nontrivial_reps(&self, a: &SpectrumSet) -> Vec<TripleRep> {
        let d_in_a = a.contains(self.d);
        self.reps.iter().copied().filter(|r| !(d_in_a && r.is_trivial_for(self.d))).collect()
    }

    /// The two essentially different representations of an exception. A
    /// trivial one, if present, is reported as `{D, 0, 0}`.
    pub fn essential_pair(&self, a: &SpectrumSet) -> Option<(TripleRep, TripleRep)> {
        if self.class != PointClass::Exception {
            return None;
        }
        let mut ess = self.nontrivial_reps(a);
        if ess.len() < self.reps.len() {
            ess.push(TripleRep::new([self.d, 0, 0]));
        }
        ess.sort();
        Some((ess[0], ess[1]))
    }
}

/// Classifies every triple sum of the truncation.
///
/// The count of essentially different representations is the number of
/// non-trivial ones plus one if any trivial representation exists.
pub fn classify_brute_force(a: &SpectrumSet) -> Result<Vec<ClassifiedPoint>> {
    let en = enumerate_reps(a, 0)?;
    let mut out = Vec::with_capacity(en.points.len());
    for (&d, reps) in &en.points {
        let d_in_a = a.contains(d);
        let trivial = reps.iter().filter(|r| d_in_a && r.is_trivial_for(d)).count();
        let essential = reps.len() - trivial + (trivial > 0) as usize;
        let class = match essential {
            1 if trivial > 0 => PointClass::Trivial,
            1 => PointClass::Unique,
            2 => PointClass::Exception,
            count => return Err(Error::StructureViolation { d, count }),
        };
        let mut p = ClassifiedPoint {
            d,
            reps: reps.clone(),
            class,
            subtype: None,
            families: Vec::new(),
            boundary_safe: en.is_safe(d),
        };
        if class == PointClass::Exception {
            let (x, y) = p.essential_pair(a).unwrap();
            p.subtype = Some(if x.has_repeat() && y.has_repeat() { Subtype::A1 } else { Subtype::A2 });
        }
        out.push(p);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn safe_exceptions(a: &SpectrumSet) -> Vec<i128> {
        classify_brute_force(a)
            .unwrap()
            .into_iter()
            .filter(|p| p.class == PointClass::Exception && p.boundary_safe)
            .map(|p| p.d)
            .collect()
    }

    #[test]
    fn a5_and_a4_examples() {
        let a5 = SpectrumSet::geometric(5, 4, 1).unwrap();
        assert_eq!(safe_exceptions(&a5), vec![-75, -15, -3, 3, 15, 75]);
        let a4 = SpectrumSet::geometric(4, 4, 1).unwrap();
        assert_eq!(safe_exceptions(&a4), vec![-48, -32, -12, -8, -3, -2, 2, 3, 8, 12, 32, 48]);
    }

    #[test]
    fn small_sets() {
        let a = SpectrumSet::new(vec![0, 1]).unwrap();
        let pts = classify_brute_force(&a).unwrap();
        assert!(pts.iter().all(|p| p.class != PointClass::Exception));
        let zero = pts.iter().find(|p| p.d == 0).unwrap();
        assert_eq!(zero.class, PointClass::Trivial);
        let two = pts.iter().find(|p| p.d == 2).unwrap();
        assert_eq!(two.class, PointClass::Unique);
    }

    #[test]
    fn subtypes() {
        let a4 = SpectrumSet::geometric(4, 3, 1).unwrap();
        let pts = classify_brute_force(&a4).unwrap();
        let get = |d| pts.iter().find(|p| p.d == d).unwrap().subtype;
        // 2 = 1+1+0 = 4-1-1, 3 = 1+1+1 = 4-1+0
        assert_eq!(get(2), Some(Subtype::A1));
        assert_eq!(get(3), Some(Subtype::A2));
    }

    #[test]
    fn too_many_representations_is_an_error() {
        // ratio 2: 3 = 1+1+1 = 2+1+0 = 4-1+0 ...
        let a = SpectrumSet::new_unchecked(vec![0, 1, 2, 4]);
        assert!(matches!(classify_brute_force(&a), Err(Error::StructureViolation { .. })));
    }
}
