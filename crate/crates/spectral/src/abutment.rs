use std::collections::BTreeMap;

use zlinalg::{subquotient, FPAbGroup, Subgroup, Subquotient};

use crate::{BigradedGroup, Bounds, Pos, SpecError};

/// An increasing filtration `… ⊆ F_{p−1} ⊆ F_p ⊆ …` of one group, given on
/// `[lo, lo + len)`; it is `0` below and constant above.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Filtration {
    group: FPAbGroup,
    lo: i64,
    steps: Vec<Subgroup>,
}

impl Filtration {
    pub fn new(group: FPAbGroup, lo: i64, steps: Vec<Subgroup>) -> Result<Self, SpecError> {
        let mut prev = Subgroup::zero(&group);
        for (i, s) in steps.iter().enumerate() {
            if s.ambient() != &group || !prev.is_subset(s)? {
                return Err(SpecError::InvalidInput(format!("filtration is not increasing at {}", lo + i as i64)));
            }
            prev = s.clone();
        }
        Ok(Filtration { group, lo, steps })
    }

    /// The filtration `0 ⊆ L` jumping at `p`.
    pub fn trivial(group: FPAbGroup, p: i64) -> Self {
        Filtration { steps: vec![Subgroup::whole(&group)], group, lo: p }
    }

    pub fn group(&self) -> &FPAbGroup {
        &self.group
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.steps.len() as i64 - 1
    }

    pub fn at(&self, p: i64) -> Subgroup {
        if p < self.lo || self.steps.is_empty() {
            Subgroup::zero(&self.group)
        } else {
            self.steps[((p - self.lo) as usize).min(self.steps.len() - 1)].clone()
        }
    }

    /// `F_p / F_{p−1}`.
    pub fn graded(&self, p: i64) -> Subquotient {
        subquotient(&self.at(p), &self.at(p - 1)).expect("filtration is increasing")
    }

    pub fn is_exhaustive(&self) -> bool {
        self.at(self.hi()).is_whole()
    }
}

/// Filtered groups `L_n`, one per total degree.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FilteredAbutment {
    pub degrees: BTreeMap<i64, Filtration>,
}

impl FilteredAbutment {
    pub fn new() -> Self {
        FilteredAbutment::default()
    }

    pub fn insert(&mut self, n: i64, f: Filtration) {
        self.degrees.insert(n, f);
    }

    pub fn get(&self, n: i64) -> Option<&Filtration> {
        self.degrees.get(&n)
    }

    pub fn group(&self, n: i64) -> FPAbGroup {
        self.degrees.get(&n).map(|f| f.group().clone()).unwrap_or_else(FPAbGroup::zero)
    }

    /// `F_{p, n−p} / F_{p−1, n−p+1}` placed at `(p, n − p)`, inside `bounds`.
    pub fn associated_graded(&self, bounds: Bounds) -> Result<BigradedGroup, SpecError> {
        let mut groups: BTreeMap<Pos, FPAbGroup> = BTreeMap::new();
        for (&n, f) in &self.degrees {
            for p in f.lo()..=f.hi() {
                let g = f.graded(p).group().clone();
                if g.is_trivial() {
                    continue;
                }
                let x = (p, n - p);
                if !bounds.contains(x) {
                    return Err(SpecError::InvalidInput(format!("graded piece at {x:?} lies outside the bounds")));
                }
                groups.insert(x, g);
            }
        }
        BigradedGroup::new(bounds, groups)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use zlinalg::elem;

    #[test]
    fn k_filtration_of_z() {
        let z = FPAbGroup::z();
        let f = Filtration::new(z.clone(), 0, vec![Subgroup::from_generators(&z, &[elem(&[5])]), Subgroup::whole(&z)]).unwrap();
        assert_eq!(f.graded(0).group(), &FPAbGroup::z());
        assert_eq!(f.graded(1).group(), &FPAbGroup::z_mod(5));
        assert!(f.graded(2).group().is_trivial() && f.is_exhaustive());
        let mut l = FilteredAbutment::new();
        l.insert(1, f);
        let b = Bounds::new((0, 1), (0, 1)).unwrap();
        let g = l.associated_graded(b).unwrap();
        assert_eq!(g.get((0, 1)), FPAbGroup::z());
        assert_eq!(g.get((1, 0)), FPAbGroup::z_mod(5));
        assert!(Filtration::new(z.clone(), 0, vec![Subgroup::whole(&z), Subgroup::zero(&z)]).is_err());
    }
}
