use std::collections::BTreeMap;

use spectral::{BigradedGroup, Bounds, Pos};
use zdiagrams::{TailSpec, ZDiagram};
use zlinalg::{induced_map, subquotient, FPAbGroup, Hom, Subgroup, Subquotient};

use crate::{Bidegrees, ExactCouple, ExcoupleError};

/// A bounded chain complex `d_n : C_n → C_{n−1}` with an increasing
/// filtration `F_p C_n`, zero below `p0` and listed from `p0` on. Beyond the
/// listed steps `F_p C_n = C_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilteredComplex {
    pub groups: BTreeMap<i64, FPAbGroup>,
    pub d: BTreeMap<i64, Hom>,
    pub p0: i64,
    pub filtration: BTreeMap<i64, Vec<Subgroup>>,
}

impl FilteredComplex {
    pub fn group(&self, n: i64) -> FPAbGroup {
        self.groups.get(&n).cloned().unwrap_or_else(FPAbGroup::zero)
    }

    pub fn d_at(&self, n: i64) -> Hom {
        self.d.get(&n).cloned().unwrap_or_else(|| Hom::zero(&self.group(n), &self.group(n - 1)))
    }

    /// `F_p C_n`.
    pub fn f(&self, n: i64, p: i64) -> Subgroup {
        let g = self.group(n);
        if p < self.p0 {
            return Subgroup::zero(&g);
        }
        match self.filtration.get(&n).and_then(|s| s.get((p - self.p0) as usize)) {
            Some(s) => s.clone(),
            None => Subgroup::whole(&g),
        }
    }

    /// First stage at which every `F_p C_n` is all of `C_n`.
    pub fn p_top(&self) -> i64 {
        self.p0 + self.filtration.values().map(Vec::len).max().unwrap_or(0) as i64
    }

    fn degrees(&self) -> Option<(i64, i64)> {
        Some((*self.groups.keys().next()?, *self.groups.keys().next_back()?))
    }

    /// `H_n(F_p C)`.
    pub fn d_subquotient(&self, n: i64, p: i64) -> Result<Subquotient, ExcoupleError> {
        let z = self.d_at(n).kernel().intersect(&self.f(n, p))?;
        let b = self.f(n + 1, p).image_under(&self.d_at(n + 1))?;
        Ok(subquotient(&z, &b)?)
    }

    /// `H_n(F_p C / F_{p−1} C)`.
    pub fn e_subquotient(&self, n: i64, p: i64) -> Result<Subquotient, ExcoupleError> {
        let dn = self.d_at(n);
        let z = self.f(n, p).intersect(&dn.preimage(&self.f(n - 1, p - 1))?)?;
        let b = self.f(n, p - 1).sum(&self.f(n + 1, p).image_under(&self.d_at(n + 1))?)?;
        Ok(subquotient(&z, &b)?)
    }

    pub fn check(&self) -> Result<(), ExcoupleError> {
        let Some((lo, hi)) = self.degrees() else { return Ok(()) };
        for (&n, h) in &self.d {
            if h.domain() != &self.group(n) || h.codomain() != &self.group(n - 1) {
                return Err(ExcoupleError::InvalidInput(format!("d_{n} should map C_{n} to C_{}", n - 1)));
            }
        }
        for (&n, steps) in &self.filtration {
            if steps.iter().any(|s| s.ambient() != &self.group(n)) {
                return Err(ExcoupleError::InvalidInput(format!("filtration of C_{n} lives in another group")));
            }
        }
        for n in lo..=hi + 1 {
            if !self.d_at(n - 1).compose(&self.d_at(n))?.is_zero() {
                return Err(ExcoupleError::NotAComplex { degree: n });
            }
        }
        for n in lo..=hi {
            for p in self.p0..=self.p_top() {
                let nested = self.f(n, p - 1).is_subset(&self.f(n, p))?;
                let kept = self.f(n, p).image_under(&self.d_at(n))?.is_subset(&self.f(n - 1, p))?;
                if !nested || !kept {
                    return Err(ExcoupleError::NotFiltered { degree: n, p });
                }
            }
        }
        Ok(())
    }
}

/// The couple `D_{p,q} = H_{p+q}(F_p C)`, `E_{p,q} = H_{p+q}(F_p C/F_{p−1} C)`
/// with `i` and `j` induced by the identity and `k` by `d`.
pub fn couple_from_filtered_complex(fc: &FilteredComplex) -> Result<ExactCouple, ExcoupleError> {
    fc.check()?;
    let bd = Bidegrees::homological();
    let Some((lo, hi)) = fc.degrees() else { return ExactCouple::zero(bd) };
    let (p0, p1) = (fc.p0, fc.p_top());
    let pos = |n: i64, p: i64| -> Pos { (p, n - p) };
    let mut dsq = BTreeMap::new();
    let mut esq = BTreeMap::new();
    for n in lo..=hi {
        for p in p0..=p1 {
            dsq.insert((n, p), fc.d_subquotient(n, p)?);
            esq.insert((n, p), fc.e_subquotient(n, p)?);
        }
    }
    let id = |n: i64| Hom::identity(&fc.group(n));
    let mut diagonals = BTreeMap::new();
    for n in lo..=hi {
        let groups = (p0..=p1).map(|p| dsq[&(n, p)].group().clone()).collect();
        let maps = (p0..p1)
            .map(|p| induced_map(&dsq[&(n, p)], &dsq[&(n, p + 1)], &id(n)))
            .collect::<Result<Vec<_>, _>>()?;
        diagonals.insert(n, ZDiagram::new(p0 - n, groups, maps, TailSpec::Zero, TailSpec::Constant)?);
    }
    let mut e = BTreeMap::new();
    let mut j = BTreeMap::new();
    let mut k = BTreeMap::new();
    for n in lo..=hi {
        for p in p0..=p1 {
            let x = pos(n, p);
            let es = &esq[&(n, p)];
            e.insert(x, es.group().clone());
            j.insert(x, induced_map(&dsq[&(n, p)], es, &id(n))?);
            if p > p0 && n > lo {
                k.insert(x, induced_map(es, &dsq[&(n - 1, p - 1)], &fc.d_at(n))?);
            }
        }
    }
    let bounds = Bounds::new((p0, p1), (lo - p1, hi - p0))?;
    ExactCouple::from_parts(bd, BigradedGroup::new(bounds, e)?, diagonals, j, k)
}
