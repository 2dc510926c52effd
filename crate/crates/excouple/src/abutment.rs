use spectral::Pos;
use zdiagrams::{Filtrations, ZDiagram};
use zlinalg::FPAbGroup;

use crate::{ExactCouple, ExcoupleError};

/// Colimit and limit of the diagonal `D(n)` with their filtrations.
#[derive(Clone, Debug)]
pub struct AbutmentData {
    pub n: i64,
    pub diagram: ZDiagram,
    pub filtrations: Filtrations,
}

impl AbutmentData {
    pub fn colimit(&self) -> &FPAbGroup {
        self.filtrations.colimit.group()
    }

    pub fn limit(&self) -> &FPAbGroup {
        self.filtrations.limit.group()
    }

    pub fn lim1(&self) -> &FPAbGroup {
        self.filtrations.limit.lim1()
    }

    /// Indices `r` over which the filtrations can still move.
    pub fn range(&self) -> std::ops::RangeInclusive<i64> {
        self.diagram.lo()..=self.diagram.hi()
    }

    /// `(x, F_r/F_{r−1})` for the colimit filtration, non-zero terms only.
    pub fn lower_graded(&self, c: &ExactCouple) -> Vec<(Pos, FPAbGroup)> {
        self.range()
            .map(|r| (c.bidegrees().pos(self.n, r), self.filtrations.eps_lower(r).group().clone()))
            .filter(|(_, g)| !g.is_trivial())
            .collect()
    }

    /// `(x, F^{r+1}/F^r)` for the limit filtration, non-zero terms only.
    pub fn upper_graded(&self, c: &ExactCouple) -> Vec<(Pos, FPAbGroup)> {
        self.range()
            .map(|r| (c.bidegrees().pos(self.n, r), self.filtrations.eps_upper(r).group().clone()))
            .filter(|(_, g)| !g.is_trivial())
            .collect()
    }
}

pub fn abutments(c: &ExactCouple, n: i64) -> Result<AbutmentData, ExcoupleError> {
    let diagram = c.diagonal(n).clone();
    let filtrations = Filtrations::new(&diagram)?;
    Ok(AbutmentData { n, diagram, filtrations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::demos;

    fn pair(c: &ExactCouple) -> (FPAbGroup, FPAbGroup) {
        (abutments(c, 0).unwrap().colimit().clone(), abutments(c, -1).unwrap().limit().clone())
    }

    #[test]
    fn demo_abutments() {
        let z = FPAbGroup::z_mod;
        let cases = [
            (demos::couple1(), z(6), FPAbGroup::zero()),
            (demos::couple2(), z(2), z(3)),
            (demos::couple3(), FPAbGroup::zero(), z(6)),
        ];
        for (c, l0, l1) in cases {
            let (a, b) = pair(&c);
            assert!(a.isomorphic(&l0) && b.isomorphic(&l1));
        }
        let c = demos::couple2();
        let g = abutments(&c, 0).unwrap().lower_graded(&c);
        assert_eq!(g.len(), 1);
        assert_eq!(g[0].0, (0, 0));
        assert!(g[0].1.isomorphic(&z(2)));
    }
}
