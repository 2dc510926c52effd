use std::collections::BTreeMap;

use spectral::{add, collapse_page, sub, BigradedGroup, Pos};
use zdiagrams::{default_budget, kernel_diagram, limit_and_lim1, Filtrations};
use zlinalg::{subquotient, Hom, LinalgError, Subgroup};

use crate::extension::{classify, map_on, Label};
use crate::pages::{infinity_at, to_spectral_sequence};
use crate::{internal, ExactCouple, ExcoupleError};

/// The couple built from the limit filtration of `D(n+σ)`: `D(1)` on the
/// diagonal `n` is `F^{r+1}` at index `r`, `E(1)_{x+b} = Z∞/Im j_x`, `j(1)`
/// is `M` after the quotient `F^{r+1} → ε^w`, and `k(1) = 0`.
#[derive(Clone, Debug)]
pub struct Lim1Report {
    pub n: i64,
    pub couple: ExactCouple,
    pub valid: bool,
    /// `lim¹` of the filtration diagram, of the kernel diagrams of `D(n+σ)`
    /// and of the cycle towers all vanish.
    pub lim1_columns_zero: bool,
    /// The new couple classifies as matching the colimit.
    pub matches_colimit: bool,
    pub collapse_page: Option<i64>,
    /// The limit filtration of the new diagonal is zero.
    pub upper_filtration_zero: bool,
}

impl Lim1Report {
    pub fn holds(&self) -> bool {
        self.valid && self.lim1_columns_zero && self.matches_colimit && self.collapse_page == Some(1) && self.upper_filtration_zero
    }
}

pub fn lim1_couple(c: &ExactCouple, n: i64) -> Result<Lim1Report, ExcoupleError> {
    let bd = *c.bidegrees();
    let nw = n + bd.sigma();
    let dw = c.diagonal(nw);
    let budget = default_budget(dw);
    let fu = Filtrations::new(dw)?;
    let (upper, incl) = fu.upper_diagram()?;
    let d1 = upper.shift(-1);
    let mut lim1_zero = limit_and_lim1(&upper)?.lim1().is_trivial();
    for r in dw.lo()..=dw.hi() {
        lim1_zero &= limit_and_lim1(&kernel_diagram(dw, r, budget)?.kernel)?.lim1().is_trivial();
    }

    let mut e = BTreeMap::new();
    let mut j = BTreeMap::new();
    let ys: Vec<Pos> = c.e().support().filter(|&y| bd.n_of(sub(y, bd.b)) == n).collect();
    for &y in &ys {
        let x = sub(y, bd.b);
        let w = add(y, bd.c);
        let r = bd.r_of(x);
        debug_assert_eq!(bd.r_of(w), r);
        let inf = infinity_at(c, y, None)?;
        let imj = c.j_map(x).image();
        let zj = subquotient(&inf.cycles, &imj)?;
        let tower_lim1 = crate::extension::extension_report(c, x, None)?.lim1_tower;
        lim1_zero &= tower_lim1.is_trivial();
        if zj.group().is_trivial() {
            continue;
        }
        let g = d1.group_at(r);
        let to_lim = incl.component(r + 1);
        let rho = fu.limit.rho(r);
        let ky = c.k_map(y);
        let dom = subquotient(&Subgroup::whole(&g), &Subgroup::zero(&g))?;
        let h = map_on(&dom, &zj, "j(1)", |u| {
            let v = rho.apply(&to_lim.apply(u));
            ky.solve(&v).map_err(|err| match err {
                LinalgError::Absent => internal(format!("ρ(F^{}) leaves Im k at {w:?}", r + 1)),
                other => other.into(),
            })
        })?;
        e.insert(y, zj.group().clone());
        if !h.is_zero() {
            j.insert(x, h);
        }
    }
    let e = BigradedGroup::new(*c.support(), e)?;
    let couple = ExactCouple::from_parts(bd, e, [(n, d1.clone())].into(), j, BTreeMap::<Pos, Hom>::new())?;
    let valid = couple.validate().is_ok();

    let matches_colimit = classify(&couple, None)?.label == Label::MatchesColimit;
    let ss = to_spectral_sequence(&couple)?;
    let f1 = Filtrations::new(couple.diagonal(n))?;
    let d = couple.diagonal(n);
    let upper_filtration_zero = (d.lo()..=d.hi() + 1).all(|r| f1.upper(r).is_zero());
    Ok(Lim1Report {
        n,
        couple,
        valid,
        lim1_columns_zero: lim1_zero,
        matches_colimit,
        collapse_page: collapse_page(&ss),
        upper_filtration_zero,
    })
}
