use std::collections::BTreeMap;

use zlinalg::Subgroup;

use crate::{colimit, limit_and_lim1, Limit, TailSpec, ZDiagram, ZMorphism, ZdError};

/// Iteration budget for stabilization: `2·width + 4`, or `SPECSEQ_BUDGET` when set.
pub fn default_budget(a: &ZDiagram) -> usize {
    std::env::var("SPECSEQ_BUDGET")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(2 * a.width() + 4)
}

/// `I^r_p = Im(A_{p−r} → A_p)`.
pub fn image_at(a: &ZDiagram, p: i64, r: usize) -> Subgroup {
    a.compose(p - r as i64, p).image()
}

/// `Ker(A_p → A_{p+r})`, so that `Q^r_p = A_p / Ker`.
pub fn quotient_kernel_at(a: &ZDiagram, p: i64, r: usize) -> Subgroup {
    a.compose(p, p + r as i64).kernel()
}

fn clamp_right(a: &ZDiagram, p: i64) -> Option<i64> {
    if p > a.hi() {
        match a.right() {
            TailSpec::Zero => None,
            TailSpec::Constant => Some(a.hi()),
        }
    } else {
        Some(p)
    }
}

fn clamp_left(a: &ZDiagram, p: i64) -> Option<i64> {
    if p < a.lo() {
        match a.left() {
            TailSpec::Zero => None,
            TailSpec::Constant => Some(a.lo()),
        }
    } else {
        Some(p)
    }
}

/// `I^ω_p = ∩_r I^r_p` with the stage from which the chain is constant. The
/// chain is certified stationary once `A_{p−r}` lies in the left tail.
pub fn i_omega_at(a: &ZDiagram, p: i64, budget: usize) -> Result<(Subgroup, usize), ZdError> {
    let Some(q) = clamp_right(a, p) else {
        return Ok((Subgroup::zero(&a.group_at(p)), 0));
    };
    let mut cur = Subgroup::whole(&a.group_at(q));
    let mut stage = 0;
    let mut r = 0usize;
    loop {
        let next = image_at(a, q, r);
        if next != cur {
            stage = r;
            cur = next;
        }
        if q - (r as i64) < a.lo() {
            return Ok((cur, stage));
        }
        r += 1;
        if r > budget {
            return Err(ZdError::BudgetExceeded { position: p, budget });
        }
    }
}

/// `Ker(A_p → colim A)` with the stage from which `Ker(A_p → A_{p+r})` is constant.
pub fn q_omega_kernel_at(a: &ZDiagram, p: i64, budget: usize) -> Result<(Subgroup, usize), ZdError> {
    let Some(q) = clamp_left(a, p) else {
        return Ok((Subgroup::zero(&a.group_at(p)), 0));
    };
    let mut cur = Subgroup::zero(&a.group_at(q));
    let mut stage = 0;
    let mut r = 0usize;
    loop {
        let next = quotient_kernel_at(a, q, r);
        if next != cur {
            stage = r;
            cur = next;
        }
        if q + r as i64 > a.hi() {
            return Ok((cur, stage));
        }
        r += 1;
        if r > budget {
            return Err(ZdError::BudgetExceeded { position: p, budget });
        }
    }
}

/// The image subdiagram `I^r A` with its inclusion into `A`.
pub fn image_sub_diagram(a: &ZDiagram, r: usize) -> Result<(ZDiagram, ZMorphism), ZdError> {
    a.sub_diagram(a.lo(), a.hi() + r as i64, |p| image_at(a, p, r))
}

/// The image quotient diagram `Q^r A` with the projection `A → Q^r A`.
pub fn image_quotient_diagram(a: &ZDiagram, r: usize) -> Result<(ZDiagram, ZMorphism), ZdError> {
    a.quotient_diagram(a.lo() - r as i64, a.hi(), |p| quotient_kernel_at(a, p, r))
}

pub fn i_omega_diagram(a: &ZDiagram, budget: usize) -> Result<(ZDiagram, ZMorphism), ZdError> {
    let subs = (a.lo()..=a.hi())
        .map(|p| i_omega_at(a, p, budget).map(|x| x.0))
        .collect::<Result<Vec<_>, _>>()?;
    let lo = a.lo();
    a.sub_diagram(a.lo(), a.hi(), |p| subs[(p - lo).clamp(0, subs.len() as i64 - 1) as usize].clone())
}

pub fn q_omega_diagram(a: &ZDiagram, budget: usize) -> Result<(ZDiagram, ZMorphism), ZdError> {
    let ks = (a.lo()..=a.hi())
        .map(|p| q_omega_kernel_at(a, p, budget).map(|x| x.0))
        .collect::<Result<Vec<_>, _>>()?;
    let lo = a.lo();
    a.quotient_diagram(a.lo(), a.hi(), |p| ks[(p - lo).clamp(0, ks.len() as i64 - 1) as usize].clone())
}

/// Stabilization data of the image towers over the padded window.
#[derive(Clone, Debug)]
pub struct ImageTowers {
    pub budget: usize,
    pub i_omega: BTreeMap<i64, Subgroup>,
    pub i_stage: BTreeMap<i64, usize>,
    pub q_omega_kernel: BTreeMap<i64, Subgroup>,
    pub q_stage: BTreeMap<i64, usize>,
    /// `Q^ω A → Q(Q^ω A)` is an isomorphism.
    pub q_omega_stable: bool,
    /// `Q^ω_p` agrees with `Im(A_p → colim A)`.
    pub q_omega_matches_colimit: bool,
}

pub fn image_towers(a: &ZDiagram, budget: usize) -> Result<ImageTowers, ZdError> {
    let mut t = ImageTowers {
        budget,
        i_omega: BTreeMap::new(),
        i_stage: BTreeMap::new(),
        q_omega_kernel: BTreeMap::new(),
        q_stage: BTreeMap::new(),
        q_omega_stable: false,
        q_omega_matches_colimit: true,
    };
    let col = colimit(a)?;
    for p in a.lo()..=a.hi() {
        let (s, st) = i_omega_at(a, p, budget)?;
        t.i_omega.insert(p, s);
        t.i_stage.insert(p, st);
        let (k, st) = q_omega_kernel_at(a, p, budget)?;
        if k != col.pi(p).kernel() {
            t.q_omega_matches_colimit = false;
        }
        t.q_omega_kernel.insert(p, k);
        t.q_stage.insert(p, st);
    }
    let (qw, _) = q_omega_diagram(a, budget)?;
    let (_, proj) = image_quotient_diagram(&qw, 1)?;
    t.q_omega_stable = proj.is_iso();
    Ok(t)
}

/// `Ī_p = Im(ρ_p : lim A → A_p)` over the padded window, together with the limit.
#[derive(Clone, Debug)]
pub struct StableImage {
    pub limit: Limit,
    pub subs: BTreeMap<i64, Subgroup>,
}

impl StableImage {
    pub fn at(&self, p: i64) -> Subgroup {
        self.limit.rho(p).image()
    }
}

pub fn stable_image(a: &ZDiagram) -> Result<StableImage, ZdError> {
    let limit = limit_and_lim1(a)?;
    let subs = (a.lo()..=a.hi()).map(|p| (p, limit.rho(p).image())).collect();
    Ok(StableImage { limit, subs })
}

/// Mittag-Leffler style conditions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MlReport {
    pub mittag_leffler: bool,
    pub co_mittag_leffler: bool,
    pub omega_ml: bool,
}

pub fn ml_conditions(a: &ZDiagram, budget: usize) -> Result<MlReport, ZdError> {
    let mut ml = true;
    let mut co = true;
    for p in a.lo()..=a.hi() {
        ml &= i_omega_at(a, p, budget).is_ok();
        co &= q_omega_kernel_at(a, p, budget).is_ok();
    }
    let omega_ml = if ml {
        let (iw, _) = i_omega_diagram(a, budget)?;
        let (_, incl) = image_sub_diagram(&iw, 1)?;
        incl.is_iso()
    } else {
        false
    };
    Ok(MlReport { mittag_leffler: ml, co_mittag_leffler: co, omega_ml })
}

#[cfg(test)]
mod tests {
    use super::*;
    use zlinalg::{elem, FPAbGroup, Hom};

    fn times(k: i64) -> Hom {
        let z = FPAbGroup::z();
        Hom::from_i64(&z, &z, &[vec![k]]).unwrap()
    }

    #[test]
    fn doubling_window() {
        // 0 → ℤ →(×2) ℤ, left tail Zero, right Constant
        let z = FPAbGroup::z();
        let a = ZDiagram::new(0, vec![z.clone(), z.clone()], vec![times(2)], TailSpec::Zero, TailSpec::Constant).unwrap();
        assert_eq!(image_at(&a, 1, 1), Subgroup::from_generators(&z, &[elem(&[2])]));
        assert!(image_at(&a, 1, 2).is_zero());
        assert!(i_omega_at(&a, 1, 8).unwrap().0.is_zero());
        assert!(i_omega_at(&a, 40, 8).unwrap().0.is_zero());
        let t = image_towers(&a, 8).unwrap();
        assert!(t.q_omega_stable && t.q_omega_matches_colimit);
    }

    #[test]
    fn mono_and_epi_towers() {
        let z = FPAbGroup::z();
        let a = ZDiagram::new(0, vec![z.clone(), z.clone()], vec![times(3)], TailSpec::Constant, TailSpec::Constant).unwrap();
        for r in 0..4 {
            let (_, proj) = image_quotient_diagram(&a, r).unwrap();
            assert!(proj.is_iso());
        }
        let z6 = FPAbGroup::z_mod(6);
        let z2 = FPAbGroup::z_mod(2);
        let e = Hom::from_i64(&z6, &z2, &[vec![1]]).unwrap();
        let b = ZDiagram::new(0, vec![z6, z2], vec![e], TailSpec::Constant, TailSpec::Constant).unwrap();
        for r in 0..4 {
            let (_, incl) = image_sub_diagram(&b, r).unwrap();
            assert!(incl.is_iso());
        }
    }

    #[test]
    fn stable_image_of_times_six() {
        let z = FPAbGroup::z();
        let a = ZDiagram::new(0, vec![z.clone(), z.clone()], vec![times(6)], TailSpec::Constant, TailSpec::Constant).unwrap();
        let s = stable_image(&a).unwrap();
        let six = Subgroup::from_generators(&z, &[elem(&[6])]);
        assert_eq!(s.at(1), six);
        assert_eq!(i_omega_at(&a, 1, 8).unwrap().0, six);
        let m = ml_conditions(&a, 8).unwrap();
        assert!(m.mittag_leffler && m.co_mittag_leffler && m.omega_ml);
    }

    #[test]
    fn budget_is_enforced() {
        let z = FPAbGroup::z();
        let groups = vec![z.clone(); 6];
        let maps = vec![times(2); 5];
        let a = ZDiagram::new(0, groups, maps, TailSpec::Constant, TailSpec::Constant).unwrap();
        assert!(matches!(i_omega_at(&a, 5, 2), Err(ZdError::BudgetExceeded { .. })));
        assert!(i_omega_at(&a, 5, default_budget(&a)).is_ok());
    }
}
