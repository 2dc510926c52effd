use zlinalg::{Elem, FPAbGroup, Hom, IntMatrix};

use crate::{ZDiagram, ZMorphism, ZdError};

/// `colim A` with its cocone `π_p : A_p → colim A`.
#[derive(Clone, Debug)]
pub struct Colimit {
    group: FPAbGroup,
    lo: i64,
    pis: Vec<Hom>,
}

impl Colimit {
    pub fn group(&self) -> &FPAbGroup {
        &self.group
    }

    pub fn pi(&self, p: i64) -> Hom {
        let i = (p - self.lo).clamp(0, self.pis.len() as i64 - 1) as usize;
        self.pis[i].clone()
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.pis.len() as i64 - 1
    }
}

/// `lim A` with its cone `ρ_p : lim A → A_p` and `lim¹ A`.
#[derive(Clone, Debug)]
pub struct Limit {
    group: FPAbGroup,
    lo: i64,
    rhos: Vec<Hom>,
    lim1: FPAbGroup,
}

impl Limit {
    pub fn group(&self) -> &FPAbGroup {
        &self.group
    }

    pub fn lim1(&self) -> &FPAbGroup {
        &self.lim1
    }

    pub fn rho(&self, p: i64) -> Hom {
        let i = (p - self.lo).clamp(0, self.rhos.len() as i64 - 1) as usize;
        self.rhos[i].clone()
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.rhos.len() as i64 - 1
    }
}

fn offsets(groups: &[FPAbGroup]) -> Vec<usize> {
    let mut out = vec![0];
    for g in groups {
        out.push(out.last().unwrap() + g.ngens());
    }
    out
}

fn direct_sum(groups: &[FPAbGroup]) -> FPAbGroup {
    groups.iter().fold(FPAbGroup::zero(), |acc, g| acc.direct_sum(g))
}

fn embed(total: &FPAbGroup, offset: usize, g: &FPAbGroup) -> Hom {
    let mut m = IntMatrix::zeros(total.ngens(), g.ngens());
    for j in 0..g.ngens() {
        m.set(offset + j, j, 1.into());
    }
    Hom::new(g.clone(), total.clone(), m).expect("summand inclusion")
}

fn project(total: &FPAbGroup, offset: usize, g: &FPAbGroup) -> Hom {
    let mut m = IntMatrix::zeros(g.ngens(), total.ngens());
    for j in 0..g.ngens() {
        m.set(j, offset + j, 1.into());
    }
    Hom::new(total.clone(), g.clone(), m).expect("summand projection")
}

/// The difference map `d : ⊕_{q<hi} A_q → ⊕_q A_q`, `x_q ↦ x_q − a_q x_q`,
/// as a matrix over the padded window `[lo, hi]`.
fn difference_matrix(a: &ZDiagram, lo: i64, hi: i64) -> (Vec<FPAbGroup>, IntMatrix) {
    let groups: Vec<FPAbGroup> = (lo..=hi).map(|p| a.group_at(p)).collect();
    let off = offsets(&groups);
    let total = off[groups.len()];
    let src_total = off[groups.len() - 1];
    let mut m = IntMatrix::zeros(total, src_total);
    for (i, p) in (lo..hi).enumerate() {
        let ap = a.map_at(p);
        for j in 0..groups[i].ngens() {
            let col = off[i] + j;
            m.set(off[i] + j, col, 1.into());
            for r in 0..groups[i + 1].ngens() {
                m.set(off[i + 1] + r, col, -ap.matrix().get(r, j).clone());
            }
        }
    }
    (groups, m)
}

/// `colim A` as the cokernel of `x_q ↦ x_q − a_q x_q` on `⊕ A_p` over the padded window.
pub fn colimit(a: &ZDiagram) -> Result<Colimit, ZdError> {
    let (lo, hi) = (a.lo(), a.hi());
    let (groups, m) = difference_matrix(a, lo, hi);
    let off = offsets(&groups);
    let total = direct_sum(&groups);
    let src = direct_sum(&groups[..groups.len() - 1]);
    let d = Hom::new(src, total.clone(), m)?;
    let kit = d.kit();
    let pis = groups
        .iter()
        .enumerate()
        .map(|(i, g)| kit.projection.compose(&embed(&total, off[i], g)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Colimit { group: kit.cokernel, lo, pis })
}

/// `lim A` and `lim¹ A` as kernel and cokernel of `(x_p) ↦ (x_q − a_{q−1} x_{q−1})`
/// over the padded window.
pub fn limit_and_lim1(a: &ZDiagram) -> Result<Limit, ZdError> {
    let (lo, hi) = (a.lo(), a.hi());
    let groups: Vec<FPAbGroup> = (lo..=hi).map(|p| a.group_at(p)).collect();
    let off = offsets(&groups);
    let prod = direct_sum(&groups);
    let tgt = direct_sum(&groups[1..]);
    let mut m = IntMatrix::zeros(tgt.ngens(), prod.ngens());
    for (i, p) in (lo..hi).enumerate() {
        // row block for coordinate q = p + 1
        let ap = a.map_at(p);
        let row0 = off[i + 1] - off[1];
        for r in 0..groups[i + 1].ngens() {
            m.set(row0 + r, off[i + 1] + r, 1.into());
            for j in 0..groups[i].ngens() {
                m.set(row0 + r, off[i] + j, -ap.matrix().get(r, j).clone());
            }
        }
    }
    let d = Hom::new(prod.clone(), tgt, m)?;
    let kit = d.kit();
    let incl = Hom::inclusion(&kit.kernel);
    let rhos = groups
        .iter()
        .enumerate()
        .map(|(i, g)| project(&prod, off[i], g).compose(&incl))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Limit { group: incl.domain().clone(), lo, rhos, lim1: kit.cokernel })
}

/// Map `colim A → colim B` induced by `f`.
pub fn colim_map(f: &ZMorphism, ca: &Colimit, cb: &Colimit) -> Result<Hom, ZdError> {
    let h = f.source().hi().max(f.target().hi());
    let pa = ca.pi(h);
    let pb = cb.pi(h);
    let fh = f.component(h);
    let imgs = ca
        .group()
        .gens()
        .iter()
        .map(|g| Ok(pb.apply(&fh.apply(&pa.solve(g)?))))
        .collect::<Result<Vec<Elem>, ZdError>>()?;
    Ok(Hom::from_images(ca.group(), cb.group(), &imgs)?)
}

/// Map `lim A → lim B` induced by `f`.
pub fn lim_map(f: &ZMorphism, la: &Limit, lb: &Limit) -> Result<Hom, ZdError> {
    let l = f.source().lo().min(f.target().lo());
    let ra = la.rho(l);
    let rb = lb.rho(l);
    let fl = f.component(l);
    let imgs = la
        .group()
        .gens()
        .iter()
        .map(|g| Ok(rb.solve(&fl.apply(&ra.apply(g)))?))
        .collect::<Result<Vec<Elem>, ZdError>>()?;
    Ok(Hom::from_images(la.group(), lb.group(), &imgs)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::TailSpec;

    fn times(k: i64) -> Hom {
        let z = FPAbGroup::z();
        Hom::from_i64(&z, &z, &[vec![k]]).unwrap()
    }

    #[test]
    fn constant_diagram() {
        let z = FPAbGroup::z();
        let a = ZDiagram::constant(&z, 0);
        let c = colimit(&a).unwrap();
        assert_eq!(c.group(), &z);
        assert!(c.pi(3).is_iso());
        let l = limit_and_lim1(&a).unwrap();
        assert_eq!(l.group(), &z);
        assert!(l.lim1().is_trivial());
    }

    #[test]
    fn eventually_constant_colimits() {
        let z = FPAbGroup::z();
        let a = ZDiagram::new(0, vec![z.clone(), z.clone()], vec![times(2)], TailSpec::Zero, TailSpec::Constant).unwrap();
        let c = colimit(&a).unwrap();
        assert_eq!(c.group(), &z);
        assert!(c.pi(1).is_iso());
        let l = limit_and_lim1(&a).unwrap();
        assert!(l.group().is_trivial() && l.lim1().is_trivial());

        let z4 = FPAbGroup::z_mod(4);
        let z2 = FPAbGroup::z_mod(2);
        let p = Hom::from_i64(&z4, &z2, &[vec![1]]).unwrap();
        let b = ZDiagram::new(0, vec![z4, z2.clone()], vec![p], TailSpec::Zero, TailSpec::Constant).unwrap();
        assert_eq!(colimit(&b).unwrap().group(), &z2);
    }

    #[test]
    fn limit_of_times_six() {
        let z = FPAbGroup::z();
        let a = ZDiagram::new(0, vec![z.clone(), z.clone()], vec![times(6)], TailSpec::Constant, TailSpec::Constant).unwrap();
        let l = limit_and_lim1(&a).unwrap();
        assert_eq!(l.group(), &z);
        assert!(l.lim1().is_trivial());
        // ρ_1 is ×6 up to the sign of the generator
        let img = l.rho(1).image();
        assert_eq!(img, zlinalg::Subgroup::from_generators(&z, &[zlinalg::elem(&[6])]));
        assert!(l.rho(0).is_iso());
    }

    #[test]
    fn identity_tail_limit() {
        let z6 = FPAbGroup::z_mod(6);
        let a = ZDiagram::new(0, vec![z6.clone(), z6.clone()], vec![Hom::identity(&z6)], TailSpec::Constant, TailSpec::Zero).unwrap();
        let l = limit_and_lim1(&a).unwrap();
        assert!(l.group().isomorphic(&z6));
        assert!(l.rho(0).is_iso() && l.rho(1).is_iso());
        assert!(colimit(&a).unwrap().group().is_trivial());
    }
}
