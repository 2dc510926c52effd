use zlinalg::{is_short_exact, subquotient, Elem, FPAbGroup, Hom, Subgroup, Subquotient};

use crate::{
    colim_map, colimit, i_omega_at, lim_map, limit_and_lim1, Colimit, Limit, ZDiagram, ZMorphism, ZdError,
};

/// The image filtration `F_p = Im(π_p)` of `colim A` and the kernel
/// filtration `F^p = Ker(ρ_p)` of `lim A`.
#[derive(Clone, Debug)]
pub struct Filtrations {
    pub colimit: Colimit,
    pub limit: Limit,
}

impl Filtrations {
    pub fn new(a: &ZDiagram) -> Result<Self, ZdError> {
        Ok(Filtrations { colimit: colimit(a)?, limit: limit_and_lim1(a)? })
    }

    pub fn lower(&self, p: i64) -> Subgroup {
        self.colimit.pi(p).image()
    }

    pub fn upper(&self, p: i64) -> Subgroup {
        self.limit.rho(p).kernel()
    }

    /// `ε_p = F_p / F_{p−1}`.
    pub fn eps_lower(&self, p: i64) -> Subquotient {
        subquotient(&self.lower(p), &self.lower(p - 1)).expect("F_{p-1} ⊆ F_p")
    }

    /// `ε^p = F^{p+1} / F^p`.
    pub fn eps_upper(&self, p: i64) -> Subquotient {
        subquotient(&self.upper(p + 1), &self.upper(p)).expect("F^p ⊆ F^{p+1}")
    }

    /// `R = π_p ∘ ρ_p : lim A → colim A`, independent of `p`.
    pub fn r_map(&self) -> Hom {
        let p = self.colimit.hi().max(self.limit.hi());
        self.colimit.pi(p).compose(&self.limit.rho(p)).expect("π_p and ρ_p meet at A_p")
    }

    /// The kernel filtration as a subdiagram of the constant diagram at `lim A`.
    pub fn upper_diagram(&self) -> Result<(ZDiagram, ZMorphism), ZdError> {
        let c = ZDiagram::constant(self.limit.group(), self.limit.lo());
        c.sub_diagram(self.limit.lo(), self.limit.hi(), |p| self.upper(p))
    }

    /// The image filtration as a subdiagram of the constant diagram at `colim A`.
    pub fn lower_diagram(&self) -> Result<(ZDiagram, ZMorphism), ZdError> {
        let c = ZDiagram::constant(self.colimit.group(), self.colimit.lo());
        c.sub_diagram(self.colimit.lo(), self.colimit.hi(), |p| self.lower(p))
    }
}

pub fn filtrations(a: &ZDiagram) -> Result<Filtrations, ZdError> {
    Filtrations::new(a)
}

/// Structural checks on the two filtrations of a diagram.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiltrationReport {
    /// `⋃ F_p = colim A`.
    pub image_exhaustive: bool,
    /// `lim F^• = 0`.
    pub upper_lim_zero: bool,
    /// `lim¹ F^• = 0`.
    pub upper_lim1_zero: bool,
    /// `0 → colim F^• → lim A → colim A → colim(A/Ī) → 0` is exact.
    pub exact_sequence: bool,
    /// The kernel filtration is exhaustive exactly when `R = 0`.
    pub kernel_exhaustive_iff_r_zero: bool,
    /// `F_p` is the colimit of `Im(A_p → A_q)` over `q ≥ p`, for every `p`.
    pub colim_of_images: bool,
    /// `I^ω_p = Im(ρ_p)` for every `p`.
    pub stable_image_is_im_rho: bool,
}

impl FiltrationReport {
    pub fn all(&self) -> bool {
        self.image_exhaustive
            && self.upper_lim_zero
            && self.upper_lim1_zero
            && self.exact_sequence
            && self.kernel_exhaustive_iff_r_zero
            && self.colim_of_images
            && self.stable_image_is_im_rho
    }
}

/// Identification `colim C ≅ G` for the constant diagram `C` at `G`.
fn constant_colim_inverse(c: &Colimit) -> Result<Hom, ZdError> {
    Ok(c.pi(c.lo()).inverse()?)
}

impl Filtrations {
    pub fn report(&self, a: &ZDiagram, budget: usize) -> Result<FiltrationReport, ZdError> {
        let (lo, hi) = (a.lo(), a.hi());
        let image_exhaustive = self.lower(hi).is_whole();

        let (fu, fu_incl) = self.upper_diagram()?;
        let lim_fu = limit_and_lim1(&fu)?;
        let upper_lim_zero = lim_fu.group().is_trivial();
        let upper_lim1_zero = lim_fu.lim1().is_trivial();

        // colim F^• → lim A, through the constant diagram
        let col_fu = colimit(&fu)?;
        let col_c = colimit(fu_incl.target())?;
        let to_c = colim_map(&fu_incl, &col_fu, &col_c)?;
        let first = constant_colim_inverse(&col_c)?.compose(&to_c)?;
        let r = self.r_map();
        let stable: Vec<Subgroup> = (lo..=hi).map(|p| self.limit.rho(p).image()).collect();
        let (q, proj) = a.quotient_diagram(lo, hi, |p| stable[(p - lo).clamp(0, stable.len() as i64 - 1) as usize].clone())?;
        let col_q = colimit(&q)?;
        let last = colim_map(&proj, &self.colimit, &col_q)?;
        let exact_sequence = first.is_mono()
            && first.image() == r.kernel()
            && r.image() == last.kernel()
            && last.is_epi();

        let kernel_exhaustive = self.upper(hi).is_whole();
        let kernel_exhaustive_iff_r_zero = kernel_exhaustive == r.is_zero();

        let mut colim_of_images = true;
        for p in lo..=hi {
            let (s, incl) = a.sub_diagram(p - 1, hi, |q| {
                if q < p {
                    Subgroup::zero(&a.group_at(q))
                } else {
                    a.compose(p, q).image()
                }
            })?;
            let cs = colimit(&s)?;
            let m = colim_map(&incl, &cs, &self.colimit)?;
            colim_of_images &= m.is_mono() && m.image() == self.lower(p);
        }

        let mut stable_image_is_im_rho = true;
        for p in lo..=hi {
            stable_image_is_im_rho &= i_omega_at(a, p, budget)?.0 == self.limit.rho(p).image();
        }

        Ok(FiltrationReport {
            image_exhaustive,
            upper_lim_zero,
            upper_lim1_zero,
            exact_sequence,
            kernel_exhaustive_iff_r_zero,
            colim_of_images,
            stable_image_is_im_rho,
        })
    }
}

/// The kernel diagram `K^pA` (with `K^pA_q = Ker(A_q → A_p)` for `q < p` and
/// `0` for `q ≥ p`) and the quotient `I_pA = A / K^pA`.
#[derive(Clone, Debug)]
pub struct KernelDiagram {
    pub p: i64,
    pub kernel: ZDiagram,
    pub inclusion: ZMorphism,
    pub image: ZDiagram,
    pub projection: ZMorphism,
    /// `lim K^pA → lim A` is a monomorphism onto `F^p`.
    pub lim_kernel_is_upper: bool,
    /// `ρ_p : lim I_pA → A_p/0` is a monomorphism onto `I^ω_p`.
    pub lim_image_is_i_omega: bool,
}

pub fn kernel_diagram(a: &ZDiagram, p: i64, budget: usize) -> Result<KernelDiagram, ZdError> {
    let lo = a.lo().min(p) - 1;
    let hi = a.hi().max(p) + 1;
    let k_at = |q: i64| {
        if q < p {
            a.compose(q, p).kernel()
        } else {
            Subgroup::zero(&a.group_at(q))
        }
    };
    let (kernel, inclusion) = a.sub_diagram(lo, hi, k_at)?;
    let (image, projection) = a.quotient_diagram(lo, hi, k_at)?;

    let fil = Filtrations::new(a)?;
    let lk = limit_and_lim1(&kernel)?;
    let m = lim_map(&inclusion, &lk, &fil.limit)?;
    let lim_kernel_is_upper = m.is_mono() && m.image() == fil.upper(p);

    let li = limit_and_lim1(&image)?;
    let rho = li.rho(p);
    let target = i_omega_at(a, p, budget)?.0.image_under(&projection.component(p))?;
    let lim_image_is_i_omega = rho.is_mono() && rho.image() == target;

    Ok(KernelDiagram { p, kernel, inclusion, image, projection, lim_kernel_is_upper, lim_image_is_i_omega })
}

/// Comparison of `Ker a_p ∩ I^ω_p` with `Ker a_p ∩ Ī_p`.
#[derive(Clone, Debug)]
pub struct KMonoReport {
    pub with_i_omega: Subgroup,
    pub with_stable_image: Subgroup,
    pub holds: bool,
    /// An element of the first intersection outside the second.
    pub witness: Option<Elem>,
    /// `a_p` is a monomorphism (a sufficient condition).
    pub structure_map_mono: bool,
}

pub fn k_mono_condition(a: &ZDiagram, p: i64, budget: usize) -> Result<KMonoReport, ZdError> {
    let ker = a.map_at(p).kernel();
    let iw = i_omega_at(a, p, budget)?.0;
    let lim = limit_and_lim1(a)?;
    let bar = lim.rho(p).image();
    let with_i_omega = ker.intersect(&iw)?;
    let with_stable_image = ker.intersect(&bar)?;
    let witness = with_i_omega.generators().into_iter().find(|g| !with_stable_image.contains(g));
    Ok(KMonoReport {
        holds: witness.is_none(),
        witness,
        with_i_omega,
        with_stable_image,
        structure_map_mono: ker.is_zero(),
    })
}

/// Outcome of the six-term comparison for a short exact sequence of diagrams.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SixTermReport {
    /// `0 → lim A → lim B → lim C` is exact.
    pub lim_left_exact: bool,
    /// `lim B → lim C` is an epimorphism.
    pub lim_epi: bool,
    /// `lim¹` of all three diagrams vanishes.
    pub lim1_zero: bool,
    /// `0 → colim A → colim B → colim C → 0` is exact.
    pub colim_exact: bool,
}

impl SixTermReport {
    pub fn all(&self) -> bool {
        self.lim_left_exact && self.lim_epi && self.lim1_zero && self.colim_exact
    }
}

/// Checks `0 → A →f B →g C → 0` componentwise, then the induced sequences of
/// limits and colimits.
pub fn six_term_check(f: &ZMorphism, g: &ZMorphism) -> Result<SixTermReport, ZdError> {
    if f.target() != g.source() {
        return Err(ZdError::InvalidDiagram("morphisms are not composable".into()));
    }
    let l = f.lo().min(g.lo());
    let h = f.hi().max(g.hi());
    for p in l..=h {
        if !is_short_exact(&f.component(p), &g.component(p))? {
            return Err(ZdError::NotExact { position: p, detail: "components are not short exact".into() });
        }
    }
    let (a, b, c) = (f.source(), f.target(), g.target());
    let (la, lb, lc) = (limit_and_lim1(a)?, limit_and_lim1(b)?, limit_and_lim1(c)?);
    let lf = lim_map(f, &la, &lb)?;
    let lg = lim_map(g, &lb, &lc)?;
    let lim_left_exact = lf.is_mono() && lf.image() == lg.kernel();
    let lim_epi = lg.is_epi();
    let lim1_zero = la.lim1().is_trivial() && lb.lim1().is_trivial() && lc.lim1().is_trivial();
    let (ca, cb, cc) = (colimit(a)?, colimit(b)?, colimit(c)?);
    let cf = colim_map(f, &ca, &cb)?;
    let cg = colim_map(g, &cb, &cc)?;
    let colim_exact = is_short_exact(&cf, &cg)?;
    Ok(SixTermReport { lim_left_exact, lim_epi, lim1_zero, colim_exact })
}

/// `0 → A → A ⊕ C → C → 0` as morphisms of diagrams.
pub fn split_sequence(a: &ZDiagram, c: &ZDiagram) -> Result<(ZMorphism, ZMorphism), ZdError> {
    let lo = a.lo().min(c.lo());
    let hi = a.hi().max(c.hi());
    let groups: Vec<FPAbGroup> = (lo..=hi).map(|p| a.group_at(p).direct_sum(&c.group_at(p))).collect();
    let maps: Vec<Hom> = (lo..hi).map(|p| a.map_at(p).direct_sum(&c.map_at(p))).collect();
    let left = if groups[0].is_trivial() { crate::TailSpec::Zero } else { crate::TailSpec::Constant };
    let right = if groups[groups.len() - 1].is_trivial() { crate::TailSpec::Zero } else { crate::TailSpec::Constant };
    let b = ZDiagram::new(lo, groups, maps, left, right)?;
    let mut fs = Vec::new();
    let mut gs = Vec::new();
    for p in lo..=hi {
        let (ga, gc) = (a.group_at(p), c.group_at(p));
        let sum = ga.direct_sum(&gc);
        let na = ga.ngens();
        let incl: Vec<Elem> = ga
            .gens()
            .into_iter()
            .map(|x| x.into_iter().chain(std::iter::repeat_n(0.into(), gc.ngens())).collect())
            .collect();
        fs.push(Hom::from_images(&ga, &sum, &incl)?);
        let proj: Vec<Elem> = sum.gens().into_iter().map(|x| x[na..].to_vec()).collect();
        gs.push(Hom::from_images(&sum, &gc, &proj)?);
    }
    Ok((ZMorphism::new(a, &b, lo, fs)?, ZMorphism::new(&b, c, lo, gs)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::TailSpec;
    use zlinalg::elem;

    fn times(k: i64) -> Hom {
        let z = FPAbGroup::z();
        Hom::from_i64(&z, &z, &[vec![k]]).unwrap()
    }

    fn chain(orders: &[u64], ks: &[i64], left: TailSpec, right: TailSpec) -> ZDiagram {
        let groups: Vec<FPAbGroup> = orders.iter().map(|&o| FPAbGroup::z_mod(o)).collect();
        let maps = ks
            .iter()
            .enumerate()
            .map(|(i, &k)| Hom::from_i64(&groups[i], &groups[i + 1], &[vec![k]]).unwrap())
            .collect();
        ZDiagram::new(0, groups, maps, left, right).unwrap()
    }

    #[test]
    fn times_two_then_constant() {
        let z = FPAbGroup::z();
        let a = ZDiagram::new(0, vec![z.clone(), z.clone()], vec![times(2)], TailSpec::Constant, TailSpec::Constant).unwrap();
        let f = Filtrations::new(&a).unwrap();
        assert_eq!(f.lower(0), Subgroup::from_generators(&z, &[elem(&[2])]).image_under(&f.colimit.pi(1)).unwrap());
        assert!(f.lower(1).is_whole());
        assert_eq!(f.eps_lower(1).group(), &FPAbGroup::z_mod(2));
        assert!(f.upper(0).is_zero());
        assert!(!f.r_map().is_zero());
        assert!(f.report(&a, 8).unwrap().all());
    }

    #[test]
    fn reports_on_torsion_chains() {
        for (left, right) in [
            (TailSpec::Zero, TailSpec::Zero),
            (TailSpec::Zero, TailSpec::Constant),
            (TailSpec::Constant, TailSpec::Zero),
            (TailSpec::Constant, TailSpec::Constant),
        ] {
            let a = chain(&[4, 8, 2, 6], &[2, 1, 3], left, right);
            let f = Filtrations::new(&a).unwrap();
            let rep = f.report(&a, 16).unwrap();
            assert!(rep.all(), "{left:?} {right:?}: {rep:?}");
            for p in a.lo()..=a.hi() {
                let kd = kernel_diagram(&a, p, 16).unwrap();
                assert!(kd.lim_kernel_is_upper && kd.lim_image_is_i_omega, "kernel diagram at {p}");
                assert!(k_mono_condition(&a, p, 16).unwrap().holds);
            }
        }
    }

    #[test]
    fn split_six_term() {
        let a = chain(&[4, 2], &[1], TailSpec::Zero, TailSpec::Constant);
        let c = chain(&[3, 9], &[3], TailSpec::Constant, TailSpec::Zero);
        let (f, g) = split_sequence(&a, &c).unwrap();
        assert!(six_term_check(&f, &g).unwrap().all());
        assert!(six_term_check(&g, &ZMorphism::identity(&c)).is_err());
    }
}
