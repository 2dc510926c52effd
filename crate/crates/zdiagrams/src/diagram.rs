use zlinalg::{induced_map, subquotient, FPAbGroup, Hom, LinalgError, Subgroup};

use crate::ZdError;

/// Behaviour of a diagram outside its window.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TailSpec {
    /// All groups beyond the window are trivial.
    Zero,
    /// Groups beyond the window repeat the boundary group with identity maps.
    Constant,
}

impl TailSpec {
    pub fn name(self) -> &'static str {
        match self {
            TailSpec::Zero => "zero",
            TailSpec::Constant => "constant",
        }
    }

    pub fn parse(s: &str) -> Option<TailSpec> {
        match s.to_ascii_lowercase().as_str() {
            "zero" => Some(TailSpec::Zero),
            "constant" => Some(TailSpec::Constant),
            _ => None,
        }
    }
}

/// A ℤ-indexed diagram `… → A_p → A_{p+1} → …` given by a finite window
/// `[p0, p1]` and the tail behaviour on either side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZDiagram {
    p0: i64,
    groups: Vec<FPAbGroup>,
    maps: Vec<Hom>,
    left: TailSpec,
    right: TailSpec,
}

impl ZDiagram {
    pub fn new(
        p0: i64,
        groups: Vec<FPAbGroup>,
        maps: Vec<Hom>,
        left: TailSpec,
        right: TailSpec,
    ) -> Result<Self, ZdError> {
        if groups.is_empty() {
            return Err(ZdError::InvalidDiagram("empty window".into()));
        }
        if maps.len() + 1 != groups.len() {
            return Err(ZdError::InvalidDiagram(format!(
                "{} groups need {} maps, found {}",
                groups.len(),
                groups.len() - 1,
                maps.len()
            )));
        }
        for (i, m) in maps.iter().enumerate() {
            if m.domain() != &groups[i] || m.codomain() != &groups[i + 1] {
                return Err(ZdError::InvalidDiagram(format!(
                    "map at position {} does not match its groups",
                    p0 + i as i64
                )));
            }
        }
        Ok(ZDiagram { p0, groups, maps, left, right })
    }

    /// The constant diagram at `g` (identity maps everywhere).
    pub fn constant(g: &FPAbGroup, p: i64) -> Self {
        ZDiagram { p0: p, groups: vec![g.clone()], maps: Vec::new(), left: TailSpec::Constant, right: TailSpec::Constant }
    }

    pub fn zero() -> Self {
        ZDiagram {
            p0: 0,
            groups: vec![FPAbGroup::zero()],
            maps: Vec::new(),
            left: TailSpec::Zero,
            right: TailSpec::Zero,
        }
    }

    pub fn p0(&self) -> i64 {
        self.p0
    }

    pub fn p1(&self) -> i64 {
        self.p0 + self.groups.len() as i64 - 1
    }

    /// Window padded by one tail position on each side.
    pub fn lo(&self) -> i64 {
        self.p0 - 1
    }

    pub fn hi(&self) -> i64 {
        self.p1() + 1
    }

    pub fn width(&self) -> usize {
        self.groups.len()
    }

    pub fn left(&self) -> TailSpec {
        self.left
    }

    pub fn right(&self) -> TailSpec {
        self.right
    }

    pub fn window_groups(&self) -> &[FPAbGroup] {
        &self.groups
    }

    pub fn window_maps(&self) -> &[Hom] {
        &self.maps
    }

    pub fn group_at(&self, p: i64) -> FPAbGroup {
        if p < self.p0 {
            match self.left {
                TailSpec::Zero => FPAbGroup::zero(),
                TailSpec::Constant => self.groups[0].clone(),
            }
        } else if p > self.p1() {
            match self.right {
                TailSpec::Zero => FPAbGroup::zero(),
                TailSpec::Constant => self.groups[self.groups.len() - 1].clone(),
            }
        } else {
            self.groups[(p - self.p0) as usize].clone()
        }
    }

    /// Structure map `a_p : A_p → A_{p+1}`.
    pub fn map_at(&self, p: i64) -> Hom {
        if p >= self.p0 && p < self.p1() {
            return self.maps[(p - self.p0) as usize].clone();
        }
        let constant = (p < self.p0 && self.left == TailSpec::Constant)
            || (p >= self.p1() && self.right == TailSpec::Constant);
        if constant {
            Hom::identity(&self.group_at(p))
        } else {
            Hom::zero(&self.group_at(p), &self.group_at(p + 1))
        }
    }

    /// Composite `A_p → A_q` for `p ≤ q`.
    pub fn compose(&self, p: i64, q: i64) -> Hom {
        assert!(p <= q, "compose({p}, {q}) runs backwards");
        if p == q {
            return Hom::identity(&self.group_at(p));
        }
        if (p < self.p0 && self.left == TailSpec::Zero) || (q > self.p1() && self.right == TailSpec::Zero) {
            return Hom::zero(&self.group_at(p), &self.group_at(q));
        }
        let a = p.clamp(self.p0, self.p1());
        let b = q.clamp(self.p0, self.p1());
        let mut h = Hom::identity(&self.group_at(a));
        for s in a..b {
            h = self.map_at(s).compose(&h).expect("consecutive maps compose");
        }
        h
    }

    pub fn shift(&self, k: i64) -> Self {
        ZDiagram { p0: self.p0 + k, ..self.clone() }
    }

    /// Diagram with the window widened to `[lo, hi]` (which must contain the
    /// current window); the extra positions are filled from the tails.
    pub fn widened(&self, lo: i64, hi: i64) -> Self {
        let lo = lo.min(self.p0);
        let hi = hi.max(self.p1());
        let groups = (lo..=hi).map(|p| self.group_at(p)).collect();
        let maps = (lo..hi).map(|p| self.map_at(p)).collect();
        ZDiagram { p0: lo, groups, maps, left: self.left, right: self.right }
    }

    /// Originally vanishing: trivial far to the left.
    pub fn originally_vanishing(&self) -> bool {
        self.group_at(self.lo()).is_trivial()
    }

    /// Eventually vanishing: trivial far to the right.
    pub fn eventually_vanishing(&self) -> bool {
        self.group_at(self.hi()).is_trivial()
    }

    /// Subdiagram with `S_p = sub(p)` on `[lo, hi]`, extended by its boundary
    /// values outside. The family must be stationary outside `[lo, hi]` and
    /// `lo`, `hi` must lie in the tail regions. Returns the diagram of
    /// canonical groups and its inclusion into `self`.
    pub fn sub_diagram(
        &self,
        lo: i64,
        hi: i64,
        sub: impl Fn(i64) -> Subgroup,
    ) -> Result<(ZDiagram, ZMorphism), ZdError> {
        let lo = lo.min(self.lo());
        let hi = hi.max(self.hi());
        let subs: Vec<Subgroup> = (lo..=hi).map(&sub).collect();
        let quots = subs
            .iter()
            .map(|s| subquotient(s, &Subgroup::zero(s.ambient())))
            .collect::<Result<Vec<_>, _>>()?;
        let mut maps = Vec::new();
        for (i, p) in (lo..hi).enumerate() {
            let m = induced_map(&quots[i], &quots[i + 1], &self.map_at(p)).map_err(|e| match e {
                LinalgError::NotWellDefined { .. } => ZdError::NotNatural { position: p },
                other => other.into(),
            })?;
            maps.push(m);
        }
        let groups: Vec<FPAbGroup> = quots.iter().map(|q| q.group().clone()).collect();
        let left = if groups[0].is_trivial() { TailSpec::Zero } else { self.left };
        let right = if groups[groups.len() - 1].is_trivial() { TailSpec::Zero } else { self.right };
        let d = ZDiagram::new(lo, groups, maps, left, right)?;
        let comps = quots
            .iter()
            .enumerate()
            .map(|(i, q)| Hom::from_images(q.group(), &self.group_at(lo + i as i64), q.section()))
            .collect::<Result<Vec<_>, _>>()?;
        let incl = ZMorphism::new(&d, self, lo, comps)?;
        Ok((d, incl))
    }

    /// Quotient diagram `A_p / K_p` on `[lo, hi]`, under the same conventions
    /// as [`ZDiagram::sub_diagram`]. Returns the diagram and the projection.
    pub fn quotient_diagram(
        &self,
        lo: i64,
        hi: i64,
        kernel: impl Fn(i64) -> Subgroup,
    ) -> Result<(ZDiagram, ZMorphism), ZdError> {
        let lo = lo.min(self.lo());
        let hi = hi.max(self.hi());
        let quots = (lo..=hi)
            .map(|p| {
                let k = kernel(p);
                subquotient(&Subgroup::whole(k.ambient()), &k)
            })
            .collect::<Result<Vec<_>, _>>()?;
        let mut maps = Vec::new();
        for (i, p) in (lo..hi).enumerate() {
            let m = induced_map(&quots[i], &quots[i + 1], &self.map_at(p)).map_err(|e| match e {
                LinalgError::NotWellDefined { .. } => ZdError::NotNatural { position: p },
                other => other.into(),
            })?;
            maps.push(m);
        }
        let groups: Vec<FPAbGroup> = quots.iter().map(|q| q.group().clone()).collect();
        let left = if groups[0].is_trivial() { TailSpec::Zero } else { self.left };
        let right = if groups[groups.len() - 1].is_trivial() { TailSpec::Zero } else { self.right };
        let d = ZDiagram::new(lo, groups, maps, left, right)?;
        let comps = quots
            .iter()
            .enumerate()
            .map(|(i, q)| {
                let a = self.group_at(lo + i as i64);
                let imgs = a.gens().iter().map(|g| q.project(g)).collect::<Result<Vec<_>, _>>()?;
                Hom::from_images(&a, q.group(), &imgs)
            })
            .collect::<Result<Vec<_>, _>>()?;
        let proj = ZMorphism::new(self, &d, lo, comps)?;
        Ok((d, proj))
    }
}

/// Natural transformation `f : A → B`, stored on the padded union window and
/// extended by the tails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZMorphism {
    source: ZDiagram,
    target: ZDiagram,
    lo: i64,
    comps: Vec<Hom>,
}

impl ZMorphism {
    /// Components `f_p` for `p = lo, lo+1, …`; positions not covered are
    /// filled by the nearest given component when its groups match, and by
    /// zero maps otherwise. Naturality is verified.
    pub fn new(source: &ZDiagram, target: &ZDiagram, lo: i64, comps: Vec<Hom>) -> Result<Self, ZdError> {
        if comps.is_empty() {
            return Err(ZdError::InvalidDiagram("morphism without components".into()));
        }
        let hi_in = lo + comps.len() as i64 - 1;
        let l = source.lo().min(target.lo()).min(lo);
        let h = source.hi().max(target.hi()).max(hi_in);
        let mut out = Vec::new();
        for p in l..=h {
            let (a, b) = (source.group_at(p), target.group_at(p));
            let c = if p < lo {
                &comps[0]
            } else if p > hi_in {
                &comps[comps.len() - 1]
            } else {
                &comps[(p - lo) as usize]
            };
            let given = p >= lo && p <= hi_in;
            if c.domain() == &a && c.codomain() == &b {
                out.push(c.clone());
            } else if given {
                return Err(ZdError::InvalidDiagram(format!("component at {p} does not match the diagrams")));
            } else {
                out.push(Hom::zero(&a, &b));
            }
        }
        let f = ZMorphism { source: source.clone(), target: target.clone(), lo: l, comps: out };
        for p in l - 1..=h {
            let left = f.component(p + 1).compose(&source.map_at(p))?;
            let right = target.map_at(p).compose(&f.component(p))?;
            if left != right {
                return Err(ZdError::NotNatural { position: p });
            }
        }
        Ok(f)
    }

    pub fn identity(a: &ZDiagram) -> Self {
        let comps = (a.lo()..=a.hi()).map(|p| Hom::identity(&a.group_at(p))).collect();
        ZMorphism { source: a.clone(), target: a.clone(), lo: a.lo(), comps }
    }

    pub fn source(&self) -> &ZDiagram {
        &self.source
    }

    pub fn target(&self) -> &ZDiagram {
        &self.target
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.comps.len() as i64 - 1
    }

    pub fn component(&self, p: i64) -> Hom {
        let i = (p - self.lo).clamp(0, self.comps.len() as i64 - 1) as usize;
        self.comps[i].clone()
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &ZMorphism) -> Result<ZMorphism, ZdError> {
        if inner.target != self.source {
            return Err(ZdError::InvalidDiagram("morphisms are not composable".into()));
        }
        let l = self.lo.min(inner.lo);
        let h = self.hi().max(inner.hi());
        let comps = (l..=h)
            .map(|p| self.component(p).compose(&inner.component(p)))
            .collect::<Result<Vec<_>, _>>()?;
        ZMorphism::new(&inner.source, &self.target, l, comps)
    }

    pub fn is_mono(&self) -> bool {
        (self.lo..=self.hi()).all(|p| self.component(p).is_mono())
    }

    pub fn is_epi(&self) -> bool {
        (self.lo..=self.hi()).all(|p| self.component(p).is_epi())
    }

    pub fn is_iso(&self) -> bool {
        self.is_mono() && self.is_epi()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn times(k: i64) -> Hom {
        let z = FPAbGroup::z();
        Hom::from_i64(&z, &z, &[vec![k]]).unwrap()
    }

    #[test]
    fn tails_and_composites() {
        let z = FPAbGroup::z();
        let a = ZDiagram::new(0, vec![z.clone(), z.clone(), z.clone()], vec![times(2), times(3)], TailSpec::Zero, TailSpec::Constant)
            .unwrap();
        assert!(a.group_at(-5).is_trivial());
        assert_eq!(a.group_at(9), z);
        assert_eq!(a.compose(0, 7), times(6));
        assert!(a.compose(-2, 1).is_zero());
        assert_eq!(a.map_at(4), Hom::identity(&z));
    }

    #[test]
    fn naturality_is_checked() {
        let z = FPAbGroup::z();
        let a = ZDiagram::new(0, vec![z.clone(), z.clone()], vec![times(2)], TailSpec::Constant, TailSpec::Constant).unwrap();
        assert!(ZMorphism::new(&a, &a, 0, vec![times(3), times(3)]).is_ok());
        assert!(matches!(ZMorphism::new(&a, &a, 0, vec![times(3), times(1)]), Err(ZdError::NotNatural { .. })));
    }

    #[test]
    fn sub_and_quotient_diagrams() {
        let z4 = FPAbGroup::z_mod(4);
        let m = Hom::scalar(&z4, 2);
        let a = ZDiagram::new(0, vec![z4.clone(), z4.clone()], vec![m], TailSpec::Zero, TailSpec::Constant).unwrap();
        let doubled = |p: i64| {
            let g = a.group_at(p);
            let gens: Vec<_> = g.gens().iter().map(|x| g.scale(&2.into(), x)).collect();
            Subgroup::from_generators(&g, &gens)
        };
        let (s, incl) = a.sub_diagram(a.lo(), a.hi(), doubled).unwrap();
        assert!(incl.is_mono());
        assert_eq!(s.group_at(0), FPAbGroup::z_mod(2));
        let (q, proj) = a.quotient_diagram(a.lo(), a.hi(), |p| Subgroup::zero(&a.group_at(p))).unwrap();
        assert!(proj.is_iso());
        assert_eq!(q.group_at(1), z4);
    }
}
