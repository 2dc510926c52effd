use std::collections::{BTreeMap, BTreeSet};

use zlinalg::{induced_map, subquotient, Elem, FPAbGroup, Hom, Subgroup};

use crate::sequence::push_forward;
use crate::{add, cycles_boundaries, sub, BidegreeRule, BigradedGroup, Bounds, Pos, SpecError, SpectralSequence};

/// A morphism of spectral sequences, given on the first page and induced on
/// the later ones.
#[derive(Clone, Debug)]
pub struct SSMorphism {
    source: SpectralSequence,
    target: SpectralSequence,
    positions: BTreeSet<Pos>,
    /// Components `f^r_x` for `r = r0, r0+1, …`.
    comps: Vec<BTreeMap<Pos, Hom>>,
}

fn extended(ss: &SpectralSequence, last: i64) -> Result<SpectralSequence, SpecError> {
    let mut c = ss.clone();
    if c.horizon().is_ok() {
        c.complete()?;
    }
    while c.last_page().r < last {
        c.turn(BTreeMap::new())?;
    }
    Ok(c)
}

fn same_rule(a: &SpectralSequence, b: &SpectralSequence, last: i64) -> bool {
    a.r0() == b.r0() && (a.r0()..=last + 1).all(|r| a.v(r) == b.v(r))
}

impl SSMorphism {
    /// `f0` gives `f^{r0}_x`; missing components are zero. Commutation with the
    /// differentials is checked on every page.
    pub fn new(source: &SpectralSequence, target: &SpectralSequence, f0: BTreeMap<Pos, Hom>) -> Result<Self, SpecError> {
        let h = |s: &SpectralSequence| s.horizon().unwrap_or(s.last_page().r).max(s.last_page().r);
        let last = h(source).max(h(target));
        if !same_rule(source, target, last) {
            return Err(SpecError::InvalidInput("spectral sequences have different bidegrees".into()));
        }
        let source = extended(source, last)?;
        let target = extended(target, last)?;
        let positions: BTreeSet<Pos> = source.positions().union(&target.positions()).copied().collect();
        let r0 = source.r0();
        for (x, f) in &f0 {
            if f.domain() != &source.group(r0, *x) || f.codomain() != &target.group(r0, *x) {
                return Err(SpecError::InvalidInput(format!("component at {x:?} does not match the pages")));
            }
        }
        let mut cur: BTreeMap<Pos, Hom> = positions
            .iter()
            .map(|&x| {
                let f = f0.get(&x).cloned().unwrap_or_else(|| Hom::zero(&source.group(r0, x), &target.group(r0, x)));
                (x, f)
            })
            .collect();
        let mut comps = Vec::new();
        for r in r0..=last {
            let comp = |x: Pos, c: &BTreeMap<Pos, Hom>| {
                c.get(&x).cloned().unwrap_or_else(|| Hom::zero(&source.group(r, x), &target.group(r, x)))
            };
            for &x in &positions {
                let y = add(x, source.v(r));
                let lhs = target.d(r, x).compose(&comp(x, &cur))?;
                let rhs = comp(y, &cur).compose(&source.d(r, x))?;
                if lhs != rhs {
                    return Err(SpecError::NotAMorphism { page: r, position: x });
                }
            }
            if r < last {
                let (sp, tp) = (source.page(r + 1).unwrap(), target.page(r + 1).unwrap());
                let mut next = BTreeMap::new();
                for &x in &positions {
                    let f = match (sp.homology_at(x), tp.homology_at(x)) {
                        (Some(a), Some(b)) => induced_map(a, b, &cur[&x])?,
                        _ => Hom::zero(&sp.group(x), &tp.group(x)),
                    };
                    next.insert(x, f);
                }
                comps.push(std::mem::replace(&mut cur, next));
            } else {
                comps.push(cur.clone());
            }
        }
        Ok(SSMorphism { source, target, positions, comps })
    }

    pub fn identity(ss: &SpectralSequence) -> Result<Self, SpecError> {
        let f0 = ss.positions().into_iter().map(|x| (x, Hom::identity(&ss.group(ss.r0(), x)))).collect();
        SSMorphism::new(ss, ss, f0)
    }

    /// Multiplication by `k` everywhere.
    pub fn scalar(ss: &SpectralSequence, k: i64) -> Result<Self, SpecError> {
        let f0 = ss.positions().into_iter().map(|x| (x, Hom::scalar(&ss.group(ss.r0(), x), k))).collect();
        SSMorphism::new(ss, ss, f0)
    }

    pub fn source(&self) -> &SpectralSequence {
        &self.source
    }

    pub fn target(&self) -> &SpectralSequence {
        &self.target
    }

    pub fn positions(&self) -> &BTreeSet<Pos> {
        &self.positions
    }

    pub fn last_page(&self) -> i64 {
        self.source.r0() + self.comps.len() as i64 - 1
    }

    /// `f^r_x`, repeating the last stored page beyond it.
    pub fn component(&self, r: i64, x: Pos) -> Hom {
        let i = ((r - self.source.r0()).max(0) as usize).min(self.comps.len() - 1);
        let r = self.source.r0() + i as i64;
        self.comps[i]
            .get(&x)
            .cloned()
            .unwrap_or_else(|| Hom::zero(&self.source.group(r, x), &self.target.group(r, x)))
    }

    pub fn page(&self, r: i64) -> BTreeMap<Pos, Hom> {
        self.positions.iter().map(|&x| (x, self.component(r, x))).collect()
    }

    /// `f∞`, the components on the stationary page.
    pub fn f_infinity(&self) -> BTreeMap<Pos, Hom> {
        self.page(self.last_page())
    }

    pub fn is_iso_on(&self, r: i64) -> bool {
        self.positions.iter().all(|&x| self.component(r, x).is_iso())
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &SSMorphism) -> Result<SSMorphism, SpecError> {
        let r0 = inner.source.r0();
        let xs: BTreeSet<Pos> = inner.positions.union(&self.positions).copied().collect();
        let mut f0 = BTreeMap::new();
        for x in xs {
            let a = inner.component(r0, x);
            let b = self.component(r0, x);
            if a.codomain() != b.domain() {
                return Err(SpecError::InvalidInput("morphisms are not composable".into()));
            }
            f0.insert(x, b.compose(&a)?);
        }
        SSMorphism::new(&inner.source, &self.target, f0)
    }
}

/// Outcome of the three propagation clauses over all pages and positions.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PropagationReport {
    /// Instances where the hypotheses of the mono, epi and iso clauses held.
    pub mono_checked: usize,
    pub epi_checked: usize,
    pub iso_checked: usize,
    /// `(clause, page, position)` where the hypotheses held and the conclusion failed.
    pub failures: Vec<(&'static str, i64, Pos)>,
}

impl PropagationReport {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Summary of a morphism: `f∞`, propagation checks, and the isomorphism
/// corollary when some page is an isomorphism.
#[derive(Clone, Debug)]
pub struct MorphismReport {
    pub f_infinity: BTreeMap<Pos, Hom>,
    pub propagation: PropagationReport,
    /// `Some(ok)` when some `f^r` is an isomorphism; `ok` states that every
    /// later page and `f∞` are isomorphisms.
    pub iso_propagation: Option<bool>,
    /// `f∞` agrees with the map induced by `f^{r0}` on `Z∞/B∞`.
    pub f_infinity_from_cycles: bool,
}

pub fn propagation(f: &SSMorphism) -> PropagationReport {
    let mut rep = PropagationReport::default();
    for r in f.source.r0()..f.last_page() {
        let v = f.source.v(r);
        for &x in &f.positions {
            let before = f.component(r, sub(x, v));
            let at = f.component(r, x);
            let after = f.component(r, add(x, v));
            let next = f.component(r + 1, x);
            if before.is_epi() && at.is_mono() {
                rep.mono_checked += 1;
                if !next.is_mono() {
                    rep.failures.push(("mono", r, x));
                }
            }
            if at.is_epi() && after.is_mono() {
                rep.epi_checked += 1;
                if !next.is_epi() {
                    rep.failures.push(("epi", r, x));
                }
            }
            if before.is_epi() && at.is_iso() && after.is_mono() {
                rep.iso_checked += 1;
                if !next.is_iso() {
                    rep.failures.push(("iso", r, x));
                }
            }
        }
    }
    rep
}

fn f_infinity_from_cycles(f: &SSMorphism) -> Result<bool, SpecError> {
    let (a, b) = (&f.source, &f.target);
    let top = f.last_page() - 1;
    let r0 = a.r0();
    for &x in &f.positions {
        let za = cycles_boundaries(a, x, top.max(r0 - 1))?;
        let zb = cycles_boundaries(b, x, top.max(r0 - 1))?;
        let f0 = f.component(r0, x);
        let fi = f.component(f.last_page(), x);
        let q = subquotient(za.z_top(), &Subgroup::zero(za.z_top().ambient()))?;
        for g in q.section() {
            let y: Elem = f0.apply(g);
            if !zb.z_top().contains(&y) {
                return Ok(false);
            }
            let lhs = fi.apply(&push_forward(a, x, top, g)?);
            let rhs = push_forward(b, x, top, &y)?;
            if !b.group(top + 1, x).elem_eq(&lhs, &rhs) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

pub fn morphism_tools(f: &SSMorphism) -> Result<MorphismReport, SpecError> {
    let propagation = propagation(f);
    let first_iso = (f.source.r0()..=f.last_page()).find(|&r| f.is_iso_on(r));
    let iso_propagation = first_iso.map(|r| (r..=f.last_page()).all(|k| f.is_iso_on(k)));
    Ok(MorphismReport {
        f_infinity: f.f_infinity(),
        propagation,
        iso_propagation,
        f_infinity_from_cycles: f_infinity_from_cycles(f)?,
    })
}

/// Page-by-page direct sum; later differentials are transported along the
/// isomorphism `E^r(A) ⊕ E^r(B) ≅ E^r(A ⊕ B)` induced by the two inclusions.
pub fn direct_sum(a: &SpectralSequence, b: &SpectralSequence) -> Result<SpectralSequence, SpecError> {
    let last = a.last_page().r.max(b.last_page().r);
    if !same_rule(a, b, last) {
        return Err(SpecError::InvalidInput("spectral sequences have different bidegrees".into()));
    }
    let a = extended(a, last)?;
    let b = extended(b, last)?;
    let bounds: Bounds = a.bounds().union(b.bounds());
    let r0 = a.r0();
    let positions: BTreeSet<Pos> = a.positions().union(&b.positions()).copied().collect();
    let sum_group = |r: i64, x: Pos| a.group(r, x).direct_sum(&b.group(r, x));
    let groups = BigradedGroup::new(bounds, positions.iter().map(|&x| (x, sum_group(r0, x))).collect())?;
    let diffs = positions.iter().map(|&x| (x, a.d(r0, x).direct_sum(&b.d(r0, x)))).collect();
    let mut s = SpectralSequence::new(r0, a.rule().clone(), groups, diffs)?;

    // block inclusions on the current page
    let block = |r: i64, x: Pos| -> (Hom, Hom) {
        let (ga, gb) = (a.group(r, x), b.group(r, x));
        let g = ga.direct_sum(&gb);
        let ia: Vec<Elem> = ga.gens().into_iter().map(|e| [e, gb.zero_elem()].concat()).collect();
        let ib: Vec<Elem> = gb.gens().into_iter().map(|e| [ga.zero_elem(), e].concat()).collect();
        (Hom::from_images(&ga, &g, &ia).unwrap(), Hom::from_images(&gb, &g, &ib).unwrap())
    };
    let mut incl: BTreeMap<Pos, (Hom, Hom)> = positions.iter().map(|&x| (x, block(r0, x))).collect();
    for r in r0 + 1..=last {
        let (pa, pb) = (a.page(r).unwrap(), b.page(r).unwrap());
        let v = s.v(r);
        let mut next_incl = BTreeMap::new();
        s.turn_with(|groups, homology| {
            let mut phis = BTreeMap::new();
            for &x in &positions {
                let (ia, ib) = &incl[&x];
                let hs = homology.get(&x);
                let ia2 = match (pa.homology_at(x), hs) {
                    (Some(ha), Some(hs)) => induced_map(ha, hs, ia)?,
                    _ => Hom::zero(&pa.group(x), &groups.get(x)),
                };
                let ib2 = match (pb.homology_at(x), hs) {
                    (Some(hb), Some(hs)) => induced_map(hb, hs, ib)?,
                    _ => Hom::zero(&pb.group(x), &groups.get(x)),
                };
                let dom = pa.group(x).direct_sum(&pb.group(x));
                let imgs: Vec<Elem> = pa
                    .group(x)
                    .gens()
                    .iter()
                    .map(|e| ia2.apply(e))
                    .chain(pb.group(x).gens().iter().map(|e| ib2.apply(e)))
                    .collect();
                phis.insert(x, Hom::from_images(&dom, &groups.get(x), &imgs)?);
                next_incl.insert(x, (ia2, ib2));
            }
            let mut diffs = BTreeMap::new();
            for &x in &positions {
                let y = add(x, v);
                let d = pa.d(x).direct_sum(&pb.d(x));
                if d.is_zero() {
                    continue;
                }
                let phi_x = &phis[&x];
                let phi_y = match phis.get(&y) {
                    Some(p) => p.clone(),
                    None => Hom::zero(&FPAbGroup::zero(), &FPAbGroup::zero()),
                };
                diffs.insert(x, phi_y.compose(&d)?.compose(&phi_x.inverse()?)?);
            }
            Ok(diffs)
        })?;
        incl = next_incl;
    }
    s.complete()?;
    Ok(s)
}

/// Every homomorphism between two finite groups.
pub fn all_homs(dom: &FPAbGroup, cod: &FPAbGroup, limit: usize) -> Vec<Hom> {
    let elems = cod.elements(limit);
    let mut out = vec![Vec::<Elem>::new()];
    for _ in 0..dom.ngens() {
        out = out
            .into_iter()
            .flat_map(|pre| {
                elems.iter().map(move |e| {
                    let mut v = pre.clone();
                    v.push(e.clone());
                    v
                })
            })
            .collect();
    }
    out.into_iter().filter_map(|imgs| Hom::from_images(dom, cod, &imgs).ok()).collect()
}

/// A morphism whose propagation fails in a given way, with the page and
/// position where it does.
#[derive(Clone, Debug)]
pub struct NonPropagation {
    pub morphism: SSMorphism,
    pub page: i64,
    pub position: Pos,
}

fn order(g: &FPAbGroup) -> usize {
    g.order().map(|o| o.to_string().parse().unwrap()).unwrap_or(usize::MAX)
}

/// Exhaustive search over two-position spectral sequences `E_{1,0} → E_{0,0}`
/// with first pages of order at most 8 for a morphism that is componentwise
/// mono (or epi) on page 1 but not on page 2.
pub fn find_non_propagation(mono: bool) -> Option<NonPropagation> {
    let palette = [
        FPAbGroup::zero(),
        FPAbGroup::z_mod(2),
        FPAbGroup::z_mod(3),
        FPAbGroup::z_mod(4),
        FPAbGroup::from_invariants_i64(0, &[2, 2]).unwrap(),
    ];
    let bounds = Bounds::new((0, 1), (0, 0)).unwrap();
    let (s, t) = ((1, 0), (0, 0));
    let mut pages = Vec::new();
    for gs in &palette {
        for gt in &palette {
            if order(gs) * order(gt) > 8 {
                continue;
            }
            for d in all_homs(gs, gt, 64) {
                let groups = BigradedGroup::new(bounds, [(s, gs.clone()), (t, gt.clone())].into()).unwrap();
                let ss = SpectralSequence::build(1, BidegreeRule::Homological, groups, [(1, [(s, d)].into())].into())
                    .expect("two positions carry no composite");
                pages.push((order(gs) * order(gt), ss));
            }
        }
    }
    pages.sort_by_key(|(n, _)| *n);
    let wanted = |h: &Hom| if mono { h.is_mono() } else { h.is_epi() };
    for (_, a) in &pages {
        for (_, b) in &pages {
            let fs_all = all_homs(&a.group(1, s), &b.group(1, s), 64);
            let ft_all = all_homs(&a.group(1, t), &b.group(1, t), 64);
            for fs in fs_all.iter().filter(|h| wanted(h)) {
                for ft in ft_all.iter().filter(|h| wanted(h)) {
                    let Ok(f) = SSMorphism::new(a, b, [(s, fs.clone()), (t, ft.clone())].into()) else {
                        continue;
                    };
                    for x in [s, t] {
                        if !wanted(&f.component(2, x)) {
                            return Some(NonPropagation { morphism: f, page: 2, position: x });
                        }
                    }
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::e_infinity;

    fn times_k_ss(k: i64) -> SpectralSequence {
        let z = FPAbGroup::z();
        let b = Bounds::new((0, 1), (0, 0)).unwrap();
        let groups = BigradedGroup::new(b, [((1, 0), z.clone()), ((0, 0), z.clone())].into()).unwrap();
        let d = Hom::from_i64(&z, &z, &[vec![k]]).unwrap();
        SpectralSequence::build(1, BidegreeRule::Homological, groups, [(1, [((1, 0), d)].into())].into()).unwrap()
    }

    #[test]
    fn identity_morphism() {
        let ss = times_k_ss(3);
        let f = SSMorphism::identity(&ss).unwrap();
        let rep = morphism_tools(&f).unwrap();
        assert!(rep.propagation.holds());
        assert_eq!(rep.iso_propagation, Some(true));
        assert!(rep.f_infinity_from_cycles);
        assert!(rep.f_infinity.values().all(|h| h.is_iso()));
    }

    #[test]
    fn non_commuting_square_is_rejected() {
        let ss = times_k_ss(2);
        let z = FPAbGroup::z();
        let f0 = [((1, 0), Hom::identity(&z)), ((0, 0), Hom::scalar(&z, 2))].into();
        assert!(matches!(SSMorphism::new(&ss, &ss, f0), Err(SpecError::NotAMorphism { page: 1, .. })));
    }

    #[test]
    fn direct_sum_of_pages() {
        let a = times_k_ss(2);
        let b = times_k_ss(3);
        let s = direct_sum(&a, &b).unwrap();
        let ei = e_infinity(&s).unwrap();
        assert!(ei.groups.get((0, 0)).isomorphic(&FPAbGroup::z_mod(6)));
        assert!(ei.groups.get((1, 0)).is_trivial());
    }

    #[test]
    fn mono_does_not_propagate() {
        let np = find_non_propagation(true).expect("a counterexample exists");
        let f = &np.morphism;
        assert!(f.positions().iter().all(|&x| f.component(1, x).is_mono()));
        assert!(!f.component(2, np.position).is_mono());
        let np = find_non_propagation(false).expect("a counterexample exists");
        assert!(!np.morphism.component(2, np.position).is_epi());
    }
}
