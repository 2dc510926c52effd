use std::collections::BTreeMap;

use spectral::{add, cycles_boundaries, sub, turn_page, BidegreeRule, BigradedGroup, Pos, SpectralSequence};
use zdiagrams::{default_budget, i_omega_at, image_at, q_omega_kernel_at};
use zlinalg::{induced_map, subquotient, Elem, FPAbGroup, Hom, LinalgError, Subgroup, Subquotient};

use crate::{internal, ExactCouple, ExcoupleError};

/// `Z^τ_y = k_y⁻¹(I^τ_{y+c})`.
pub fn cycles(c: &ExactCouple, y: Pos, tau: i64) -> Result<Subgroup, ExcoupleError> {
    let w = add(y, c.bidegrees().c);
    let (d, r) = c.locate(w);
    let img = image_at(d, r, tau as usize);
    Ok(c.k_map(y).preimage(&img)?)
}

/// `B^τ_y = j_{y−b}(Ker(i^τ : D_{y−b} → D_{y−b+τa}))`.
pub fn boundaries(c: &ExactCouple, y: Pos, tau: i64) -> Result<Subgroup, ExcoupleError> {
    let x = sub(y, c.bidegrees().b);
    Ok(c.i_pow(x, tau).kernel().image_under(&c.j_map(x))?)
}

/// The additive relation `j ∘ (i^{r−1})⁻¹ ∘ k` applied to `e ∈ Z^{r−1}_y`,
/// with whatever preimage the solver returns.
pub(crate) fn delta(c: &ExactCouple, y: Pos, r: i64, e: &[zlinalg::BigInt]) -> Result<Elem, ExcoupleError> {
    let bd = c.bidegrees();
    let w = add(y, bd.c);
    let v = c.k_map(y).apply(e);
    let src = (w.0 - (r - 1) * bd.a.0, w.1 - (r - 1) * bd.a.1);
    let pre = c.i_pow(src, r - 1).solve(&v).map_err(|err| match err {
        LinalgError::Absent => internal(format!("k(e) has no preimage under i^{} at {y:?}", r - 1)),
        other => other.into(),
    })?;
    Ok(c.j_map(src).apply(&pre))
}

/// `E^r = Z^{r−1}/B^{r−1}` with `d^r` built from the additive relation.
#[derive(Clone, Debug)]
pub struct InternalPage {
    pub r: i64,
    pub v: Pos,
    pub cycles: BTreeMap<Pos, Subgroup>,
    pub boundaries: BTreeMap<Pos, Subgroup>,
    pub quotients: BTreeMap<Pos, Subquotient>,
    pub groups: BigradedGroup,
    /// Non-zero components of `d^r` on the generators of the quotients.
    pub d: BTreeMap<Pos, Hom>,
}

impl InternalPage {
    pub fn d_at(&self, y: Pos) -> Hom {
        self.d
            .get(&y)
            .cloned()
            .unwrap_or_else(|| Hom::zero(&self.groups.get(y), &self.groups.get(add(y, self.v))))
    }
}

/// Page `r ≥ 1` computed directly from the couple. The differential is checked
/// to be well defined, and `Z^r`, `B^r` are checked against the kernel and
/// image of `d^r` pulled back along `Z^{r−1} → E^r`.
pub fn internal_page(c: &ExactCouple, r: i64) -> Result<InternalPage, ExcoupleError> {
    if r < 1 {
        return Err(ExcoupleError::InvalidInput(format!("page {r} precedes the first page")));
    }
    let v = c.bidegrees().v(r);
    let support: Vec<Pos> = c.e().support().collect();
    let mut cyc = BTreeMap::new();
    let mut bnd = BTreeMap::new();
    let mut quotients = BTreeMap::new();
    let mut groups = BTreeMap::new();
    for &y in &support {
        let z = cycles(c, y, r - 1)?;
        let b = boundaries(c, y, r - 1)?;
        let q = subquotient(&z, &b).map_err(|_| internal(format!("B^{} ⊄ Z^{} at {y:?}", r - 1, r - 1)))?;
        groups.insert(y, q.group().clone());
        cyc.insert(y, z);
        bnd.insert(y, b);
        quotients.insert(y, q);
    }
    let groups = BigradedGroup::new(*c.support(), groups)?;
    let mut d = BTreeMap::new();
    for &y in &support {
        let t = add(y, v);
        let (Some(qs), Some(qt)) = (quotients.get(&y), quotients.get(&t)) else { continue };
        if qs.group().is_trivial() || qt.group().is_trivial() {
            continue;
        }
        let imgs = qs
            .section()
            .iter()
            .map(|g| {
                let e = delta(c, y, r, g)?;
                qt.project(&e).map_err(|_| internal(format!("Δ^{r} leaves Z^{} at {t:?}", r - 1)))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let h = Hom::from_images(qs.group(), qt.group(), &imgs)
            .map_err(|_| internal(format!("d^{r} at {y:?} is not well defined")))?;
        for g in bnd[&y].generators() {
            if !bnd[&t].contains(&delta(c, y, r, &g)?) {
                return Err(internal(format!("Δ^{r} does not carry B^{} into B^{} at {y:?}", r - 1, r - 1)));
            }
        }
        if !h.is_zero() {
            d.insert(y, h);
        }
    }
    let page = InternalPage { r, v, cycles: cyc, boundaries: bnd, quotients, groups, d };
    for &y in &support {
        let q = &page.quotients[&y];
        let z_next = q.pull_back(&page.d_at(y).kernel());
        let b_next = q.pull_back(&page.d_at(sub(y, v)).image());
        if z_next != cycles(c, y, r)? || b_next != boundaries(c, y, r)? {
            return Err(internal(format!("Z^{r}, B^{r} at {y:?} disagree with Ker d^{r}, Im d^{r}")));
        }
    }
    Ok(page)
}

/// Homology data of pages `2, …, R` of `ss`, in order.
fn chain(ss: &SpectralSequence, upto: i64) -> Vec<&BTreeMap<Pos, Subquotient>> {
    ss.pages().iter().filter(|p| p.r > ss.r0() && p.r <= upto).map(|p| &p.homology).collect()
}

fn lift_through(chain: &[&BTreeMap<Pos, Subquotient>], x: Pos, q: &[zlinalg::BigInt]) -> Elem {
    let mut cur: Elem = q.to_vec();
    for h in chain.iter().rev() {
        cur = h[&x].lift(&cur);
    }
    cur
}

fn project_through(
    chain: &[&BTreeMap<Pos, Subquotient>],
    x: Pos,
    e: &[zlinalg::BigInt],
    target: &FPAbGroup,
) -> Result<Elem, LinalgError> {
    let mut cur: Elem = e.to_vec();
    for h in chain {
        match h.get(&x) {
            Some(s) => cur = s.project(&cur)?,
            None => return Ok(target.zero_elem()),
        }
    }
    Ok(cur)
}

/// The spectral sequence of `c`, from `E¹ = E` and `d¹ = jk`, turning pages
/// with the generic homology routine and taking each `d^r` from the additive
/// relation evaluated on the computed generators.
pub fn to_spectral_sequence(c: &ExactCouple) -> Result<SpectralSequence, ExcoupleError> {
    let bd = *c.bidegrees();
    let bounds = *c.support();
    let rule = BidegreeRule::Explicit(vec![bd.v(1), bd.v(2)]);
    let mut d1 = BTreeMap::new();
    for y in c.e().support() {
        if bounds.contains(add(y, bd.v(1))) {
            d1.insert(y, c.d1(y));
        }
    }
    let mut ss = SpectralSequence::new(1, rule, c.e().clone(), d1)?;
    let h = ss.horizon()?;
    while ss.last_page().r < h {
        let r = ss.last_page().r + 1;
        let v = bd.v(r);
        let (groups, hom) = turn_page(ss.last_page())?;
        let mut ch = chain(&ss, r - 1);
        ch.push(&hom);
        let mut diffs = BTreeMap::new();
        for y in groups.support() {
            let t = add(y, v);
            let tg = groups.get(t);
            if tg.is_trivial() {
                continue;
            }
            let imgs = groups
                .get(y)
                .gens()
                .iter()
                .map(|g| {
                    let e = lift_through(&ch, y, g);
                    let img = delta(c, y, r, &e)?;
                    project_through(&ch, t, &img, &tg).map_err(|_| internal(format!("Δ^{r} at {y:?} is not a cycle")))
                })
                .collect::<Result<Vec<_>, ExcoupleError>>()?;
            let hm = Hom::from_images(&groups.get(y), &tg, &imgs)
                .map_err(|_| internal(format!("d^{r} at {y:?} is not well defined")))?;
            diffs.insert(y, hm);
        }
        ss.turn(diffs)?;
    }
    Ok(ss)
}

/// Whether page `r` of `ss` (built by [`to_spectral_sequence`]) agrees with
/// [`internal_page`]: same groups, same cycles and boundaries inside `E`, and
/// the same differential once classes are transported between the two models.
pub fn page_agreement(c: &ExactCouple, ss: &SpectralSequence, page: &InternalPage) -> Result<bool, ExcoupleError> {
    let r = page.r;
    let ch = chain(ss, r);
    for y in c.e().support() {
        if !page.groups.get(y).isomorphic(&ss.group(r, y)) {
            return Ok(false);
        }
        let cb = cycles_boundaries(ss, y, r - 1)?;
        if cb.z_top() != &page.cycles[&y] || cb.b_top() != &page.boundaries[&y] {
            return Ok(false);
        }
        let t = add(y, page.v);
        let q = &page.quotients[&y];
        let ssd = ss.d(r, y);
        let tg = ss.group(r, t);
        for (g, e) in q.group().gens().iter().zip(q.section()) {
            let lhs = ssd.apply(&project_through(&ch, y, e, &ss.group(r, y))?);
            let img = page.d_at(y).apply(g);
            let rhs = match page.quotients.get(&t) {
                Some(qt) => project_through(&ch, t, &qt.lift(&img), &tg)?,
                None => tg.zero_elem(),
            };
            if !tg.elem_eq(&lhs, &rhs) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `Z∞ = k⁻¹(I^ω)`, `B∞ = j(Ker(D → colim))` and `E∞ = Z∞/B∞` at one position.
#[derive(Clone, Debug)]
pub struct InfinityData {
    pub cycles: Subgroup,
    pub boundaries: Subgroup,
    pub quotient: Subquotient,
    /// Stages from which the image and kernel towers are constant.
    pub i_stage: usize,
    pub q_stage: usize,
}

fn budget_for(c: &ExactCouple, x: Pos, budget: Option<usize>) -> usize {
    budget.unwrap_or_else(|| default_budget(c.locate(x).0))
}

pub(crate) fn infinity_at(c: &ExactCouple, y: Pos, budget: Option<usize>) -> Result<InfinityData, ExcoupleError> {
    let bd = c.bidegrees();
    let w = add(y, bd.c);
    let x = sub(y, bd.b);
    let (dw, rw) = c.locate(w);
    let (iw, i_stage) = i_omega_at(dw, rw, budget_for(c, w, budget))?;
    let (dx, rx) = c.locate(x);
    let (kq, q_stage) = q_omega_kernel_at(dx, rx, budget_for(c, x, budget))?;
    let z = c.k_map(y).preimage(&iw)?;
    let b = kq.image_under(&c.j_map(x))?;
    let quotient = subquotient(&z, &b).map_err(|_| internal(format!("B∞ ⊄ Z∞ at {y:?}")))?;
    Ok(InfinityData { cycles: z, boundaries: b, quotient, i_stage, q_stage })
}

/// `E∞` at every non-zero position of `E`.
pub fn e_infinity_internal(c: &ExactCouple, budget: Option<usize>) -> Result<BTreeMap<Pos, InfinityData>, ExcoupleError> {
    c.e().support().map(|y| Ok((y, infinity_at(c, y, budget)?))).collect()
}

/// `Ē = k⁻¹(Ī)/B^ω` with its inclusion into `E∞` and the stage from which the
/// cycle tower `Z^τ` is stationary.
#[derive(Clone, Debug)]
pub struct StableE {
    pub group: FPAbGroup,
    pub quotient: Subquotient,
    pub stage: usize,
    pub inclusion: Hom,
    pub e_infinity: InfinityData,
}

pub fn stable_e(c: &ExactCouple, y: Pos, budget: Option<usize>) -> Result<StableE, ExcoupleError> {
    let w = add(y, c.bidegrees().c);
    let (dw, rw) = c.locate(w);
    let bar = zdiagrams::limit_and_lim1(dw)?.rho(rw).image();
    let inf = infinity_at(c, y, budget)?;
    let z = c.k_map(y).preimage(&bar)?;
    let quotient = subquotient(&z, &inf.boundaries).map_err(|_| internal(format!("B^ω ⊄ k⁻¹(Ī) at {y:?}")))?;
    let inclusion = induced_map(&quotient, &inf.quotient, &Hom::identity(&c.e_group(y)))?;
    if !inclusion.is_mono() {
        return Err(internal(format!("Ē → E∞ is not a monomorphism at {y:?}")));
    }
    Ok(StableE { group: quotient.group().clone(), stage: inf.i_stage.max(inf.q_stage), quotient, inclusion, e_infinity: inf })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::demos;

    #[test]
    fn first_page_is_e() {
        let c = demos::couple2();
        let p = internal_page(&c, 1).unwrap();
        assert_eq!(p.groups.get((0, 0)), FPAbGroup::z_mod(6));
        assert!(p.d.is_empty());
    }

    #[test]
    fn demo_sequences_coincide_and_collapse() {
        let ss: Vec<_> = [demos::couple1(), demos::couple2(), demos::couple3()]
            .iter()
            .map(|c| to_spectral_sequence(c).unwrap())
            .collect();
        assert!(ss[0].same_pages(&ss[1]) && ss[1].same_pages(&ss[2]));
        assert_eq!(spectral::collapse_page(&ss[2]), Some(1));
        let c3 = demos::couple3();
        for r in 1..=4 {
            let p = internal_page(&c3, r).unwrap();
            assert!(p.d.is_empty());
            assert_eq!(p.groups.get((0, 0)), FPAbGroup::z_mod(6));
            assert!(page_agreement(&c3, &ss[2], &p).unwrap());
        }
    }

    #[test]
    fn stable_and_infinite_pages() {
        for c in [demos::couple1(), demos::couple2(), demos::couple3()] {
            let s = stable_e(&c, (0, 0), None).unwrap();
            assert_eq!(s.group, FPAbGroup::z_mod(6));
            assert!(s.inclusion.is_iso());
        }
        let z = ExactCouple::zero(crate::Bidegrees::homological()).unwrap();
        assert!(stable_e(&z, (0, 0), None).unwrap().group.is_trivial());
    }
}
