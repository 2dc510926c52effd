use std::collections::{BTreeMap, BTreeSet};

use zlinalg::{subquotient, Elem, FPAbGroup, Hom, Subgroup, Subquotient};

use crate::{add, sub, BidegreeRule, BigradedGroup, Bounds, Pos, SpecError};

/// One page `E^r` with its differential `d^r` of bidegree `v`.
#[derive(Clone, Debug)]
pub struct Page {
    pub r: i64,
    pub v: Pos,
    pub groups: BigradedGroup,
    /// Non-zero components `d^r_x : E^r_x → E^r_{x+v}`, keyed by source.
    pub diffs: BTreeMap<Pos, Hom>,
    /// `E^r_x` as `Ker d / Im d` on the previous page; empty on the first page.
    pub homology: BTreeMap<Pos, Subquotient>,
}

impl Page {
    pub fn group(&self, x: Pos) -> FPAbGroup {
        self.groups.get(x)
    }

    pub fn d(&self, x: Pos) -> Hom {
        match self.diffs.get(&x) {
            Some(h) => h.clone(),
            None => Hom::zero(&self.group(x), &self.group(add(x, self.v))),
        }
    }

    pub fn is_zero_differential(&self) -> bool {
        self.diffs.is_empty()
    }

    /// `E^r_x` as a subquotient of `E^{r−1}_x`; absent when `E^{r−1}_x = 0`.
    pub fn homology_at(&self, x: Pos) -> Option<&Subquotient> {
        self.homology.get(&x)
    }
}

fn check_diffs(groups: &BigradedGroup, v: Pos, diffs: BTreeMap<Pos, Hom>, r: i64) -> Result<BTreeMap<Pos, Hom>, SpecError> {
    let mut out = BTreeMap::new();
    for (x, h) in diffs {
        let (a, b) = (groups.get(x), groups.get(add(x, v)));
        if h.domain() != &a || h.codomain() != &b {
            return Err(SpecError::InvalidInput(format!(
                "d^{r} at {x:?} should map {a} to {b}"
            )));
        }
        if !h.is_zero() {
            out.insert(x, h);
        }
    }
    Ok(out)
}

/// Next page of `page`: `E^{r+1}_x = Ker d_x / Im d_{x−v}`, with the
/// subquotient data at every position.
pub fn turn_page(page: &Page) -> Result<(BigradedGroup, BTreeMap<Pos, Subquotient>), SpecError> {
    let v = page.v;
    for (&x, d) in &page.diffs {
        let y = add(x, v);
        if let Some(e) = page.diffs.get(&y) {
            if !e.compose(d)?.is_zero() {
                return Err(SpecError::NotADifferential { page: page.r, position: x });
            }
        }
    }
    let mut groups = BTreeMap::new();
    let mut homology = BTreeMap::new();
    for x in page.groups.support() {
        let z = page.d(x).kernel();
        let b = page.d(sub(x, v)).image();
        let q = subquotient(&z, &b)?;
        groups.insert(x, q.group().clone());
        homology.insert(x, q);
    }
    Ok((BigradedGroup::new(*page.groups.bounds(), groups)?, homology))
}

/// A spectral sequence with bounded support, stored page by page from `r0`
/// up to a page from which every differential leaves the bounds.
#[derive(Clone, Debug)]
pub struct SpectralSequence {
    r0: i64,
    rule: BidegreeRule,
    pages: Vec<Page>,
}

impl SpectralSequence {
    /// Starts a spectral sequence from `E^{r0}` and `d^{r0}`.
    pub fn new(r0: i64, rule: BidegreeRule, groups: BigradedGroup, diffs: BTreeMap<Pos, Hom>) -> Result<Self, SpecError> {
        let v = rule.v(r0, r0);
        let diffs = check_diffs(&groups, v, diffs, r0)?;
        let page = Page { r: r0, v, groups, diffs, homology: BTreeMap::new() };
        turn_page(&page)?;
        Ok(SpectralSequence { r0, rule, pages: vec![page] })
    }

    /// Builds every page: `diffs[r]` gives `d^r` on the canonical generators
    /// of the computed `E^r`; missing differentials are zero.
    pub fn build(
        r0: i64,
        rule: BidegreeRule,
        groups: BigradedGroup,
        mut diffs: BTreeMap<i64, BTreeMap<Pos, Hom>>,
    ) -> Result<Self, SpecError> {
        let last_given = diffs.keys().next_back().copied().unwrap_or(r0);
        let mut ss = SpectralSequence::new(r0, rule, groups, diffs.remove(&r0).unwrap_or_default())?;
        while ss.last_page().r < last_given {
            let r = ss.last_page().r + 1;
            ss.turn(diffs.remove(&r).unwrap_or_default())?;
        }
        ss.complete()?;
        Ok(ss)
    }

    pub fn r0(&self) -> i64 {
        self.r0
    }

    pub fn rule(&self) -> &BidegreeRule {
        &self.rule
    }

    pub fn bounds(&self) -> &Bounds {
        self.pages[0].groups.bounds()
    }

    pub fn v(&self, r: i64) -> Pos {
        self.rule.v(self.r0, r)
    }

    pub fn pages(&self) -> &[Page] {
        &self.pages
    }

    pub fn last_page(&self) -> &Page {
        self.pages.last().expect("at least one page")
    }

    /// Page `r`; pages past the last stored one repeat it with zero differential.
    pub fn page(&self, r: i64) -> Option<&Page> {
        if r < self.r0 {
            return None;
        }
        let i = ((r - self.r0) as usize).min(self.pages.len() - 1);
        Some(&self.pages[i])
    }

    pub fn group(&self, r: i64, x: Pos) -> FPAbGroup {
        self.page(r).map(|p| p.group(x)).unwrap_or_else(FPAbGroup::zero)
    }

    /// `d^r_x`, zero past the stored pages.
    pub fn d(&self, r: i64, x: Pos) -> Hom {
        let last = self.last_page().r;
        match self.page(r) {
            Some(p) if r <= last => p.d(x),
            _ => {
                let g = self.group(r, x);
                let h = self.group(r, add(x, self.v(r)));
                Hom::zero(&g, &h)
            }
        }
    }

    /// Turns the last page and attaches `d^{r+1}`.
    pub fn turn(&mut self, next: BTreeMap<Pos, Hom>) -> Result<(), SpecError> {
        self.turn_with(|_, _| Ok(next))
    }

    /// Turns the last page; `next` receives the new groups with their
    /// homology data and returns `d^{r+1}`.
    pub fn turn_with(
        &mut self,
        next: impl FnOnce(&BigradedGroup, &BTreeMap<Pos, Subquotient>) -> Result<BTreeMap<Pos, Hom>, SpecError>,
    ) -> Result<(), SpecError> {
        let cur = self.last_page();
        let (groups, homology) = turn_page(cur)?;
        let r = cur.r + 1;
        let v = self.v(r);
        let diffs = check_diffs(&groups, v, next(&groups, &homology)?, r)?;
        let page = Page { r, v, groups, diffs, homology };
        turn_page(&page)?;
        self.pages.push(page);
        Ok(())
    }

    /// Page from which every differential leaves the bounds.
    pub fn horizon(&self) -> Result<i64, SpecError> {
        self.rule.horizon(self.r0, self.bounds())
    }

    /// Adds zero pages until the horizon is stored.
    pub fn complete(&mut self) -> Result<i64, SpecError> {
        let h = self.horizon()?;
        while self.last_page().r < h {
            self.turn(BTreeMap::new())?;
        }
        Ok(self.last_page().r)
    }

    /// Adds `k` further zero pages.
    pub fn extend(&mut self, k: usize) -> Result<(), SpecError> {
        for _ in 0..k {
            self.turn(BTreeMap::new())?;
        }
        Ok(())
    }

    pub fn positions(&self) -> BTreeSet<Pos> {
        self.pages[0].groups.support().collect()
    }

    /// Pages agree positionwise and have the same differentials. Bounds may
    /// differ; pages past the last stored one repeat it.
    pub fn same_pages(&self, other: &SpectralSequence) -> bool {
        let last = self.last_page().r.max(other.last_page().r);
        let groups = |s: &SpectralSequence, r: i64| -> BTreeMap<Pos, FPAbGroup> {
            let page = s.page(r).unwrap_or_else(|| s.last_page());
            page.groups.iter().map(|(x, g)| (x, g.clone())).collect()
        };
        self.r0 == other.r0
            && (self.r0..=last).all(|r| groups(self, r) == groups(other, r) && self.d_all(r) == other.d_all(r))
    }

    fn d_all(&self, r: i64) -> BTreeMap<Pos, Hom> {
        if r > self.last_page().r {
            return BTreeMap::new();
        }
        self.page(r).map(|p| p.diffs.clone()).unwrap_or_default()
    }

    /// Sum of `self` and `other` page by page.
    pub fn direct_sum(&self, other: &SpectralSequence) -> Result<SpectralSequence, SpecError> {
        crate::morphism::direct_sum(self, other)
    }
}

/// The nested cycles and boundaries at one position, as subgroups of `E^{r0}_x`.
#[derive(Clone, Debug)]
pub struct CyclesBoundaries {
    pub x: Pos,
    pub r0: i64,
    /// `Z^{r0−1}, Z^{r0}, …, Z^r`.
    pub z: Vec<Subgroup>,
    /// `B^{r0−1}, B^{r0}, …, B^r`.
    pub b: Vec<Subgroup>,
    /// `Z^r → E^{r+1}_x`, on the canonical generators of `Z^r`.
    pub phi: Hom,
}

impl CyclesBoundaries {
    pub fn z_top(&self) -> &Subgroup {
        self.z.last().expect("non-empty")
    }

    pub fn b_top(&self) -> &Subgroup {
        self.b.last().expect("non-empty")
    }

    /// `B^k ⊆ B^{k+1} ⊆ Z^{k+1} ⊆ Z^k` for every stored `k`.
    pub fn is_nested(&self) -> bool {
        let sub = |a: &Subgroup, b: &Subgroup| a.is_subset(b).unwrap_or(false);
        (0..self.z.len() - 1).all(|k| {
            sub(&self.b[k], &self.b[k + 1]) && sub(&self.b[k + 1], &self.z[k + 1]) && sub(&self.z[k + 1], &self.z[k])
        })
    }

    pub fn quotient(&self) -> Subquotient {
        subquotient(self.z_top(), self.b_top()).expect("B^r ⊆ Z^r")
    }
}

/// Pulls a subgroup of `E^r_x` back to `E^{r0}_x` through the stored homology data.
fn pull_back_to_start(ss: &SpectralSequence, x: Pos, r: i64, s: Subgroup) -> Subgroup {
    let mut cur = s;
    let mut k = r;
    while k > ss.r0 {
        let page = ss.page(k).expect("stored page");
        cur = match page.homology_at(x) {
            Some(h) => h.pull_back(&cur),
            // trivial position: every earlier preimage is the whole previous group
            None => Subgroup::whole(&ss.group(k - 1, x)),
        };
        k -= 1;
    }
    cur
}

/// Pushes an element of `Z^r ⊆ E^{r0}_x` forward to `E^{r+1}_x`.
pub(crate) fn push_forward(ss: &SpectralSequence, x: Pos, r: i64, e: &Elem) -> Result<Elem, SpecError> {
    let mut cur = e.clone();
    for k in ss.r0 + 1..=r + 1 {
        let page = ss.page(k).expect("stored page");
        cur = match page.homology_at(x) {
            Some(h) => h.project(&cur)?,
            None => page.group(x).zero_elem(),
        };
    }
    Ok(cur)
}

/// `B^{r0−1} ⊆ … ⊆ B^r ⊆ Z^r ⊆ … ⊆ Z^{r0−1}` at `x`, with `Z^r/B^r ≅ E^{r+1}_x`.
pub fn cycles_boundaries(ss: &SpectralSequence, x: Pos, r: i64) -> Result<CyclesBoundaries, SpecError> {
    if r < ss.r0 - 1 {
        return Err(SpecError::InvalidInput(format!("page {r} precedes the first page")));
    }
    let owned;
    let ss = if ss.last_page().r < r + 1 {
        let mut c = ss.clone();
        while c.last_page().r < r + 1 {
            c.turn(BTreeMap::new())?;
        }
        owned = c;
        &owned
    } else {
        ss
    };
    let e0 = ss.group(ss.r0, x);
    let mut z = vec![Subgroup::whole(&e0)];
    let mut b = vec![Subgroup::zero(&e0)];
    for k in ss.r0..=r {
        let ker = ss.d(k, x).kernel();
        let img = ss.d(k, sub(x, ss.v(k))).image();
        z.push(pull_back_to_start(ss, x, k, ker));
        b.push(pull_back_to_start(ss, x, k, img));
    }
    let zq = subquotient(z.last().unwrap(), &Subgroup::zero(&e0))?;
    let target = ss.group(r + 1, x);
    let imgs = zq
        .section()
        .iter()
        .map(|g| push_forward(ss, x, r, g))
        .collect::<Result<Vec<_>, _>>()?;
    let phi = Hom::from_images(zq.group(), &target, &imgs)?;
    Ok(CyclesBoundaries { x, r0: ss.r0, z, b, phi })
}

/// `E∞` with the page from which each position is stationary.
#[derive(Clone, Debug)]
pub struct EInfinity {
    pub groups: BigradedGroup,
    pub stable_page: BTreeMap<Pos, i64>,
    /// `Z∞_x` and `B∞_x` inside `E^{r0}_x`.
    pub cycles: BTreeMap<Pos, Subgroup>,
    pub boundaries: BTreeMap<Pos, Subgroup>,
}

pub fn e_infinity(ss: &SpectralSequence) -> Result<EInfinity, SpecError> {
    let h = ss.horizon()?;
    let last = ss.last_page().r.max(h);
    let mut full = ss.clone();
    while full.last_page().r < last {
        full.turn(BTreeMap::new())?;
    }
    let groups = full.last_page().groups.clone();
    let mut stable_page = BTreeMap::new();
    let mut cycles = BTreeMap::new();
    let mut boundaries = BTreeMap::new();
    for x in full.positions() {
        let mut s = last;
        while s > full.r0 {
            let k = s - 1;
            let quiet = full.d(k, x).is_zero() && full.d(k, sub(x, full.v(k))).is_zero();
            if !quiet {
                break;
            }
            s = k;
        }
        stable_page.insert(x, s);
        let cb = cycles_boundaries(&full, x, last - 1)?;
        cycles.insert(x, cb.z_top().clone());
        boundaries.insert(x, cb.b_top().clone());
    }
    Ok(EInfinity { groups, stable_page, cycles, boundaries })
}

/// Least page from which every differential vanishes.
pub fn collapse_page(ss: &SpectralSequence) -> Option<i64> {
    ss.horizon().ok()?;
    let mut c = ss.last_page().r;
    while c > ss.r0 && ss.page(c - 1).is_some_and(|p| p.is_zero_differential()) {
        c -= 1;
    }
    if ss.last_page().is_zero_differential() {
        Some(c)
    } else {
        Some(ss.last_page().r + 1)
    }
}

/// `E∞_x` computed as `(⋂_r Z^r)/(⋃_r B^r)` agrees with the stationary page,
/// and `Z∞ → E∞` is onto with kernel `B∞`, at every position.
pub fn e_infinity_interchange(ss: &SpectralSequence) -> Result<bool, SpecError> {
    let ei = e_infinity(ss)?;
    let top = ss.last_page().r.max(ss.horizon()?);
    for x in ss.positions() {
        let cb = cycles_boundaries(ss, x, top)?;
        if !cb.is_nested() {
            return Ok(false);
        }
        let zi = cb.z.iter().skip(1).try_fold(cb.z[0].clone(), |acc, s| acc.intersect(s))?;
        let bu = cb.b.iter().skip(1).try_fold(cb.b[0].clone(), |acc, s| acc.sum(s))?;
        if &zi != cb.z_top() || &bu != cb.b_top() {
            return Ok(false);
        }
        if !subquotient(&zi, &bu)?.group().isomorphic(&ei.groups.get(x)) {
            return Ok(false);
        }
        let zq = subquotient(&zi, &Subgroup::zero(zi.ambient()))?;
        let incl = Hom::from_images(zq.group(), zi.ambient(), zq.section())?;
        if !cb.phi.is_epi() || cb.phi.kernel().image_under(&incl)? != bu {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use zlinalg::{elem, FPAbGroup};

    fn two_positions(g: FPAbGroup, h: FPAbGroup, d: Vec<Vec<i64>>) -> SpectralSequence {
        // d^1 : E_{1,0} → E_{0,0}
        let b = Bounds::new((0, 1), (0, 0)).unwrap();
        let groups = BigradedGroup::new(b, [((1, 0), g.clone()), ((0, 0), h.clone())].into()).unwrap();
        let dm = Hom::from_i64(&g, &h, &d).unwrap();
        SpectralSequence::build(1, BidegreeRule::Homological, groups, [(1, [((1, 0), dm)].into())].into()).unwrap()
    }

    #[test]
    fn zero_differential_keeps_page() {
        let b = Bounds::new((0, 2), (0, 2)).unwrap();
        let g = BigradedGroup::new(b, [((0, 0), FPAbGroup::z()), ((2, 1), FPAbGroup::z_mod(4))].into()).unwrap();
        let ss = SpectralSequence::build(2, BidegreeRule::Homological, g.clone(), BTreeMap::new()).unwrap();
        assert_eq!(ss.page(3).unwrap().groups, g);
        assert_eq!(collapse_page(&ss), Some(2));
        let cb = cycles_boundaries(&ss, (2, 1), 4).unwrap();
        assert!(cb.z.iter().all(|s| s.is_whole()) && cb.b.iter().all(|s| s.is_zero()));
    }

    #[test]
    fn times_two() {
        let z = FPAbGroup::z();
        let ss = two_positions(z.clone(), z.clone(), vec![vec![2]]);
        let p2 = ss.page(2).unwrap();
        assert!(p2.group((1, 0)).is_trivial());
        assert_eq!(p2.group((0, 0)), FPAbGroup::z_mod(2));
        let cb = cycles_boundaries(&ss, (0, 0), 1).unwrap();
        assert!(cb.z_top().is_whole());
        assert_eq!(cb.b_top(), &Subgroup::from_generators(&z, &[elem(&[2])]));
        assert_eq!(collapse_page(&ss), Some(2));
    }

    #[test]
    fn projection_z4_to_z2() {
        let ss = two_positions(FPAbGroup::z_mod(4), FPAbGroup::z_mod(2), vec![vec![1]]);
        let p2 = ss.page(2).unwrap();
        assert_eq!(p2.group((1, 0)), FPAbGroup::z_mod(2));
        assert!(p2.group((0, 0)).is_trivial());
    }

    #[test]
    fn times_three_e_infinity() {
        let z = FPAbGroup::z();
        let ss = two_positions(z.clone(), z, vec![vec![3]]);
        let ei = e_infinity(&ss).unwrap();
        assert!(ei.groups.get((1, 0)).is_trivial());
        assert_eq!(ei.groups.get((0, 0)), FPAbGroup::z_mod(3));
        assert_eq!(ei.stable_page[&(0, 0)], 2);
        assert!(e_infinity_interchange(&ss).unwrap());
    }

    #[test]
    fn rejects_non_differential() {
        let b = Bounds::new((0, 2), (0, 0)).unwrap();
        let z = FPAbGroup::z();
        let groups = BigradedGroup::new(b, [((0, 0), z.clone()), ((1, 0), z.clone()), ((2, 0), z.clone())].into()).unwrap();
        let one = Hom::identity(&z);
        let res = SpectralSequence::new(1, BidegreeRule::Homological, groups, [((2, 0), one.clone()), ((1, 0), one)].into());
        assert!(matches!(res, Err(SpecError::NotADifferential { page: 1, .. })));
    }
}
