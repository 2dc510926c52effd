use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;

use spectral::{add, sub, BigradedGroup, Bounds, Pos};
use zdiagrams::{TailSpec, ZDiagram};
use zlinalg::{exact_at, FPAbGroup, Hom};

use crate::{Bidegrees, Corner, ExcoupleError};

fn zero_diagram() -> &'static ZDiagram {
    static ZERO: OnceLock<ZDiagram> = OnceLock::new();
    ZERO.get_or_init(ZDiagram::zero)
}

pub(crate) fn bbox(points: impl IntoIterator<Item = Pos>) -> Option<Bounds> {
    let mut it = points.into_iter();
    let first = it.next()?;
    let mut b = Bounds { p: (first.0, first.0), q: (first.1, first.1) };
    for x in it {
        b.p = (b.p.0.min(x.0), b.p.1.max(x.0));
        b.q = (b.q.0.min(x.1), b.q.1.max(x.1));
    }
    Some(b)
}

/// A regular exact couple with `E` supported on a rectangle and `D` given by
/// its diagonals.
#[derive(Clone, Debug)]
pub struct ExactCouple {
    bideg: Bidegrees,
    e: BigradedGroup,
    diagonals: BTreeMap<i64, ZDiagram>,
    j: BTreeMap<Pos, Hom>,
    k: BTreeMap<Pos, Hom>,
}

impl ExactCouple {
    /// Couple from its diagonals; the support grows to cover every window.
    /// Zero components of `j` and `k` may be omitted.
    pub fn from_parts(
        bideg: Bidegrees,
        e: BigradedGroup,
        diagonals: BTreeMap<i64, ZDiagram>,
        j: BTreeMap<Pos, Hom>,
        k: BTreeMap<Pos, Hom>,
    ) -> Result<Self, ExcoupleError> {
        bideg.check_regular()?;
        let mut bounds = *e.bounds();
        for (&n, d) in &diagonals {
            if let Some(b) = bbox([bideg.pos(n, d.p0()), bideg.pos(n, d.p1())]) {
                bounds = bounds.union(&b);
            }
        }
        let mut c = ExactCouple { bideg, e: e.with_bounds(bounds)?, diagonals, j: BTreeMap::new(), k: BTreeMap::new() };
        for (x, h) in j {
            let (dom, cod) = (c.d_group(x), c.e_group(add(x, bideg.b)));
            if h.domain() != &dom || h.codomain() != &cod {
                return Err(ExcoupleError::InvalidInput(format!("j at {x:?} should map {dom} to {cod}")));
            }
            if !h.is_zero() {
                c.j.insert(x, h);
            }
        }
        for (y, h) in k {
            let (dom, cod) = (c.e_group(y), c.d_group(add(y, bideg.c)));
            if h.domain() != &dom || h.codomain() != &cod {
                return Err(ExcoupleError::InvalidInput(format!("k at {y:?} should map {dom} to {cod}")));
            }
            if !h.is_zero() {
                c.k.insert(y, h);
            }
        }
        Ok(c)
    }

    /// Couple from positionwise data. Each diagonal's window is the range of
    /// its listed `D` positions and `i` sources/targets; `tails` default to
    /// `(Zero, Zero)`.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        bideg: Bidegrees,
        support: Bounds,
        d: BTreeMap<Pos, FPAbGroup>,
        e: BTreeMap<Pos, FPAbGroup>,
        i: BTreeMap<Pos, Hom>,
        j: BTreeMap<Pos, Hom>,
        k: BTreeMap<Pos, Hom>,
        tails: BTreeMap<i64, (TailSpec, TailSpec)>,
    ) -> Result<Self, ExcoupleError> {
        bideg.check_regular()?;
        for x in d.keys().chain(e.keys()) {
            if !support.contains(*x) {
                return Err(ExcoupleError::InvalidInput(format!("position {x:?} lies outside the support")));
            }
        }
        let mut windows: BTreeMap<i64, (i64, i64)> = BTreeMap::new();
        let mut note = |x: Pos| {
            let (n, r) = (bideg.n_of(x), bideg.r_of(x));
            let w = windows.entry(n).or_insert((r, r));
            *w = (w.0.min(r), w.1.max(r));
        };
        for &x in d.keys() {
            note(x);
        }
        for &x in i.keys() {
            note(x);
            note(add(x, bideg.a));
        }
        let mut diagonals = BTreeMap::new();
        for (n, (lo, hi)) in windows {
            let groups: Vec<FPAbGroup> =
                (lo..=hi).map(|r| d.get(&bideg.pos(n, r)).cloned().unwrap_or_else(FPAbGroup::zero)).collect();
            let mut maps = Vec::new();
            for r in lo..hi {
                let x = bideg.pos(n, r);
                let (s, t) = (&groups[(r - lo) as usize], &groups[(r - lo + 1) as usize]);
                let h = i.get(&x).cloned().unwrap_or_else(|| Hom::zero(s, t));
                if h.domain() != s || h.codomain() != t {
                    return Err(ExcoupleError::InvalidInput(format!("i at {x:?} should map {s} to {t}")));
                }
                maps.push(h);
            }
            let (left, right) = tails.get(&n).copied().unwrap_or((TailSpec::Zero, TailSpec::Zero));
            diagonals.insert(n, ZDiagram::new(lo, groups, maps, left, right)?);
        }
        let e = BigradedGroup::new(support, e)?;
        ExactCouple::from_parts(bideg, e, diagonals, j, k)
    }

    /// The zero couple with the given bidegrees.
    pub fn zero(bideg: Bidegrees) -> Result<Self, ExcoupleError> {
        let b = Bounds::new((0, 0), (0, 0))?;
        ExactCouple::from_parts(bideg, BigradedGroup::zero(b), BTreeMap::new(), BTreeMap::new(), BTreeMap::new())
    }

    pub fn bidegrees(&self) -> &Bidegrees {
        &self.bideg
    }

    pub fn support(&self) -> &Bounds {
        self.e.bounds()
    }

    pub fn e(&self) -> &BigradedGroup {
        &self.e
    }

    pub fn diagonals(&self) -> &BTreeMap<i64, ZDiagram> {
        &self.diagonals
    }

    /// Non-zero components of `j`, keyed by source.
    pub fn j_maps(&self) -> &BTreeMap<Pos, Hom> {
        &self.j
    }

    /// Non-zero components of `k`, keyed by source.
    pub fn k_maps(&self) -> &BTreeMap<Pos, Hom> {
        &self.k
    }

    pub fn diagonal(&self, n: i64) -> &ZDiagram {
        self.diagonals.get(&n).unwrap_or_else(|| zero_diagram())
    }

    /// The diagonal through `x` and the index of `x` on it.
    pub fn locate(&self, x: Pos) -> (&ZDiagram, i64) {
        (self.diagonal(self.bideg.n_of(x)), self.bideg.r_of(x))
    }

    pub fn d_group(&self, x: Pos) -> FPAbGroup {
        let (d, r) = self.locate(x);
        d.group_at(r)
    }

    pub fn e_group(&self, y: Pos) -> FPAbGroup {
        self.e.get(y)
    }

    /// `i : D_x → D_{x+a}`.
    pub fn i_map(&self, x: Pos) -> Hom {
        let (d, r) = self.locate(x);
        d.map_at(r)
    }

    /// `i^m : D_x → D_{x+m·a}`.
    pub fn i_pow(&self, x: Pos, m: i64) -> Hom {
        let (d, r) = self.locate(x);
        d.compose(r, r + m)
    }

    /// `j : D_x → E_{x+b}`.
    pub fn j_map(&self, x: Pos) -> Hom {
        self.j
            .get(&x)
            .cloned()
            .unwrap_or_else(|| Hom::zero(&self.d_group(x), &self.e_group(add(x, self.bideg.b))))
    }

    /// `k : E_y → D_{y+c}`.
    pub fn k_map(&self, y: Pos) -> Hom {
        self.k
            .get(&y)
            .cloned()
            .unwrap_or_else(|| Hom::zero(&self.e_group(y), &self.d_group(add(y, self.bideg.c))))
    }

    /// `d¹ = j ∘ k : E_y → E_{y+b+c}`.
    pub fn d1(&self, y: Pos) -> Hom {
        let w = add(y, self.bideg.c);
        self.j_map(w).compose(&self.k_map(y)).expect("k and j meet at D")
    }

    /// The support widened by the bidegrees; outside it every corner is a
    /// tail identity or a zero map.
    pub fn region(&self) -> Bounds {
        let Bidegrees { a, b, c } = self.bideg;
        let m = [a, b, c].iter().map(|v| v.0.abs() + v.1.abs()).sum::<i64>() + 1;
        let s = self.support();
        Bounds { p: (s.p.0 - m, s.p.1 + m), q: (s.q.0 - m, s.q.1 + m) }
    }

    /// Positions of the support.
    pub fn positions(&self) -> Vec<Pos> {
        self.support().positions().collect()
    }

    /// Checks regularity and exactness at every corner in [`ExactCouple::region`];
    /// reports the first failure, `E` corners first.
    pub fn validate(&self) -> Result<(), ExcoupleError> {
        self.bideg.check_regular()?;
        let Bidegrees { a, b, c } = self.bideg;
        let region: Vec<Pos> = self.region().positions().collect();
        for &y in &region {
            if !exact_at(&self.j_map(sub(y, b)), &self.k_map(y))? {
                return Err(ExcoupleError::NotExact { position: y, corner: Corner::E });
            }
        }
        for &x in &region {
            if !exact_at(&self.i_map(sub(x, a)), &self.j_map(x))? {
                return Err(ExcoupleError::NotExact { position: x, corner: Corner::DJ });
            }
            if !exact_at(&self.k_map(sub(x, c)), &self.i_map(x))? {
                return Err(ExcoupleError::NotExact { position: x, corner: Corner::DI });
            }
        }
        Ok(())
    }

    /// The same couple with trimmed windows, trivial diagonals dropped and the
    /// support shrunk to the non-zero data.
    pub fn normalized(&self) -> ExactCouple {
        let mut diagonals = BTreeMap::new();
        for (&n, d) in &self.diagonals {
            if let Some(t) = trim(d) {
                diagonals.insert(n, t);
            }
        }
        let mut pts: Vec<Pos> = self.e.support().collect();
        for (&n, d) in &diagonals {
            pts.push(self.bideg.pos(n, d.p0()));
            pts.push(self.bideg.pos(n, d.p1()));
        }
        let bounds = bbox(pts).unwrap_or(Bounds { p: (0, 0), q: (0, 0) });
        ExactCouple {
            bideg: self.bideg,
            e: self.e.with_bounds(bounds).expect("support covers the non-zero groups"),
            diagonals,
            j: self.j.clone(),
            k: self.k.clone(),
        }
    }

    /// Positionwise direct sum.
    pub fn direct_sum(&self, other: &ExactCouple) -> Result<ExactCouple, ExcoupleError> {
        if self.bideg != other.bideg {
            return Err(ExcoupleError::BidegreeMismatch);
        }
        let bounds = self.support().union(other.support());
        let mut e = BTreeMap::new();
        for y in bounds.positions() {
            e.insert(y, self.e_group(y).direct_sum(&other.e_group(y)));
        }
        let e = BigradedGroup::new(bounds, e)?;
        let ns: BTreeSet<i64> = self.diagonals.keys().chain(other.diagonals.keys()).copied().collect();
        let mut diagonals = BTreeMap::new();
        for n in ns {
            diagonals.insert(n, sum_diagram(self.diagonal(n), other.diagonal(n))?);
        }
        let b = self.bideg.b;
        let mut j = BTreeMap::new();
        let mut k = BTreeMap::new();
        let region = self.region().union(&other.region());
        for y in region.positions() {
            let x = sub(y, b);
            let jx = self.j_map(x).direct_sum(&other.j_map(x));
            if !jx.is_zero() {
                j.insert(x, jx);
            }
            let ky = self.k_map(y).direct_sum(&other.k_map(y));
            if !ky.is_zero() {
                k.insert(y, ky);
            }
        }
        ExactCouple::from_parts(self.bideg, e, diagonals, j, k)
    }
}

impl PartialEq for ExactCouple {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = (self.normalized(), other.normalized());
        a.bideg == b.bideg && a.e == b.e && a.diagonals == b.diagonals && a.j == b.j && a.k == b.k
    }
}

impl Eq for ExactCouple {}

fn is_identity(h: &Hom) -> bool {
    h.domain() == h.codomain() && *h == Hom::identity(h.domain())
}

/// Shortest window describing the same diagram; `None` for the zero diagram.
fn trim(d: &ZDiagram) -> Option<ZDiagram> {
    let mut p0 = d.p0();
    let mut groups = d.window_groups().to_vec();
    let mut maps = d.window_maps().to_vec();
    let (mut left, mut right) = (d.left(), d.right());
    loop {
        if groups[0].is_trivial() {
            left = TailSpec::Zero;
        }
        if groups[groups.len() - 1].is_trivial() {
            right = TailSpec::Zero;
        }
        if groups.len() == 1 {
            break;
        }
        let drop_left = match left {
            TailSpec::Zero => groups[0].is_trivial(),
            TailSpec::Constant => is_identity(&maps[0]),
        };
        if drop_left {
            groups.remove(0);
            maps.remove(0);
            p0 += 1;
            continue;
        }
        let drop_right = match right {
            TailSpec::Zero => groups[groups.len() - 1].is_trivial(),
            TailSpec::Constant => is_identity(&maps[maps.len() - 1]),
        };
        if drop_right {
            groups.pop();
            maps.pop();
            continue;
        }
        break;
    }
    if groups.len() == 1 && groups[0].is_trivial() {
        return None;
    }
    Some(ZDiagram::new(p0, groups, maps, left, right).expect("trimming keeps the diagram consistent"))
}

/// Termwise sum of two diagrams over their common padded window.
pub(crate) fn sum_diagram(x: &ZDiagram, y: &ZDiagram) -> Result<ZDiagram, ExcoupleError> {
    let lo = x.lo().min(y.lo());
    let hi = x.hi().max(y.hi());
    let groups = (lo..=hi).map(|p| x.group_at(p).direct_sum(&y.group_at(p))).collect();
    let maps = (lo..hi).map(|p| x.map_at(p).direct_sum(&y.map_at(p))).collect();
    let tail = |s: TailSpec, t: TailSpec| if s == TailSpec::Constant || t == TailSpec::Constant { TailSpec::Constant } else { TailSpec::Zero };
    Ok(ZDiagram::new(lo, groups, maps, tail(x.left(), y.left()), tail(x.right(), y.right()))?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::demos;

    #[test]
    fn demo_couples_are_exact() {
        for c in [demos::couple1(), demos::couple2(), demos::couple3()] {
            c.validate().unwrap();
        }
        ExactCouple::zero(Bidegrees::homological()).unwrap().validate().unwrap();
    }

    #[test]
    fn zero_j_breaks_the_e_corner() {
        let c = demos::couple1();
        let broken = ExactCouple::from_parts(
            *c.bidegrees(),
            c.e().clone(),
            c.diagonals().clone(),
            BTreeMap::new(),
            c.k_maps().clone(),
        )
        .unwrap();
        assert!(matches!(broken.validate(), Err(ExcoupleError::NotExact { corner: Corner::E, .. })));
    }

    #[test]
    fn sums_and_normal_forms() {
        let c = demos::couple2();
        let z = ExactCouple::zero(*c.bidegrees()).unwrap();
        let s = c.direct_sum(&z).unwrap();
        s.validate().unwrap();
        assert_eq!(s, c);
        let cc = demos::couple1().direct_sum(&demos::couple1()).unwrap();
        cc.validate().unwrap();
        assert_eq!(cc.d_group((0, 0)), FPAbGroup::z_mod(6).direct_sum(&FPAbGroup::z_mod(6)));
    }
}
