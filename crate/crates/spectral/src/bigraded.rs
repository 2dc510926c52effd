use std::collections::BTreeMap;
use std::fmt;

use zlinalg::FPAbGroup;

use crate::SpecError;

/// A position `(p, q)` in the plane.
pub type Pos = (i64, i64);

pub fn add(x: Pos, v: Pos) -> Pos {
    (x.0 + v.0, x.1 + v.1)
}

pub fn sub(x: Pos, v: Pos) -> Pos {
    (x.0 - v.0, x.1 - v.1)
}

pub fn pos_key(x: Pos) -> String {
    format!("{},{}", x.0, x.1)
}

pub fn parse_pos_key(s: &str) -> Option<Pos> {
    let (p, q) = s.split_once(',')?;
    Some((p.trim().parse().ok()?, q.trim().parse().ok()?))
}

/// Closed rectangle `[pmin, pmax] × [qmin, qmax]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Bounds {
    pub p: (i64, i64),
    pub q: (i64, i64),
}

impl Bounds {
    pub fn new(p: (i64, i64), q: (i64, i64)) -> Result<Self, SpecError> {
        if p.0 > p.1 || q.0 > q.1 {
            return Err(SpecError::InvalidInput(format!("empty bounds {p:?} × {q:?}")));
        }
        Ok(Bounds { p, q })
    }

    pub fn contains(&self, x: Pos) -> bool {
        self.p.0 <= x.0 && x.0 <= self.p.1 && self.q.0 <= x.1 && x.1 <= self.q.1
    }

    pub fn positions(&self) -> impl Iterator<Item = Pos> + '_ {
        (self.p.0..=self.p.1).flat_map(move |p| (self.q.0..=self.q.1).map(move |q| (p, q)))
    }

    pub fn union(&self, other: &Bounds) -> Bounds {
        Bounds {
            p: (self.p.0.min(other.p.0), self.p.1.max(other.p.1)),
            q: (self.q.0.min(other.q.0), self.q.1.max(other.q.1)),
        }
    }

    /// `true` when translating by `v` moves every position out of the rectangle.
    pub fn escapes(&self, v: Pos) -> bool {
        v.0.abs() > self.p.1 - self.p.0 || v.1.abs() > self.q.1 - self.q.0
    }
}

/// Bidegree `v_r` of the differential on page `r`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BidegreeRule {
    /// `v_r = (−r, r − 1)`.
    Homological,
    /// `v_r = (r, 1 − r)`.
    Cohomological,
    /// `v_{r0}, v_{r0+1}, …` listed, continued linearly past the end of the list.
    Explicit(Vec<Pos>),
}

impl BidegreeRule {
    pub fn kind(&self) -> &'static str {
        match self {
            BidegreeRule::Homological => "homological",
            BidegreeRule::Cohomological => "cohomological",
            BidegreeRule::Explicit(_) => "explicit",
        }
    }

    pub fn v(&self, r0: i64, r: i64) -> Pos {
        match self {
            BidegreeRule::Homological => (-r, r - 1),
            BidegreeRule::Cohomological => (r, 1 - r),
            BidegreeRule::Explicit(list) => {
                let i = (r - r0).max(0) as usize;
                if list.is_empty() {
                    return (0, 0);
                }
                if i < list.len() {
                    return list[i];
                }
                let last = list[list.len() - 1];
                let step = if list.len() >= 2 { sub(last, list[list.len() - 2]) } else { (0, 0) };
                let k = (i - (list.len() - 1)) as i64;
                (last.0 + k * step.0, last.1 + k * step.1)
            }
        }
    }

    /// Linear growth of `v_r` in `r`.
    fn step(&self) -> Pos {
        match self {
            BidegreeRule::Homological => (-1, 1),
            BidegreeRule::Cohomological => (1, -1),
            BidegreeRule::Explicit(list) if list.len() >= 2 => sub(list[list.len() - 1], list[list.len() - 2]),
            BidegreeRule::Explicit(_) => (0, 0),
        }
    }

    /// Least `R ≥ r0` such that `v_r` moves every position of `bounds` out of
    /// it for all `r ≥ R`.
    pub fn horizon(&self, r0: i64, bounds: &Bounds) -> Result<i64, SpecError> {
        let listed = match self {
            BidegreeRule::Explicit(l) => l.len() as i64,
            _ => 1,
        };
        let v0 = self.v(r0, r0 + listed);
        let width = (bounds.p.1 - bounds.p.0).max(bounds.q.1 - bounds.q.0);
        let scan = r0 + listed + 2 * (width + v0.0.abs() + v0.1.abs()) + 2;
        if self.step() == (0, 0) && !bounds.escapes(self.v(r0, scan)) {
            return Err(SpecError::UnboundedSupport);
        }
        let mut last_inside = r0 - 1;
        for r in r0..=scan {
            if !bounds.escapes(self.v(r0, r)) {
                last_inside = r;
            }
        }
        Ok(last_inside + 1)
    }
}

/// A bigraded group with finitely many non-trivial positions inside `bounds`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigradedGroup {
    bounds: Bounds,
    groups: BTreeMap<Pos, FPAbGroup>,
}

impl BigradedGroup {
    pub fn new(bounds: Bounds, groups: BTreeMap<Pos, FPAbGroup>) -> Result<Self, SpecError> {
        if let Some(x) = groups.keys().find(|x| !bounds.contains(**x)) {
            return Err(SpecError::InvalidInput(format!("position {x:?} lies outside the bounds")));
        }
        let groups = groups.into_iter().filter(|(_, g)| !g.is_trivial()).collect();
        Ok(BigradedGroup { bounds, groups })
    }

    pub fn zero(bounds: Bounds) -> Self {
        BigradedGroup { bounds, groups: BTreeMap::new() }
    }

    pub fn bounds(&self) -> &Bounds {
        &self.bounds
    }

    pub fn get(&self, x: Pos) -> FPAbGroup {
        self.groups.get(&x).cloned().unwrap_or_else(FPAbGroup::zero)
    }

    /// Positions with a non-trivial group.
    pub fn support(&self) -> impl Iterator<Item = Pos> + '_ {
        self.groups.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Pos, &FPAbGroup)> {
        self.groups.iter().map(|(x, g)| (*x, g))
    }

    pub fn is_zero(&self) -> bool {
        self.groups.is_empty()
    }

    pub fn with_bounds(&self, bounds: Bounds) -> Result<Self, SpecError> {
        BigradedGroup::new(bounds, self.groups.clone())
    }

    /// Positionwise isomorphism.
    pub fn isomorphic(&self, other: &BigradedGroup) -> bool {
        let keys: std::collections::BTreeSet<Pos> = self.support().chain(other.support()).collect();
        keys.into_iter().all(|x| self.get(x).isomorphic(&other.get(x)))
    }

    /// Text grid with `q` decreasing downwards and `p` increasing to the right.
    pub fn table(&self) -> String {
        let b = self.bounds;
        let cells: Vec<Vec<String>> = (b.q.0..=b.q.1)
            .rev()
            .map(|q| (b.p.0..=b.p.1).map(|p| self.get((p, q)).invariant_string()).collect())
            .collect();
        let mut width = (b.p.0..=b.p.1).map(|p| p.to_string().chars().count()).max().unwrap_or(1);
        for row in &cells {
            for c in row {
                width = width.max(c.chars().count());
            }
        }
        let qw = (b.q.0..=b.q.1).map(|q| q.to_string().len()).max().unwrap_or(1);
        let pad = |s: &str, w: usize| format!("{}{}", " ".repeat(w.saturating_sub(s.chars().count())), s);
        let mut out = String::new();
        for (i, row) in cells.iter().enumerate() {
            let q = b.q.1 - i as i64;
            out.push_str(&pad(&q.to_string(), qw));
            out.push_str(" |");
            for c in row {
                out.push(' ');
                out.push_str(&pad(c, width));
            }
            out.push('\n');
        }
        out.push_str(&" ".repeat(qw));
        out.push_str(" +");
        out.push_str(&"-".repeat((width + 1) * cells.first().map_or(0, |r| r.len())));
        out.push('\n');
        out.push_str(&" ".repeat(qw + 2));
        for p in b.p.0..=b.p.1 {
            out.push(' ');
            out.push_str(&pad(&p.to_string(), width));
        }
        out.push('\n');
        out
    }
}

impl fmt::Display for BigradedGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.table())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bidegrees() {
        assert_eq!(BidegreeRule::Homological.v(2, 2), (-2, 1));
        assert_eq!(BidegreeRule::Cohomological.v(2, 3), (3, -2));
        let e = BidegreeRule::Explicit(vec![(0, -1), (-1, 0)]);
        assert_eq!(e.v(1, 1), (0, -1));
        assert_eq!(e.v(1, 3), (-2, 1));
    }

    #[test]
    fn horizons() {
        let b = Bounds::new((0, 3), (0, 1)).unwrap();
        // v_r = (−r, r−1): leaves once r ≥ 3 (q-shift 2 > 1)
        assert_eq!(BidegreeRule::Homological.horizon(2, &b), Ok(3));
        assert_eq!(BidegreeRule::Explicit(vec![(1, 0)]).horizon(1, &b), Err(SpecError::UnboundedSupport));
        assert_eq!(BidegreeRule::Explicit(vec![(9, 0)]).horizon(1, &b), Ok(1));
    }

    #[test]
    fn table_layout() {
        let b = Bounds::new((0, 1), (0, 0)).unwrap();
        let g = BigradedGroup::new(b, [((0, 0), FPAbGroup::z()), ((1, 0), FPAbGroup::z_mod(6))].into()).unwrap();
        let t = g.table();
        assert!(t.contains("Z/6"));
        assert!(t.starts_with("0 |"));
    }
}
