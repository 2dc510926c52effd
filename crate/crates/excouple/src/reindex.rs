use std::collections::BTreeMap;
use std::fmt;

use spectral::{BigradedGroup, Pos};

use crate::couple::bbox;
use crate::{Bidegrees, ExactCouple, ExcoupleError};

/// An integer 2×2 matrix acting on positions as column vectors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Mat2(pub [[i64; 2]; 2]);

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2([[1, 0], [0, 1]]);

    pub fn det(&self) -> i64 {
        let m = self.0;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    pub fn apply(&self, x: Pos) -> Pos {
        let m = self.0;
        (m[0][0] * x.0 + m[0][1] * x.1, m[1][0] * x.0 + m[1][1] * x.1)
    }

    pub fn mul(&self, other: &Mat2) -> Mat2 {
        let (a, b) = (self.0, other.0);
        let e = |i: usize, j: usize| a[i][0] * b[0][j] + a[i][1] * b[1][j];
        Mat2([[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]])
    }

    pub fn is_unimodular(&self) -> bool {
        self.det().abs() == 1
    }

    pub fn inverse(&self) -> Result<Mat2, ExcoupleError> {
        let d = self.det();
        if d.abs() != 1 {
            return Err(ExcoupleError::NotUnimodular { det: d });
        }
        let m = self.0;
        Ok(Mat2([[d * m[1][1], -d * m[0][1]], [-d * m[1][0], d * m[0][0]]]))
    }

    pub fn bidegrees(&self, bd: &Bidegrees) -> Bidegrees {
        Bidegrees::new(self.apply(bd.a), self.apply(bd.b), self.apply(bd.c))
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.0;
        write!(f, "[[{}, {}], [{}, {}]]", m[0][0], m[0][1], m[1][0], m[1][1])
    }
}

/// The unimodular `T` with `T·a = (1, −1)` and `T·(b + c) = (−1, 0)`, so that
/// `d^r` of the transported couple has bidegree `(−r, r − 1)`.
pub fn canonical_t(bd: &Bidegrees) -> Result<Mat2, ExcoupleError> {
    bd.check_regular()?;
    let (a, z) = (bd.a, bd.z());
    let s = bd.sigma();
    Ok(Mat2([[s * (a.1 + z.1), -s * (a.0 + z.0)], [-s * z.1, s * z.0]]))
}

/// Moves every position of `c` by `T`. Diagonal `n` becomes `det(T)·n` with
/// the same index along it.
pub fn reindex(c: &ExactCouple, t: &Mat2) -> Result<ExactCouple, ExcoupleError> {
    if !t.is_unimodular() {
        return Err(ExcoupleError::NotUnimodular { det: t.det() });
    }
    let bd = t.bidegrees(c.bidegrees());
    let s = c.support();
    let corners = [(s.p.0, s.q.0), (s.p.0, s.q.1), (s.p.1, s.q.0), (s.p.1, s.q.1)];
    let bounds = bbox(corners.iter().map(|&x| t.apply(x))).expect("four corners");
    let e = c.e().iter().map(|(x, g)| (t.apply(x), g.clone())).collect();
    let e = BigradedGroup::new(bounds, e)?;
    let diagonals = c.diagonals().iter().map(|(&n, d)| (t.det() * n, d.clone())).collect();
    let j: BTreeMap<Pos, _> = c.j_maps().iter().map(|(&x, h)| (t.apply(x), h.clone())).collect();
    let k: BTreeMap<Pos, _> = c.k_maps().iter().map(|(&x, h)| (t.apply(x), h.clone())).collect();
    ExactCouple::from_parts(bd, e, diagonals, j, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::demos;

    #[test]
    fn canonical_t_of_the_homological_couple_is_the_identity() {
        assert_eq!(canonical_t(&Bidegrees::homological()).unwrap(), Mat2::IDENTITY);
    }

    #[test]
    fn canonical_t_normalizes_differentials() {
        let bd = Bidegrees::new((2, 1), (1, 1), (0, 0));
        let t = canonical_t(&bd).unwrap();
        assert!(t.is_unimodular());
        let nb = t.bidegrees(&bd);
        for r in 1..6 {
            assert_eq!(nb.v(r), (-r, r - 1));
        }
    }

    #[test]
    fn round_trip() {
        let t = Mat2([[2, 1], [1, 1]]);
        let c = demos::couple2();
        let moved = reindex(&c, &t).unwrap();
        moved.validate().unwrap();
        assert_eq!(moved.bidegrees().sigma(), c.bidegrees().sigma() * t.det());
        assert_eq!(reindex(&moved, &t.inverse().unwrap()).unwrap(), c);
        assert!(matches!(reindex(&c, &Mat2([[2, 0], [0, 1]])), Err(ExcoupleError::NotUnimodular { det: 2 })));
    }
}
