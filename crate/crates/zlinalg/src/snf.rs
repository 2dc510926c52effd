use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::IntMatrix;

/// Smith decomposition `D = U·M·V` with `U`, `V` unimodular and `D` diagonal,
/// `d_1 | d_2 | ... | d_rank`, all diagonal entries non-negative.
#[derive(Clone, Debug)]
pub struct Smith {
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub rank: usize,
}

impl Smith {
    /// Non-zero diagonal entries in order.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.d.get(i, i).clone()).collect()
    }

    /// Diagonal entry `i`, zero past the rank.
    pub fn diag(&self, i: usize) -> BigInt {
        if i < self.d.rows().min(self.d.cols()) {
            self.d.get(i, i).clone()
        } else {
            BigInt::zero()
        }
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> (IntMatrix, IntMatrix, IntMatrix) {
    let s = smith(m);
    (s.u, s.d, s.v)
}

struct Work {
    m: IntMatrix,
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
}

impl Work {
    // row[t] += q*row[s]
    fn row_add(&mut self, t: usize, s: usize, q: &BigInt) {
        self.m.add_row_multiple(t, s, q);
        self.u.add_row_multiple(t, s, q);
        self.u_inv.add_col_multiple(s, t, &-q);
    }

    fn row_swap(&mut self, a: usize, b: usize) {
        self.m.swap_rows(a, b);
        self.u.swap_rows(a, b);
        self.u_inv.swap_cols(a, b);
    }

    fn row_neg(&mut self, i: usize) {
        self.m.negate_row(i);
        self.u.negate_row(i);
        self.u_inv.negate_col(i);
    }

    fn col_add(&mut self, t: usize, s: usize, q: &BigInt) {
        self.m.add_col_multiple(t, s, q);
        self.v.add_col_multiple(t, s, q);
    }

    fn col_swap(&mut self, a: usize, b: usize) {
        self.m.swap_cols(a, b);
        self.v.swap_cols(a, b);
    }

    fn min_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, BigInt)> = None;
        for i in t..self.m.rows() {
            for j in t..self.m.cols() {
                let a = self.m.get(i, j);
                if a.is_zero() {
                    continue;
                }
                let aa = a.abs();
                if best.as_ref().is_none_or(|(_, _, b)| aa < *b) {
                    let one = aa.is_one();
                    best = Some((i, j, aa));
                    if one {
                        return best.map(|(i, j, _)| (i, j));
                    }
                }
            }
        }
        best.map(|(i, j, _)| (i, j))
    }
}

pub fn smith(m: &IntMatrix) -> Smith {
    let (rows, cols) = (m.rows(), m.cols());
    let mut w = Work {
        m: m.clone(),
        u: IntMatrix::identity(rows),
        u_inv: IntMatrix::identity(rows),
        v: IntMatrix::identity(cols),
    };
    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pi, pj)) = w.min_pivot(t) else { break };
        w.row_swap(t, pi);
        w.col_swap(t, pj);
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if w.m.get(i, t).is_zero() {
                    continue;
                }
                let q = w.m.get(i, t).div_floor(w.m.get(t, t));
                w.row_add(i, t, &-q);
                if !w.m.get(i, t).is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                if w.m.get(t, j).is_zero() {
                    continue;
                }
                let q = w.m.get(t, j).div_floor(w.m.get(t, t));
                w.col_add(j, t, &-q);
                if !w.m.get(t, j).is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                // a remainder smaller than the pivot appeared; move it to the pivot spot
                let mut best = (t, t);
                let mut bv = w.m.get(t, t).abs();
                for i in t + 1..rows {
                    let a = w.m.get(i, t).abs();
                    if !a.is_zero() && a < bv {
                        bv = a;
                        best = (i, t);
                    }
                }
                for j in t + 1..cols {
                    let a = w.m.get(t, j).abs();
                    if !a.is_zero() && a < bv {
                        bv = a;
                        best = (t, j);
                    }
                }
                w.row_swap(t, best.0);
                w.col_swap(t, best.1);
                continue;
            }
            let p = w.m.get(t, t).clone();
            let mut bad = None;
            'scan: for i in t + 1..rows {
                for j in t + 1..cols {
                    if !w.m.get(i, j).is_multiple_of(&p) {
                        bad = Some(i);
                        break 'scan;
                    }
                }
            }
            match bad {
                Some(i) => w.row_add(t, i, &BigInt::one()),
                None => break,
            }
        }
        if w.m.get(t, t).is_negative() {
            w.row_neg(t);
        }
        t += 1;
    }
    Smith { u: w.u, u_inv: w.u_inv, d: w.m, v: w.v, rank: t }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(m: &IntMatrix) -> Smith {
        let s = smith(m);
        assert_eq!(s.u.mul(m).mul(&s.v), s.d);
        assert!(s.d.is_diagonal());
        assert_eq!(s.u.mul(&s.u_inv), IntMatrix::identity(m.rows()));
        assert!(s.u.is_unimodular() && s.v.is_unimodular());
        for i in 1..s.rank {
            assert!(s.diag(i).is_multiple_of(&s.diag(i - 1)));
        }
        s
    }

    #[test]
    fn identity() {
        let s = check(&IntMatrix::identity(2));
        assert_eq!(s.d, IntMatrix::identity(2));
        assert_eq!(s.u, IntMatrix::identity(2));
        assert_eq!(s.v, IntMatrix::identity(2));
    }

    #[test]
    fn two_by_two() {
        let m = IntMatrix::from_rows_i64(2, &[vec![2, 4], vec![6, 8]]).unwrap();
        let s = check(&m);
        assert_eq!(s.invariant_factors(), vec![BigInt::from(2), BigInt::from(4)]);
    }

    #[test]
    fn zero_one_by_one() {
        let s = check(&IntMatrix::zeros(1, 1));
        assert_eq!(s.d, IntMatrix::zeros(1, 1));
        assert_eq!(s.rank, 0);
    }

    #[test]
    fn needs_divisibility_fix() {
        let m = IntMatrix::from_rows_i64(2, &[vec![2, 0], vec![0, 3]]).unwrap();
        let s = check(&m);
        assert_eq!(s.invariant_factors(), vec![BigInt::from(1), BigInt::from(6)]);
    }
}
