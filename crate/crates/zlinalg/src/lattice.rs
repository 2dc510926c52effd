use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::{smith, IntMatrix};

/// A sublattice of ℤⁿ in Hermite normal form.
///
/// Basis vectors are listed by strictly increasing pivot (first non-zero
/// coordinate), pivots are positive, and every entry of a vector at a later
/// pivot lies in `[0, pivot)`. The form is unique, so `==` decides equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lattice {
    dim: usize,
    basis: Vec<Vec<BigInt>>,
}

fn pivot_of(v: &[BigInt]) -> Option<usize> {
    v.iter().position(|x| !x.is_zero())
}

fn axpy(y: &mut [BigInt], q: &BigInt, x: &[BigInt]) {
    if q.is_zero() {
        return;
    }
    for (a, b) in y.iter_mut().zip(x) {
        if !b.is_zero() {
            *a += q * b;
        }
    }
}

impl Lattice {
    pub fn zero(dim: usize) -> Self {
        Lattice { dim, basis: Vec::new() }
    }

    pub fn full(dim: usize) -> Self {
        let basis = (0..dim)
            .map(|i| {
                let mut v = vec![BigInt::zero(); dim];
                v[i] = BigInt::from(1);
                v
            })
            .collect();
        Lattice { dim, basis }
    }

    pub fn from_generators(dim: usize, gens: &[Vec<BigInt>]) -> Self {
        let mut rows: Vec<Vec<BigInt>> =
            gens.iter().filter(|g| g.iter().any(|x| !x.is_zero())).cloned().collect();
        for g in &rows {
            assert_eq!(g.len(), dim, "generator length mismatch");
        }
        let mut basis: Vec<Vec<BigInt>> = Vec::new();
        for c in 0..dim {
            loop {
                let mut best: Option<usize> = None;
                let mut count = 0;
                for (idx, r) in rows.iter().enumerate() {
                    if r[c].is_zero() {
                        continue;
                    }
                    count += 1;
                    if best.is_none_or(|b| r[c].abs() < rows[b][c].abs()) {
                        best = Some(idx);
                    }
                }
                let Some(b) = best else { break };
                if count == 1 {
                    let mut v = rows.swap_remove(b);
                    if v[c].is_negative() {
                        v.iter_mut().for_each(|x| *x = -&*x);
                    }
                    basis.push(v);
                    break;
                }
                let piv = rows[b].clone();
                for (idx, r) in rows.iter_mut().enumerate() {
                    if idx == b || r[c].is_zero() {
                        continue;
                    }
                    let q = r[c].div_floor(&piv[c]);
                    axpy(r, &-q, &piv);
                }
                rows.retain(|r| r.iter().any(|x| !x.is_zero()));
            }
        }
        Self::reduce(&mut basis);
        Lattice { dim, basis }
    }

    fn reduce(basis: &mut [Vec<BigInt>]) {
        for k in 0..basis.len() {
            let p = pivot_of(&basis[k]).expect("non-zero basis vector");
            let (head, tail) = basis.split_at_mut(k);
            let bk = &tail[0];
            for bj in head.iter_mut() {
                let q = bj[p].div_floor(&bk[p]);
                axpy(bj, &-q, bk);
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<BigInt>] {
        &self.basis
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.basis.iter().map(|b| pivot_of(b).unwrap()).collect()
    }

    /// Basis as the columns of a `dim × rank` matrix.
    pub fn basis_matrix(&self) -> IntMatrix {
        IntMatrix::from_columns(self.dim, &self.basis)
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    /// Integer coordinates of `v` in the stored basis, if `v` lies in the lattice.
    pub fn coords(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        assert_eq!(v.len(), self.dim, "vector length mismatch");
        let mut r = v.to_vec();
        let mut out = Vec::with_capacity(self.basis.len());
        let mut next = 0;
        for b in &self.basis {
            let p = pivot_of(b).unwrap();
            if r[next..p].iter().any(|x| !x.is_zero()) {
                return None;
            }
            let (q, rem) = r[p].div_rem(&b[p]);
            if !rem.is_zero() {
                return None;
            }
            axpy(&mut r, &-&q, b);
            out.push(q);
            next = p + 1;
        }
        if r[next..].iter().any(|x| !x.is_zero()) {
            return None;
        }
        Some(out)
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.coords(v).is_some()
    }

    pub fn is_subset(&self, other: &Lattice) -> bool {
        self.basis.iter().all(|b| other.contains(b))
    }

    pub fn sum(&self, other: &Lattice) -> Lattice {
        assert_eq!(self.dim, other.dim);
        let gens: Vec<_> = self.basis.iter().chain(other.basis.iter()).cloned().collect();
        Lattice::from_generators(self.dim, &gens)
    }

    pub fn intersect(&self, other: &Lattice) -> Lattice {
        assert_eq!(self.dim, other.dim);
        if self.is_zero() || other.is_zero() {
            return Lattice::zero(self.dim);
        }
        if self.is_subset(other) {
            return self.clone();
        }
        if other.is_subset(self) {
            return other.clone();
        }
        let b1 = self.basis_matrix();
        let b2 = other.basis_matrix().neg();
        let k = integer_kernel(&b1.hstack(&b2));
        let n1 = self.rank();
        let gens: Vec<Vec<BigInt>> = k
            .basis()
            .iter()
            .map(|kv| b1.mul_vec(&kv[..n1]))
            .collect();
        Lattice::from_generators(self.dim, &gens)
    }

    /// `f(self)` for `f` given as a matrix with `self.dim` columns.
    pub fn image(&self, f: &IntMatrix) -> Lattice {
        assert_eq!(f.cols(), self.dim);
        let gens: Vec<_> = self.basis.iter().map(|b| f.mul_vec(b)).collect();
        Lattice::from_generators(f.rows(), &gens)
    }

    /// `f⁻¹(self)` for `f` given as a matrix with `self.dim` rows.
    pub fn preimage(&self, f: &IntMatrix) -> Lattice {
        assert_eq!(f.rows(), self.dim);
        let m = f.cols();
        if self.rank() == self.dim && self.pivots_all_one() {
            return Lattice::full(m);
        }
        let aug = f.hstack(&self.basis_matrix().neg());
        let k = integer_kernel(&aug);
        let gens: Vec<_> = k.basis().iter().map(|v| v[..m].to_vec()).collect();
        Lattice::from_generators(m, &gens)
    }

    fn pivots_all_one(&self) -> bool {
        self.basis.iter().all(|b| {
            let p = pivot_of(b).unwrap();
            b[p] == BigInt::from(1)
        })
    }

    /// Index in ℤⁿ (product of pivots) when the lattice has full rank.
    pub fn index(&self) -> Option<BigInt> {
        if self.rank() < self.dim {
            return None;
        }
        Some(self.basis.iter().map(|b| b[pivot_of(b).unwrap()].clone()).product())
    }
}

/// Kernel of `m : ℤ^cols → ℤ^rows` as a lattice in ℤ^cols.
pub fn integer_kernel(m: &IntMatrix) -> Lattice {
    let s = smith(m);
    let gens: Vec<_> = (s.rank..m.cols()).map(|j| s.v.col(j)).collect();
    Lattice::from_generators(m.cols(), &gens)
}

/// Some integer `x` with `m·x = y`, if one exists.
pub fn solve_integer(m: &IntMatrix, y: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(m.rows(), y.len());
    let s = smith(m);
    let z = s.u.mul_vec(y);
    let mut w = vec![BigInt::zero(); m.cols()];
    for (i, zi) in z.iter().enumerate() {
        if i < s.rank {
            let (q, r) = zi.div_rem(s.d.get(i, i));
            if !r.is_zero() {
                return None;
            }
            w[i] = q;
        } else if !zi.is_zero() {
            return None;
        }
    }
    Some(s.v.mul_vec(&w))
}
