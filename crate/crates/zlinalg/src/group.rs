use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::{smith, IntMatrix, Lattice, LinalgError};

pub type Elem = Vec<BigInt>;

/// A finitely generated abelian group ⊕ ℤ/oᵢ on explicit generators.
///
/// `orders[i] = 0` marks a free generator; every other order is at least 2.
/// The canonical form lists free generators first and then the invariant
/// factors in divisibility order; other diagonal presentations are allowed so
/// that direct sums keep their summands' generators. Isomorphism is decided
/// by the invariants `(rank, torsion)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FPAbGroup {
    orders: Vec<BigInt>,
    rank: usize,
    torsion: Vec<BigInt>,
}

fn invariants_of(orders: &[BigInt]) -> (usize, Vec<BigInt>) {
    let rank = orders.iter().filter(|o| o.is_zero()).count();
    let tors: Vec<BigInt> = orders.iter().filter(|o| !o.is_zero()).cloned().collect();
    let chain = tors.windows(2).all(|w| w[1].is_multiple_of(&w[0]));
    if chain {
        return (rank, tors);
    }
    let s = smith(&IntMatrix::diagonal(tors.len(), tors.len(), &tors));
    let torsion = s.invariant_factors().into_iter().filter(|d| !d.is_one()).collect();
    (rank, torsion)
}

impl FPAbGroup {
    /// Group on generators of the given orders (0 = free, otherwise ≥ 2).
    pub fn new(orders: Vec<BigInt>) -> Result<Self, LinalgError> {
        for o in &orders {
            if !o.is_zero() && *o < BigInt::from(2) {
                return Err(LinalgError::InvalidGroup(format!("generator order {o}")));
            }
        }
        let (rank, torsion) = invariants_of(&orders);
        Ok(FPAbGroup { orders, rank, torsion })
    }

    /// Canonical group ℤ^rank ⊕ ℤ/d₁ ⊕ ... with `d₁ | d₂ | ...`.
    pub fn from_invariants(rank: usize, torsion: &[BigInt]) -> Result<Self, LinalgError> {
        for (i, d) in torsion.iter().enumerate() {
            if *d < BigInt::from(2) {
                return Err(LinalgError::InvalidGroup(format!("invariant factor {d}")));
            }
            if i > 0 && !d.is_multiple_of(&torsion[i - 1]) {
                return Err(LinalgError::InvalidGroup(format!(
                    "invariant factors {} and {d} do not form a divisibility chain",
                    torsion[i - 1]
                )));
            }
        }
        let mut orders = vec![BigInt::zero(); rank];
        orders.extend(torsion.iter().cloned());
        Self::new(orders)
    }

    pub fn from_invariants_i64(rank: usize, torsion: &[i64]) -> Result<Self, LinalgError> {
        let t: Vec<BigInt> = torsion.iter().map(|&d| BigInt::from(d)).collect();
        Self::from_invariants(rank, &t)
    }

    pub fn zero() -> Self {
        FPAbGroup { orders: Vec::new(), rank: 0, torsion: Vec::new() }
    }

    pub fn z() -> Self {
        Self::from_invariants(1, &[]).unwrap()
    }

    /// ℤ/k, with ℤ/0 = ℤ and ℤ/1 = 0.
    pub fn z_mod(k: u64) -> Self {
        match k {
            0 => Self::z(),
            1 => Self::zero(),
            _ => Self::from_invariants(0, &[BigInt::from(k)]).unwrap(),
        }
    }

    /// Canonical group with the same invariants.
    pub fn canonical(&self) -> Self {
        Self::from_invariants(self.rank, &self.torsion).unwrap()
    }

    pub fn is_canonical(&self) -> bool {
        self.orders.len() == self.rank + self.torsion.len()
            && self.orders[..self.rank].iter().all(|o| o.is_zero())
            && self.orders[self.rank..] == self.torsion[..]
    }

    pub fn ngens(&self) -> usize {
        self.orders.len()
    }

    pub fn orders(&self) -> &[BigInt] {
        &self.orders
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    pub fn is_trivial(&self) -> bool {
        self.orders.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.rank == 0
    }

    /// Group order, `None` when infinite.
    pub fn order(&self) -> Option<BigInt> {
        if self.rank > 0 {
            None
        } else {
            Some(self.orders.iter().product())
        }
    }

    pub fn isomorphic(&self, other: &FPAbGroup) -> bool {
        self.rank == other.rank && self.torsion == other.torsion
    }

    /// Relation matrix: one row `oᵢ·eᵢ` per torsion generator.
    pub fn presentation(&self) -> IntMatrix {
        let rows: Vec<Vec<BigInt>> = self
            .orders
            .iter()
            .enumerate()
            .filter(|(_, o)| !o.is_zero())
            .map(|(i, o)| {
                let mut r = vec![BigInt::zero(); self.ngens()];
                r[i] = o.clone();
                r
            })
            .collect();
        IntMatrix::from_rows(self.ngens(), &rows).unwrap()
    }

    pub fn relation_lattice(&self) -> Lattice {
        Lattice::from_generators(self.ngens(), &self.presentation().row_vecs())
    }

    pub fn zero_elem(&self) -> Elem {
        vec![BigInt::zero(); self.ngens()]
    }

    pub fn gen(&self, i: usize) -> Elem {
        let mut e = self.zero_elem();
        e[i] = BigInt::one();
        self.reduce(&e)
    }

    pub fn gens(&self) -> Vec<Elem> {
        (0..self.ngens()).map(|i| self.gen(i)).collect()
    }

    /// Reduces torsion coordinates into `[0, oᵢ)`.
    pub fn reduce(&self, x: &[BigInt]) -> Elem {
        assert_eq!(x.len(), self.ngens(), "element length mismatch");
        x.iter()
            .zip(&self.orders)
            .map(|(v, o)| if o.is_zero() { v.clone() } else { v.mod_floor(o) })
            .collect()
    }

    pub fn is_zero_elem(&self, x: &[BigInt]) -> bool {
        self.reduce(x).iter().all(|v| v.is_zero())
    }

    pub fn elem_eq(&self, x: &[BigInt], y: &[BigInt]) -> bool {
        self.reduce(x) == self.reduce(y)
    }

    pub fn add(&self, x: &[BigInt], y: &[BigInt]) -> Elem {
        let s: Elem = x.iter().zip(y).map(|(a, b)| a + b).collect();
        self.reduce(&s)
    }

    pub fn neg(&self, x: &[BigInt]) -> Elem {
        let s: Elem = x.iter().map(|a| -a).collect();
        self.reduce(&s)
    }

    pub fn scale(&self, k: &BigInt, x: &[BigInt]) -> Elem {
        let s: Elem = x.iter().map(|a| k * a).collect();
        self.reduce(&s)
    }

    /// Order of an element, `None` when it has infinite order.
    pub fn elem_order(&self, x: &[BigInt]) -> Option<BigInt> {
        let x = self.reduce(x);
        let mut l = BigInt::one();
        for (v, o) in x.iter().zip(&self.orders) {
            if v.is_zero() {
                continue;
            }
            if o.is_zero() {
                return None;
            }
            let ord = o / v.gcd(o);
            l = l.lcm(&ord);
        }
        Some(l)
    }

    /// All elements of a finite group, in lexicographic order. Panics above `limit`.
    pub fn elements(&self, limit: usize) -> Vec<Elem> {
        let n = self
            .order()
            .and_then(|o| o.to_usize())
            .filter(|&o| o <= limit)
            .expect("group too large to enumerate");
        let mut out = Vec::with_capacity(n);
        let mut cur = self.zero_elem();
        loop {
            out.push(cur.clone());
            let mut i = self.ngens();
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                cur[i] += 1;
                if cur[i] < self.orders[i] {
                    break;
                }
                cur[i] = BigInt::zero();
            }
        }
    }

    pub fn direct_sum(&self, other: &FPAbGroup) -> FPAbGroup {
        let mut o = self.orders.clone();
        o.extend(other.orders.iter().cloned());
        FPAbGroup::new(o).unwrap()
    }

    /// Renders the invariants, e.g. `Z^2 ⊕ Z/2 ⊕ Z/6` or `0`.
    pub fn invariant_string(&self) -> String {
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for d in &self.torsion {
            parts.push(format!("Z/{d}"));
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" ⊕ ")
        }
    }
}

impl fmt::Display for FPAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.invariant_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elem;

    #[test]
    fn invariants_of_non_chain_sum() {
        let g = FPAbGroup::z_mod(2).direct_sum(&FPAbGroup::z_mod(3));
        assert!(!g.is_canonical());
        assert!(g.isomorphic(&FPAbGroup::z_mod(6)));
        assert_eq!(g.to_string(), "Z/6");
    }

    #[test]
    fn rendering() {
        let g = FPAbGroup::from_invariants_i64(2, &[2, 6]).unwrap();
        assert_eq!(g.to_string(), "Z^2 ⊕ Z/2 ⊕ Z/6");
        assert_eq!(FPAbGroup::zero().to_string(), "0");
    }

    #[test]
    fn rejects_bad_chain() {
        assert!(FPAbGroup::from_invariants_i64(0, &[4, 6]).is_err());
        assert!(FPAbGroup::new(vec![BigInt::one()]).is_err());
    }

    #[test]
    fn element_arithmetic() {
        let g = FPAbGroup::from_invariants_i64(1, &[6]).unwrap();
        assert_eq!(g.add(&elem(&[1, 4]), &elem(&[2, 5])), elem(&[3, 3]));
        assert_eq!(g.elem_order(&elem(&[0, 4])), Some(BigInt::from(3)));
        assert_eq!(g.elem_order(&elem(&[1, 0])), None);
        assert_eq!(FPAbGroup::z_mod(6).elements(100).len(), 6);
    }
}
