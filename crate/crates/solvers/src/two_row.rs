use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::One;
use spectral::{e_infinity, BidegreeRule, BigradedGroup, Bounds, FilteredAbutment, Filtration, SpectralSequence};
use zlinalg::{BigInt, FPAbGroup, Hom, IntMatrix, Subgroup};

use crate::{canonicalize, SolverError};

/// Shape of a two-row `E²`: `E²_{p,0} ≅ E²_{p,1} ≅ H_p` for unknown `H_p`,
/// `p ≥ 0`, and zero elsewhere. Values of `H_p` already known are checked
/// against the solution.
#[derive(Clone, Debug, Default)]
pub struct RowPairShape {
    pub known: BTreeMap<i64, FPAbGroup>,
}

impl RowPairShape {
    pub fn with_known(mut self, p: i64, g: FPAbGroup) -> Self {
        self.known.insert(p, g);
        self
    }
}

#[derive(Clone, Debug)]
pub struct TwoRowSolution {
    /// `H_0, …, H_N` in canonical form.
    pub h: Vec<FPAbGroup>,
    /// `d²_{p,0} : H_p → H_{p−2}` for `2 ≤ p ≤ N`.
    pub d2: BTreeMap<i64, Hom>,
    /// The assembled spectral sequence on `[0, N] × [0, 1]`.
    pub ss: SpectralSequence,
}

impl TwoRowSolution {
    pub fn homology(&self, p: i64) -> &FPAbGroup {
        &self.h[p as usize]
    }

    pub fn d2_at(&self, p: i64) -> Option<&Hom> {
        self.d2.get(&p)
    }
}

fn inconsistent(degree: i64, reason: impl Into<String>) -> SolverError {
    SolverError::Inconsistent { degree, reason: reason.into() }
}

fn ambiguous(degree: i64, reason: impl Into<String>) -> SolverError {
    SolverError::Underdetermined { degree, reason: reason.into() }
}

/// `E∞_{p,q}` read off the abutment filtration of degree `p + q`.
fn einf(ab: &FilteredAbutment, p: i64, q: i64) -> FPAbGroup {
    match ab.get(p + q) {
        Some(f) => f.graded(p).group().clone(),
        None => FPAbGroup::zero(),
    }
}

fn check_rows(ab: &FilteredAbutment) -> Result<(), SolverError> {
    for (&n, f) in &ab.degrees {
        if n < 0 && !f.group().is_trivial() {
            return Err(inconsistent(n, "abutment is nonzero in negative degree"));
        }
        for p in f.lo().min(n - 1)..=f.hi().max(n) {
            let on_rows = (p == n || p == n - 1) && p >= 0;
            if !on_rows && !f.graded(p).group().is_trivial() {
                return Err(inconsistent(n, format!("graded piece at ({p}, {}) lies off the rows q = 0, 1", n - p)));
            }
        }
        if !f.is_exhaustive() {
            return Err(inconsistent(n, "filtration is not exhaustive"));
        }
    }
    Ok(())
}

/// A subgroup `I ⊆ t` with `t/I ≅ c`, as its own group and inclusion, when
/// its isomorphism type is forced. `t` is canonical.
fn image_with_cokernel(t: &FPAbGroup, c: &FPAbGroup, degree: i64) -> Result<(FPAbGroup, Hom), SolverError> {
    if c.is_trivial() {
        return Ok((t.clone(), Hom::identity(t)));
    }
    let cc = c.canonical();
    if cc.rank() > t.rank() || cc.ngens() > t.ngens() {
        return Err(inconsistent(degree, format!("{c} is not a quotient of {t}")));
    }
    if let (Some(nt), Some(nc)) = (t.order(), cc.order()) {
        if !nt.is_multiple_of(&nc) {
            return Err(inconsistent(degree, format!("{c} is not a quotient of {t}")));
        }
        if nt == nc {
            return Ok((FPAbGroup::zero(), Hom::zero(&FPAbGroup::zero(), t)));
        }
    }
    if t.torsion().is_empty() {
        // `t = ℤ^s`: the first coordinates carry the torsion of `c`, the last
        // `rank c` coordinates its free part.
        let s = t.rank();
        let tors = cc.torsion();
        let m = s - cc.rank();
        let i = FPAbGroup::from_invariants(m, &[])?;
        let mut mat = IntMatrix::zeros(s, m);
        for col in 0..m {
            let v = tors.get(col).cloned().unwrap_or_else(BigInt::one);
            mat.set(col, col, v);
        }
        return Ok((i.clone(), Hom::new(i, t.clone(), mat)?));
    }
    if t.rank() == 0 && t.torsion().len() == 1 {
        let (n, m) = (&t.torsion()[0], &cc.torsion()[0]);
        let i = FPAbGroup::from_invariants(0, &[n / m])?;
        let mat = IntMatrix::from_rows(1, &[vec![m.clone()]])?;
        return Ok((i.clone(), Hom::new(i, t.clone(), mat)?));
    }
    Err(ambiguous(degree, format!("several subgroups of {t} have quotient {c}")))
}

fn ext_vanishes(i: &FPAbGroup, k: &FPAbGroup) -> bool {
    i.torsion().iter().all(|m| k.rank() == 0 && k.torsion().iter().all(|e| m.gcd(e).is_one()))
}

/// `H` with `0 → k → H → i → 0` when forced, and `H → i → t`.
fn extension(k: &FPAbGroup, i: &FPAbGroup, emb: &Hom, degree: i64) -> Result<(FPAbGroup, Hom), SolverError> {
    let t = emb.codomain();
    if k.is_trivial() {
        return Ok((i.clone(), emb.clone()));
    }
    if i.is_trivial() {
        let h = k.canonical();
        return Ok((h.clone(), Hom::zero(&h, t)));
    }
    if !ext_vanishes(i, k) {
        return Err(ambiguous(degree, format!("extensions of {i} by {k} are not unique")));
    }
    let raw = k.direct_sum(i);
    let mut imgs = vec![t.zero_elem(); k.ngens()];
    imgs.extend(i.gens().iter().map(|x| emb.apply(x)));
    let d = Hom::from_images(&raw, t, &imgs)?;
    let (h, _, from) = canonicalize(&raw)?;
    Ok((h, d.compose(&from)?))
}

/// Solves for `H_0, …, H_N` and the differentials `d²_{p,0}` from the
/// filtered abutment, one degree at a time through
/// `0 → E∞_{p,0} → H_p → H_{p−2} → E∞_{p−2,1} → 0`, then checks that the
/// assembled spectral sequence reproduces the abutment's graded pieces.
pub fn two_row_solve(shape: &RowPairShape, abutment: &FilteredAbutment, n_max: i64) -> Result<TwoRowSolution, SolverError> {
    if n_max < 0 {
        return Err(SolverError::SetupViolation(format!("maximal degree {n_max} is negative")));
    }
    check_rows(abutment)?;
    let mut h: Vec<FPAbGroup> = Vec::new();
    let mut d2 = BTreeMap::new();
    for p in 0..=n_max {
        let k = einf(abutment, p, 0).canonical();
        let hp = if p < 2 {
            k
        } else {
            let t = &h[(p - 2) as usize];
            let (i, emb) = image_with_cokernel(t, &einf(abutment, p - 2, 1), p)?;
            let (hp, d) = extension(&k, &i, &emb, p)?;
            d2.insert(p, d);
            hp
        };
        if let Some(g) = shape.known.get(&p) {
            if !g.isomorphic(&hp) {
                return Err(inconsistent(p, format!("H_{p} is forced to be {hp}, not {g}")));
            }
        }
        h.push(hp);
    }

    let bounds = Bounds::new((0, n_max), (0, 1))?;
    let mut groups = BTreeMap::new();
    for (p, g) in h.iter().enumerate() {
        if !g.is_trivial() {
            groups.insert((p as i64, 0), g.clone());
            groups.insert((p as i64, 1), g.clone());
        }
    }
    let diffs = d2.iter().filter(|(_, d)| !d.is_zero()).map(|(&p, d)| ((p, 0), d.clone())).collect();
    let ss = SpectralSequence::build(2, BidegreeRule::Homological, BigradedGroup::new(bounds, groups)?, [(2, diffs)].into())?;
    let inf = e_infinity(&ss)?;
    for p in 0..=n_max {
        for q in 0..=1 {
            if q == 1 && p > n_max - 2 {
                continue;
            }
            let (got, want) = (inf.groups.get((p, q)), einf(abutment, p, q));
            if !got.isomorphic(&want) {
                return Err(inconsistent(p + q, format!("E∞ at ({p}, {q}) is {got}, the abutment gives {want}")));
            }
        }
    }
    Ok(TwoRowSolution { h, d2, ss })
}

fn z_filtration(p: i64, below: Option<Subgroup>) -> Filtration {
    let z = FPAbGroup::z();
    match below {
        None => Filtration::trivial(z, p),
        Some(s) => Filtration::new(z.clone(), p - 1, vec![s, Subgroup::whole(&z)]).expect("increasing"),
    }
}

/// `H_*(ℤ)` filtered through `ℤ →(×k) ℤ ↠ ℤ/k`: `ℤ` in degree 0, and `ℤ` in
/// degree 1 with `F_{0,1} = kℤ ⊆ F_{1,0} = ℤ`.
pub fn k_tower_abutment(k: u64) -> FilteredAbutment {
    let z = FPAbGroup::z();
    let mut ab = FilteredAbutment::new();
    ab.insert(0, z_filtration(0, None));
    ab.insert(1, z_filtration(1, Some(Subgroup::from_generators(&z, &[vec![BigInt::from(k)]]))));
    ab
}

/// `H_*(S^{2r+1})`: `ℤ` in degree 0 at `(0,0)` and in degree `2r+1` at `(2r, 1)`.
pub fn sphere_abutment(r: i64) -> FilteredAbutment {
    let mut ab = FilteredAbutment::new();
    ab.insert(0, z_filtration(0, None));
    ab.insert(2 * r + 1, z_filtration(2 * r, None));
    ab
}

fn seeded() -> RowPairShape {
    RowPairShape::default().with_known(0, FPAbGroup::z())
}

/// `H_0, …, H_N` of the cyclic group of order `k`.
pub fn cyclic_group_homology(k: u64, n_max: i64) -> Result<TwoRowSolution, SolverError> {
    two_row_solve(&seeded(), &k_tower_abutment(k), n_max)
}

/// `H_0, …, H_N` of complex projective `r`-space.
pub fn projective_space_homology(r: i64, n_max: i64) -> Result<TwoRowSolution, SolverError> {
    two_row_solve(&seeded(), &sphere_abutment(r), n_max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_three() {
        let s = cyclic_group_homology(3, 6).unwrap();
        let want = ["Z", "Z/3", "0", "Z/3", "0", "Z/3", "0"];
        for (p, w) in want.iter().enumerate() {
            assert_eq!(s.homology(p as i64).invariant_string(), *w);
        }
        assert!(s.d2_at(2).unwrap().is_zero());
        assert!(s.d2_at(3).unwrap().is_iso());
    }

    #[test]
    fn zero_abutment() {
        let shape = RowPairShape::default().with_known(0, FPAbGroup::zero());
        let s = two_row_solve(&shape, &FilteredAbutment::new(), 5).unwrap();
        assert!(s.h.iter().all(FPAbGroup::is_trivial));
    }

    #[test]
    fn errors() {
        let shape = RowPairShape::default().with_known(0, FPAbGroup::z_mod(2));
        assert!(matches!(
            two_row_solve(&shape, &k_tower_abutment(2), 3),
            Err(SolverError::Inconsistent { degree: 0, .. })
        ));
        let mut ab = FilteredAbutment::new();
        ab.insert(0, Filtration::trivial(FPAbGroup::z_mod(2), 0));
        ab.insert(1, Filtration::trivial(FPAbGroup::z_mod(3), 0));
        assert!(matches!(two_row_solve(&RowPairShape::default(), &ab, 3), Err(SolverError::Inconsistent { degree: 2, .. })));
        let mut ab = FilteredAbutment::new();
        ab.insert(0, Filtration::trivial(FPAbGroup::z_mod(2), 0));
        ab.insert(2, Filtration::trivial(FPAbGroup::z_mod(2), 2));
        assert!(matches!(
            two_row_solve(&RowPairShape::default(), &ab, 3),
            Err(SolverError::Underdetermined { degree: 2, .. })
        ));
        let mut ab = FilteredAbutment::new();
        ab.insert(2, Filtration::trivial(FPAbGroup::z(), 0));
        assert!(matches!(two_row_solve(&RowPairShape::default(), &ab, 3), Err(SolverError::Inconsistent { degree: 2, .. })));
    }
}
