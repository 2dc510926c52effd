use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::{smith, Elem, FPAbGroup, Hom, IntMatrix, Lattice, LinalgError};

/// A subgroup of `ambient`, stored as the Hermite-reduced lattice of all
/// coordinate vectors representing its elements (so it always contains the
/// ambient relation lattice).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subgroup {
    ambient: FPAbGroup,
    lattice: Lattice,
}

impl Subgroup {
    pub fn from_generators(ambient: &FPAbGroup, gens: &[Elem]) -> Self {
        let mut all: Vec<Elem> = gens.to_vec();
        all.extend(ambient.presentation().row_vecs());
        Subgroup { ambient: ambient.clone(), lattice: Lattice::from_generators(ambient.ngens(), &all) }
    }

    pub fn whole(ambient: &FPAbGroup) -> Self {
        Subgroup { ambient: ambient.clone(), lattice: Lattice::full(ambient.ngens()) }
    }

    pub fn zero(ambient: &FPAbGroup) -> Self {
        Subgroup { ambient: ambient.clone(), lattice: ambient.relation_lattice() }
    }

    pub fn ambient(&self) -> &FPAbGroup {
        &self.ambient
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    /// Stored basis columns (reduced in the ambient group), zero vectors dropped.
    pub fn generators(&self) -> Vec<Elem> {
        self.lattice
            .basis()
            .iter()
            .map(|b| self.ambient.reduce(b))
            .filter(|b| b.iter().any(|x| !x.is_zero()))
            .collect()
    }

    pub fn contains(&self, x: &[BigInt]) -> bool {
        self.lattice.contains(x)
    }

    pub fn is_whole(&self) -> bool {
        self.lattice == Lattice::full(self.ambient.ngens())
    }

    pub fn is_zero(&self) -> bool {
        self.lattice == self.ambient.relation_lattice()
    }

    fn check_ambient(&self, other: &Subgroup) -> Result<(), LinalgError> {
        if self.ambient != other.ambient {
            Err(LinalgError::AmbientMismatch)
        } else {
            Ok(())
        }
    }

    pub fn is_subset(&self, other: &Subgroup) -> Result<bool, LinalgError> {
        self.check_ambient(other)?;
        Ok(self.lattice.is_subset(&other.lattice))
    }

    pub fn sum(&self, other: &Subgroup) -> Result<Subgroup, LinalgError> {
        self.check_ambient(other)?;
        Ok(Subgroup { ambient: self.ambient.clone(), lattice: self.lattice.sum(&other.lattice) })
    }

    pub fn intersect(&self, other: &Subgroup) -> Result<Subgroup, LinalgError> {
        self.check_ambient(other)?;
        Ok(Subgroup { ambient: self.ambient.clone(), lattice: self.lattice.intersect(&other.lattice) })
    }

    /// Image under a homomorphism out of the ambient group.
    pub fn image_under(&self, f: &Hom) -> Result<Subgroup, LinalgError> {
        if f.domain() != &self.ambient {
            return Err(LinalgError::AmbientMismatch);
        }
        let gens: Vec<Elem> = self.lattice.basis().iter().map(|b| f.apply(b)).collect();
        Ok(Subgroup::from_generators(f.codomain(), &gens))
    }

    /// Preimage under a homomorphism into the ambient group.
    pub fn preimage_under(&self, f: &Hom) -> Result<Subgroup, LinalgError> {
        if f.codomain() != &self.ambient {
            return Err(LinalgError::AmbientMismatch);
        }
        Ok(Subgroup { ambient: f.domain().clone(), lattice: self.lattice.preimage(f.matrix()) })
    }

    /// The subgroup as an abstract group (subquotient by zero).
    pub fn as_group(&self) -> FPAbGroup {
        subquotient(self, &Subgroup::zero(&self.ambient)).expect("0 ⊆ S").group().clone()
    }

    /// Order of the subgroup, `None` when infinite.
    pub fn order(&self) -> Option<BigInt> {
        self.as_group().order()
    }
}

/// `Z/B` for subgroups `B ⊆ Z` of a common ambient group, presented in
/// canonical form together with lifts of its generators.
#[derive(Clone, Debug)]
pub struct Subquotient {
    z: Subgroup,
    b: Subgroup,
    group: FPAbGroup,
    kind: Kind,
    section: Vec<Elem>,
}

#[derive(Clone, Debug)]
enum Kind {
    Identity,
    Smith { u: IntMatrix, sel: Vec<usize> },
}

pub fn subquotient(z: &Subgroup, b: &Subgroup) -> Result<Subquotient, LinalgError> {
    z.check_ambient(b)?;
    if !b.lattice.is_subset(&z.lattice) {
        let w = b
            .lattice
            .basis()
            .iter()
            .find(|v| !z.lattice.contains(v))
            .map(|v| z.ambient.reduce(v))
            .unwrap_or_default();
        return Err(LinalgError::ContainmentViolation(format!("boundary element {w:?} is not a cycle")));
    }
    let amb = &z.ambient;
    if amb.is_canonical() && z.is_whole() && b.is_zero() {
        return Ok(Subquotient {
            z: z.clone(),
            b: b.clone(),
            group: amb.clone(),
            kind: Kind::Identity,
            section: amb.gens(),
        });
    }
    let kz = z.lattice.rank();
    let zmat = z.lattice.basis_matrix();
    let cols: Vec<Elem> = b
        .lattice
        .basis()
        .iter()
        .map(|v| z.lattice.coords(v).expect("B ⊆ Z"))
        .collect();
    let c = IntMatrix::from_columns(kz, &cols);
    let s = smith(&c);
    let mut sel = Vec::new();
    let mut orders = Vec::new();
    for i in s.rank..kz {
        sel.push(i);
        orders.push(BigInt::zero());
    }
    for i in 0..s.rank {
        let d = s.d.get(i, i);
        if !d.is_one() {
            sel.push(i);
            orders.push(d.clone());
        }
    }
    let group = FPAbGroup::new(orders).expect("invariant factors are valid orders");
    let section = sel
        .iter()
        .map(|&i| amb.reduce(&zmat.mul_vec(&s.u_inv.col(i))))
        .collect();
    Ok(Subquotient { z: z.clone(), b: b.clone(), group, kind: Kind::Smith { u: s.u, sel }, section })
}

impl Subquotient {
    pub fn group(&self) -> &FPAbGroup {
        &self.group
    }

    pub fn cycles(&self) -> &Subgroup {
        &self.z
    }

    pub fn boundaries(&self) -> &Subgroup {
        &self.b
    }

    pub fn ambient(&self) -> &FPAbGroup {
        &self.z.ambient
    }

    /// Lifts of the quotient generators, as ambient elements lying in `Z`.
    pub fn section(&self) -> &[Elem] {
        &self.section
    }

    /// Class of an ambient element of `Z`.
    pub fn project(&self, x: &[BigInt]) -> Result<Elem, LinalgError> {
        match &self.kind {
            Kind::Identity => Ok(self.group.reduce(x)),
            Kind::Smith { u, sel } => {
                let y = self.z.lattice.coords(x).ok_or_else(|| {
                    LinalgError::ContainmentViolation(format!(
                        "element {:?} is not in the cycle subgroup",
                        self.z.ambient.reduce(x)
                    ))
                })?;
                let w = u.mul_vec(&y);
                let q: Elem = sel.iter().map(|&i| w[i].clone()).collect();
                Ok(self.group.reduce(&q))
            }
        }
    }

    /// An ambient element of `Z` representing the class `q`.
    pub fn lift(&self, q: &[BigInt]) -> Elem {
        assert_eq!(q.len(), self.group.ngens());
        let mut out = self.z.ambient.zero_elem();
        for (c, s) in q.iter().zip(&self.section) {
            if c.is_zero() {
                continue;
            }
            for (o, v) in out.iter_mut().zip(s) {
                *o += c * v;
            }
        }
        self.z.ambient.reduce(&out)
    }

    /// Image in `Z/B` of a subgroup `S ⊆ Z`.
    pub fn quotient_subgroup(&self, s: &Subgroup) -> Result<Subgroup, LinalgError> {
        let gens = s
            .generators()
            .iter()
            .map(|g| self.project(g))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Subgroup::from_generators(&self.group, &gens))
    }

    /// Subgroup `π⁻¹(S)` of the ambient group, for `S ⊆ Z/B` (contains `B`).
    pub fn pull_back(&self, s: &Subgroup) -> Subgroup {
        let mut gens: Vec<Elem> = s.generators().iter().map(|g| self.lift(g)).collect();
        gens.extend(self.b.generators());
        Subgroup::from_generators(&self.z.ambient, &gens)
    }
}

/// Map `Z₁/B₁ → Z₂/B₂` induced by `f` on the ambient groups; fails with a
/// witness when `f(Z₁) ⊄ Z₂` or `f(B₁) ⊄ B₂`.
pub fn induced_map(src: &Subquotient, dst: &Subquotient, f: &Hom) -> Result<Hom, LinalgError> {
    if f.domain() != src.ambient() || f.codomain() != dst.ambient() {
        return Err(LinalgError::AmbientMismatch);
    }
    for v in src.z.lattice.basis() {
        if !dst.z.contains(&f.apply(v)) {
            return Err(LinalgError::NotWellDefined { witness: src.ambient().reduce(v) });
        }
    }
    for v in src.b.lattice.basis() {
        if !dst.b.contains(&f.apply(v)) {
            return Err(LinalgError::NotWellDefined { witness: src.ambient().reduce(v) });
        }
    }
    let cols = src
        .section
        .iter()
        .map(|s| dst.project(&f.apply(s)))
        .collect::<Result<Vec<_>, _>>()?;
    Hom::new(src.group.clone(), dst.group.clone(), IntMatrix::from_columns(dst.group.ngens(), &cols))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elem;

    #[test]
    fn z_mod_six() {
        let z = FPAbGroup::z();
        let whole = Subgroup::whole(&z);
        let six = Subgroup::from_generators(&z, &[elem(&[6])]);
        let q = subquotient(&whole, &six).unwrap();
        assert_eq!(q.group(), &FPAbGroup::z_mod(6));
        assert_eq!(q.project(&elem(&[13])).unwrap(), elem(&[1]));
    }

    #[test]
    fn z_by_z_is_trivial() {
        let g = FPAbGroup::from_invariants_i64(1, &[4]).unwrap();
        let s = Subgroup::from_generators(&g, &[elem(&[2, 1])]);
        assert!(subquotient(&s, &s).unwrap().group().is_trivial());
    }

    #[test]
    fn containment_violation() {
        let z = FPAbGroup::z();
        let two = Subgroup::from_generators(&z, &[elem(&[2])]);
        let three = Subgroup::from_generators(&z, &[elem(&[3])]);
        assert!(matches!(subquotient(&two, &three), Err(LinalgError::ContainmentViolation(_))));
    }

    #[test]
    fn cyclic_subgroups_of_z6() {
        let g = FPAbGroup::z_mod(6);
        let a = Subgroup::from_generators(&g, &[elem(&[3])]);
        let b = Subgroup::from_generators(&g, &[elem(&[2])]);
        assert!(a.intersect(&b).unwrap().is_zero());
        assert!(a.sum(&b).unwrap().is_whole());
        assert_eq!(a.intersect(&a).unwrap(), a);
        assert_eq!(a.sum(&a).unwrap(), a);
    }

    #[test]
    fn section_lifts_into_z() {
        let g = FPAbGroup::from_invariants_i64(2, &[]).unwrap();
        let z = Subgroup::from_generators(&g, &[elem(&[2, 2]), elem(&[0, 3])]);
        let b = Subgroup::from_generators(&g, &[elem(&[4, 4]), elem(&[0, 9])]);
        let q = subquotient(&z, &b).unwrap();
        assert_eq!(q.group().order(), Some(BigInt::from(6)));
        for (i, s) in q.section().iter().enumerate() {
            assert!(z.contains(s));
            assert_eq!(q.project(s).unwrap(), q.group().gen(i));
        }
    }

    #[test]
    fn one_generator_is_whole() {
        let g = FPAbGroup::z_mod(6);
        assert!(Subgroup::from_generators(&g, &[elem(&[5])]).is_whole());
    }
}
