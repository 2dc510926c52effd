use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::{solve_integer, subquotient, Elem, FPAbGroup, IntMatrix, LinalgError, Subgroup};

/// Homomorphism given by its matrix on generators (`cod.ngens() × dom.ngens()`),
/// with entries reduced modulo the codomain orders so that equal maps have
/// equal matrices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Hom {
    dom: FPAbGroup,
    cod: FPAbGroup,
    matrix: IntMatrix,
}

/// Kernel, image and cokernel of a homomorphism.
#[derive(Clone, Debug)]
pub struct HomKit {
    pub kernel: Subgroup,
    pub image: Subgroup,
    pub cokernel: FPAbGroup,
    pub projection: Hom,
}

impl Hom {
    pub fn new(dom: FPAbGroup, cod: FPAbGroup, matrix: IntMatrix) -> Result<Self, LinalgError> {
        if matrix.rows() != cod.ngens() || matrix.cols() != dom.ngens() {
            return Err(LinalgError::DimensionMismatch(format!(
                "{}x{} matrix for a map from {} to {} generators",
                matrix.rows(),
                matrix.cols(),
                dom.ngens(),
                cod.ngens()
            )));
        }
        let mut m = matrix;
        for j in 0..dom.ngens() {
            let d = &dom.orders()[j];
            for i in 0..cod.ngens() {
                let e = &cod.orders()[i];
                let v = m.get(i, j);
                let ok = if e.is_zero() { d.is_zero() || v.is_zero() } else { (d * v).is_multiple_of(e) };
                if !ok {
                    return Err(LinalgError::NotWellDefined { witness: dom.gen(j) });
                }
                if !e.is_zero() {
                    let r = v.mod_floor(e);
                    m.set(i, j, r);
                }
            }
        }
        Ok(Hom { dom, cod, matrix: m })
    }

    pub fn from_i64(dom: &FPAbGroup, cod: &FPAbGroup, rows: &[Vec<i64>]) -> Result<Self, LinalgError> {
        let m = IntMatrix::from_rows_i64(dom.ngens(), rows)?;
        Hom::new(dom.clone(), cod.clone(), m)
    }

    /// The map sending domain generator `j` to `images[j]`.
    pub fn from_images(dom: &FPAbGroup, cod: &FPAbGroup, images: &[Elem]) -> Result<Self, LinalgError> {
        if images.len() != dom.ngens() {
            return Err(LinalgError::DimensionMismatch(format!(
                "{} images for {} generators",
                images.len(),
                dom.ngens()
            )));
        }
        Hom::new(dom.clone(), cod.clone(), IntMatrix::from_columns(cod.ngens(), images))
    }

    pub fn zero(dom: &FPAbGroup, cod: &FPAbGroup) -> Self {
        Hom { dom: dom.clone(), cod: cod.clone(), matrix: IntMatrix::zeros(cod.ngens(), dom.ngens()) }
    }

    pub fn identity(g: &FPAbGroup) -> Self {
        Hom::new(g.clone(), g.clone(), IntMatrix::identity(g.ngens())).expect("identity is well defined")
    }

    /// Multiplication by `k` on `g`.
    pub fn scalar(g: &FPAbGroup, k: i64) -> Self {
        let mut m = IntMatrix::identity(g.ngens());
        for i in 0..g.ngens() {
            m.set(i, i, BigInt::from(k));
        }
        Hom::new(g.clone(), g.clone(), m).expect("scalar maps are well defined")
    }

    pub fn domain(&self) -> &FPAbGroup {
        &self.dom
    }

    pub fn codomain(&self) -> &FPAbGroup {
        &self.cod
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn apply(&self, x: &[BigInt]) -> Elem {
        self.cod.reduce(&self.matrix.mul_vec(x))
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &Hom) -> Result<Hom, LinalgError> {
        if inner.cod != self.dom {
            return Err(LinalgError::AmbientMismatch);
        }
        Hom::new(inner.dom.clone(), self.cod.clone(), self.matrix.mul(&inner.matrix))
    }

    pub fn add(&self, other: &Hom) -> Result<Hom, LinalgError> {
        if self.dom != other.dom || self.cod != other.cod {
            return Err(LinalgError::AmbientMismatch);
        }
        Hom::new(self.dom.clone(), self.cod.clone(), self.matrix.add(&other.matrix))
    }

    pub fn neg(&self) -> Hom {
        Hom::new(self.dom.clone(), self.cod.clone(), self.matrix.neg()).expect("negation is well defined")
    }

    pub fn direct_sum(&self, other: &Hom) -> Hom {
        Hom::new(
            self.dom.direct_sum(&other.dom),
            self.cod.direct_sum(&other.cod),
            self.matrix.block_diag(&other.matrix),
        )
        .expect("block sum is well defined")
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    pub fn kernel(&self) -> Subgroup {
        Subgroup::zero(&self.cod).preimage_under(self).expect("codomain matches")
    }

    pub fn image(&self) -> Subgroup {
        Subgroup::whole(&self.dom).image_under(self).expect("domain matches")
    }

    pub fn preimage(&self, s: &Subgroup) -> Result<Subgroup, LinalgError> {
        s.preimage_under(self)
    }

    /// Some `x` with `f(x) = y`.
    pub fn solve(&self, y: &[BigInt]) -> Result<Elem, LinalgError> {
        let rel = self.cod.presentation().transpose();
        let aug = self.matrix.hstack(&rel);
        let x = solve_integer(&aug, y).ok_or(LinalgError::Absent)?;
        Ok(self.dom.reduce(&x[..self.dom.ngens()]))
    }

    pub fn is_mono(&self) -> bool {
        self.kernel().is_zero()
    }

    pub fn is_epi(&self) -> bool {
        self.image().is_whole()
    }

    pub fn is_iso(&self) -> bool {
        self.is_mono() && self.is_epi()
    }

    /// Inverse of an isomorphism.
    pub fn inverse(&self) -> Result<Hom, LinalgError> {
        if !self.is_iso() {
            return Err(LinalgError::NotWellDefined { witness: Vec::new() });
        }
        let imgs = self
            .cod
            .gens()
            .iter()
            .map(|g| self.solve(g))
            .collect::<Result<Vec<_>, _>>()?;
        Hom::from_images(&self.cod, &self.dom, &imgs)
    }

    pub fn kit(&self) -> HomKit {
        let kernel = self.kernel();
        let image = self.image();
        let q = subquotient(&Subgroup::whole(&self.cod), &image).expect("image ⊆ codomain");
        let cols: Vec<Elem> = self
            .cod
            .gens()
            .iter()
            .map(|g| q.project(g).expect("codomain generators are cycles"))
            .collect();
        let projection = Hom::from_images(&self.cod, q.group(), &cols).expect("projection is well defined");
        HomKit { kernel, image, cokernel: q.group().clone(), projection }
    }

    /// Inclusion of a subgroup, presented as a canonical group, into its ambient group.
    pub fn inclusion(s: &Subgroup) -> Hom {
        let q = subquotient(s, &Subgroup::zero(s.ambient())).expect("0 ⊆ S");
        Hom::from_images(q.group(), s.ambient(), q.section()).expect("inclusion is well defined")
    }
}

pub fn hom_kit(f: &Hom) -> HomKit {
    f.kit()
}

pub fn preimage(f: &Hom, s: &Subgroup) -> Result<Subgroup, LinalgError> {
    f.preimage(s)
}

pub fn solve_element(f: &Hom, y: &[BigInt]) -> Result<Elem, LinalgError> {
    f.solve(y)
}

/// `Im f = Ker g` for `f: A → B`, `g: B → C`.
pub fn exact_at(f: &Hom, g: &Hom) -> Result<bool, LinalgError> {
    if f.codomain() != g.domain() {
        return Err(LinalgError::AmbientMismatch);
    }
    Ok(f.image() == g.kernel())
}

/// `0 → A →f B →g C → 0` is exact.
pub fn is_short_exact(f: &Hom, g: &Hom) -> Result<bool, LinalgError> {
    Ok(f.is_mono() && g.is_epi() && exact_at(f, g)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elem;

    #[test]
    fn times_six_on_z() {
        let z = FPAbGroup::z();
        let f = Hom::from_i64(&z, &z, &[vec![6]]).unwrap();
        let k = f.kit();
        assert!(k.kernel.is_zero());
        assert_eq!(k.image, Subgroup::from_generators(&z, &[elem(&[6])]));
        assert_eq!(k.cokernel, FPAbGroup::z_mod(6));
        assert_eq!(f.solve(&elem(&[3])), Err(LinalgError::Absent));
        assert_eq!(f.solve(&elem(&[12])), Ok(elem(&[2])));
    }

    #[test]
    fn times_two_on_z6() {
        let g = FPAbGroup::z_mod(6);
        let f = Hom::scalar(&g, 2);
        let k = f.kit();
        assert_eq!(k.kernel, Subgroup::from_generators(&g, &[elem(&[3])]));
        assert_eq!(k.kernel.order(), Some(BigInt::from(2)));
        assert_eq!(k.image.order(), Some(BigInt::from(3)));
    }

    #[test]
    fn zero_map() {
        let g = FPAbGroup::from_invariants_i64(1, &[4]).unwrap();
        let h = FPAbGroup::z_mod(6);
        let k = Hom::zero(&g, &h).kit();
        assert!(k.kernel.is_whole());
        assert!(k.image.is_zero());
        assert_eq!(k.cokernel, h);
    }

    #[test]
    fn rejects_ill_defined() {
        let z2 = FPAbGroup::z_mod(2);
        let z = FPAbGroup::z();
        let z3 = FPAbGroup::z_mod(3);
        assert!(Hom::from_i64(&z2, &z, &[vec![1]]).is_err());
        assert!(Hom::from_i64(&z2, &z3, &[vec![1]]).is_err());
        assert!(Hom::from_i64(&FPAbGroup::z_mod(4), &z2, &[vec![1]]).is_ok());
    }

    #[test]
    fn short_exact() {
        let z = FPAbGroup::z();
        let z6 = FPAbGroup::z_mod(6);
        let f = Hom::from_i64(&z, &z, &[vec![6]]).unwrap();
        let g = Hom::from_i64(&z, &z6, &[vec![1]]).unwrap();
        assert!(is_short_exact(&f, &g).unwrap());
        assert!(g.compose(&f).unwrap().is_zero());
    }

    #[test]
    fn preimage_and_inverse() {
        let z = FPAbGroup::z();
        let f = Hom::from_i64(&z, &z, &[vec![2]]).unwrap();
        let s = Subgroup::from_generators(&z, &[elem(&[6])]);
        assert_eq!(f.preimage(&s).unwrap(), Subgroup::from_generators(&z, &[elem(&[3])]));
        let u = Hom::from_i64(&z, &z, &[vec![-1]]).unwrap();
        assert_eq!(u.inverse().unwrap(), u);
    }
}
