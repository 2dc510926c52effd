//! Three exact couples sharing one spectral sequence (`E¹_{0,0} = ℤ/6`, all
//! differentials zero) while their abutments differ.
//!
//! Bidegrees `a = (1,−1)`, `b = (0,0)`, `c = (−1,0)`. The column `D(0)` runs
//! through `(0,0), (1,−1), …` and `D(−1)` through `(−2,1), (−1,0), (0,−1), …`.

use std::collections::BTreeMap;

use spectral::Bounds;
use zdiagrams::TailSpec;
use zlinalg::{FPAbGroup, Hom};

use crate::{Bidegrees, ExactCouple};

fn z6() -> FPAbGroup {
    FPAbGroup::z_mod(6)
}

/// `D(0) = ℤ/6` from `(0,0)` on with `j` an isomorphism; `D(−1) = 0`.
pub fn couple1() -> ExactCouple {
    let z6 = z6();
    ExactCouple::new(
        Bidegrees::homological(),
        Bounds::new((0, 0), (0, 0)).unwrap(),
        [((0, 0), z6.clone())].into(),
        [((0, 0), z6.clone())].into(),
        BTreeMap::new(),
        [((0, 0), Hom::identity(&z6))].into(),
        BTreeMap::new(),
        [(0, (TailSpec::Zero, TailSpec::Constant))].into(),
    )
    .expect("couple 1 is well formed")
}

/// `D(0) = ℤ/2` from `(0,0)` on with `j = ×3 : ℤ/2 → ℤ/6`; `D(−1) = ℤ/3` up
/// to `(−1,0)` with `k : ℤ/6 ↠ ℤ/3`.
pub fn couple2() -> ExactCouple {
    let (z2, z3, z6) = (FPAbGroup::z_mod(2), FPAbGroup::z_mod(3), z6());
    ExactCouple::new(
        Bidegrees::homological(),
        Bounds::new((-1, 0), (0, 0)).unwrap(),
        [((0, 0), z2.clone()), ((-1, 0), z3.clone())].into(),
        [((0, 0), z6.clone())].into(),
        BTreeMap::new(),
        [((0, 0), Hom::from_i64(&z2, &z6, &[vec![3]]).unwrap())].into(),
        [((0, 0), Hom::from_i64(&z6, &z3, &[vec![1]]).unwrap())].into(),
        [(0, (TailSpec::Zero, TailSpec::Constant)), (-1, (TailSpec::Constant, TailSpec::Zero))].into(),
    )
    .expect("couple 2 is well formed")
}

/// `D(0) = 0`; `D(−1) = ℤ/6` up to `(−1,0)` with `k` an isomorphism.
pub fn couple3() -> ExactCouple {
    let z6 = z6();
    ExactCouple::new(
        Bidegrees::homological(),
        Bounds::new((-1, 0), (0, 0)).unwrap(),
        [((-1, 0), z6.clone())].into(),
        [((0, 0), z6.clone())].into(),
        BTreeMap::new(),
        BTreeMap::new(),
        [((0, 0), Hom::identity(&z6))].into(),
        [(-1, (TailSpec::Constant, TailSpec::Zero))].into(),
    )
    .expect("couple 3 is well formed")
}

/// The demo couple called `name` (`couple1`, `couple2`, `couple3`).
pub fn by_name(name: &str) -> Option<ExactCouple> {
    match name {
        "couple1" => Some(couple1()),
        "couple2" => Some(couple2()),
        "couple3" => Some(couple3()),
        _ => None,
    }
}
