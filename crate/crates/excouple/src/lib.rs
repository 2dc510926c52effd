//! Regular bigraded exact couples `D →i D →j E →k D` of finitely generated
//! abelian groups.
//!
//! A couple is stored on a support rectangle: `E` vanishes outside it, and
//! each diagonal `D(n) = (… → D_{x−a} → D_x → D_{x+a} → …)` is a
//! [`ZDiagram`](zdiagrams::ZDiagram) indexed by `r` in `x = x(n) + r·a`, with
//! tails on both sides.

mod abutment;
mod couple;
pub mod demos;
mod derive;
mod extension;
mod filtered;
pub mod json;
mod lim1;
mod morphism;
mod pages;
pub mod random;
mod reindex;
mod zeeman;

use std::fmt;

use spectral::{add, Pos, SpecError};
use thiserror::Error;
use zdiagrams::ZdError;
use zlinalg::LinalgError;

pub use abutment::{abutments, AbutmentData};
pub use couple::ExactCouple;
pub use derive::{derivation_abutment_check, derive, DerivationReport, Variant};
pub use extension::{
    classify, classify_at, er_extension_check, extension_report, Classification, ErReport, ExtensionReport, Label, PositionClass,
};
pub use filtered::{couple_from_filtered_complex, FilteredComplex};
pub use lim1::{lim1_couple, Lim1Report};
pub use morphism::{compare_abutments, CoupleMorphism};
pub use pages::{
    boundaries, cycles, e_infinity_internal, internal_page, page_agreement, stable_e, to_spectral_sequence, InfinityData,
    InternalPage,
    StableE,
};
pub use reindex::{canonical_t, reindex, Mat2};
pub use zeeman::{zeeman_check, ZeemanReport, ZeemanSetup, ZeemanVariant};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExcoupleError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Diagram(#[from] ZdError),
    #[error(transparent)]
    Spectral(#[from] SpecError),
    #[error("not exact at {position:?}, corner {corner}")]
    NotExact { position: Pos, corner: Corner },
    #[error("bidegrees are not regular: det[a | b+c] = {sigma}")]
    NotRegular { sigma: i64 },
    #[error("matrix has determinant {det}, not ±1")]
    NotUnimodular { det: i64 },
    #[error("components do not commute with the structure maps at {position:?}")]
    NotAMorphism { position: Pos },
    #[error("bidegrees differ")]
    BidegreeMismatch,
    #[error("d ∘ d ≠ 0 in degree {degree}")]
    NotAComplex { degree: i64 },
    #[error("filtration fails in degree {degree} at stage {p}")]
    NotFiltered { degree: i64, p: i64 },
    #[error("setup violated: {0}")]
    SetupViolation(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal error: {0}")]
    Internal(String),
}

/// The three corners of the exact triangle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Corner {
    /// `Im j = Ker k` at `E`.
    E,
    /// `Im i = Ker j` at `D`.
    DJ,
    /// `Im k = Ker i` at `D`.
    DI,
}

impl fmt::Display for Corner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Corner::E => "E (Im j = Ker k)",
            Corner::DJ => "D (Im i = Ker j)",
            Corner::DI => "D (Im k = Ker i)",
        })
    }
}

pub fn det(u: Pos, v: Pos) -> i64 {
    u.0 * v.1 - u.1 * v.0
}

/// Bidegrees of `i`, `j`, `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Bidegrees {
    pub a: Pos,
    pub b: Pos,
    pub c: Pos,
}

impl Bidegrees {
    pub fn new(a: Pos, b: Pos, c: Pos) -> Self {
        Bidegrees { a, b, c }
    }

    /// `a = (1,−1)`, `b = (0,0)`, `c = (−1,0)`: the couple of a filtered complex.
    pub fn homological() -> Self {
        Bidegrees { a: (1, -1), b: (0, 0), c: (-1, 0) }
    }

    pub fn z(&self) -> Pos {
        add(self.b, self.c)
    }

    /// `σ = det[a | b+c]`.
    pub fn sigma(&self) -> i64 {
        det(self.a, self.z())
    }

    pub fn is_regular(&self) -> bool {
        self.sigma().abs() == 1
    }

    /// Diagonal index `n = det[a | x]`.
    pub fn n_of(&self, x: Pos) -> i64 {
        det(self.a, x)
    }

    /// Base point `x(n) = σ·n·(b+c)` of the diagonal `D(n)`.
    pub fn x_of(&self, n: i64) -> Pos {
        let s = self.sigma() * n;
        (s * self.z().0, s * self.z().1)
    }

    /// The unique `r` with `x = x(n) + r·a`.
    pub fn r_of(&self, x: Pos) -> i64 {
        let base = self.x_of(self.n_of(x));
        let d = (x.0 - base.0, x.1 - base.1);
        let aa = self.a.0 * self.a.0 + self.a.1 * self.a.1;
        let r = (d.0 * self.a.0 + d.1 * self.a.1) / aa;
        debug_assert_eq!((r * self.a.0, r * self.a.1), d, "regular bidegrees parametrize every position");
        r
    }

    pub fn pos(&self, n: i64, r: i64) -> Pos {
        let base = self.x_of(n);
        (base.0 + r * self.a.0, base.1 + r * self.a.1)
    }

    /// Bidegree `v_r = b + c − (r−1)·a` of `d^r`.
    pub fn v(&self, r: i64) -> Pos {
        let z = self.z();
        (z.0 - (r - 1) * self.a.0, z.1 - (r - 1) * self.a.1)
    }

    pub(crate) fn check_regular(&self) -> Result<(), ExcoupleError> {
        if self.is_regular() {
            Ok(())
        } else {
            Err(ExcoupleError::NotRegular { sigma: self.sigma() })
        }
    }
}

pub(crate) fn internal(msg: impl Into<String>) -> ExcoupleError {
    ExcoupleError::Internal(msg.into())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn indexing() {
        let b = Bidegrees::homological();
        assert_eq!(b.sigma(), -1);
        assert_eq!(b.n_of((-1, 0)), -1);
        assert_eq!(b.x_of(-1), (-1, 0));
        for x in [(0, 0), (3, -2), (-4, 7)] {
            assert_eq!(b.pos(b.n_of(x), b.r_of(x)), x);
        }
        assert_eq!(b.v(2), (-2, 1));
        let odd = Bidegrees::new((2, 1), (1, 1), (0, 0));
        assert_eq!(odd.sigma(), 1);
        for x in [(0, 0), (5, -3), (-2, 9)] {
            assert_eq!(odd.pos(odd.n_of(x), odd.r_of(x)), x);
        }
        assert!(!Bidegrees::new((2, 0), (0, 1), (0, 0)).is_regular());
    }
}
