//! Exact linear algebra over ℤ.
//!
//! Every object the rest of the workspace manipulates is a finitely presented
//! abelian group ([`FPAbGroup`]) with homomorphisms ([`Hom`]) given as integer
//! matrices on generators. Subgroups ([`Subgroup`]) are stored as Hermite-reduced
//! lattices containing the relation lattice, so two subgroups are equal exactly
//! when their stored bases are equal.

mod error;
mod group;
mod hom;
pub mod json;
mod lattice;
mod matrix;
mod snf;
mod subgroup;

pub use error::LinalgError;
pub use group::{Elem, FPAbGroup};
pub use hom::{exact_at, hom_kit, is_short_exact, preimage, solve_element, Hom, HomKit};
pub use lattice::{integer_kernel, solve_integer, Lattice};
pub use matrix::IntMatrix;
pub use num_bigint::BigInt;
pub use snf::{smith, smith_normal_form, Smith};
pub use subgroup::{induced_map, subquotient, Subgroup, Subquotient};

/// Shorthand for building a `BigInt` from a machine integer.
pub fn int(v: i64) -> BigInt {
    BigInt::from(v)
}

/// Converts a slice of machine integers into an element vector.
pub fn elem(v: &[i64]) -> Elem {
    v.iter().map(|&x| BigInt::from(x)).collect()
}
