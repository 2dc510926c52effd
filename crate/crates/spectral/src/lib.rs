//! Bigraded groups, spectral sequences of finitely generated abelian groups,
//! their limit pages and morphisms.

mod abutment;
mod bigraded;
pub mod json;
mod morphism;
pub mod random;
mod sequence;

use thiserror::Error;
use zlinalg::LinalgError;

pub use abutment::{FilteredAbutment, Filtration};
pub use bigraded::{add, parse_pos_key, pos_key, sub, BidegreeRule, BigradedGroup, Bounds, Pos};
pub use morphism::{
    all_homs, direct_sum, find_non_propagation, morphism_tools, propagation, MorphismReport, NonPropagation,
    PropagationReport, SSMorphism,
};
pub use sequence::{
    collapse_page, cycles_boundaries, e_infinity, e_infinity_interchange, turn_page, CyclesBoundaries, EInfinity, Page,
    SpectralSequence,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpecError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("d ∘ d ≠ 0 on page {page} at {position:?}")]
    NotADifferential { page: i64, position: Pos },
    #[error("the differentials never leave the bounds")]
    UnboundedSupport,
    #[error("the square on page {page} at {position:?} does not commute")]
    NotAMorphism { page: i64, position: Pos },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("parse error: {0}")]
    Parse(String),
}
