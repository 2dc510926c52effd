//! ℤ-indexed diagrams of finitely generated abelian groups: colimits, limits
//! and `lim¹`, image towers, the image and kernel filtrations, and comparison
//! rules for maps of diagrams.
//!
//! A diagram is stored on a finite window `[p0, p1]` with a tail behaviour on
//! each side. Every computation runs over the window padded by one position on
//! each side, which already captures the tails exactly.

mod compare;
mod diagram;
mod filtrations;
mod limits;
pub mod random;
mod towers;

use thiserror::Error;
use zlinalg::LinalgError;

pub use compare::{zcompare, Verdict, ZRule};
pub use diagram::{TailSpec, ZDiagram, ZMorphism};
pub use filtrations::{
    filtrations, kernel_diagram, k_mono_condition, six_term_check, split_sequence, FiltrationReport, Filtrations, KMonoReport,
    KernelDiagram, SixTermReport,
};
pub use limits::{colim_map, colimit, lim_map, limit_and_lim1, Colimit, Limit};
pub use towers::{
    default_budget, i_omega_at, i_omega_diagram, image_at, image_quotient_diagram, image_sub_diagram, image_towers,
    ml_conditions, q_omega_diagram, q_omega_kernel_at, quotient_kernel_at, stable_image, ImageTowers, MlReport,
    StableImage,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ZdError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),
    #[error("not natural at position {position}")]
    NotNatural { position: i64 },
    #[error("not exact at position {position}: {detail}")]
    NotExact { position: i64, detail: String },
    #[error("image tower at position {position} did not stabilize within {budget} steps")]
    BudgetExceeded { position: i64, budget: usize },
}
