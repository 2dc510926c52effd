//! Solvers for small first-quadrant spectral sequences: the two-row pattern
//! with `E²_{p,0} ≅ E²_{p,1}` and the five-term exact sequence.

mod five_term;
mod two_row;

use thiserror::Error;
use zlinalg::{subquotient, FPAbGroup, Hom, LinalgError, Subgroup};

pub use five_term::{five_term, FiveTerm};
pub use two_row::{
    k_tower_abutment, projective_space_homology, sphere_abutment, two_row_solve, cyclic_group_homology,
    RowPairShape, TwoRowSolution,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolverError {
    #[error("inconsistent constraints in degree {degree}: {reason}")]
    Inconsistent { degree: i64, reason: String },
    #[error("degree {degree} is determined only up to extension: {reason}")]
    Underdetermined { degree: i64, reason: String },
    #[error("setup violation: {0}")]
    SetupViolation(String),
    #[error(transparent)]
    Spec(#[from] spectral::SpecError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// `g` in canonical form, with inverse isomorphisms `g → h` and `h → g`.
pub(crate) fn canonicalize(g: &FPAbGroup) -> Result<(FPAbGroup, Hom, Hom), LinalgError> {
    let sq = subquotient(&Subgroup::whole(g), &Subgroup::zero(g))?;
    let h = sq.group().clone();
    let imgs = g.gens().iter().map(|x| sq.project(x)).collect::<Result<Vec<_>, _>>()?;
    let to = Hom::from_images(g, &h, &imgs)?;
    let from = Hom::from_images(&h, g, sq.section())?;
    Ok((h, to, from))
}

/// Some isomorphism `g → h`, if one exists.
pub(crate) fn some_iso(g: &FPAbGroup, h: &FPAbGroup) -> Result<Option<Hom>, LinalgError> {
    if !g.isomorphic(h) {
        return Ok(None);
    }
    let (cg, to_g, _) = canonicalize(g)?;
    let (ch, _, from_h) = canonicalize(h)?;
    debug_assert_eq!(cg, ch);
    Ok(Some(from_h.compose(&to_g)?))
}
