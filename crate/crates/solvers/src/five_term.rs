use spectral::{e_infinity, BidegreeRule, FilteredAbutment, Filtration, Pos, SpectralSequence};
use zlinalg::{exact_at, subquotient, FPAbGroup, Hom, Subgroup, Subquotient};

use crate::{some_iso, SolverError};

/// `L_2 → E²_{2,0} →∂ E²_{0,1} → L_1 → E²_{1,0}` with `∂ = d²_{2,0}`.
#[derive(Clone, Debug)]
pub struct FiveTerm {
    /// `L_2`, `E²_{2,0}`, `E²_{0,1}`, `L_1`, `E²_{1,0}`.
    pub groups: [FPAbGroup; 5],
    pub maps: [Hom; 4],
    /// Exactness at the three interior groups.
    pub exact: [bool; 3],
    pub last_epi: bool,
}

impl FiveTerm {
    pub const LABELS: [&'static str; 5] = ["L_2", "E2_{2,0}", "E2_{0,1}", "L_1", "E2_{1,0}"];

    pub fn holds(&self) -> bool {
        self.exact.iter().all(|&e| e) && self.last_epi
    }

    pub fn boundary(&self) -> &Hom {
        &self.maps[1]
    }
}

fn violation(msg: impl Into<String>) -> SolverError {
    SolverError::SetupViolation(msg.into())
}

/// The map `a → b` through `a ≅ b` chosen by [`some_iso`].
fn identify(a: &Subquotient, b: &Subquotient, what: &str) -> Result<Hom, SolverError> {
    some_iso(a.group(), b.group())?
        .ok_or_else(|| violation(format!("{what}: E∞ is {} but the abutment piece is {}", a.group(), b.group())))
}

/// Map of ambient groups `x → q → y` for quotients `q` of `x` and `q ≅ s`,
/// `s ⊆ y` a subgroup with zero boundaries.
fn through(src: &Subquotient, iso: &Hom, dst: &Subquotient) -> Result<Hom, SolverError> {
    let x = src.ambient();
    let imgs = x
        .gens()
        .iter()
        .map(|g| Ok(dst.lift(&iso.apply(&src.project(g)?))))
        .collect::<Result<Vec<_>, SolverError>>()?;
    Ok(Hom::from_images(x, dst.ambient(), &imgs)?)
}

fn filtration(ab: &FilteredAbutment, n: i64) -> Filtration {
    ab.get(n).cloned().unwrap_or_else(|| Filtration::trivial(FPAbGroup::zero(), n))
}

pub fn five_term(ss: &SpectralSequence, abutment: &FilteredAbutment) -> Result<FiveTerm, SolverError> {
    if !matches!(ss.rule(), BidegreeRule::Homological) || ss.r0() != 2 {
        return Err(violation("needs a homological spectral sequence starting on page 2"));
    }
    if ss.positions().iter().any(|&(p, q)| p < 0 || q < 0) {
        return Err(violation("spectral sequence is not first quadrant"));
    }
    let (l1, l2) = (filtration(abutment, 1), filtration(abutment, 2));
    for (f, n) in [(&l1, 1), (&l2, 2)] {
        if !f.is_exhaustive() || !f.at(-1).is_zero() {
            return Err(violation(format!("filtration of L_{n} is not supported in 0 ≤ p ≤ {n}")));
        }
    }
    let inf = e_infinity(ss)?;
    let e2 = |x| ss.group(2, x);
    let e_inf = |x: Pos| -> Result<Subquotient, SolverError> {
        let zero = Subgroup::zero(&e2(x));
        let z = inf.cycles.get(&x).unwrap_or(&zero);
        let b = inf.boundaries.get(&x).unwrap_or(&zero);
        Ok(subquotient(z, b)?)
    };
    let (inf20, inf01, inf10) = (e_inf((2, 0))?, e_inf((0, 1))?, e_inf((1, 0))?);
    if !inf20.boundaries().is_zero() || !inf10.boundaries().is_zero() {
        return Err(violation("E∞ on the bottom row has nonzero boundaries"));
    }
    if !inf01.cycles().is_whole() || !inf10.cycles().is_whole() {
        return Err(violation("E∞ at (0, 1) or (1, 0) has proper cycles"));
    }

    // L_2 ↠ L_2/F_{1,1} ≅ E∞_{2,0} ⊆ E²_{2,0}
    let top2 = l2.graded(2);
    let alpha = through(&top2, &identify(&top2, &inf20, "(2, 0)")?, &inf20)?;
    let boundary = ss.d(2, (2, 0));
    // E²_{0,1} ↠ E∞_{0,1} ≅ F_{0,1} ⊆ L_1
    let bottom1 = l1.graded(0);
    let beta = through(&inf01, &identify(&inf01, &bottom1, "(0, 1)")?, &bottom1)?;
    // L_1 ↠ L_1/F_{0,1} ≅ E∞_{1,0} = E²_{1,0}
    let top1 = l1.graded(1);
    let gamma = through(&top1, &identify(&top1, &inf10, "(1, 0)")?, &inf10)?;

    let exact = [exact_at(&alpha, &boundary)?, exact_at(&boundary, &beta)?, exact_at(&beta, &gamma)?];
    let last_epi = gamma.is_epi();
    let groups = [l2.group().clone(), e2((2, 0)), e2((0, 1)), l1.group().clone(), e2((1, 0))];
    Ok(FiveTerm { groups, maps: [alpha, boundary, beta, gamma], exact, last_epi })
}
