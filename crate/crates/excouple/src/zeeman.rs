use std::collections::BTreeMap;

use spectral::{e_infinity, BidegreeRule, FilteredAbutment, Pos, SSMorphism, SpectralSequence};
use zlinalg::{FPAbGroup, Hom};

use crate::ExcoupleError;

/// Which grading the comparison runs in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ZeemanSetup {
    /// Homological, first quadrant, increasing filtrations.
    I,
    /// Cohomological, first quadrant, decreasing filtrations.
    II,
}

impl ZeemanSetup {
    pub fn parse(s: &str) -> Option<ZeemanSetup> {
        match s {
            "I" | "1" => Some(ZeemanSetup::I),
            "II" | "2" => Some(ZeemanSetup::II),
            _ => None,
        }
    }
}

/// Edge along which the supplied implication is tested.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ZeemanVariant {
    /// Positions `(p, 0)`.
    RowEdge,
    /// Positions `(0, q)`.
    ColumnEdge,
}

#[derive(Clone, Debug)]
pub struct ZeemanReport {
    pub setup: ZeemanSetup,
    pub variant: ZeemanVariant,
    /// `(r, f^r iso)` for every stored page.
    pub pages: Vec<(i64, bool)>,
    pub f_infinity_iso: bool,
    /// First page and position where `f` fails to be an isomorphism.
    pub first_failure: Option<(i64, Pos)>,
}

impl ZeemanReport {
    pub fn holds(&self) -> bool {
        self.first_failure.is_none() && self.f_infinity_iso
    }
}

fn violation(msg: impl Into<String>) -> ExcoupleError {
    ExcoupleError::SetupViolation(msg.into())
}

fn first_quadrant(ss: &SpectralSequence) -> bool {
    ss.positions().iter().all(|&(p, q)| p >= 0 && q >= 0)
}

/// Filtration index of the graded piece at `(p, q)`.
fn stage(setup: ZeemanSetup, p: i64) -> i64 {
    match setup {
        ZeemanSetup::I => p,
        ZeemanSetup::II => -p,
    }
}

fn check_abutment(ss: &SpectralSequence, ab: &FilteredAbutment, setup: ZeemanSetup, side: &str) -> Result<(), ExcoupleError> {
    let einf = e_infinity(ss)?;
    let mut degrees: Vec<i64> = ab.degrees.keys().copied().collect();
    degrees.extend(einf.groups.support().map(|(p, q)| p + q));
    degrees.sort_unstable();
    degrees.dedup();
    for n in degrees {
        let f = ab.get(n);
        let b = ss.bounds();
        for p in b.p.0..=b.p.1 {
            let x = (p, n - p);
            let e = einf.groups.get(x);
            let g = match f {
                Some(f) => f.graded(stage(setup, p)).group().clone(),
                None => FPAbGroup::zero(),
            };
            if !e.isomorphic(&g) {
                return Err(violation(format!("{side}: E∞ at {x:?} is {e} but the abutment piece is {g}")));
            }
        }
        if let Some(f) = f {
            let (lo, hi) = (f.lo(), f.hi());
            let inside = (lo..=hi).all(|s| {
                let p = stage(setup, s);
                f.graded(s).group().is_trivial() || (p >= b.p.0 && p <= b.p.1)
            });
            if !inside || !f.is_exhaustive() {
                return Err(violation(format!("{side}: filtration of degree {n} escapes the bounds")));
            }
        }
    }
    Ok(())
}

/// Comparison of two first-quadrant spectral sequences along `f`, given
/// isomorphisms of the filtered abutments.
///
/// `edge(x)` lists the positions whose isomorphism forces one at `x`; the
/// implication is tested on page `r0` along the chosen edge.
pub fn zeeman_check(
    f: &SSMorphism,
    src_ab: &FilteredAbutment,
    tgt_ab: &FilteredAbutment,
    abutment_maps: &BTreeMap<i64, Hom>,
    setup: ZeemanSetup,
    variant: ZeemanVariant,
    edge: &dyn Fn(Pos) -> Vec<Pos>,
) -> Result<ZeemanReport, ExcoupleError> {
    let (s, t) = (f.source(), f.target());
    if !first_quadrant(s) || !first_quadrant(t) {
        return Err(violation("spectral sequences are not first quadrant"));
    }
    let rule_ok = |ss: &SpectralSequence| match setup {
        ZeemanSetup::I => matches!(ss.rule(), BidegreeRule::Homological),
        ZeemanSetup::II => matches!(ss.rule(), BidegreeRule::Cohomological),
    };
    if !rule_ok(s) || !rule_ok(t) {
        return Err(violation(format!("setup {setup:?} needs the matching bidegree rule")));
    }
    check_abutment(s, src_ab, setup, "source")?;
    check_abutment(t, tgt_ab, setup, "target")?;

    let degrees: Vec<i64> = src_ab.degrees.keys().chain(tgt_ab.degrees.keys()).copied().collect();
    for n in degrees {
        let (a, b) = (src_ab.group(n), tgt_ab.group(n));
        let h = abutment_maps.get(&n).cloned().unwrap_or_else(|| Hom::zero(&a, &b));
        if h.domain() != &a || h.codomain() != &b {
            return Err(violation(format!("abutment map in degree {n} has the wrong groups")));
        }
        if !h.is_iso() {
            return Err(violation(format!("abutment map in degree {n} is not an isomorphism")));
        }
        if let (Some(fs), Some(ft)) = (src_ab.get(n), tgt_ab.get(n)) {
            let lo = fs.lo().min(ft.lo()) - 1;
            let hi = fs.hi().max(ft.hi()) + 1;
            for p in lo..=hi {
                if !fs.at(p).image_under(&h)?.is_subset(&ft.at(p))? {
                    return Err(violation(format!("abutment map in degree {n} does not respect the filtration at {p}")));
                }
            }
        }
    }

    let r0 = s.r0();
    if !f.component(r0, (0, 0)).is_iso() {
        return Err(violation("f is not an isomorphism at the corner (0, 0)"));
    }
    let iso = |x: Pos| f.component(r0, x).is_iso();
    let on_edge = |x: Pos| match variant {
        ZeemanVariant::RowEdge => x.1 == 0,
        ZeemanVariant::ColumnEdge => x.0 == 0,
    };
    for &x in f.positions().iter().filter(|&&x| on_edge(x)) {
        if edge(x).into_iter().all(iso) && !iso(x) {
            return Err(violation(format!("edge rule fails at {x:?}")));
        }
    }

    let mut pages = Vec::new();
    let mut first_failure = None;
    for r in r0..=f.last_page() {
        let mut ok = true;
        for &x in f.positions() {
            if !f.component(r, x).is_iso() {
                ok = false;
                first_failure.get_or_insert((r, x));
            }
        }
        pages.push((r, ok));
    }
    let f_infinity_iso = f.f_infinity().values().all(Hom::is_iso);
    Ok(ZeemanReport { setup, variant, pages, f_infinity_iso, first_failure })
}
