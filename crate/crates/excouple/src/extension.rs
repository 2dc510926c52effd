use std::fmt;

use spectral::{add, sub, Pos};
use zdiagrams::{default_budget, i_omega_at, image_at, kernel_diagram, limit_and_lim1, q_omega_kernel_at, Filtrations, TailSpec, ZDiagram};
use zlinalg::{induced_map, is_short_exact, subquotient, Elem, FPAbGroup, Hom, LinalgError, Subgroup, Subquotient};

use crate::pages::{boundaries, cycles, stable_e};
use crate::{internal, ExactCouple, ExcoupleError};

/// The map between subquotients given on representatives by `f`.
pub(crate) fn map_on(
    dom: &Subquotient,
    cod: &Subquotient,
    what: &str,
    f: impl Fn(&Elem) -> Result<Elem, ExcoupleError>,
) -> Result<Hom, ExcoupleError> {
    let imgs = dom
        .section()
        .iter()
        .map(|s| cod.project(&f(s)?).map_err(|_| internal(format!("{what} leaves its target"))))
        .collect::<Result<Vec<_>, _>>()?;
    Hom::from_images(dom.group(), cod.group(), &imgs).map_err(|e| match e {
        LinalgError::NotWellDefined { .. } => internal(format!("{what} is not well defined")),
        other => other.into(),
    })
}

fn solve(h: &Hom, v: &[zlinalg::BigInt], what: &str) -> Result<Elem, ExcoupleError> {
    h.solve(v).map_err(|e| match e {
        LinalgError::Absent => internal(format!("{what}: no preimage")),
        other => other.into(),
    })
}

fn sub_as_quotient(s: &Subgroup) -> Subquotient {
    subquotient(s, &Subgroup::zero(s.ambient())).expect("0 ⊆ S")
}

fn same_hom(f: &Hom, g: &Hom) -> Result<bool, ExcoupleError> {
    Ok(f.add(&g.neg())?.is_zero())
}

/// The two extensions at an `E`-position `y = x + b`:
///
/// * `0 → ε_x → Ē_y → ε^w → 0` with `w = y + c`,
/// * `0 → ε_x → E∞_y → Z∞_y/Im j_x → 0`,
///
/// glued along `ι : Ē → E∞` and `M : ε^w → Z∞/Im j`.
#[derive(Clone, Debug)]
pub struct ExtensionReport {
    pub x: Pos,
    pub y: Pos,
    pub w: Pos,
    pub eps_lower: FPAbGroup,
    pub stable: FPAbGroup,
    pub eps_upper: FPAbGroup,
    pub e_infinity: FPAbGroup,
    pub z_mod_j: FPAbGroup,
    pub lambda: Hom,
    pub mu: Hom,
    pub iota: Hom,
    pub kappa: Hom,
    pub m: Hom,
    pub stable_exact: bool,
    pub infinity_exact: bool,
    pub square_commutes: bool,
    /// `Im ι = κ⁻¹(Im M)`.
    pub pullback: bool,
    pub stable_is_infinity: bool,
    pub m_iso: bool,
    /// `Ī_w ∩ Ker i_w = I^ω_w ∩ Ker i_w`.
    pub crit_iii: bool,
    pub lim1_diagonal: FPAbGroup,
    pub lim1_kernel: FPAbGroup,
    pub lim1_tower: FPAbGroup,
    /// `Ē = E∞`, `M` iso and the intersection criterion agree.
    pub consistent: bool,
}

impl ExtensionReport {
    pub fn lim1_zero(&self) -> bool {
        self.lim1_diagonal.is_trivial() && self.lim1_kernel.is_trivial() && self.lim1_tower.is_trivial()
    }

    pub fn holds(&self) -> bool {
        self.stable_exact && self.infinity_exact && self.square_commutes && self.pullback && self.consistent
    }
}

/// The tower `… ⊆ Z^2/Im j ⊆ Z^1/Im j ⊆ Z^0/Im j` as a diagram with `Z^τ/Im j`
/// at `−τ`, constant on both sides.
fn cycle_tower(c: &ExactCouple, y: Pos, imj: &Subgroup, depth: i64) -> Result<ZDiagram, ExcoupleError> {
    let quots = (0..=depth)
        .rev()
        .map(|t| Ok(subquotient(&cycles(c, y, t)?, imj)?))
        .collect::<Result<Vec<_>, ExcoupleError>>()?;
    let id = Hom::identity(&c.e_group(y));
    let maps = quots.windows(2).map(|w| induced_map(&w[0], &w[1], &id)).collect::<Result<Vec<_>, _>>()?;
    let groups = quots.iter().map(|q| q.group().clone()).collect();
    Ok(ZDiagram::new(-depth, groups, maps, TailSpec::Constant, TailSpec::Constant)?)
}

/// Extension data at the `D`-position `x`.
pub fn extension_report(c: &ExactCouple, x: Pos, budget: Option<usize>) -> Result<ExtensionReport, ExcoupleError> {
    let bd = *c.bidegrees();
    let y = add(x, bd.b);
    let w = add(y, bd.c);
    let (dx, rx) = c.locate(x);
    let (dw, rw) = c.locate(w);
    let budget_w = budget.unwrap_or_else(|| default_budget(dw));
    let fl = Filtrations::new(dx)?;
    let fu = Filtrations::new(dw)?;
    let eps_l = fl.eps_lower(rx);
    let eps_u = fu.eps_upper(rw);
    let se = stable_e(c, y, budget)?;
    let inf = &se.e_infinity;
    let (jx, ky) = (c.j_map(x), c.k_map(y));

    let pi = fl.colimit.pi(rx);
    let lambda = map_on(&eps_l, &se.quotient, "λ", |s| Ok(jx.apply(&solve(&pi, s, "λ")?)))?;
    let rho = fu.limit.rho(rw);
    let mu = map_on(&se.quotient, &eps_u, "μ", |e| solve(&rho, &ky.apply(e), "μ"))?;
    let imj = jx.image();
    let zj = subquotient(&inf.cycles, &imj).map_err(|_| internal(format!("Im j ⊄ Z∞ at {y:?}")))?;
    let kappa = induced_map(&inf.quotient, &zj, &Hom::identity(&c.e_group(y)))?;
    let m = map_on(&eps_u, &zj, "M", |l| solve(&ky, &rho.apply(l), "M"))?;
    let iota = se.inclusion.clone();

    let stable_exact = is_short_exact(&lambda, &mu)?;
    let infinity_exact = is_short_exact(&iota.compose(&lambda)?, &kappa)?;
    let square_commutes = same_hom(&kappa.compose(&iota)?, &m.compose(&mu)?)?;
    let pullback = iota.image() == kappa.preimage(&m.image())?;

    let ker_w = c.i_map(w).kernel();
    let bar = rho.image();
    let (iw, _) = i_omega_at(dw, rw, budget_w)?;
    let crit_iii = bar.intersect(&ker_w)? == iw.intersect(&ker_w)?;
    let stable_is_infinity = iota.is_iso();
    let m_iso = m.is_iso();

    let lim1_diagonal = fu.limit.lim1().clone();
    let kd = kernel_diagram(dw, rw, budget_w)?;
    let lim1_kernel = limit_and_lim1(&kd.kernel)?.lim1().clone();
    let tower = cycle_tower(c, y, &imj, inf.i_stage as i64 + 1)?;
    let lim1_tower = limit_and_lim1(&tower)?.lim1().clone();

    Ok(ExtensionReport {
        x,
        y,
        w,
        eps_lower: eps_l.group().clone(),
        stable: se.group.clone(),
        eps_upper: eps_u.group().clone(),
        e_infinity: inf.quotient.group().clone(),
        z_mod_j: zj.group().clone(),
        lambda,
        mu,
        iota,
        kappa,
        m,
        stable_exact,
        infinity_exact,
        square_commutes,
        pullback,
        stable_is_infinity,
        m_iso,
        crit_iii,
        lim1_diagonal,
        lim1_kernel,
        lim1_tower,
        consistent: stable_is_infinity == m_iso && m_iso == crit_iii,
    })
}

/// How `E∞` sits relative to the two abutments.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Label {
    /// `E∞` is the associated graded of the colimit filtration.
    MatchesColimit,
    /// `E∞` is the associated graded of the limit filtration.
    MatchesLimit,
    /// `Ē = E∞` is a proper extension of both graded pieces.
    StableProperExtension,
    /// `Ē ≠ E∞` somewhere.
    Unstable,
}

impl Label {
    pub fn id(self) -> &'static str {
        match self {
            Label::MatchesColimit => "matches-colimit",
            Label::MatchesLimit => "matches-limit",
            Label::StableProperExtension => "stable-proper-extension",
            Label::Unstable => "unstable",
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::MatchesColimit => "MatchesColimit",
            Label::MatchesLimit => "MatchesLimit",
            Label::StableProperExtension => "StableProperExtension",
            Label::Unstable => "Unstable",
        })
    }
}

/// Classification at one `D`-position with the sufficient conditions that hold.
#[derive(Clone, Debug)]
pub struct PositionClass {
    pub x: Pos,
    pub y: Pos,
    pub label: Label,
    pub eps_lower_zero: bool,
    pub eps_upper_zero: bool,
    /// Conditions on `D(n+σ)` forcing `ε^w = 0`.
    pub colimit_conditions: Vec<&'static str>,
    /// Conditions on `D(n)` forcing `ε_x = 0`.
    pub limit_conditions: Vec<&'static str>,
}

#[derive(Clone, Debug)]
pub struct Classification {
    pub label: Label,
    pub positions: Vec<PositionClass>,
}

fn colimit_conditions(d: &ZDiagram, rw: i64, budget: usize) -> Result<Vec<&'static str>, ExcoupleError> {
    let mut out = Vec::new();
    if (d.lo()..d.hi()).all(|p| d.map_at(p).is_mono()) {
        out.push("i-mono");
    }
    if i_omega_at(d, rw, budget)?.0.is_zero() {
        out.push("i-omega-zero");
    }
    if d.originally_vanishing() {
        out.push("originally-vanishing");
    }
    let mono_on_image = (0..=budget).any(|r| {
        (d.lo()..=d.hi()).all(|p| {
            d.map_at(p).kernel().intersect(&image_at(d, p, r)).map(|s| s.is_zero()).unwrap_or(false)
        })
    });
    if mono_on_image {
        out.push("mono-on-image");
    }
    Ok(out)
}

fn limit_conditions(d: &ZDiagram, rx: i64, budget: usize) -> Result<Vec<&'static str>, ExcoupleError> {
    let mut out = Vec::new();
    if d.map_at(rx - 1).is_epi() {
        out.push("i-epi");
    }
    if Filtrations::new(d)?.colimit.group().is_trivial() {
        out.push("colimit-zero");
    }
    if d.eventually_vanishing() {
        out.push("eventually-vanishing");
    }
    let (kq, _) = q_omega_kernel_at(d, rx, budget)?;
    if d.map_at(rx - 1).image().sum(&kq)?.is_whole() {
        out.push("image-and-kernel-generate");
    }
    Ok(out)
}

pub fn classify_at(c: &ExactCouple, x: Pos, budget: Option<usize>) -> Result<PositionClass, ExcoupleError> {
    let rep = extension_report(c, x, budget)?;
    let (dx, rx) = c.locate(x);
    let (dw, rw) = c.locate(rep.w);
    let eps_lower_zero = rep.eps_lower.is_trivial();
    let eps_upper_zero = rep.eps_upper.is_trivial();
    let label = if !rep.stable_is_infinity {
        Label::Unstable
    } else if eps_upper_zero {
        Label::MatchesColimit
    } else if eps_lower_zero {
        Label::MatchesLimit
    } else {
        Label::StableProperExtension
    };
    Ok(PositionClass {
        x,
        y: rep.y,
        label,
        eps_lower_zero,
        eps_upper_zero,
        colimit_conditions: colimit_conditions(dw, rw, budget.unwrap_or_else(|| default_budget(dw)))?,
        limit_conditions: limit_conditions(dx, rx, budget.unwrap_or_else(|| default_budget(dx)))?,
    })
}

/// Classification over every non-zero `E`-position. When both graded pieces
/// vanish everywhere the colimit label is reported.
pub fn classify(c: &ExactCouple, budget: Option<usize>) -> Result<Classification, ExcoupleError> {
    let b = c.bidegrees().b;
    let positions = c
        .e()
        .support()
        .map(|y| classify_at(c, sub(y, b), budget))
        .collect::<Result<Vec<_>, _>>()?;
    let label = if positions.iter().any(|p| p.label == Label::Unstable) {
        Label::Unstable
    } else if positions.iter().all(|p| p.eps_upper_zero) {
        Label::MatchesColimit
    } else if positions.iter().all(|p| p.eps_lower_zero) {
        Label::MatchesLimit
    } else {
        Label::StableProperExtension
    };
    Ok(Classification { label, positions })
}

/// `0 → Im i^r_x / Im i^{r+1}_{x−a} → E^{r+1}_{x+b} → I^r_w ∩ Ker i_w → 0`.
#[derive(Clone, Debug)]
pub struct ErReport {
    pub x: Pos,
    pub r: i64,
    pub left: FPAbGroup,
    pub middle: FPAbGroup,
    pub right: FPAbGroup,
    pub alpha: Hom,
    pub beta: Hom,
    pub exact: bool,
    /// `i^r` induces `Ker i^{r+1}/Ker i^r ≅ I^r_w ∩ Ker i_w`.
    pub right_iso: bool,
}

pub fn er_extension_check(c: &ExactCouple, x: Pos, r: i64) -> Result<ErReport, ExcoupleError> {
    if r < 0 {
        return Err(ExcoupleError::InvalidInput(format!("r = {r} is negative")));
    }
    let bd = *c.bidegrees();
    let y = add(x, bd.b);
    let w = add(y, bd.c);
    let ir = c.i_pow(x, r);
    let left = subquotient(&ir.image(), &c.i_pow(sub(x, bd.a), r + 1).image())?;
    let middle = subquotient(&cycles(c, y, r)?, &boundaries(c, y, r)?)?;
    let jx = c.j_map(x);
    let alpha = map_on(&left, &middle, "α", |s| Ok(jx.apply(&solve(&ir, s, "α")?)))?;
    let (dw, rw) = c.locate(w);
    let right_sub = image_at(dw, rw, r as usize).intersect(&c.i_map(w).kernel())?;
    let right = sub_as_quotient(&right_sub);
    let ky = c.k_map(y);
    let beta = map_on(&middle, &right, "β", |e| Ok(ky.apply(e)))?;
    let exact = is_short_exact(&alpha, &beta)?;
    let u = (w.0 - r * bd.a.0, w.1 - r * bd.a.1);
    let kq = subquotient(&c.i_pow(u, r + 1).kernel(), &c.i_pow(u, r).kernel())?;
    let right_iso = induced_map(&kq, &right, &c.i_pow(u, r))?.is_iso();
    Ok(ErReport {
        x,
        r,
        left: left.group().clone(),
        middle: middle.group().clone(),
        right: right.group().clone(),
        alpha,
        beta,
        exact,
        right_iso,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::demos;

    #[test]
    fn demo_classifications() {
        let expect = [Label::MatchesColimit, Label::StableProperExtension, Label::MatchesLimit];
        for (c, l) in [demos::couple1(), demos::couple2(), demos::couple3()].iter().zip(expect) {
            let cl = classify(c, None).unwrap();
            assert_eq!(cl.label, l);
            let rep = extension_report(c, (0, 0), None).unwrap();
            assert!(rep.holds() && rep.crit_iii && rep.lim1_zero(), "{rep:?}");
            assert!(rep.e_infinity.isomorphic(&FPAbGroup::z_mod(6)));
        }
        let rep = extension_report(&demos::couple2(), (0, 0), None).unwrap();
        assert!(rep.eps_lower.isomorphic(&FPAbGroup::z_mod(2)));
        assert!(rep.eps_upper.isomorphic(&FPAbGroup::z_mod(3)));
        let c1 = classify(&demos::couple1(), None).unwrap();
        assert!(c1.positions[0].colimit_conditions.contains(&"i-omega-zero"));
        let c3 = classify(&demos::couple3(), None).unwrap();
        assert!(c3.positions[0].limit_conditions.contains(&"colimit-zero"));
    }

    #[test]
    fn er_sequence_on_couple2() {
        for r in 0..4 {
            let er = er_extension_check(&demos::couple2(), (0, 0), r).unwrap();
            assert!(er.exact && er.right_iso);
            assert!(er.left.isomorphic(&FPAbGroup::z_mod(2)));
            assert!(er.middle.isomorphic(&FPAbGroup::z_mod(6)));
            assert!(er.right.isomorphic(&FPAbGroup::z_mod(3)));
        }
    }
}
