use std::fmt;

use zlinalg::{induced_map, subquotient, Hom, Subgroup, Subquotient};

use crate::{colim_map, lim_map, limit_and_lim1, Filtrations, TailSpec, ZDiagram, ZMorphism, ZdError};

/// Comparison rules for a morphism `f : A → B` of diagrams.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ZRule {
    /// `ε_p(f)` mono for all `p` and `lim F_•(f)` mono give `f_∞` mono.
    MonoColim,
    /// `ε_p(f)` iso, `lim F_•(f)` epi and `lim¹ F_•(f)` mono give `f_∞` epi
    /// (iso when `lim F_•(f)` is iso).
    EpiColimI,
    /// `ε_p(f)` iso, `A` originally stable and `lim F_•(f)` epi give `f_∞` epi
    /// (iso when `lim F_•(f)` is iso).
    EpiColimII,
    /// `ε^p(f)` mono for all `p` gives `colim F^•(f)` mono.
    MonoColimFp,
    /// `ε^p(f)` iso for all `p` gives `colim F^•(f)` iso.
    IsoColimFp,
    /// `ε^p(f)` mono plus one side condition gives `f_{−∞}` mono.
    MonoLim,
    /// With `ε^p(f)` iso, `f_{−∞}` is iso exactly when `Im R_A → Im R_B` is.
    IsoLimI,
    /// `ε^p(f)` iso plus one side condition gives `f_{−∞}` iso.
    IsoLimII,
    /// `ε^p(f)` epi and `lim¹_r Λ^p_{p−r} = 0` give `colim F^•(f)` epi.
    EpiColimFp,
    /// `ε^p(f)` epi and finite kernels of the structure maps of `A` give
    /// `colim F^•(f)` epi.
    EpiColimFpDcc,
}

impl ZRule {
    pub const ALL: [ZRule; 10] = [
        ZRule::MonoColim,
        ZRule::EpiColimI,
        ZRule::EpiColimII,
        ZRule::MonoColimFp,
        ZRule::IsoColimFp,
        ZRule::MonoLim,
        ZRule::IsoLimI,
        ZRule::IsoLimII,
        ZRule::EpiColimFp,
        ZRule::EpiColimFpDcc,
    ];

    pub fn id(self) -> &'static str {
        match self {
            ZRule::MonoColim => "mono-colim",
            ZRule::EpiColimI => "epi-colim-i",
            ZRule::EpiColimII => "epi-colim-ii",
            ZRule::MonoColimFp => "mono-colim-fp",
            ZRule::IsoColimFp => "iso-colim-fp",
            ZRule::MonoLim => "mono-lim",
            ZRule::IsoLimI => "iso-lim-i",
            ZRule::IsoLimII => "iso-lim-ii",
            ZRule::EpiColimFp => "epi-colim-fp",
            ZRule::EpiColimFpDcc => "epi-colim-fp-dcc",
        }
    }

    pub fn parse(s: &str) -> Option<ZRule> {
        ZRule::ALL.into_iter().find(|r| r.id() == s.to_ascii_lowercase())
    }
}

impl fmt::Display for ZRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// Hypotheses and conclusion hold; `details` names the side conditions used.
    Confirmed { rule: ZRule, details: Vec<String> },
    HypothesisFailed { rule: ZRule, clause: String },
    /// Hypotheses hold but the conclusion does not.
    ConclusionFailed { rule: ZRule, clause: String },
}

impl Verdict {
    pub fn is_confirmed(&self) -> bool {
        matches!(self, Verdict::Confirmed { .. })
    }

    pub fn is_hypothesis_failed(&self) -> bool {
        matches!(self, Verdict::HypothesisFailed { .. })
    }
}

struct Ctx<'a> {
    f: &'a ZMorphism,
    fa: Filtrations,
    fb: Filtrations,
    f_inf: Hom,
    f_minf: Hom,
    lo: i64,
    hi: i64,
}

fn sub_map(s: &Subgroup, t: &Subgroup, f: &Hom) -> Result<Hom, ZdError> {
    let qs = subquotient(s, &Subgroup::zero(s.ambient()))?;
    let qt = subquotient(t, &Subgroup::zero(t.ambient()))?;
    Ok(induced_map(&qs, &qt, f)?)
}

impl<'a> Ctx<'a> {
    fn new(f: &'a ZMorphism) -> Result<Self, ZdError> {
        let fa = Filtrations::new(f.source())?;
        let fb = Filtrations::new(f.target())?;
        let f_inf = colim_map(f, &fa.colimit, &fb.colimit)?;
        let f_minf = lim_map(f, &fa.limit, &fb.limit)?;
        let lo = f.source().lo().min(f.target().lo());
        let hi = f.source().hi().max(f.target().hi());
        Ok(Ctx { f, fa, fb, f_inf, f_minf, lo, hi })
    }

    fn a(&self) -> &ZDiagram {
        self.f.source()
    }

    fn b(&self) -> &ZDiagram {
        self.f.target()
    }

    fn eps_lower(&self, p: i64) -> Result<Hom, ZdError> {
        Ok(induced_map(&self.fa.eps_lower(p), &self.fb.eps_lower(p), &self.f_inf)?)
    }

    fn eps_upper(&self, p: i64) -> Result<Hom, ZdError> {
        Ok(induced_map(&self.fa.eps_upper(p), &self.fb.eps_upper(p), &self.f_minf)?)
    }

    /// First `p` where `ε_p(f)` fails `test`.
    fn eps_lower_fails(&self, test: impl Fn(&Hom) -> bool) -> Result<Option<i64>, ZdError> {
        for p in self.lo - 1..=self.hi {
            if !test(&self.eps_lower(p)?) {
                return Ok(Some(p));
            }
        }
        Ok(None)
    }

    fn eps_upper_fails(&self, test: impl Fn(&Hom) -> bool) -> Result<Option<i64>, ZdError> {
        for p in self.lo - 1..=self.hi {
            if !test(&self.eps_upper(p)?) {
                return Ok(Some(p));
            }
        }
        Ok(None)
    }

    /// `lim F_•(A) → lim F_•(B)`; the image filtration is stationary to the
    /// left of the window, so its limit is the leftmost term.
    fn lim_lower(&self) -> Result<Hom, ZdError> {
        sub_map(&self.fa.lower(self.lo), &self.fb.lower(self.lo), &self.f_inf)
    }

    fn lim1_lower_trivial(&self) -> Result<bool, ZdError> {
        let (d, _) = self.fa.lower_diagram()?;
        Ok(limit_and_lim1(&d)?.lim1().is_trivial())
    }

    /// `colim F^•(A) → colim F^•(B)`; the kernel filtration is stationary to the
    /// right of the window.
    fn colim_upper(&self) -> Result<Hom, ZdError> {
        sub_map(&self.fa.upper(self.hi), &self.fb.upper(self.hi), &self.f_minf)
    }

    fn im_r(&self) -> Result<Hom, ZdError> {
        sub_map(&self.fa.r_map().image(), &self.fb.r_map().image(), &self.f_inf)
    }

    fn lower_mono_somewhere(&self) -> Result<Option<i64>, ZdError> {
        for p in self.lo..=self.hi {
            if sub_map(&self.fa.lower(p), &self.fb.lower(p), &self.f_inf)?.is_mono() {
                return Ok(Some(p));
            }
        }
        Ok(None)
    }

    /// `lim¹` over `r` of `Λ^p_{p−r} = Ker(F^p(A)/F^{p−r}(A) → F^p(B)/F^{p−r}(B))`.
    fn lambda_lim1_trivial(&self, p: i64) -> Result<bool, ZdError> {
        let l = self.lo - 1;
        if p <= l {
            return Ok(true);
        }
        let sa: Vec<Subquotient> = (l..=p)
            .map(|q| subquotient(&self.fa.upper(p), &self.fa.upper(q)))
            .collect::<Result<_, _>>()?;
        let sb: Vec<Subquotient> = (l..=p)
            .map(|q| subquotient(&self.fb.upper(p), &self.fb.upper(q)))
            .collect::<Result<_, _>>()?;
        let id = Hom::identity(self.fa.limit.group());
        let maps = (0..sa.len() - 1)
            .map(|i| induced_map(&sa[i], &sa[i + 1], &id))
            .collect::<Result<Vec<_>, _>>()?;
        let groups: Vec<_> = sa.iter().map(|s| s.group().clone()).collect();
        let left = if groups[0].is_trivial() { TailSpec::Zero } else { TailSpec::Constant };
        let tower = ZDiagram::new(l, groups, maps, left, TailSpec::Zero)?;
        let lambdas = (0..sa.len())
            .map(|i| Ok(induced_map(&sa[i], &sb[i], &self.f_minf)?.kernel()))
            .collect::<Result<Vec<_>, ZdError>>()?;
        let n = lambdas.len() as i64;
        let (lam, _) = tower.sub_diagram(l, p, |q| {
            if q > p {
                Subgroup::zero(&tower.group_at(q))
            } else {
                lambdas[(q - l).clamp(0, n - 1) as usize].clone()
            }
        })?;
        Ok(limit_and_lim1(&lam)?.lim1().is_trivial())
    }

    fn eventually_vanishing(d: &ZDiagram) -> bool {
        d.eventually_vanishing()
    }
}

fn hyp(rule: ZRule, clause: impl Into<String>) -> Verdict {
    Verdict::HypothesisFailed { rule, clause: clause.into() }
}

fn concl(rule: ZRule, ok: bool, clause: &str, details: Vec<String>) -> Verdict {
    if ok {
        Verdict::Confirmed { rule, details }
    } else {
        Verdict::ConclusionFailed { rule, clause: clause.into() }
    }
}

/// Checks the hypotheses of `rule` for `f` and, when they hold, its conclusion.
pub fn zcompare(f: &ZMorphism, rule: ZRule) -> Result<Verdict, ZdError> {
    let c = Ctx::new(f)?;
    let v = match rule {
        ZRule::MonoColim => {
            if let Some(p) = c.eps_lower_fails(Hom::is_mono)? {
                return Ok(hyp(rule, format!("ε_{p}(f) is not mono")));
            }
            if !c.lim_lower()?.is_mono() {
                return Ok(hyp(rule, "lim F_•(f) is not mono"));
            }
            concl(rule, c.f_inf.is_mono(), "f_∞ is not mono", vec![])
        }
        ZRule::EpiColimI | ZRule::EpiColimII => {
            if let Some(p) = c.eps_lower_fails(Hom::is_iso)? {
                return Ok(hyp(rule, format!("ε_{p}(f) is not iso")));
            }
            let lf = c.lim_lower()?;
            if !lf.is_epi() {
                return Ok(hyp(rule, "lim F_•(f) is not epi"));
            }
            if rule == ZRule::EpiColimI && !c.lim1_lower_trivial()? {
                return Ok(hyp(rule, "lim¹ F_•(f) is not known to be mono"));
            }
            if rule == ZRule::EpiColimII && !(c.a().left() == TailSpec::Constant || c.a().originally_vanishing()) {
                return Ok(hyp(rule, "A is not originally stable"));
            }
            if lf.is_iso() {
                concl(rule, c.f_inf.is_iso(), "f_∞ is not iso", vec!["lim F_•(f) iso".into()])
            } else {
                concl(rule, c.f_inf.is_epi(), "f_∞ is not epi", vec![])
            }
        }
        ZRule::MonoColimFp => {
            if let Some(p) = c.eps_upper_fails(Hom::is_mono)? {
                return Ok(hyp(rule, format!("ε^{p}(f) is not mono")));
            }
            concl(rule, c.colim_upper()?.is_mono(), "colim F^•(f) is not mono", vec![])
        }
        ZRule::IsoColimFp => {
            if let Some(p) = c.eps_upper_fails(Hom::is_iso)? {
                return Ok(hyp(rule, format!("ε^{p}(f) is not iso")));
            }
            concl(rule, c.colim_upper()?.is_iso(), "colim F^•(f) is not iso", vec![])
        }
        ZRule::MonoLim => {
            if let Some(p) = c.eps_upper_fails(Hom::is_mono)? {
                return Ok(hyp(rule, format!("ε^{p}(f) is not mono")));
            }
            let mut details = Vec::new();
            if c.im_r()?.is_mono() {
                details.push("Im R_A → Im R_B mono".to_string());
            }
            if let Some(p) = c.lower_mono_somewhere()? {
                details.push(format!("F_{p}(f) mono"));
            }
            if c.fa.lower(c.lo).is_zero() {
                details.push("lim F_•(A) = 0".into());
            }
            if c.fa.colimit.group().is_trivial() {
                details.push("A_∞ = 0".into());
            }
            if Ctx::eventually_vanishing(c.a()) {
                details.push("A eventually vanishing".into());
            }
            if details.is_empty() {
                return Ok(hyp(rule, "no side condition holds"));
            }
            concl(rule, c.f_minf.is_mono(), "f_{-∞} is not mono", details)
        }
        ZRule::IsoLimI => {
            if let Some(p) = c.eps_upper_fails(Hom::is_iso)? {
                return Ok(hyp(rule, format!("ε^{p}(f) is not iso")));
            }
            let r = c.im_r()?.is_iso();
            let detail = if r { "Im R map iso" } else { "Im R map not iso" };
            concl(rule, c.f_minf.is_iso() == r, "f_{-∞} iso does not match the Im R map", vec![detail.into()])
        }
        ZRule::IsoLimII => {
            if let Some(p) = c.eps_upper_fails(Hom::is_iso)? {
                return Ok(hyp(rule, format!("ε^{p}(f) is not iso")));
            }
            let mut details = Vec::new();
            if c.fa.r_map().is_zero() && c.fb.r_map().is_zero() {
                details.push("R_A = R_B = 0".to_string());
            }
            if c.fa.lower(c.lo).is_zero() && c.fb.lower(c.lo).is_zero() {
                details.push("lim F_•(A) = 0 = lim F_•(B)".into());
            }
            if c.fa.colimit.group().is_trivial() && c.fb.colimit.group().is_trivial() {
                details.push("A_∞ = 0 = B_∞".into());
            }
            if Ctx::eventually_vanishing(c.a()) && Ctx::eventually_vanishing(c.b()) {
                details.push("A and B eventually vanishing".into());
            }
            if details.is_empty() {
                return Ok(hyp(rule, "no side condition holds"));
            }
            concl(rule, c.f_minf.is_iso(), "f_{-∞} is not iso", details)
        }
        ZRule::EpiColimFp => {
            if let Some(p) = c.eps_upper_fails(Hom::is_epi)? {
                return Ok(hyp(rule, format!("ε^{p}(f) is not epi")));
            }
            for p in c.lo..=c.hi + 1 {
                if !c.lambda_lim1_trivial(p)? {
                    return Ok(hyp(rule, format!("lim¹ Λ^{p} is not zero")));
                }
            }
            concl(rule, c.colim_upper()?.is_epi(), "colim F^•(f) is not epi", vec![])
        }
        ZRule::EpiColimFpDcc => {
            if let Some(p) = c.eps_upper_fails(Hom::is_epi)? {
                return Ok(hyp(rule, format!("ε^{p}(f) is not epi")));
            }
            for p in c.lo..=c.hi {
                if !c.a().map_at(p).kernel().as_group().is_finite() {
                    return Ok(hyp(rule, format!("Ker a_{p} is infinite")));
                }
            }
            concl(rule, c.colim_upper()?.is_epi(), "colim F^•(f) is not epi", vec![])
        }
    };
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use zlinalg::FPAbGroup;

    fn times(k: i64) -> Hom {
        let z = FPAbGroup::z();
        Hom::from_i64(&z, &z, &[vec![k]]).unwrap()
    }

    #[test]
    fn identity_confirms_everything() {
        let z = FPAbGroup::z();
        let a = ZDiagram::new(0, vec![z.clone(), z.clone()], vec![times(2)], TailSpec::Constant, TailSpec::Constant).unwrap();
        let id = ZMorphism::identity(&a);
        for rule in ZRule::ALL {
            let v = zcompare(&id, rule).unwrap();
            let expect_hyp_failure = rule == ZRule::IsoLimII;
            assert_eq!(v.is_hypothesis_failed(), expect_hyp_failure, "{rule}: {v:?}");
            if !expect_hyp_failure {
                assert!(v.is_confirmed(), "{rule}: {v:?}");
            }
        }
    }

    #[test]
    fn times_two_on_constant_z() {
        // f = ×2 on the constant diagram ℤ: ε_p are 0 → 0 except at the far left
        let z = FPAbGroup::z();
        let a = ZDiagram::constant(&z, 0);
        let f = ZMorphism::new(&a, &a, 0, vec![times(2)]).unwrap();
        assert!(zcompare(&f, ZRule::MonoColim).unwrap().is_confirmed());
        assert!(zcompare(&f, ZRule::EpiColimI).unwrap().is_hypothesis_failed());
        assert!(zcompare(&f, ZRule::IsoLimII).unwrap().is_hypothesis_failed());
        assert_eq!(ZRule::parse("iso-lim-ii"), Some(ZRule::IsoLimII));
    }
}
