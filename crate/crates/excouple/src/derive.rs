use std::collections::BTreeMap;

use spectral::{add, sub, BigradedGroup, Pos};
use zdiagrams::{colim_map, image_sub_diagram, lim_map, Filtrations, ZDiagram, ZMorphism};
use zlinalg::{subquotient, Hom, LinalgError, Subquotient};

use crate::extension::map_on;
use crate::{internal, Bidegrees, ExactCouple, ExcoupleError};

/// Where the derived `D' = Im i` is placed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    /// `D'_x = Im(i : D_x → D_{x+a})`, bidegrees `(a, b, c − a)`.
    Q,
    /// `D'_x = Im(i : D_{x−a} → D_x)`, bidegrees `(a, b − a, c)`.
    I,
}

impl Variant {
    pub fn parse(s: &str) -> Option<Variant> {
        match s {
            "Q" | "q" => Some(Variant::Q),
            "I" | "i" => Some(Variant::I),
            _ => None,
        }
    }

    pub fn bidegrees(self, bd: &Bidegrees) -> Bidegrees {
        match self {
            Variant::Q => Bidegrees::new(bd.a, bd.b, sub(bd.c, bd.a)),
            Variant::I => Bidegrees::new(bd.a, sub(bd.b, bd.a), bd.c),
        }
    }

    /// Where `D'_x` lives inside `D`.
    fn ambient(self, bd: &Bidegrees, x: Pos) -> Pos {
        match self {
            Variant::Q => add(x, bd.a),
            Variant::I => x,
        }
    }
}

/// One derived diagonal: the image subdiagram in the new indexing, its
/// inclusion into the old diagonal, and the index shift between them.
struct DerivedDiagonal {
    diagram: ZDiagram,
    incl: ZMorphism,
    shift: i64,
}

fn derived_diagonal(d: &ZDiagram, variant: Variant, bd: &Bidegrees, n: i64) -> Result<DerivedDiagonal, ExcoupleError> {
    let (img, incl) = image_sub_diagram(d, 1)?;
    // x(n) moves by σ·n·a when z becomes z − a
    let shift = bd.sigma() * n - if variant == Variant::Q { 1 } else { 0 };
    Ok(DerivedDiagonal { diagram: img.shift(shift), incl, shift })
}

struct Derived {
    couple: ExactCouple,
    diagonals: BTreeMap<i64, DerivedDiagonal>,
}

fn derive_full(c: &ExactCouple, variant: Variant) -> Result<Derived, ExcoupleError> {
    let bd = *c.bidegrees();
    let nb = variant.bidegrees(&bd);
    let mut dd = BTreeMap::new();
    for (&n, d) in c.diagonals() {
        dd.insert(n, derived_diagonal(d, variant, &bd, n)?);
    }
    // D'_x inside D at its ambient position, on the chosen generators
    let emb = |x: Pos| -> Hom {
        let amb = variant.ambient(&bd, x);
        match dd.get(&bd.n_of(amb)) {
            Some(e) => e.incl.component(bd.r_of(amb)),
            None => Hom::zero(&zlinalg::FPAbGroup::zero(), &c.d_group(amb)),
        }
    };
    let d_at = |x: Pos| -> zlinalg::FPAbGroup {
        match dd.get(&nb.n_of(x)) {
            Some(e) => e.diagram.group_at(nb.r_of(x)),
            None => zlinalg::FPAbGroup::zero(),
        }
    };

    let mut homology: BTreeMap<Pos, Subquotient> = BTreeMap::new();
    let mut groups = BTreeMap::new();
    let z = bd.z();
    for y in c.e().support() {
        let q = subquotient(&c.d1(y).kernel(), &c.d1(sub(y, z)).image())?;
        groups.insert(y, q.group().clone());
        homology.insert(y, q);
    }
    let e = BigradedGroup::new(*c.support(), groups)?;

    let mut j = BTreeMap::new();
    let mut k = BTreeMap::new();
    for (&y, q) in &homology {
        if q.group().is_trivial() {
            continue;
        }
        let x = sub(y, nb.b);
        let dx = d_at(x);
        if !dx.is_trivial() {
            let ex = emb(x);
            let s = sub(variant.ambient(&bd, x), bd.a);
            let (is, js) = (c.i_map(s), c.j_map(s));
            let dom = subquotient(&zlinalg::Subgroup::whole(&dx), &zlinalg::Subgroup::zero(&dx))?;
            let h = map_on(&dom, q, "j'", |u| {
                let pre = is.solve(&ex.apply(u)).map_err(|e| match e {
                    LinalgError::Absent => internal(format!("D'_{x:?} is not in Im i")),
                    other => other.into(),
                })?;
                Ok(js.apply(&pre))
            })?;
            j.insert(x, h);
        }
        let t = add(y, nb.c);
        let dt = d_at(t);
        if !dt.is_trivial() {
            let et = emb(t);
            let ky = c.k_map(y);
            let imgs = q
                .section()
                .iter()
                .map(|e| {
                    et.solve(&ky.apply(e)).map_err(|err| match err {
                        LinalgError::Absent => internal(format!("k({y:?}) leaves Im i")),
                        other => other.into(),
                    })
                })
                .collect::<Result<Vec<_>, ExcoupleError>>()?;
            k.insert(y, Hom::from_images(q.group(), &dt, &imgs)?);
        }
    }
    let diagonals = dd.iter().map(|(&n, e)| (n, e.diagram.clone())).collect();
    let couple = ExactCouple::from_parts(nb, e, diagonals, j, k)?;
    Ok(Derived { couple, diagonals: dd })
}

/// The derived couple `D' = Im i`, `E' = H(E, jk)`.
pub fn derive(c: &ExactCouple, variant: Variant) -> Result<ExactCouple, ExcoupleError> {
    Ok(derive_full(c, variant)?.couple)
}

/// Per-diagonal comparison of the derived abutments with the original ones.
#[derive(Clone, Debug)]
pub struct DiagonalCheck {
    pub n: i64,
    pub colim_iso: bool,
    pub lim_iso: bool,
    /// The derived colimit filtration is the original one moved by one step.
    pub lower_shifted: bool,
    /// The derived limit filtration is the original one.
    pub upper_same: bool,
}

#[derive(Clone, Debug)]
pub struct DerivationReport {
    pub variant: Variant,
    pub derived: ExactCouple,
    pub valid: bool,
    pub diagonals: Vec<DiagonalCheck>,
}

impl DerivationReport {
    pub fn holds(&self) -> bool {
        self.valid && self.diagonals.iter().all(|d| d.colim_iso && d.lim_iso && d.lower_shifted && d.upper_same)
    }
}

pub fn derivation_abutment_check(c: &ExactCouple, variant: Variant) -> Result<DerivationReport, ExcoupleError> {
    let der = derive_full(c, variant)?;
    let valid = der.couple.validate().is_ok();
    let mut out = Vec::new();
    for (&n, dd) in &der.diagonals {
        let tgt = c.diagonal(n).shift(dd.shift);
        let (lo, hi) = (dd.incl.lo(), dd.incl.hi());
        let comps = (lo..=hi).map(|p| dd.incl.component(p)).collect();
        let f = ZMorphism::new(&dd.diagram, &tgt, lo + dd.shift, comps)?;
        let (fs, ft) = (Filtrations::new(&dd.diagram)?, Filtrations::new(&tgt)?);
        let cm = colim_map(&f, &fs.colimit, &ft.colimit)?;
        let lm = lim_map(&f, &fs.limit, &ft.limit)?;
        let range = dd.diagram.lo().min(tgt.lo()) - 1..=dd.diagram.hi().max(tgt.hi()) + 1;
        let mut lower_shifted = true;
        let mut upper_same = true;
        for r in range {
            lower_shifted &= fs.lower(r).image_under(&cm)? == ft.lower(r - 1);
            upper_same &= fs.upper(r).image_under(&lm)? == ft.upper(r);
        }
        out.push(DiagonalCheck { n, colim_iso: cm.is_iso(), lim_iso: lm.is_iso(), lower_shifted, upper_same });
    }
    Ok(DerivationReport { variant, derived: der.couple, valid, diagonals: out })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{demos, internal_page};

    #[test]
    fn derived_demo_couples() {
        for c in [demos::couple1(), demos::couple2(), demos::couple3()] {
            for v in [Variant::Q, Variant::I] {
                let rep = derivation_abutment_check(&c, v).unwrap();
                assert!(rep.holds(), "{v:?}: {:?}", rep.diagonals);
                let p2 = internal_page(&c, 2).unwrap();
                assert!(rep.derived.e().isomorphic(&p2.groups));
                assert_eq!(rep.derived.bidegrees().sigma(), c.bidegrees().sigma());
            }
        }
    }
}
