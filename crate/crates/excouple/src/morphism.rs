use std::collections::{BTreeMap, BTreeSet};

use spectral::{add, Pos, SSMorphism};
use zdiagrams::{zcompare, Verdict, ZMorphism, ZRule, ZdError};
use zlinalg::{FPAbGroup, Hom, IntMatrix};

use crate::pages::to_spectral_sequence;
use crate::{ExactCouple, ExcoupleError};

/// A morphism of exact couples: a natural map of every diagonal and a map of
/// `E` commuting with `j` and `k`.
#[derive(Clone, Debug)]
pub struct CoupleMorphism {
    source: ExactCouple,
    target: ExactCouple,
    d: BTreeMap<i64, ZMorphism>,
    e: BTreeMap<Pos, Hom>,
}

impl CoupleMorphism {
    /// Components on `D` and `E` by position; missing ones are zero, and each
    /// diagonal extends along its tails.
    pub fn new(
        source: &ExactCouple,
        target: &ExactCouple,
        d: BTreeMap<Pos, Hom>,
        e: BTreeMap<Pos, Hom>,
    ) -> Result<Self, ExcoupleError> {
        if source.bidegrees() != target.bidegrees() {
            return Err(ExcoupleError::BidegreeMismatch);
        }
        let bd = *source.bidegrees();
        let ns: BTreeSet<i64> = source
            .diagonals()
            .keys()
            .chain(target.diagonals().keys())
            .copied()
            .chain(d.keys().map(|&x| bd.n_of(x)))
            .collect();
        let mut diag = BTreeMap::new();
        for n in ns {
            let (sd, td) = (source.diagonal(n), target.diagonal(n));
            let given: Vec<i64> = d.keys().filter(|&&x| bd.n_of(x) == n).map(|&x| bd.r_of(x)).collect();
            let lo = given.iter().copied().chain([sd.lo(), td.lo()]).min().unwrap();
            let hi = given.iter().copied().chain([sd.hi(), td.hi()]).max().unwrap();
            let comps = (lo..=hi)
                .map(|r| {
                    let x = bd.pos(n, r);
                    let (a, b) = (sd.group_at(r), td.group_at(r));
                    match d.get(&x) {
                        Some(h) if h.domain() == &a && h.codomain() == &b => Ok(h.clone()),
                        Some(_) => Err(ExcoupleError::InvalidInput(format!("D component at {x:?} should map {a} to {b}"))),
                        None => Ok(Hom::zero(&a, &b)),
                    }
                })
                .collect::<Result<Vec<_>, _>>()?;
            let m = ZMorphism::new(sd, td, lo, comps).map_err(|err| match err {
                ZdError::NotNatural { position } => ExcoupleError::NotAMorphism { position: bd.pos(n, position) },
                other => other.into(),
            })?;
            diag.insert(n, m);
        }
        let mut ee = BTreeMap::new();
        for (y, h) in e {
            let (a, b) = (source.e_group(y), target.e_group(y));
            if h.domain() != &a || h.codomain() != &b {
                return Err(ExcoupleError::InvalidInput(format!("E component at {y:?} should map {a} to {b}")));
            }
            ee.insert(y, h);
        }
        let f = CoupleMorphism { source: source.clone(), target: target.clone(), d: diag, e: ee };
        let region = source.region().union(&target.region());
        for x in region.positions() {
            let y = add(x, bd.b);
            let lhs = f.e_component(y).compose(&source.j_map(x))?;
            let rhs = target.j_map(x).compose(&f.d_component(x))?;
            if lhs != rhs {
                return Err(ExcoupleError::NotAMorphism { position: x });
            }
            let w = add(x, bd.c);
            let lhs = f.d_component(w).compose(&source.k_map(x))?;
            let rhs = target.k_map(x).compose(&f.e_component(x))?;
            if lhs != rhs {
                return Err(ExcoupleError::NotAMorphism { position: x });
            }
        }
        Ok(f)
    }

    pub fn identity(c: &ExactCouple) -> Result<Self, ExcoupleError> {
        let d = c.region().positions().map(|x| (x, Hom::identity(&c.d_group(x)))).collect();
        let e = c.e().iter().map(|(y, g)| (y, Hom::identity(g))).collect();
        CoupleMorphism::new(c, c, d, e)
    }

    /// The inclusion of the first summand `c → c ⊕ other`.
    pub fn first_summand(c: &ExactCouple, other: &ExactCouple) -> Result<Self, ExcoupleError> {
        let sum = c.direct_sum(other)?;
        let inject = |a: &FPAbGroup, b: &FPAbGroup| -> Result<Hom, ExcoupleError> {
            let s = a.direct_sum(b);
            let mut m = IntMatrix::zeros(s.ngens(), a.ngens());
            for i in 0..a.ngens() {
                m.set(i, i, 1.into());
            }
            Ok(Hom::new(a.clone(), s, m)?)
        };
        let region = c.region().union(&other.region());
        let d = region
            .positions()
            .map(|x| Ok((x, inject(&c.d_group(x), &other.d_group(x))?)))
            .collect::<Result<_, ExcoupleError>>()?;
        let e = sum
            .e()
            .bounds()
            .positions()
            .map(|y| Ok((y, inject(&c.e_group(y), &other.e_group(y))?)))
            .collect::<Result<_, ExcoupleError>>()?;
        CoupleMorphism::new(c, &sum, d, e)
    }

    pub fn source(&self) -> &ExactCouple {
        &self.source
    }

    pub fn target(&self) -> &ExactCouple {
        &self.target
    }

    /// The morphism of the diagonal `D(n)`.
    pub fn diagonal(&self, n: i64) -> Result<ZMorphism, ExcoupleError> {
        match self.d.get(&n) {
            Some(m) => Ok(m.clone()),
            None => {
                let (s, t) = (self.source.diagonal(n), self.target.diagonal(n));
                Ok(ZMorphism::new(s, t, s.lo(), vec![Hom::zero(&s.group_at(s.lo()), &t.group_at(s.lo()))])?)
            }
        }
    }

    pub fn d_component(&self, x: Pos) -> Hom {
        let bd = self.source.bidegrees();
        match self.d.get(&bd.n_of(x)) {
            Some(m) => m.component(bd.r_of(x)),
            None => Hom::zero(&self.source.d_group(x), &self.target.d_group(x)),
        }
    }

    pub fn e_component(&self, y: Pos) -> Hom {
        self.e
            .get(&y)
            .cloned()
            .unwrap_or_else(|| Hom::zero(&self.source.e_group(y), &self.target.e_group(y)))
    }

    /// The induced morphism of spectral sequences.
    pub fn spectral(&self) -> Result<SSMorphism, ExcoupleError> {
        let s = to_spectral_sequence(&self.source)?;
        let t = to_spectral_sequence(&self.target)?;
        let f0 = self.e.iter().map(|(&y, h)| (y, h.clone())).collect();
        Ok(SSMorphism::new(&s, &t, f0)?)
    }
}

/// Runs a comparison rule on the map of diagonals `D(n)`.
pub fn compare_abutments(f: &CoupleMorphism, n: i64, rule: ZRule) -> Result<Verdict, ExcoupleError> {
    Ok(zcompare(&f.diagonal(n)?, rule)?)
}
