//! Seeded generators of small bounded spectral sequences and morphisms.

use std::collections::BTreeMap;

use num_integer::Integer;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use zlinalg::{BigInt, Elem, FPAbGroup, Hom, IntMatrix};

use crate::{add, BidegreeRule, BigradedGroup, Bounds, Pos, SpecError, SSMorphism, SpectralSequence};

fn pick<R: Rng, T: Clone>(rng: &mut R, xs: &[T]) -> T {
    xs[rng.gen_range(0..xs.len())].clone()
}

fn palette() -> Vec<FPAbGroup> {
    vec![
        FPAbGroup::zero(),
        FPAbGroup::z(),
        FPAbGroup::z_mod(2),
        FPAbGroup::z_mod(3),
        FPAbGroup::z_mod(4),
        FPAbGroup::z_mod(6),
        FPAbGroup::from_invariants_i64(0, &[2, 2]).unwrap(),
    ]
}

/// A random well-defined homomorphism with entries drawn from `−2..=2`.
pub fn random_hom<R: Rng>(rng: &mut R, dom: &FPAbGroup, cod: &FPAbGroup) -> Hom {
    let mut m = IntMatrix::zeros(cod.ngens(), dom.ngens());
    for i in 0..cod.ngens() {
        for j in 0..dom.ngens() {
            let e = &cod.orders()[i];
            let d = &dom.orders()[j];
            // smallest step with e | d·step
            let step = if e == &BigInt::from(0) {
                BigInt::from(if d == &BigInt::from(0) { 1 } else { 0 })
            } else {
                e / e.gcd(d)
            };
            m.set(i, j, BigInt::from(rng.gen_range(-2i64..=2)) * step);
        }
    }
    Hom::new(dom.clone(), cod.clone(), m).expect("scaled entries are well defined")
}

/// Differentials on `groups` with bidegree `v` so that no position is both a
/// source and a target; `d ∘ d = 0` then holds trivially.
fn random_diffs<R: Rng>(rng: &mut R, groups: &BigradedGroup, v: Pos) -> BTreeMap<Pos, Hom> {
    let mut role: BTreeMap<Pos, bool> = BTreeMap::new();
    for x in groups.support() {
        role.insert(x, rng.gen_bool(0.5));
    }
    let mut out = BTreeMap::new();
    for (&x, &is_source) in &role {
        let y = add(x, v);
        if is_source && role.get(&y) == Some(&false) && rng.gen_bool(0.8) {
            out.insert(x, random_hom(rng, &groups.get(x), &groups.get(y)));
        }
    }
    out
}

/// A homological spectral sequence on `[0,3] × [0,2]` starting at page 1 or 2,
/// with random differentials on its first two pages.
pub fn random_ss<R: Rng>(rng: &mut R) -> SpectralSequence {
    let bounds = Bounds::new((0, 3), (0, 2)).unwrap();
    let pal = palette();
    let mut groups = BTreeMap::new();
    for x in bounds.positions() {
        if rng.gen_bool(0.6) {
            groups.insert(x, pick(rng, &pal));
        }
    }
    let groups = BigradedGroup::new(bounds, groups).unwrap();
    let r0 = rng.gen_range(1..=2);
    let rule = BidegreeRule::Homological;
    let d0 = random_diffs(rng, &groups, rule.v(r0, r0));
    let mut ss = SpectralSequence::new(r0, rule.clone(), groups, d0).expect("no composable differentials");
    let v1 = rule.v(r0, r0 + 1);
    let mut inner = StdRng::seed_from_u64(rng.gen());
    ss.turn_with(|g, _| Ok(random_diffs(&mut inner, g, v1)))
    .expect("no composable differentials");
    ss.complete().expect("homological bidegrees leave the bounds");
    ss
}

/// A random morphism: a scalar, a zero map, an inclusion into or projection
/// from a direct sum, or a composite of two of these.
pub fn random_morphism<R: Rng>(rng: &mut R) -> Result<SSMorphism, SpecError> {
    let a = random_ss(rng);
    let kind = rng.gen_range(0..5);
    match kind {
        0 => SSMorphism::scalar(&a, pick(rng, &[-1, 2, 3])),
        1 => {
            let b = random_ss(rng);
            if a.r0() != b.r0() {
                return SSMorphism::scalar(&a, 1);
            }
            SSMorphism::new(&a, &b, BTreeMap::new())
        }
        2 | 3 => {
            let mut b = random_ss(rng);
            if a.r0() != b.r0() {
                b = SpectralSequence::new(a.r0(), a.rule().clone(), BigradedGroup::zero(*a.bounds()), BTreeMap::new())?;
            }
            let s = a.direct_sum(&b)?;
            let r0 = a.r0();
            let mut f0 = BTreeMap::new();
            for x in a.positions().union(&b.positions()) {
                let (ga, gb) = (a.group(r0, *x), b.group(r0, *x));
                let g = s.group(r0, *x);
                let h = if kind == 2 {
                    let imgs: Vec<Elem> = ga.gens().into_iter().map(|e| [e, gb.zero_elem()].concat()).collect();
                    Hom::from_images(&ga, &g, &imgs)?
                } else {
                    let imgs: Vec<Elem> = g.gens().into_iter().map(|e| e[..ga.ngens()].to_vec()).collect();
                    Hom::from_images(&g, &ga, &imgs)?
                };
                f0.insert(*x, h);
            }
            if kind == 2 {
                SSMorphism::new(&a, &s, f0)
            } else {
                SSMorphism::new(&s, &a, f0)
            }
        }
        _ => {
            let f = SSMorphism::scalar(&a, pick(rng, &[2, 3]))?;
            let g = SSMorphism::scalar(&a, -1)?;
            g.compose(&f)
        }
    }
}
