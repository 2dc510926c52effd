//! Seeded generators of small diagrams and short exact sequences.

use num_integer::Integer;
use rand::seq::SliceRandom;
use rand::Rng;
use zlinalg::{BigInt, FPAbGroup, Hom, IntMatrix, Subgroup};

use crate::{image_at, quotient_kernel_at, split_sequence, TailSpec, ZDiagram, ZMorphism, ZdError};

/// A group from a small fixed palette: `0, ℤ, ℤ/2, ℤ/3, ℤ/4, ℤ/6, ℤ/2⊕ℤ/2, ℤ⊕ℤ/2`.
pub fn random_group<R: Rng>(rng: &mut R) -> FPAbGroup {
    let choice = rng.gen_range(0..8);
    match choice {
        0 => FPAbGroup::zero(),
        1 => FPAbGroup::z(),
        2 => FPAbGroup::z_mod(2),
        3 => FPAbGroup::z_mod(3),
        4 => FPAbGroup::z_mod(4),
        5 => FPAbGroup::z_mod(6),
        6 => FPAbGroup::from_invariants_i64(0, &[2, 2]).expect("2 | 2"),
        _ => FPAbGroup::from_invariants_i64(1, &[2]).expect("valid invariants"),
    }
}

/// A random well-defined homomorphism with entries drawn from `−3..=3`.
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
            m.set(i, j, BigInt::from(rng.gen_range(-3i64..=3)) * step);
        }
    }
    Hom::new(dom.clone(), cod.clone(), m).expect("scaled entries are well defined")
}

fn random_tail<R: Rng>(rng: &mut R) -> TailSpec {
    if rng.gen_bool(0.5) {
        TailSpec::Zero
    } else {
        TailSpec::Constant
    }
}

/// A diagram with window width `1..=max_width` starting at `−1..=1`.
pub fn random_diagram<R: Rng>(rng: &mut R, max_width: usize) -> ZDiagram {
    let w = rng.gen_range(1..=max_width.max(1));
    let groups: Vec<FPAbGroup> = (0..w).map(|_| random_group(rng)).collect();
    let maps = (0..w - 1).map(|i| random_hom(rng, &groups[i], &groups[i + 1])).collect();
    let p0 = rng.gen_range(-1..=1);
    ZDiagram::new(p0, groups, maps, random_tail(rng), random_tail(rng)).expect("maps match groups")
}

/// A random morphism `A → B`; the components are `k·id` composed with the
/// structure maps of a common diagram, or a split projection.
pub fn random_morphism<R: Rng>(rng: &mut R, max_width: usize) -> ZMorphism {
    let a = random_diagram(rng, max_width);
    let k = *[1i64, 2, 3, -1].choose(rng).expect("non-empty");
    match rng.gen_range(0..3) {
        0 => {
            let comps = (a.lo()..=a.hi()).map(|p| Hom::scalar(&a.group_at(p), k)).collect();
            ZMorphism::new(&a, &a, a.lo(), comps).expect("scalars are natural")
        }
        1 => {
            let r = rng.gen_range(0..3);
            let (_, proj) = a.quotient_diagram(a.lo() - r, a.hi(), |p| quotient_kernel_at(&a, p, r as usize))
                .expect("kernel towers are natural");
            proj
        }
        _ => {
            let c = random_diagram(rng, max_width);
            let (_, g) = split_sequence(&c, &a).expect("split sums exist");
            g
        }
    }
}

/// A short exact sequence `0 → A → B → C → 0` of diagrams, either split or
/// cut out of a random `B` by a natural subfamily.
pub fn random_ses<R: Rng>(rng: &mut R, max_width: usize) -> Result<(ZMorphism, ZMorphism), ZdError> {
    if rng.gen_bool(0.3) {
        let a = random_diagram(rng, max_width);
        let c = random_diagram(rng, max_width);
        return split_sequence(&a, &c);
    }
    let b = random_diagram(rng, max_width);
    let kind = rng.gen_range(0..3);
    let r = rng.gen_range(0..3usize);
    let k = rng.gen_range(2..=3i64);
    let sub = |p: i64| -> Subgroup {
        match kind {
            0 => image_at(&b, p, r),
            1 => quotient_kernel_at(&b, p, r),
            _ => Hom::scalar(&b.group_at(p), k).image(),
        }
    };
    let (lo, hi) = (b.lo() - r as i64, b.hi() + r as i64);
    let (_, incl) = b.sub_diagram(lo, hi, sub)?;
    let (_, proj) = b.quotient_diagram(lo, hi, sub)?;
    Ok((incl, proj))
}
