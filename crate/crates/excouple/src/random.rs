//! Random filtered complexes, their couples and random reindexings.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;
use zlinalg::{BigInt, FPAbGroup, Hom, IntMatrix, Subgroup};

use crate::{couple_from_filtered_complex, reindex, ExactCouple, FilteredComplex, Mat2};

const ORDERS: [u64; 6] = [0, 2, 3, 4, 6, 8];

fn random_group<R: Rng>(rng: &mut R) -> FPAbGroup {
    let n = rng.gen_range(0..=2);
    let orders = (0..n).map(|_| BigInt::from(*ORDERS.choose(rng).unwrap())).collect();
    FPAbGroup::new(orders).expect("orders are non-negative")
}

/// `F_0 ⊆ F_1 ⊆ F_2 = C`: each generator enters at some stage, possibly
/// preceded by a multiple of it one step earlier.
fn random_filtration<R: Rng>(rng: &mut R, g: &FPAbGroup) -> Vec<Subgroup> {
    let mut gens: Vec<Vec<(usize, i64)>> = vec![Vec::new(); 3];
    for i in 0..g.ngens() {
        let enter = rng.gen_range(0..=2usize);
        gens[enter].push((i, 1));
        if enter > 0 && rng.gen_bool(0.4) {
            gens[enter - 1].push((i, rng.gen_range(2..=3)));
        }
    }
    let mut acc: Vec<Vec<BigInt>> = Vec::new();
    let mut out = Vec::new();
    for stage in gens {
        for (i, m) in stage {
            let mut v = g.zero_elem();
            v[i] = BigInt::from(m);
            acc.push(v);
        }
        out.push(Subgroup::from_generators(g, &acc));
    }
    out
}

fn random_map<R: Rng>(rng: &mut R, dom: &FPAbGroup, cod: &FPAbGroup) -> Option<Hom> {
    let mut m = IntMatrix::zeros(cod.ngens(), dom.ngens());
    for i in 0..cod.ngens() {
        for j in 0..dom.ngens() {
            if rng.gen_bool(0.5) {
                m.set(i, j, BigInt::from(rng.gen_range(-2..=2)));
            }
        }
    }
    Hom::new(dom.clone(), cod.clone(), m).ok()
}

/// A filtered complex in degrees `0..=2`, filtration stages `0..=2`, with at
/// most two generators per degree. Differentials are drawn until they are
/// well defined, square to zero and respect the filtration, and are zero
/// when that keeps failing.
pub fn random_filtered_complex<R: Rng>(rng: &mut R) -> FilteredComplex {
    let groups: BTreeMap<i64, FPAbGroup> = (0..=2).map(|n| (n, random_group(rng))).collect();
    let filtration = groups.iter().map(|(&n, g)| (n, random_filtration(rng, g))).collect();
    let mut fc = FilteredComplex { groups, d: BTreeMap::new(), p0: 0, filtration };
    for n in 1..=2 {
        let (dom, cod) = (fc.group(n), fc.group(n - 1));
        for _ in 0..24 {
            let Some(h) = random_map(rng, &dom, &cod) else { continue };
            fc.d.insert(n, h);
            if fc.check().is_ok() {
                break;
            }
            fc.d.remove(&n);
        }
    }
    fc
}

pub fn random_couple<R: Rng>(rng: &mut R) -> ExactCouple {
    couple_from_filtered_complex(&random_filtered_complex(rng)).expect("generated complexes are filtered")
}

/// A product of a few elementary matrices, possibly with a swap.
pub fn random_unimodular<R: Rng>(rng: &mut R) -> Mat2 {
    let mut t = Mat2::IDENTITY;
    for _ in 0..rng.gen_range(1..=3) {
        let k = rng.gen_range(-2..=2);
        let e = if rng.gen_bool(0.5) { Mat2([[1, k], [0, 1]]) } else { Mat2([[1, 0], [k, 1]]) };
        t = e.mul(&t);
    }
    if rng.gen_bool(0.5) {
        t = Mat2([[0, 1], [1, 0]]).mul(&t);
    }
    t
}

/// A couple with random regular bidegrees: a random filtered-complex couple
/// moved by a random unimodular matrix. Returns the original, the matrix and
/// the moved couple.
pub fn random_regular_triple<R: Rng>(rng: &mut R) -> (ExactCouple, Mat2, ExactCouple) {
    let c = random_couple(rng);
    let t = random_unimodular(rng);
    let moved = reindex(&c, &t).expect("unimodular");
    (c, t, moved)
}
