use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use solvers::{
    cyclic_group_homology, five_term, k_tower_abutment, projective_space_homology, sphere_abutment, two_row_solve,
    RowPairShape, SolverError,
};
use spectral::{all_homs, e_infinity, BidegreeRule, BigradedGroup, Bounds, FilteredAbutment, Filtration, SpectralSequence};
use zlinalg::{elem, Elem, FPAbGroup, Hom, Subgroup};

fn names(h: &[FPAbGroup]) -> Vec<String> {
    h.iter().map(FPAbGroup::invariant_string).collect()
}

#[test]
fn cyclic_groups() {
    for k in 2..=7u64 {
        let s = cyclic_group_homology(k, 9).unwrap();
        let want: Vec<String> = (0..=9)
            .map(|n| match n {
                0 => "Z".to_string(),
                n if n % 2 == 1 => format!("Z/{k}"),
                _ => "0".to_string(),
            })
            .collect();
        assert_eq!(names(&s.h), want, "k = {k}");
        for p in 2..=9 {
            let d = s.d2_at(p).unwrap();
            if p % 2 == 1 {
                assert!(d.is_iso(), "k = {k}, p = {p}");
            } else {
                assert!(d.is_zero(), "k = {k}, p = {p}");
            }
        }
    }
}

#[test]
fn projective_spaces() {
    for r in 1..=4 {
        let s = projective_space_homology(r, 2 * r + 3).unwrap();
        for (n, g) in s.h.iter().enumerate() {
            let n = n as i64;
            let want = if n % 2 == 0 && n <= 2 * r { FPAbGroup::z() } else { FPAbGroup::zero() };
            assert_eq!(g, &want, "r = {r}, n = {n}");
        }
    }
}

/// Graded pieces of the solved sequence against the abutment, off the
/// two columns whose incoming differentials lie beyond `N`.
fn reproduces(ab: &FilteredAbutment, n_max: i64) {
    let s = two_row_solve(&RowPairShape::default(), ab, n_max).unwrap();
    let inf = e_infinity(&s.ss).unwrap();
    let bounds = Bounds::new((0, n_max), (0, 1)).unwrap();
    let trimmed = FilteredAbutment { degrees: ab.degrees.range(..=n_max - 1).map(|(&n, f)| (n, f.clone())).collect() };
    let graded = trimmed.associated_graded(bounds).unwrap();
    for x in bounds.positions().filter(|&(p, q)| p + q < n_max) {
        assert!(inf.groups.get(x).isomorphic(&graded.get(x)), "{x:?}");
    }
}

#[test]
fn solutions_reproduce_the_abutment() {
    for k in 2..=7 {
        reproduces(&k_tower_abutment(k), 9);
    }
    for r in 1..=4 {
        reproduces(&sphere_abutment(r), 2 * r + 4);
    }
}

#[test]
fn ambiguous_extension_is_reported() {
    let mut ab = FilteredAbutment::new();
    ab.insert(0, Filtration::trivial(FPAbGroup::z_mod(4), 0));
    ab.insert(2, Filtration::trivial(FPAbGroup::z_mod(2), 2));
    let r = two_row_solve(&RowPairShape::default(), &ab, 4);
    assert!(matches!(r, Err(SolverError::Underdetermined { degree: 2, .. })));
}

#[test]
fn five_term_of_the_k_tower() {
    for k in 2..=7 {
        let s = cyclic_group_homology(k, 4).unwrap();
        let f = five_term(&s.ss, &k_tower_abutment(k)).unwrap();
        assert!(f.holds());
        let want = ["0", "0", "Z", "Z", &format!("Z/{k}")];
        assert_eq!(names(&f.groups), want);
        let times = f.maps[2].matrix().get(0, 0).clone();
        assert_eq!(times.magnitude(), &zlinalg::BigInt::from(k).magnitude().clone());
        assert!(f.maps[2].is_mono() && f.maps[3].is_epi());
    }
}

#[test]
fn five_term_of_a_collapsed_sequence() {
    let z = FPAbGroup::z();
    let bounds = Bounds::new((0, 2), (0, 1)).unwrap();
    let groups = [((0, 0), z.clone()), ((1, 0), z.clone()), ((0, 1), z.clone())].into();
    let ss = SpectralSequence::build(2, BidegreeRule::Homological, BigradedGroup::new(bounds, groups).unwrap(), BTreeMap::new())
        .unwrap();
    let zz = z.direct_sum(&z);
    let mut ab = FilteredAbutment::new();
    ab.insert(0, Filtration::trivial(z.clone(), 0));
    ab.insert(1, Filtration::new(zz.clone(), 0, vec![Subgroup::from_generators(&zz, &[elem(&[1, 0])]), Subgroup::whole(&zz)]).unwrap());
    let f = five_term(&ss, &ab).unwrap();
    assert!(f.holds());
    assert!(f.boundary().is_zero());
    assert!(f.maps[2].is_mono() && f.maps[3].is_epi());
}

#[test]
fn five_term_rejects_other_setups() {
    let s = cyclic_group_homology(3, 4).unwrap();
    let r = five_term(&s.ss, &k_tower_abutment(4));
    assert!(matches!(r, Err(SolverError::SetupViolation(_))));
}

fn set(g: &FPAbGroup, xs: impl IntoIterator<Item = Elem>) -> BTreeSet<Elem> {
    xs.into_iter().map(|x| g.reduce(&x)).collect()
}

/// Exactness by enumeration: `Im f = Ker g` as element sets.
fn exact_by_enumeration(f: &Hom, g: &Hom) -> bool {
    let mid = f.codomain();
    let image = set(mid, f.domain().elements(4096).iter().map(|x| f.apply(x)));
    let kernel = set(mid, mid.elements(4096).into_iter().filter(|x| g.codomain().is_zero_elem(&g.apply(x))));
    image == kernel
}

fn small_group<R: Rng>(rng: &mut R) -> FPAbGroup {
    let orders = [1u64, 2, 3, 4, 6];
    let n = rng.gen_range(0..=2);
    (0..n).fold(FPAbGroup::zero(), |g, _| g.direct_sum(&FPAbGroup::z_mod(*orders.choose(rng).unwrap())))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 60, ..ProptestConfig::default() })]

    #[test]
    fn five_term_is_exact_on_random_corners(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (e20, e01, e10) = (small_group(&mut rng), small_group(&mut rng), small_group(&mut rng));
        let homs = all_homs(&e20, &e01, 4096);
        let d = homs.choose(&mut rng).unwrap().clone();
        let bounds = Bounds::new((0, 2), (0, 1)).unwrap();
        let groups = [((2, 0), e20.clone()), ((0, 1), e01.clone()), ((1, 0), e10.clone())]
            .into_iter()
            .filter(|(_, g)| !g.is_trivial())
            .collect();
        let diffs = if d.is_zero() || e20.is_trivial() || e01.is_trivial() {
            BTreeMap::new()
        } else {
            [(2, [((2, 0), d.clone())].into())].into()
        };
        let ss = SpectralSequence::build(2, BidegreeRule::Homological, BigradedGroup::new(bounds, groups).unwrap(), diffs).unwrap();
        let inf = e_infinity(&ss).unwrap();
        let (k, c, top) = (inf.groups.get((2, 0)), inf.groups.get((0, 1)), inf.groups.get((1, 0)));
        let l1 = c.direct_sum(&top);
        let bottom: Vec<Elem> = (0..c.ngens()).map(|i| l1.gen(i)).collect();
        let mut ab = FilteredAbutment::new();
        ab.insert(1, Filtration::new(l1.clone(), 0, vec![Subgroup::from_generators(&l1, &bottom), Subgroup::whole(&l1)]).unwrap());
        ab.insert(2, Filtration::trivial(k, 2));
        let f = five_term(&ss, &ab).unwrap();
        prop_assert!(f.holds());
        prop_assert!(exact_by_enumeration(&f.maps[0], &f.maps[1]));
        prop_assert!(exact_by_enumeration(&f.maps[1], &f.maps[2]));
        prop_assert!(exact_by_enumeration(&f.maps[2], &f.maps[3]));
        let tail = f.maps[3].codomain();
        prop_assert_eq!(set(tail, f.groups[3].elements(4096).iter().map(|x| f.maps[3].apply(x))).len(), tail.elements(4096).len());
    }
}
