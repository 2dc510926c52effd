use std::collections::HashSet;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use zdiagrams::random::{random_diagram, random_morphism, random_ses};
use zdiagrams::*;
use zlinalg::{Elem, FPAbGroup};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn finite_window(a: &ZDiagram) -> bool {
    (a.lo()..=a.hi()).all(|p| a.group_at(p).is_finite())
}

/// Number of compatible families over the padded window: each family is
/// determined by its leftmost entry, which is unconstrained.
fn brute_lim_order(a: &ZDiagram) -> usize {
    let mut seen = HashSet::new();
    for x in a.group_at(a.lo()).elements(10_000) {
        let mut fam = vec![x.clone()];
        let mut cur = x;
        for p in a.lo()..a.hi() {
            cur = a.map_at(p).apply(&cur);
            fam.push(cur.clone());
        }
        seen.insert(fam);
    }
    seen.len()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn colimit_is_the_far_right_group(seed in any::<u64>()) {
        let a = random_diagram(&mut rng(seed), 4);
        let c = colimit(&a).unwrap();
        match a.right() {
            TailSpec::Zero => prop_assert!(c.group().is_trivial()),
            TailSpec::Constant => prop_assert!(c.group().isomorphic(&a.group_at(a.hi()))),
        }
        for p in a.lo()..=a.hi() {
            prop_assert_eq!(c.pi(p).kernel(), a.compose(p, a.hi() + 1).kernel());
        }
    }

    #[test]
    fn limit_matches_enumeration(seed in any::<u64>()) {
        let a = random_diagram(&mut rng(seed), 4);
        let l = limit_and_lim1(&a).unwrap();
        prop_assert!(l.lim1().is_trivial());
        if finite_window(&a) {
            let n = l.group().elements(10_000).len();
            prop_assert_eq!(n, brute_lim_order(&a));
        }
        for p in a.lo()..a.hi() {
            let lhs = a.map_at(p).compose(&l.rho(p)).unwrap();
            prop_assert_eq!(lhs, l.rho(p + 1));
        }
    }

    #[test]
    fn image_towers_match_enumeration(seed in any::<u64>()) {
        let a = random_diagram(&mut rng(seed), 4);
        for p in a.lo()..=a.hi() {
            for r in 0..4usize {
                let src = a.group_at(p - r as i64);
                if !src.is_finite() {
                    continue;
                }
                let f = a.compose(p - r as i64, p);
                let imgs: HashSet<Elem> = src.elements(10_000).iter().map(|x| f.apply(x)).collect();
                let s = image_at(&a, p, r);
                prop_assert_eq!(Some(imgs.len()), s.order().map(|o| o.to_string().parse::<usize>().unwrap()));
                prop_assert!(imgs.iter().all(|x| s.contains(x)));
            }
        }
    }

    #[test]
    fn filtration_reports_hold(seed in any::<u64>()) {
        let a = random_diagram(&mut rng(seed), 4);
        let budget = default_budget(&a);
        let f = filtrations(&a).unwrap();
        let rep = f.report(&a, budget).unwrap();
        prop_assert!(rep.all(), "{:?}", rep);
        let t = image_towers(&a, budget).unwrap();
        prop_assert!(t.q_omega_stable && t.q_omega_matches_colimit);
        let ml = ml_conditions(&a, budget).unwrap();
        prop_assert!(ml.mittag_leffler && ml.co_mittag_leffler && ml.omega_ml);
        for p in a.lo()..=a.hi() {
            let kd = kernel_diagram(&a, p, budget).unwrap();
            prop_assert!(kd.lim_kernel_is_upper && kd.lim_image_is_i_omega);
            prop_assert!(k_mono_condition(&a, p, budget).unwrap().holds);
        }
    }

    #[test]
    fn random_ses_six_term(seed in any::<u64>()) {
        let (f, g) = random_ses(&mut rng(seed), 3).unwrap();
        let rep = six_term_check(&f, &g).unwrap();
        prop_assert!(rep.all(), "{:?}", rep);
    }

    #[test]
    fn comparison_rules_never_contradict(seed in any::<u64>()) {
        let f = random_morphism(&mut rng(seed), 3);
        for rule in ZRule::ALL {
            let v = zcompare(&f, rule).unwrap();
            prop_assert!(!matches!(v, Verdict::ConclusionFailed { .. }), "{}: {:?}", rule, v);
        }
    }
}

#[test]
fn hundred_seeded_short_exact_sequences() {
    let mut r = rng(0x5e5);
    for i in 0..100 {
        let (f, g) = random_ses(&mut r, 3).unwrap();
        let rep = six_term_check(&f, &g).unwrap();
        assert!(rep.all(), "sequence {i}: {rep:?}");
    }
}

#[test]
fn non_exact_sequence_is_rejected() {
    let z = FPAbGroup::z();
    let a = ZDiagram::constant(&z, 0);
    let id = ZMorphism::identity(&a);
    assert!(matches!(six_term_check(&id, &id), Err(ZdError::NotExact { .. })));
}
