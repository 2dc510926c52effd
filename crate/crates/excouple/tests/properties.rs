use excouple::json::{couple_from_str, couple_to_string};
use excouple::random::{random_couple, random_regular_triple};
use excouple::{
    canonical_t, classify, derivation_abutment_check, e_infinity_internal, extension_report, internal_page,
    page_agreement, reindex, stable_e, to_spectral_sequence, ExactCouple, Label, Variant,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use spectral::{e_infinity, sub};

fn couple(seed: u64) -> ExactCouple {
    random_couple(&mut ChaCha8Rng::seed_from_u64(seed))
}

#[test]
fn internal_pages_match_iterated_homology() {
    for seed in 0..200 {
        let c = couple(seed);
        c.validate().unwrap();
        let ss = to_spectral_sequence(&c).unwrap();
        for r in 1..=5 {
            let page = internal_page(&c, r).unwrap();
            assert!(page_agreement(&c, &ss, &page).unwrap(), "seed {seed}, page {r}");
        }
        let ours = e_infinity_internal(&c, None).unwrap();
        let theirs = e_infinity(&ss).unwrap();
        for (y, inf) in &ours {
            assert!(inf.quotient.group().isomorphic(&theirs.groups.get(*y)), "seed {seed} at {y:?}");
            assert_eq!(&inf.cycles, &theirs.cycles[y], "seed {seed} at {y:?}");
            assert_eq!(&inf.boundaries, &theirs.boundaries[y], "seed {seed} at {y:?}");
        }
    }
}

#[test]
fn extension_suite_on_random_couples() {
    for seed in 0..60 {
        let c = couple(seed);
        let b = c.bidegrees().b;
        for y in c.e().support() {
            let rep = extension_report(&c, sub(y, b), None).unwrap();
            assert!(rep.holds(), "seed {seed} at {y:?}: {rep:?}");
            assert!(rep.crit_iii && rep.stable_is_infinity && rep.lim1_zero(), "seed {seed} at {y:?}");
            let s = stable_e(&c, y, None).unwrap();
            assert!(s.inclusion.is_iso());
        }
        assert_ne!(classify(&c, None).unwrap().label, Label::Unstable);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 40, ..ProptestConfig::default() })]

    #[test]
    fn derived_couples_are_exact_and_turn_the_page(seed in any::<u64>()) {
        let c = couple(seed);
        let ss = to_spectral_sequence(&c).unwrap();
        for v in [Variant::Q, Variant::I] {
            let rep = derivation_abutment_check(&c, v).unwrap();
            prop_assert!(rep.holds());
            let dss = to_spectral_sequence(&rep.derived).unwrap();
            for r in 1..=3 {
                for y in c.e().bounds().positions() {
                    prop_assert!(dss.group(r, y).isomorphic(&ss.group(r + 1, y)));
                }
            }
        }
    }

    #[test]
    fn reindexing_transports_pages(seed in any::<u64>()) {
        let (c, t, moved) = random_regular_triple(&mut ChaCha8Rng::seed_from_u64(seed));
        moved.validate().unwrap();
        let back = reindex(&moved, &t.inverse().unwrap()).unwrap();
        prop_assert_eq!(&back, &c);
        let canon = canonical_t(moved.bidegrees()).unwrap();
        let nb = canon.bidegrees(moved.bidegrees());
        for r in 1..=5 {
            prop_assert_eq!(nb.v(r), (-r, r - 1));
        }
        for r in 1..=4 {
            let (p, q) = (internal_page(&c, r).unwrap(), internal_page(&moved, r).unwrap());
            for (x, g) in p.groups.iter() {
                prop_assert!(q.groups.get(t.apply(x)).isomorphic(g));
            }
        }
    }

    #[test]
    fn json_round_trips(seed in any::<u64>()) {
        let c = couple(seed);
        let s = couple_to_string(&c);
        let back = couple_from_str(&s).unwrap();
        prop_assert_eq!(&back, &c);
        prop_assert_eq!(couple_to_string(&back), s);
    }

    #[test]
    fn sums_add_pages(a in any::<u64>(), b in any::<u64>()) {
        let (x, y) = (couple(a), couple(b));
        let s = x.direct_sum(&y).unwrap();
        s.validate().unwrap();
        for r in 1..=3 {
            let (px, py, ps) = (internal_page(&x, r).unwrap(), internal_page(&y, r).unwrap(), internal_page(&s, r).unwrap());
            for z in s.e().bounds().positions() {
                prop_assert!(ps.groups.get(z).isomorphic(&px.groups.get(z).direct_sum(&py.groups.get(z))));
            }
        }
    }
}
