//! Acceptance suite: one PASS/FAIL line per criterion.

use std::collections::BTreeMap;
use std::time::Instant;

use excouple::random::{random_couple, random_regular_triple};
use excouple::{
    canonical_t, demos, e_infinity_internal, extension_report, internal_page, lim1_couple, page_agreement, reindex,
    stable_e, to_spectral_sequence, zeeman_check, ExcoupleError, ZeemanSetup, ZeemanVariant,
};
use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use solvers::{cyclic_group_homology, five_term, k_tower_abutment, projective_space_homology};
use spectral::{e_infinity, sub, FilteredAbutment, Filtration, Pos, SSMorphism, SpectralSequence};
use zdiagrams::random::{random_morphism, random_ses};
use zdiagrams::{six_term_check, zcompare, Verdict, ZRule};
use zlinalg::{FPAbGroup, Hom, Subgroup};

type Check = Result<(), String>;
type Criterion = fn() -> Check;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: impl std::fmt::Debug) -> String {
    format!("{e:?}")
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn demo_report(name: &str) -> Result<Value, String> {
    let o = specseq::run(["specseq", "demo", name]);
    ensure(o.code == 0, || format!("demo {name} exited {}: {}", o.code, o.stderr))?;
    serde_json::from_str(&o.stdout).map_err(err)
}

fn field<'a>(v: &'a Value, k: &str) -> &'a str {
    v.get(k).and_then(Value::as_str).unwrap_or("<missing>")
}

fn demo_couples() -> Check {
    let want = [
        ("couple1", "Z/6", "0", "MatchesColimit", None),
        ("couple2", "Z/2", "Z/3", "StableProperExtension", Some(("Z/2", "Z/6", "Z/3"))),
        ("couple3", "0", "Z/6", "MatchesLimit", None),
    ];
    for (name, l0, lm1, label, ses) in want {
        let v = demo_report(name)?;
        let got = (field(&v, "L_0"), field(&v, "L^-1"), field(&v, "classification"));
        ensure(got == (l0, lm1, label), || format!("{name}: got {got:?}"))?;
        let einf = v["E_inf"]["0,0"].as_str().unwrap_or("");
        ensure(einf == "Z/6", || format!("{name}: E_inf(0,0) = {einf}"))?;
        if let Some((a, b, c)) = ses {
            let s = &v["ses"];
            let got = (field(s, "sub"), field(s, "middle"), field(s, "quotient"));
            ensure(got == (a, b, c) && s["exact"] == Value::Bool(true), || format!("{name}: ses {s}"))?;
        }
    }
    let ss: Vec<SpectralSequence> = [demos::couple1(), demos::couple2(), demos::couple3()]
        .iter()
        .map(to_spectral_sequence)
        .collect::<Result<_, _>>()
        .map_err(err)?;
    ensure(ss[0].same_pages(&ss[1]) && ss[1].same_pages(&ss[2]), || "spectral sequences differ".into())
}

fn cyclic_groups() -> Check {
    for k in 2..=7u64 {
        let sol = cyclic_group_homology(k, 9).map_err(err)?;
        for n in 0..=9 {
            let want = match n {
                0 => "Z".to_string(),
                n if n % 2 == 1 => format!("Z/{k}"),
                _ => "0".to_string(),
            };
            let got = sol.homology(n).invariant_string();
            ensure(got == want, || format!("k = {k}: H_{n} = {got}, expected {want}"))?;
            if n >= 2 {
                let d = sol.d2_at(n).ok_or_else(|| format!("k = {k}: no d2 at {n}"))?;
                let ok = if n % 2 == 1 { d.is_iso() } else { d.is_zero() };
                ensure(ok, || format!("k = {k}: d2_{{{n},0}} has the wrong type"))?;
            }
        }
    }
    Ok(())
}

fn projective_spaces() -> Check {
    for r in 1..=4 {
        let sol = projective_space_homology(r, 2 * r + 2).map_err(err)?;
        for n in 0..=2 * r + 2 {
            let want = if n % 2 == 0 && n <= 2 * r { "Z" } else { "0" };
            let got = sol.homology(n).invariant_string();
            ensure(got == want, || format!("CP^{r}: H_{n} = {got}, expected {want}"))?;
        }
    }
    Ok(())
}

fn five_terms() -> Check {
    for k in 2..=7u64 {
        let sol = cyclic_group_homology(k, 4).map_err(err)?;
        let ft = five_term(&sol.ss, &k_tower_abutment(k)).map_err(err)?;
        let got: Vec<String> = ft.groups.iter().map(FPAbGroup::invariant_string).collect();
        let want = ["0", "0", "Z", "Z", &format!("Z/{k}")];
        ensure(got == want, || format!("k = {k}: groups {got:?}"))?;
        let beta = ft.maps[2].matrix().get(0, 0).clone();
        ensure(beta == BigInt::from(k) || beta == BigInt::from(-(k as i64)), || format!("k = {k}: beta = {beta}"))?;
        ensure(ft.holds(), || format!("k = {k}: sequence is not exact: {:?}", ft.exact))?;
    }
    Ok(())
}

fn internal_pages() -> Check {
    for seed in 0..200 {
        let c = random_couple(&mut rng(1000 + seed));
        let ss = to_spectral_sequence(&c).map_err(err)?;
        for r in 1..=5 {
            let page = internal_page(&c, r).map_err(err)?;
            ensure(page_agreement(&c, &ss, &page).map_err(err)?, || format!("seed {seed}: page {r} differs"))?;
        }
        let ours = e_infinity_internal(&c, None).map_err(err)?;
        let theirs = e_infinity(&ss).map_err(err)?;
        for (y, inf) in &ours {
            let ok = inf.quotient.group().isomorphic(&theirs.groups.get(*y))
                && inf.cycles == theirs.cycles[y]
                && inf.boundaries == theirs.boundaries[y];
            ensure(ok, || format!("seed {seed}: E_inf differs at {y:?}"))?;
        }
    }
    Ok(())
}

fn extensions() -> Check {
    let mut couples: Vec<_> = (0..40).map(|s| random_couple(&mut rng(5000 + s))).collect();
    couples.extend([demos::couple1(), demos::couple2(), demos::couple3()]);
    for (i, c) in couples.iter().enumerate() {
        let b = c.bidegrees().b;
        for y in c.e().support() {
            let rep = extension_report(c, sub(y, b), None).map_err(err)?;
            ensure(rep.stable_exact && rep.infinity_exact, || format!("couple {i} at {y:?}: not exact"))?;
            ensure(rep.crit_iii, || format!("couple {i} at {y:?}: criterion (iii) fails"))?;
            ensure(rep.stable_is_infinity, || format!("couple {i} at {y:?}: stable E differs from E_inf"))?;
            ensure(stable_e(c, y, None).map_err(err)?.inclusion.is_iso(), || format!("couple {i} at {y:?}"))?;
        }
    }
    for (i, c) in [demos::couple1(), demos::couple2(), demos::couple3()].iter().enumerate() {
        let rep = lim1_couple(c, 0).map_err(err)?;
        ensure(rep.holds() && rep.collapse_page == Some(1), || format!("lim1 couple of couple{}: {rep:?}", i + 1))?;
    }
    Ok(())
}

fn diagrams() -> Check {
    let mut r = rng(0x7d1a);
    for i in 0..100 {
        let (f, g) = random_ses(&mut r, 3).map_err(err)?;
        let rep = six_term_check(&f, &g).map_err(err)?;
        ensure(rep.all(), || format!("sequence {i}: {rep:?}"))?;
    }
    for i in 0..100 {
        let f = random_morphism(&mut r, 3);
        for rule in ZRule::ALL {
            let v = zcompare(&f, rule).map_err(err)?;
            ensure(!matches!(v, Verdict::ConclusionFailed { .. }), || format!("morphism {i}, {rule}: {v:?}"))?;
        }
    }
    Ok(())
}

fn propagation() -> Check {
    let mut r = rng(0x9a9);
    for i in 0..100 {
        let f = spectral::random::random_morphism(&mut r).map_err(err)?;
        let rep = spectral::morphism_tools(&f).map_err(err)?;
        ensure(rep.propagation.holds(), || format!("morphism {i}: {:?}", rep.propagation.failures))?;
        ensure(rep.f_infinity_from_cycles, || format!("morphism {i}: f_inf"))?;
    }
    for mono in [true, false] {
        let np = spectral::find_non_propagation(mono).ok_or("no counterexample found")?;
        let f = &np.morphism;
        let first = f.positions().iter().all(|&x| {
            let h = f.component(1, x);
            if mono { h.is_mono() } else { h.is_epi() }
        });
        let h = f.component(np.page, np.position);
        let later = if mono { h.is_mono() } else { h.is_epi() };
        ensure(first && !later, || format!("counterexample for mono = {mono} does not fail"))?;
    }
    Ok(())
}

fn reindexing() -> Check {
    for seed in 0..50 {
        let (c, t, moved) = random_regular_triple(&mut rng(9000 + seed));
        moved.validate().map_err(err)?;
        let canon = canonical_t(moved.bidegrees()).map_err(err)?;
        let nb = canon.bidegrees(moved.bidegrees());
        for r in 1..=5 {
            ensure(nb.v(r) == (-r, r - 1), || format!("seed {seed}: d^{r} has bidegree {:?}", nb.v(r)))?;
        }
        for r in 1..=4 {
            let (p, q) = (internal_page(&c, r).map_err(err)?, internal_page(&moved, r).map_err(err)?);
            for (x, g) in p.groups.iter() {
                ensure(q.groups.get(t.apply(x)).isomorphic(g), || format!("seed {seed}: page {r} at {x:?}"))?;
            }
        }
        let back = reindex(&moved, &t.inverse().map_err(err)?).map_err(err)?;
        ensure(back == c, || format!("seed {seed}: (C.T).T^-1 differs from C"))?;
    }
    Ok(())
}

/// Degree `n` filtered as the direct sum of the E∞ pieces at `(p, n − p)`,
/// with `F_s` the pieces of column at most `s`.
fn sum_abutment(ss: &SpectralSequence, shift: i64) -> Result<FilteredAbutment, String> {
    let einf = e_infinity(ss).map_err(err)?;
    let mut pieces: BTreeMap<i64, Vec<(i64, FPAbGroup)>> = BTreeMap::new();
    for ((p, q), g) in einf.groups.iter() {
        pieces.entry(p + q).or_default().push((p, g.clone()));
    }
    let mut ab = FilteredAbutment::new();
    for (n, mut ps) in pieces {
        ps.sort_by_key(|(p, _)| *p);
        let total = ps.iter().fold(FPAbGroup::zero(), |acc, (_, g)| acc.direct_sum(g));
        let unit = |j: usize| {
            let mut e = vec![BigInt::from(0); total.ngens()];
            e[j] = BigInt::from(1);
            e
        };
        let (lo, hi) = (ps[0].0, ps[ps.len() - 1].0);
        let mut steps = Vec::new();
        for s in lo..=hi {
            let count: usize = ps.iter().filter(|(p, _)| *p <= s).map(|(_, g)| g.ngens()).sum();
            steps.push(Subgroup::from_generators(&total, &(0..count).map(unit).collect::<Vec<_>>()));
        }
        ab.insert(n, Filtration::new(total, lo + shift, steps).map_err(err)?);
    }
    Ok(ab)
}

fn negation(ss: &SpectralSequence) -> Result<SSMorphism, String> {
    let r0 = ss.r0();
    let page = ss.page(r0).ok_or("no first page")?;
    let comps = page.groups.iter().map(|(x, g)| (x, Hom::identity(g).neg())).collect();
    SSMorphism::new(ss, ss, comps).map_err(err)
}

fn below(x: Pos) -> Vec<Pos> {
    (0..x.0).map(|i| (i, 0)).collect()
}

fn zeeman() -> Check {
    for k in 2..=7u64 {
        let sol = cyclic_group_homology(k, 7).map_err(err)?;
        let f = negation(&sol.ss)?;
        let ab = sum_abutment(&sol.ss, 0)?;
        let maps: BTreeMap<i64, Hom> = ab.degrees.iter().map(|(&n, fl)| (n, Hom::identity(fl.group()).neg())).collect();
        let rep = zeeman_check(&f, &ab, &ab, &maps, ZeemanSetup::I, ZeemanVariant::RowEdge, &below).map_err(err)?;
        ensure(rep.holds() && rep.pages.iter().all(|(_, ok)| *ok), || format!("k = {k}: {rep:?}"))?;

        let bad = sum_abutment(&sol.ss, 1)?;
        let got = zeeman_check(&f, &ab, &bad, &maps, ZeemanSetup::I, ZeemanVariant::RowEdge, &below);
        ensure(matches!(got, Err(ExcoupleError::SetupViolation(_))), || format!("k = {k}: perturbed abutment gave {got:?}"))?;
    }
    Ok(())
}

#[test]
fn acceptance_criteria() {
    let criteria: [(&str, Criterion); 10] = [
        ("demo couples", demo_couples),
        ("homology of cyclic groups", cyclic_groups),
        ("homology of complex projective spaces", projective_spaces),
        ("five-term sequences", five_terms),
        ("internal pages of random couples", internal_pages),
        ("extension suite", extensions),
        ("Z-diagram suite", diagrams),
        ("propagation suite", propagation),
        ("reindexing of regular triples", reindexing),
        ("reverse comparison", zeeman),
    ];
    let start = Instant::now();
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(()) => println!("PASS {:>2} {name}", i + 1),
            Err(e) => {
                println!("FAIL {:>2} {name}: {e}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    println!("acceptance suite: {:.1?}", start.elapsed());
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
