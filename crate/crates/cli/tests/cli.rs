use std::path::PathBuf;
use std::process::Command;

use excouple::json::{couple_from_str, couple_to_string};
use serde_json::Value;
use specseq::instances::{to_pretty, TwoRowInstance};
use spectral::{FilteredAbutment, Filtration};
use specseq::{demo_input, run, Outcome};
use zlinalg::FPAbGroup;

fn scratch(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("specseq-tests-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn specseq(args: &[&str]) -> Outcome {
    run(std::iter::once("specseq").chain(args.iter().copied()))
}

fn report(o: &Outcome) -> Value {
    serde_json::from_str(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", o.stdout))
}

fn couple2_file(name: &str, edit: impl FnOnce(&mut Value)) -> PathBuf {
    let mut v: Value = serde_json::from_str(&demo_input("couple2", None, None, None).unwrap()).unwrap();
    edit(&mut v);
    scratch(name, &v.to_string())
}

#[test]
fn demo_inputs_reserialize_identically() {
    for name in ["couple1", "couple2", "couple3"] {
        let text = demo_input(name, None, None, None).unwrap();
        assert_eq!(couple_to_string(&couple_from_str(&text).unwrap()), text);
    }
    for (name, k, r) in [("cyclic-k", Some(3), None), ("cp-r", None, Some(2))] {
        let text = demo_input(name, k, None, r).unwrap();
        let inst = TwoRowInstance::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(to_pretty(&inst.to_json()), text);
    }
}

#[test]
fn demo_input_flag_prints_the_input() {
    let o = specseq(&["demo", "couple3", "--input", "--table"]);
    assert_eq!(o.code, 0);
    assert_eq!(o.stdout, demo_input("couple3", None, None, None).unwrap());
}

#[test]
fn couple2_demo_report() {
    let o = specseq(&["demo", "couple2"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let v = report(&o);
    assert_eq!(v["L_0"], "Z/2");
    assert_eq!(v["L^-1"], "Z/3");
    assert_eq!(v["E_inf"]["0,0"], "Z/6");
    assert_eq!(v["classification"], "StableProperExtension");
    assert_eq!(v["status"], "ok");
}

#[test]
fn cyclic_table() {
    let o = specseq(&["demo", "cyclic-k", "--k", "5", "--N", "7", "--table"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let row = o.stdout.lines().find(|l| l.trim_start().starts_with("H_n")).unwrap();
    let cells: Vec<&str> = row.split('|').nth(1).unwrap().split_whitespace().collect();
    assert_eq!(cells, ["Z", "Z/5", "0", "Z/5", "0", "Z/5", "0", "Z/5"]);
    assert_eq!(specseq(&["demo", "cyclic-5", "--N", "7", "--table"]).stdout, o.stdout);
}

#[test]
fn reports_reparse() {
    let couple = couple2_file("reparse.json", |_| {});
    let c = couple.to_str().unwrap();
    let cy = scratch("cy.json", &demo_input("cyclic-k", Some(4), Some(6), None).unwrap());
    let cy = cy.to_str().unwrap();
    let runs: Vec<Vec<&str>> = vec![
        vec!["validate", c],
        vec!["pages", c, "--to", "4"],
        vec!["einf", c],
        vec!["abutments", c, "--n", "-1"],
        vec!["extension-report", c, "--x", "0,0"],
        vec!["classify", c],
        vec!["reindex", c],
        vec!["compare", c, "--rule", "mono-colim", "--n", "0"],
        vec!["solve-two-row", cy],
        vec!["five-term", cy],
        vec!["demo", "cp-r", "--r", "2"],
    ];
    for args in runs {
        let o = specseq(&args);
        assert_eq!(o.code, 0, "{args:?}: {}", o.stderr);
        let v = report(&o);
        assert_eq!(v["status"], "ok", "{args:?}");
        assert_eq!(v["command"], args[0]);
    }
}

#[test]
fn reindexed_couple_is_a_couple() {
    let c = couple2_file("reindex.json", |_| {});
    let out = c.with_extension("moved.json");
    let o = specseq(&["reindex", c.to_str().unwrap(), "--matrix", "1,1,0,1", "--out", out.to_str().unwrap()]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let moved = couple_from_str(&v["couple"].to_string()).unwrap();
    moved.validate().unwrap();
}

#[test]
fn non_exact_couple_exits_2_with_witness() {
    let f = couple2_file("not-exact.json", |v| v["j"]["0,0"]["matrix"] = serde_json::json!([[0]]));
    let o = specseq(&["validate", f.to_str().unwrap()]);
    assert_eq!(o.code, 2);
    let v = report(&o);
    assert_eq!(v["status"], "validation-failure");
    assert_eq!(v["witness"]["corner"], "E");
    assert_eq!(v["witness"]["position"], serde_json::json!([0, 0]));
}

#[test]
fn ill_defined_map_exits_2() {
    let f = couple2_file("ill-defined.json", |v| v["E"]["0,0"]["torsion"] = serde_json::json!([5]));
    assert_eq!(specseq(&["validate", f.to_str().unwrap()]).code, 2);
}

#[test]
fn malformed_input_exits_1() {
    let f = scratch("broken.json", "{\"D\": ");
    let o = specseq(&["validate", f.to_str().unwrap()]);
    assert_eq!(o.code, 1);
    assert_eq!(report(&o)["status"], "parse-error");
    assert_eq!(specseq(&["frobnicate"]).code, 1);
    assert_eq!(specseq(&["validate", "/nonexistent/couple.json"]).code, 1);
    assert_eq!(specseq(&["demo", "couple9"]).code, 1);
}

#[test]
fn underdetermined_instance_exits_3() {
    let mut abutment = FilteredAbutment::new();
    abutment.insert(0, Filtration::trivial(FPAbGroup::z_mod(4), 0));
    abutment.insert(2, Filtration::trivial(FPAbGroup::z_mod(2), 2));
    let inst = TwoRowInstance { n_max: 4, abutment, known: Default::default() };
    let f = scratch("ambiguous.json", &to_pretty(&inst.to_json()));
    let o = specseq(&["solve-two-row", f.to_str().unwrap()]);
    assert_eq!(o.code, 3, "{}", o.stdout);
    let v = report(&o);
    assert_eq!(v["status"], "theorem-failure");
    assert_eq!(v["witness"], serde_json::json!({"degree": 2, "kind": "underdetermined"}));
}

#[test]
fn budget_comes_from_the_environment() {
    let f = couple2_file("budget.json", |_| {});
    let f = f.to_str().unwrap();
    let bin = env!("CARGO_BIN_EXE_specseq");
    let status = |env: Option<&str>, extra: &[&str]| {
        let mut cmd = Command::new(bin);
        cmd.args(["einf", f]).args(extra).env_remove(specseq::BUDGET_VAR);
        if let Some(b) = env {
            cmd.env(specseq::BUDGET_VAR, b);
        }
        cmd.output().unwrap().status.code().unwrap()
    };
    assert_eq!(status(None, &[]), 0);
    assert_eq!(status(Some("0"), &[]), 2);
    assert_eq!(status(Some("0"), &["--budget", "40"]), 0);
    assert_eq!(status(Some("lots"), &[]), 1);
}

#[test]
fn zeeman_on_a_collapsed_sequence() {
    use spectral::json::{abutment_to_json, ss_to_json};
    use spectral::{BidegreeRule, BigradedGroup, Bounds, SpectralSequence};
    let z = FPAbGroup::z();
    let bounds = Bounds::new((0, 2), (0, 0)).unwrap();
    let groups = [((0, 0), z.clone()), ((2, 0), z.clone())].into_iter().collect();
    let ss = SpectralSequence::build(2, BidegreeRule::Homological, BigradedGroup::new(bounds, groups).unwrap(), Default::default())
        .unwrap();
    let mut ab = FilteredAbutment::new();
    ab.insert(0, Filtration::trivial(z.clone(), 0));
    ab.insert(2, Filtration::trivial(z.clone(), 2));
    let input = serde_json::json!({"source": ss_to_json(&ss), "source_abutment": abutment_to_json(&ab), "edge": "below"});
    let f = scratch("zeeman.json", &input.to_string());
    let o = specseq(&["zeeman", f.to_str().unwrap(), "--setup", "I"]);
    assert_eq!(o.code, 0, "{}", o.stdout);
    assert_eq!(report(&o)["holds"], true);

    let mut shifted = FilteredAbutment::new();
    shifted.insert(0, Filtration::trivial(z.clone(), 1));
    shifted.insert(2, Filtration::trivial(z, 2));
    let input = serde_json::json!({
        "source": ss_to_json(&ss),
        "source_abutment": abutment_to_json(&ab),
        "target_abutment": abutment_to_json(&shifted),
    });
    let f = scratch("zeeman-bad.json", &input.to_string());
    let o = specseq(&["zeeman", f.to_str().unwrap(), "--setup", "I"]);
    assert_eq!(o.code, 2, "{}", o.stdout);
}
