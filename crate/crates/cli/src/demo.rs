use std::collections::BTreeMap;

use excouple::json::{couple_to_json, couple_to_string};
use excouple::{abutments, classify, demos, e_infinity_internal, extension_report, to_spectral_sequence, ExactCouple};
use serde_json::json;
use solvers::{five_term, k_tower_abutment, sphere_abutment};
use spectral::collapse_page;
use zlinalg::FPAbGroup;

use crate::commands::{check_five_term, five_term_json, five_term_table, solve, two_row_report};
use crate::instances::{to_pretty, TwoRowInstance};
use crate::render::{bigraded, grid, group, groups, page_table};
use crate::{CliError, Report};

enum Demo {
    Couple(String, ExactCouple),
    TwoRow(&'static str, TwoRowInstance),
}

fn with_suffix(name: &str, prefix: &str, flag: Option<i64>) -> Result<Option<i64>, CliError> {
    match name.strip_prefix(prefix) {
        Some("k") | Some("r") => Ok(flag),
        Some(s) => s.parse().map(Some).map_err(|_| CliError::parse(format!("unknown demo {name:?}"))),
        None => Ok(None),
    }
}

fn resolve(name: &str, k: Option<u64>, n_max: Option<i64>, r: Option<i64>) -> Result<Demo, CliError> {
    let known = || BTreeMap::from([(0, FPAbGroup::z())]);
    if let Some(c) = demos::by_name(name) {
        return Ok(Demo::Couple(name.to_string(), c));
    }
    if name.starts_with("cyclic-") {
        let k = with_suffix(name, "cyclic-", k.map(|k| k as i64))?.ok_or_else(|| CliError::parse("cyclic-k needs --k"))?;
        if k < 2 {
            return Err(CliError::invalid(format!("the cyclic group needs order k ≥ 2, found {k}")));
        }
        let n_max = n_max.unwrap_or(9);
        return Ok(Demo::TwoRow("cyclic-k", TwoRowInstance { n_max, abutment: k_tower_abutment(k as u64), known: known() }));
    }
    if name.starts_with("cp-") {
        let r = with_suffix(name, "cp-", r)?.ok_or_else(|| CliError::parse("cp-r needs --r"))?;
        if r < 1 {
            return Err(CliError::invalid(format!("complex dimension must be ≥ 1, found {r}")));
        }
        let n_max = n_max.unwrap_or(2 * r + 2);
        return Ok(Demo::TwoRow("cp-r", TwoRowInstance { n_max, abutment: sphere_abutment(r), known: known() }));
    }
    Err(CliError::parse(format!("unknown demo {name:?}; expected couple1, couple2, couple3, cyclic-k or cp-r")))
}

/// The input file a demo runs on: a couple, or a two-row instance.
pub fn demo_input(name: &str, k: Option<u64>, n_max: Option<i64>, r: Option<i64>) -> Result<String, CliError> {
    Ok(match resolve(name, k, n_max, r)? {
        Demo::Couple(_, c) => couple_to_string(&c),
        Demo::TwoRow(_, inst) => to_pretty(&inst.to_json()),
    })
}

pub fn run(
    name: &str,
    k: Option<u64>,
    n_max: Option<i64>,
    r: Option<i64>,
    input: bool,
    budget: Option<usize>,
) -> Result<Report, CliError> {
    let mut rep = Report::default();
    if input {
        rep.raw = Some(demo_input(name, k, n_max, r)?);
        return Ok(rep);
    }
    match resolve(name, k, n_max, r)? {
        Demo::Couple(id, c) => couple_demo(&id, &c, budget, &mut rep)?,
        Demo::TwoRow(id, inst) => {
            rep.set("demo", json!(id));
            rep.set("input", inst.to_json());
            let sol = solve(&inst)?;
            two_row_report(&sol, &mut rep);
            if id == "cyclic-k" {
                let ft = five_term(&sol.ss, &inst.abutment)?;
                rep.set("five_term", five_term_json(&ft));
                rep.table(&five_term_table(&ft));
                check_five_term(&ft, &mut rep);
            }
        }
    }
    Ok(rep)
}

fn couple_demo(id: &str, c: &ExactCouple, budget: Option<usize>, rep: &mut Report) -> Result<(), CliError> {
    rep.set("demo", json!(id));
    rep.set("input", couple_to_json(c));
    let (l0, lm1) = (abutments(c, 0)?, abutments(c, -1)?);
    rep.set("L_0", group(l0.colimit()));
    rep.set("L^-1", group(lm1.limit()));
    let inf = e_infinity_internal(c, budget)?;
    let einf = bigraded(*c.e().bounds(), |y| inf.get(&y).map(|d| d.quotient.group().clone()).unwrap_or_else(FPAbGroup::zero));
    rep.set("E_inf", groups(einf.iter()));
    let cl = classify(c, budget)?;
    rep.set("classification", json!(cl.label.to_string()));
    let ext = extension_report(c, (0, 0), budget)?;
    rep.set(
        "ses",
        json!({
            "sub": ext.eps_lower.invariant_string(),
            "middle": ext.e_infinity.invariant_string(),
            "quotient": ext.z_mod_j.invariant_string(),
            "exact": ext.infinity_exact,
        }),
    );
    let ss = to_spectral_sequence(c)?;
    let e1 = &ss.pages()[0].groups;
    rep.set("E1", groups(e1.iter()));
    rep.set("collapses_on", json!(collapse_page(&ss)));
    rep.table(&page_table("E^1 (all differentials zero)", e1));
    rep.table(&grid(&[
        vec!["".to_string(), "group".into()],
        vec!["L_0 = colim D(0)".into(), l0.colimit().to_string()],
        vec!["L^-1 = lim D(-1)".into(), lm1.limit().to_string()],
        vec!["E^inf_{0,0}".into(), einf.get((0, 0)).to_string()],
        vec!["extension".into(), format!("{} -> {} -> {}", ext.eps_lower, ext.e_infinity, ext.z_mod_j)],
        vec!["class".into(), cl.label.to_string()],
    ]));
    if !ext.holds() {
        rep.fail("extension data at (0, 0) fails", json!({"x": [0, 0]}));
    }
    Ok(())
}
