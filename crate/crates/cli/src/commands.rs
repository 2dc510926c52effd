use std::collections::BTreeMap;
use std::path::Path;

use excouple::json::{couple_from_json, couple_from_str, couple_to_json};
use excouple::{
    abutments, canonical_t, classify, compare_abutments, e_infinity_internal, extension_report, reindex, stable_e,
    to_spectral_sequence, zeeman_check, CoupleMorphism, ExactCouple, Mat2, ZeemanSetup, ZeemanVariant,
};
use serde_json::{json, Value};
use solvers::{five_term, two_row_solve, FiveTerm, RowPairShape, TwoRowSolution};
use spectral::json::{abutment_from_json, ss_from_json};
use spectral::{collapse_page, parse_pos_key, pos_key, FilteredAbutment, Pos, SSMorphism, SpectralSequence};
use zdiagrams::{Verdict, ZRule};
use zlinalg::json::hom_from_json;
use zlinalg::{FPAbGroup, Hom};

use crate::instances::{parse_json, TwoRowInstance};
use crate::render::{bigraded, grid, group, groups, hom, object, page_table, pos};
use crate::{demo, CliError, Command, Report};

pub fn dispatch(cmd: &Command, budget: Option<usize>) -> Result<Report, CliError> {
    match cmd {
        Command::Validate { file } => validate(&load_couple(file)?),
        Command::Pages { file, to } => pages(&load_couple(file)?, *to),
        Command::Einf { file } => einf(&load_couple(file)?, budget),
        Command::Abutments { file, n } => abutment_report(&load_couple(file)?, *n),
        Command::ExtensionReport { file, x } => extension(&load_couple(file)?, *x, budget),
        Command::Classify { file } => classification(&load_couple(file)?, budget),
        Command::Reindex { file, matrix } => reindexed(&load_couple(file)?, matrix.as_deref()),
        Command::Compare { file, rule, n } => compare(&read(file)?, rule, *n),
        Command::Zeeman { file, setup } => zeeman(&read(file)?, setup),
        Command::SolveTwoRow { file } => solve_two_row(&read(file)?),
        Command::FiveTerm { file } => five_terms(&read(file)?),
        Command::Demo { name, k, n_max, r, input } => demo::run(name, *k, *n_max, *r, *input, budget),
    }
}

pub fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::parse(format!("cannot read {}: {e}", path.display())))
}

fn load_couple(path: &Path) -> Result<ExactCouple, CliError> {
    Ok(couple_from_str(&read(path)?)?)
}

fn bidegrees(c: &ExactCouple) -> Value {
    let bd = c.bidegrees();
    json!({"a": pos(bd.a), "b": pos(bd.b), "c": pos(bd.c)})
}

fn e1_table(c: &ExactCouple) -> String {
    page_table("E^1", c.e())
}

fn validate(c: &ExactCouple) -> Result<Report, CliError> {
    c.validate()?;
    let mut r = Report::default();
    r.set("valid", json!(true));
    r.set("bidegrees", bidegrees(c));
    r.set("sigma", json!(c.bidegrees().sigma()));
    r.set("E", groups(c.e().iter()));
    r.table(&e1_table(c));
    Ok(r)
}

fn pages(c: &ExactCouple, to: i64) -> Result<Report, CliError> {
    let ss = to_spectral_sequence(c)?;
    let b = *ss.bounds();
    let mut r = Report::default();
    let mut list = Vec::new();
    for page in ss.r0()..=to.max(ss.r0()) {
        let g = bigraded(b, |x| ss.group(page, x));
        let diffs: serde_json::Map<String, Value> = b
            .positions()
            .filter_map(|x| {
                let d = ss.d(page, x);
                (!d.is_zero()).then(|| (pos_key(x), hom(&d)))
            })
            .collect();
        let v = ss.v(page);
        r.table(&page_table(&format!("E^{page}, d^{page} of bidegree ({}, {})", v.0, v.1), &g));
        list.push(json!({"r": page, "v": pos(v), "groups": groups(g.iter()), "differentials": diffs}));
    }
    r.set("pages", Value::Array(list));
    r.set("collapses_on", json!(collapse_page(&ss)));
    Ok(r)
}

fn einf(c: &ExactCouple, budget: Option<usize>) -> Result<Report, CliError> {
    let inf = e_infinity_internal(c, budget)?;
    let mut stable = BTreeMap::new();
    let mut equal = true;
    for &y in inf.keys() {
        let s = stable_e(c, y, budget)?;
        equal &= s.inclusion.is_iso();
        stable.insert(y, s.group.clone());
    }
    let b = *c.e().bounds();
    let g = bigraded(b, |y| inf.get(&y).map(|d| d.quotient.group().clone()).unwrap_or_else(FPAbGroup::zero));
    let mut r = Report::default();
    r.set("einf", groups(g.iter()));
    r.set("stable", groups(stable.iter().map(|(y, g)| (*y, g))));
    r.set("stable_equals_einf", json!(equal));
    r.table(&page_table("E^inf", &g));
    Ok(r)
}

fn graded(items: &[(Pos, FPAbGroup)]) -> Value {
    groups(items.iter().map(|(x, g)| (*x, g)))
}

fn abutment_report(c: &ExactCouple, n: i64) -> Result<Report, CliError> {
    let a = abutments(c, n)?;
    let mut r = Report::default();
    r.set("n", json!(n));
    r.set("colimit", group(a.colimit()));
    r.set("limit", group(a.limit()));
    r.set("lim1", group(a.lim1()));
    let (lower, upper) = (a.lower_graded(c), a.upper_graded(c));
    r.set("lower_graded", graded(&lower));
    r.set("upper_graded", graded(&upper));
    let mut rows = vec![vec![format!("D({n})"), "group".to_string()]];
    rows.push(vec!["colim".into(), a.colimit().to_string()]);
    rows.push(vec!["lim".into(), a.limit().to_string()]);
    rows.push(vec!["lim1".into(), a.lim1().to_string()]);
    for (x, g) in &lower {
        rows.push(vec![format!("eps_{}", pos_key(*x)), g.to_string()]);
    }
    for (x, g) in &upper {
        rows.push(vec![format!("eps^{}", pos_key(*x)), g.to_string()]);
    }
    r.table(&grid(&rows));
    Ok(r)
}

fn extension(c: &ExactCouple, x: Pos, budget: Option<usize>) -> Result<Report, CliError> {
    let rep = extension_report(c, x, budget)?;
    let mut r = Report::default();
    r.set("x", pos(rep.x));
    r.set("y", pos(rep.y));
    r.set("w", pos(rep.w));
    r.set(
        "groups",
        object(vec![
            ("eps_lower", group(&rep.eps_lower)),
            ("stable", group(&rep.stable)),
            ("eps_upper", group(&rep.eps_upper)),
            ("e_infinity", group(&rep.e_infinity)),
            ("z_mod_j", group(&rep.z_mod_j)),
            ("lim1_diagonal", group(&rep.lim1_diagonal)),
            ("lim1_kernel", group(&rep.lim1_kernel)),
            ("lim1_tower", group(&rep.lim1_tower)),
        ]),
    );
    r.set(
        "maps",
        object(vec![
            ("lambda", hom(&rep.lambda)),
            ("mu", hom(&rep.mu)),
            ("iota", hom(&rep.iota)),
            ("kappa", hom(&rep.kappa)),
            ("m", hom(&rep.m)),
        ]),
    );
    let checks = [
        ("stable_exact", rep.stable_exact),
        ("infinity_exact", rep.infinity_exact),
        ("square_commutes", rep.square_commutes),
        ("pullback", rep.pullback),
        ("stable_is_infinity", rep.stable_is_infinity),
        ("m_iso", rep.m_iso),
        ("criterion_iii", rep.crit_iii),
        ("consistent", rep.consistent),
    ];
    r.set("checks", Value::Object(checks.iter().map(|(k, v)| (k.to_string(), json!(v))).collect()));
    r.set("holds", json!(rep.holds()));
    r.table(&grid(&[
        vec!["sequence".into(), "sub".into(), "middle".into(), "quotient".into()],
        vec!["stable".into(), rep.eps_lower.to_string(), rep.stable.to_string(), rep.eps_upper.to_string()],
        vec!["infinity".into(), rep.eps_lower.to_string(), rep.e_infinity.to_string(), rep.z_mod_j.to_string()],
    ]));
    if !rep.holds() {
        let failed: Vec<&str> = checks.iter().filter(|(_, v)| !v).map(|(k, _)| *k).collect();
        r.fail(format!("extension data at {x:?} fails"), json!({"x": pos(x), "failed": failed}));
    }
    Ok(r)
}

fn classification(c: &ExactCouple, budget: Option<usize>) -> Result<Report, CliError> {
    let cl = classify(c, budget)?;
    let mut r = Report::default();
    r.set("label", json!(cl.label.to_string()));
    r.set("label_id", json!(cl.label.id()));
    let mut rows = vec![vec!["x".to_string(), "label".into(), "eps_lower = 0".into(), "eps_upper = 0".into()]];
    let list: Vec<Value> = cl
        .positions
        .iter()
        .map(|p| {
            rows.push(vec![pos_key(p.x), p.label.to_string(), p.eps_lower_zero.to_string(), p.eps_upper_zero.to_string()]);
            json!({
                "x": pos(p.x),
                "y": pos(p.y),
                "label": p.label.to_string(),
                "eps_lower_zero": p.eps_lower_zero,
                "eps_upper_zero": p.eps_upper_zero,
                "colimit_conditions": p.colimit_conditions,
                "limit_conditions": p.limit_conditions,
            })
        })
        .collect();
    r.set("positions", Value::Array(list));
    r.table(&format!("{}\n{}", cl.label, grid(&rows)));
    Ok(r)
}

fn parse_matrix(s: &str) -> Result<Mat2, CliError> {
    let v: Vec<i64> = s
        .split(',')
        .map(|t| t.trim().parse().map_err(|_| CliError::parse(format!("bad matrix entry {t:?}"))))
        .collect::<Result<_, _>>()?;
    match v.as_slice() {
        [a, b, c, d] => Ok(Mat2([[*a, *b], [*c, *d]])),
        _ => Err(CliError::parse("--matrix takes four entries a,b,c,d")),
    }
}

fn reindexed(c: &ExactCouple, matrix: Option<&str>) -> Result<Report, CliError> {
    let t = match matrix {
        Some(s) => parse_matrix(s)?,
        None => canonical_t(c.bidegrees())?,
    };
    let moved = reindex(c, &t)?;
    let mut r = Report::default();
    r.set("matrix", json!(t.0));
    r.set("bidegrees", bidegrees(&moved));
    r.set("differential_bidegrees", json!((1..=3).map(|k| pos(moved.bidegrees().v(k))).collect::<Vec<_>>()));
    r.set("couple", couple_to_json(&moved));
    r.table(&format!("T = {t}\n{}", e1_table(&moved)));
    Ok(r)
}

fn homs_at(
    v: Option<&Value>,
    what: &str,
    dom: impl Fn(Pos) -> FPAbGroup,
    cod: impl Fn(Pos) -> FPAbGroup,
) -> Result<BTreeMap<Pos, Hom>, CliError> {
    let Some(v) = v else { return Ok(BTreeMap::new()) };
    let m = v.as_object().ok_or_else(|| CliError::parse(format!("\"{what}\" must map positions to maps")))?;
    m.iter()
        .map(|(k, h)| {
            let x = parse_pos_key(k).ok_or_else(|| CliError::parse(format!("bad position {k:?} in \"{what}\"")))?;
            let h = hom_from_json(h, &dom(x), &cod(x)).map_err(|e| CliError::parse(format!("{what} at {k}: {}", e.0)))?;
            Ok((x, h))
        })
        .collect()
}

fn verdict(v: &Verdict) -> Value {
    match v {
        Verdict::Confirmed { rule, details } => json!({"rule": rule.id(), "verdict": "confirmed", "details": details}),
        Verdict::HypothesisFailed { rule, clause } => {
            json!({"rule": rule.id(), "verdict": "hypothesis-failed", "clause": clause})
        }
        Verdict::ConclusionFailed { rule, clause } => {
            json!({"rule": rule.id(), "verdict": "conclusion-failed", "clause": clause})
        }
    }
}

/// A couple (compared with itself) or `{"source", "target", "D", "E"}`.
fn compare(text: &str, rule: &str, n: Option<i64>) -> Result<Report, CliError> {
    let rule = ZRule::parse(rule).ok_or_else(|| {
        let ids: Vec<&str> = ZRule::ALL.iter().map(|r| r.id()).collect();
        CliError::parse(format!("unknown rule {rule:?}; expected one of {}", ids.join(", ")))
    })?;
    let v = parse_json(text)?;
    let f = match v.get("source") {
        None => CoupleMorphism::identity(&couple_from_json(&v)?)?,
        Some(s) => {
            let s = couple_from_json(s)?;
            let t = match v.get("target") {
                Some(t) => couple_from_json(t)?,
                None => s.clone(),
            };
            let d = homs_at(v.get("D"), "D", |x| s.d_group(x), |x| t.d_group(x))?;
            let e = homs_at(v.get("E"), "E", |x| s.e_group(x), |x| t.e_group(x))?;
            CoupleMorphism::new(&s, &t, d, e)?
        }
    };
    let ns: Vec<i64> = match n {
        Some(n) => vec![n],
        None => f.source().diagonals().keys().copied().collect(),
    };
    let mut r = Report::default();
    let mut rows = vec![vec!["n".to_string(), "verdict".into()]];
    let mut out = Vec::new();
    for n in ns {
        let ver = compare_abutments(&f, n, rule)?;
        let mut j = verdict(&ver);
        j["n"] = json!(n);
        rows.push(vec![n.to_string(), j["verdict"].as_str().unwrap_or_default().to_string()]);
        if let Verdict::ConclusionFailed { clause, .. } = &ver {
            r.fail(format!("rule {} fails on D({n}): {clause}", rule.id()), json!({"n": n, "clause": clause}));
        }
        out.push(j);
    }
    r.set("rule", json!(rule.id()));
    r.set("diagonals", Value::Array(out));
    r.table(&format!("rule {}\n{}", rule.id(), grid(&rows)));
    Ok(r)
}

/// `{"source", "target", "map", "source_abutment", "target_abutment",
/// "abutment_maps", "variant", "edge"}`; missing target data copy the source
/// and missing maps are identities.
fn zeeman(text: &str, setup: &str) -> Result<Report, CliError> {
    let setup = ZeemanSetup::parse(setup).ok_or_else(|| CliError::parse(format!("setup must be I or II, found {setup:?}")))?;
    let v = parse_json(text)?;
    let field = |k: &str| v.get(k).ok_or_else(|| CliError::parse(format!("missing \"{k}\"")));
    let s = ss_from_json(field("source")?)?;
    let t = match v.get("target") {
        Some(t) => ss_from_json(t)?,
        None => s.clone(),
    };
    let f = match v.get("map") {
        None => SSMorphism::identity(&s)?,
        Some(m) => {
            let r0 = s.r0();
            let comps = homs_at(Some(m), "map", |x| s.group(r0, x), |x| t.group(r0, x))?;
            SSMorphism::new(&s, &t, comps)?
        }
    };
    if v.get("map").is_none() && !s.same_pages(&t) {
        return Err(CliError::invalid("without \"map\" the source and target must agree"));
    }
    let src_ab = abutment_from_json(field("source_abutment")?)?;
    let tgt_ab = match v.get("target_abutment") {
        Some(a) => abutment_from_json(a)?,
        None => src_ab.clone(),
    };
    let maps = match v.get("abutment_maps") {
        None => identities(&src_ab),
        Some(m) => {
            let m = m.as_object().ok_or_else(|| CliError::parse("\"abutment_maps\" must map degrees to maps"))?;
            m.iter()
                .map(|(k, h)| {
                    let n: i64 = k.parse().map_err(|_| CliError::parse(format!("bad degree {k:?}")))?;
                    let h = hom_from_json(h, &src_ab.group(n), &tgt_ab.group(n)).map_err(|e| CliError::parse(e.0))?;
                    Ok((n, h))
                })
                .collect::<Result<_, CliError>>()?
        }
    };
    let variant = match v.get("variant").and_then(Value::as_str).unwrap_or("row") {
        "row" => ZeemanVariant::RowEdge,
        "column" => ZeemanVariant::ColumnEdge,
        other => return Err(CliError::parse(format!("variant must be row or column, found {other:?}"))),
    };
    let edge: Box<dyn Fn(Pos) -> Vec<Pos>> = match v.get("edge").and_then(Value::as_str).unwrap_or("given") {
        "given" => Box::new(|_| Vec::new()),
        "below" => Box::new(move |(p, q)| match variant {
            ZeemanVariant::RowEdge => (0..p).map(|i| (i, 0)).collect(),
            ZeemanVariant::ColumnEdge => (0..q).map(|i| (0, i)).collect(),
        }),
        other => return Err(CliError::parse(format!("edge must be given or below, found {other:?}"))),
    };
    let rep = zeeman_check(&f, &src_ab, &tgt_ab, &maps, setup, variant, &*edge)?;
    let mut r = Report::default();
    r.set("setup", json!(format!("{:?}", rep.setup)));
    r.set("pages", json!(rep.pages.iter().map(|(p, ok)| json!({"r": p, "iso": ok})).collect::<Vec<_>>()));
    r.set("f_infinity_iso", json!(rep.f_infinity_iso));
    r.set("holds", json!(rep.holds()));
    let mut rows = vec![vec!["r".to_string(), "f^r iso".into()]];
    rows.extend(rep.pages.iter().map(|(p, ok)| vec![p.to_string(), ok.to_string()]));
    r.table(&grid(&rows));
    if let Some((page, x)) = rep.first_failure {
        r.fail(format!("f^{page} is not an isomorphism at {x:?}"), json!({"page": page, "position": pos(x)}));
    } else if !rep.f_infinity_iso {
        r.fail("f^inf is not an isomorphism", Value::Null);
    }
    Ok(r)
}

fn identities(ab: &FilteredAbutment) -> BTreeMap<i64, Hom> {
    ab.degrees.iter().map(|(&n, f)| (n, Hom::identity(f.group()))).collect()
}

pub fn solve(inst: &TwoRowInstance) -> Result<TwoRowSolution, CliError> {
    Ok(two_row_solve(&RowPairShape { known: inst.known.clone() }, &inst.abutment, inst.n_max)?)
}

pub fn two_row_report(sol: &TwoRowSolution, r: &mut Report) {
    r.set("homology", json!(sol.h.iter().map(|g| g.invariant_string()).collect::<Vec<_>>()));
    let d2: serde_json::Map<String, Value> = sol
        .d2
        .iter()
        .map(|(p, d)| (p.to_string(), json!({"matrix": hom(d)["matrix"], "iso": d.is_iso(), "zero": d.is_zero()})))
        .collect();
    r.set("d2", Value::Object(d2));
    let n = sol.h.len();
    let mut rows = vec![vec!["n".to_string()], vec!["H_n".to_string()], vec!["d2_{n,0}".to_string()]];
    for p in 0..n {
        rows[0].push(p.to_string());
        rows[1].push(sol.h[p].to_string());
        rows[2].push(match sol.d2.get(&(p as i64)) {
            None => "-".into(),
            Some(d) if d.is_zero() => "0".into(),
            Some(d) if d.is_iso() => "iso".into(),
            Some(_) => "map".into(),
        });
    }
    r.table(&grid(&rows));
    r.table(&page_table("E^2", &sol.ss.pages()[0].groups));
}

fn solve_two_row(text: &str) -> Result<Report, CliError> {
    let inst = TwoRowInstance::from_json(&parse_json(text)?)?;
    let sol = solve(&inst)?;
    let mut r = Report::default();
    two_row_report(&sol, &mut r);
    Ok(r)
}

pub fn five_term_json(ft: &FiveTerm) -> Value {
    json!({
        "terms": FiveTerm::LABELS,
        "groups": ft.groups.iter().map(|g| g.invariant_string()).collect::<Vec<_>>(),
        "maps": ft.maps.iter().map(hom).collect::<Vec<_>>(),
        "exact": ft.exact,
        "last_epi": ft.last_epi,
        "holds": ft.holds(),
    })
}

pub fn five_term_table(ft: &FiveTerm) -> String {
    let mut rows = vec![vec!["term".to_string()], vec!["group".to_string()]];
    for (l, g) in FiveTerm::LABELS.iter().zip(&ft.groups) {
        rows[0].push(l.to_string());
        rows[1].push(g.to_string());
    }
    grid(&rows)
}

pub fn check_five_term(ft: &FiveTerm, r: &mut Report) {
    if !ft.holds() {
        r.fail("the five-term sequence is not exact", json!({"exact": ft.exact, "last_epi": ft.last_epi}));
    }
}

/// `{"ss", "abutment"}` or a two-row instance, solved first.
fn five_terms(text: &str) -> Result<Report, CliError> {
    let v = parse_json(text)?;
    let (ss, ab): (SpectralSequence, FilteredAbutment) = match v.get("ss") {
        Some(s) => {
            let ab = abutment_from_json(v.get("abutment").ok_or_else(|| CliError::parse("missing \"abutment\""))?)?;
            (ss_from_json(s)?, ab)
        }
        None => {
            let inst = TwoRowInstance::from_json(&v)?;
            (solve(&inst)?.ss, inst.abutment)
        }
    };
    let ft = five_term(&ss, &ab)?;
    let mut r = Report::default();
    r.set("five_term", five_term_json(&ft));
    r.table(&five_term_table(&ft));
    check_five_term(&ft, &mut r);
    Ok(r)
}
