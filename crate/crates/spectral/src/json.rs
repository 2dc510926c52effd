//! Spectral sequences as JSON: `{"r0", "bounds", "bidegree_rule", "page",
//! "differentials"}`. Positions are keys `"p,q"` or pairs `[p, q]`; the page
//! holds `E^{r0}`, and each differential names its page, so later
//! differentials are read against the computed canonical generators.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};
use zlinalg::json::{
    elem_from_json, group_from_json, group_to_json, hom_from_json, i64_from_json, matrix_to_json, subgroup_to_json,
    JsonError,
};
use zlinalg::{Hom, Subgroup};

use crate::{
    add, parse_pos_key, pos_key, BidegreeRule, BigradedGroup, Bounds, FilteredAbutment, Filtration, Pos, SpecError,
    SpectralSequence,
};

fn err(msg: impl Into<String>) -> SpecError {
    SpecError::Parse(msg.into())
}

impl From<JsonError> for SpecError {
    fn from(e: JsonError) -> Self {
        SpecError::Parse(e.0)
    }
}

pub fn pos_to_json(x: Pos) -> Value {
    json!([x.0, x.1])
}

pub fn pos_from_json(v: &Value) -> Result<Pos, SpecError> {
    match v {
        Value::String(s) => parse_pos_key(s).ok_or_else(|| err(format!("bad position {s:?}"))),
        Value::Array(a) if a.len() == 2 => Ok((i64_from_json(&a[0])?, i64_from_json(&a[1])?)),
        _ => Err(err(format!("bad position {v}"))),
    }
}

pub fn bounds_to_json(b: &Bounds) -> Value {
    json!([[b.p.0, b.p.1], [b.q.0, b.q.1]])
}

pub fn bounds_from_json(v: &Value) -> Result<Bounds, SpecError> {
    let pair = |w: &Value| -> Result<(i64, i64), SpecError> {
        match w.as_array().map(|a| a.as_slice()) {
            Some([a, b]) => Ok((i64_from_json(a)?, i64_from_json(b)?)),
            _ => Err(err("bounds must be [[pmin, pmax], [qmin, qmax]]")),
        }
    };
    match v.as_array().map(|a| a.as_slice()) {
        Some([p, q]) => Bounds::new(pair(p)?, pair(q)?),
        _ => Err(err("bounds must be [[pmin, pmax], [qmin, qmax]]")),
    }
}

pub fn rule_to_json(rule: &BidegreeRule) -> Value {
    match rule {
        BidegreeRule::Explicit(list) => {
            json!({"kind": "explicit", "list": list.iter().map(|&v| pos_to_json(v)).collect::<Vec<_>>()})
        }
        other => json!({"kind": other.kind()}),
    }
}

pub fn rule_from_json(v: &Value) -> Result<BidegreeRule, SpecError> {
    let kind = v.get("kind").and_then(Value::as_str).ok_or_else(|| err("bidegree_rule needs a \"kind\""))?;
    match kind {
        "homological" => Ok(BidegreeRule::Homological),
        "cohomological" => Ok(BidegreeRule::Cohomological),
        "explicit" => {
            let list = v
                .get("list")
                .and_then(Value::as_array)
                .ok_or_else(|| err("explicit bidegree_rule needs a \"list\""))?;
            if list.is_empty() {
                return Err(err("explicit bidegree list is empty"));
            }
            Ok(BidegreeRule::Explicit(list.iter().map(pos_from_json).collect::<Result<_, _>>()?))
        }
        other => Err(err(format!("unknown bidegree kind {other:?}"))),
    }
}

pub fn bigraded_to_json(g: &BigradedGroup) -> Value {
    let mut m = Map::new();
    for (x, grp) in g.iter() {
        m.insert(pos_key(x), group_to_json(grp));
    }
    Value::Object(m)
}

pub fn bigraded_from_json(v: &Value, bounds: Bounds) -> Result<BigradedGroup, SpecError> {
    let obj = v.as_object().ok_or_else(|| err("page must map \"p,q\" to groups"))?;
    let mut groups = BTreeMap::new();
    for (k, g) in obj {
        let x = parse_pos_key(k).ok_or_else(|| err(format!("bad position key {k:?}")))?;
        groups.insert(x, group_from_json(g)?);
    }
    BigradedGroup::new(bounds, groups)
}

pub fn ss_to_json(ss: &SpectralSequence) -> Value {
    let mut diffs = Vec::new();
    for page in ss.pages() {
        for (x, d) in &page.diffs {
            diffs.push(json!({"page": page.r, "at": pos_to_json(*x), "matrix": matrix_to_json(d.matrix())}));
        }
    }
    json!({
        "r0": ss.r0(),
        "bounds": bounds_to_json(ss.bounds()),
        "bidegree_rule": rule_to_json(ss.rule()),
        "page": bigraded_to_json(&ss.pages()[0].groups),
        "differentials": diffs,
    })
}

pub fn ss_from_json(v: &Value) -> Result<SpectralSequence, SpecError> {
    let r0 = i64_from_json(v.get("r0").ok_or_else(|| err("missing \"r0\""))?)?;
    let bounds = bounds_from_json(v.get("bounds").ok_or_else(|| err("missing \"bounds\""))?)?;
    let rule = rule_from_json(v.get("bidegree_rule").ok_or_else(|| err("missing \"bidegree_rule\""))?)?;
    let page = bigraded_from_json(v.get("page").ok_or_else(|| err("missing \"page\""))?, bounds)?;
    let mut raw: BTreeMap<i64, Vec<(Pos, Value)>> = BTreeMap::new();
    if let Some(ds) = v.get("differentials") {
        for d in ds.as_array().ok_or_else(|| err("\"differentials\" must be a list"))? {
            let r = match d.get("page") {
                Some(r) => i64_from_json(r)?,
                None => r0,
            };
            if r < r0 {
                return Err(err(format!("differential on page {r} before r0 = {r0}")));
            }
            let at = pos_from_json(d.get("at").ok_or_else(|| err("differential needs \"at\""))?)?;
            let m = d.get("matrix").ok_or_else(|| err("differential needs \"matrix\""))?.clone();
            raw.entry(r).or_default().push((at, m));
        }
    }
    let parse = |groups: &BigradedGroup, v_r: Pos, items: Vec<(Pos, Value)>| -> Result<BTreeMap<Pos, Hom>, SpecError> {
        let mut out = BTreeMap::new();
        for (x, m) in items {
            let h = hom_from_json(&m, &groups.get(x), &groups.get(add(x, v_r)))?;
            out.insert(x, h);
        }
        Ok(out)
    };
    let last = raw.keys().next_back().copied().unwrap_or(r0);
    let first = parse(&page, rule.v(r0, r0), raw.remove(&r0).unwrap_or_default())?;
    let mut ss = SpectralSequence::new(r0, rule, page, first)?;
    while ss.last_page().r < last {
        let r = ss.last_page().r + 1;
        let v_r = ss.v(r);
        let items = raw.remove(&r).unwrap_or_default();
        ss.turn_with(|groups, _| parse(groups, v_r, items))?;
    }
    ss.complete()?;
    Ok(ss)
}

/// `{"group", "lo", "steps": [generators of F_lo, F_lo+1, …]}`.
pub fn filtration_to_json(f: &Filtration) -> Value {
    let steps: Vec<Value> = (f.lo()..=f.hi()).map(|p| subgroup_to_json(&f.at(p))).collect();
    json!({"group": group_to_json(f.group()), "lo": f.lo(), "steps": steps})
}

pub fn filtration_from_json(v: &Value) -> Result<Filtration, SpecError> {
    let g = group_from_json(v.get("group").ok_or_else(|| err("filtration needs \"group\""))?)?;
    let lo = i64_from_json(v.get("lo").ok_or_else(|| err("filtration needs \"lo\""))?)?;
    let steps = v.get("steps").and_then(Value::as_array).ok_or_else(|| err("filtration needs a \"steps\" list"))?;
    let mut subs = Vec::new();
    for s in steps {
        let gens = s.as_array().ok_or_else(|| err("a filtration step is a list of generators"))?;
        let gens = gens.iter().map(elem_from_json).collect::<Result<Vec<_>, _>>()?;
        if gens.iter().any(|x| x.len() != g.ngens()) {
            return Err(err(format!("generators must have {} entries", g.ngens())));
        }
        subs.push(Subgroup::from_generators(&g, &gens));
    }
    Filtration::new(g, lo, subs)
}

/// `{"n": filtration}`.
pub fn abutment_to_json(ab: &FilteredAbutment) -> Value {
    Value::Object(ab.degrees.iter().map(|(n, f)| (n.to_string(), filtration_to_json(f))).collect())
}

pub fn abutment_from_json(v: &Value) -> Result<FilteredAbutment, SpecError> {
    let m = v.as_object().ok_or_else(|| err("an abutment is an object keyed by degree"))?;
    let mut ab = FilteredAbutment::new();
    for (k, f) in m {
        let n: i64 = k.parse().map_err(|_| err(format!("bad degree {k:?}")))?;
        ab.insert(n, filtration_from_json(f)?);
    }
    Ok(ab)
}

#[cfg(test)]
mod tests {
    use super::*;
    use zlinalg::FPAbGroup;

    #[test]
    fn round_trip() {
        let b = Bounds::new((0, 2), (0, 1)).unwrap();
        let z = FPAbGroup::z();
        let g = BigradedGroup::new(b, [((2, 0), z.clone()), ((0, 1), z.clone())].into()).unwrap();
        let d = Hom::from_i64(&z, &z, &[vec![4]]).unwrap();
        let ss = SpectralSequence::build(2, BidegreeRule::Homological, g, [(2, [((2, 0), d)].into())].into()).unwrap();
        let v = ss_to_json(&ss);
        let back = ss_from_json(&v).unwrap();
        assert!(back.same_pages(&ss));
        assert_eq!(serde_json::to_string(&ss_to_json(&back)).unwrap(), serde_json::to_string(&v).unwrap());
    }

    #[test]
    fn abutment_round_trip() {
        let z = FPAbGroup::z();
        let mut ab = FilteredAbutment::new();
        ab.insert(1, Filtration::new(z.clone(), 0, vec![Subgroup::from_generators(&z, &[zlinalg::elem(&[3])]), Subgroup::whole(&z)]).unwrap());
        ab.insert(0, Filtration::trivial(z, 0));
        let v = abutment_to_json(&ab);
        assert_eq!(abutment_from_json(&v).unwrap(), ab);
        assert!(abutment_from_json(&json!({"x": {}})).is_err());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(ss_from_json(&json!({"r0": 1})).is_err());
        let v = json!({"r0": 1, "bounds": [[0, 1], [0, 0]], "bidegree_rule": {"kind": "sideways"}, "page": {}});
        assert!(matches!(ss_from_json(&v), Err(SpecError::Parse(_))));
    }
}
