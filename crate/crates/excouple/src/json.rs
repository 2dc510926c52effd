//! Couples as JSON:
//!
//! ```text
//! {"bidegrees": {"a": [p, q], "b": [p, q], "c": [p, q]},
//!  "support": [[pmin, pmax], [qmin, qmax]],
//!  "D": {"p,q": group}, "E": {"p,q": group},
//!  "i": {"p,q": hom}, "j": {"p,q": hom}, "k": {"p,q": hom},
//!  "diagonal_tails": {"n": ["zero" | "constant", "zero" | "constant"]}}
//! ```
//!
//! `D` lists every window position of every diagonal; `i`, `j`, `k` list the
//! non-zero maps by source position.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};
use spectral::json::{bounds_from_json, bounds_to_json, pos_from_json, pos_to_json};
use spectral::{add, parse_pos_key, pos_key, Pos};
use zdiagrams::TailSpec;
use zlinalg::json::{group_from_json, group_to_json, hom_to_json, matrix_from_json};
use zlinalg::{FPAbGroup, Hom};

use crate::{Bidegrees, ExactCouple, ExcoupleError};

fn err(msg: impl Into<String>) -> ExcoupleError {
    ExcoupleError::Parse(msg.into())
}

pub fn couple_to_json(c: &ExactCouple) -> Value {
    let bd = c.bidegrees();
    let mut d = Map::new();
    let mut i = Map::new();
    let mut tails = Map::new();
    for (&n, diag) in c.diagonals() {
        for r in diag.p0()..=diag.p1() {
            let x = bd.pos(n, r);
            d.insert(pos_key(x), group_to_json(&diag.group_at(r)));
            if r < diag.p1() && !diag.map_at(r).is_zero() {
                i.insert(pos_key(x), hom_to_json(&diag.map_at(r)));
            }
        }
        tails.insert(n.to_string(), json!([diag.left().name(), diag.right().name()]));
    }
    let e: Map<String, Value> = c.e().iter().map(|(x, g)| (pos_key(x), group_to_json(g))).collect();
    let maps = |m: &BTreeMap<Pos, Hom>| -> Map<String, Value> { m.iter().map(|(&x, h)| (pos_key(x), hom_to_json(h))).collect() };
    json!({
        "bidegrees": {"a": pos_to_json(bd.a), "b": pos_to_json(bd.b), "c": pos_to_json(bd.c)},
        "support": bounds_to_json(c.support()),
        "D": d,
        "E": e,
        "i": i,
        "j": maps(c.j_maps()),
        "k": maps(c.k_maps()),
        "diagonal_tails": tails,
    })
}

/// Pretty-printed JSON with a trailing newline.
pub fn couple_to_string(c: &ExactCouple) -> String {
    let mut s = serde_json::to_string_pretty(&couple_to_json(c)).expect("values serialize");
    s.push('\n');
    s
}

fn object<'a>(v: &'a Value, key: &str) -> Result<Option<&'a Map<String, Value>>, ExcoupleError> {
    match v.get(key) {
        None | Some(Value::Null) => Ok(None),
        Some(Value::Object(m)) => Ok(Some(m)),
        Some(other) => Err(err(format!("\"{key}\" must be an object, found {other}"))),
    }
}

fn positions<'a>(v: &'a Value, key: &str) -> Result<Vec<(Pos, &'a Value)>, ExcoupleError> {
    let Some(m) = object(v, key)? else { return Ok(Vec::new()) };
    m.iter()
        .map(|(k, val)| Ok((parse_pos_key(k).ok_or_else(|| err(format!("bad position key {k:?} in \"{key}\"")))?, val)))
        .collect()
}

fn groups(v: &Value, key: &str) -> Result<BTreeMap<Pos, FPAbGroup>, ExcoupleError> {
    positions(v, key)?
        .into_iter()
        .map(|(x, g)| Ok((x, group_from_json(g).map_err(|e| err(format!("{key} at {x:?}: {e}")))?)))
        .collect()
}

fn homs(
    v: &Value,
    key: &str,
    dom: impl Fn(Pos) -> FPAbGroup,
    cod: impl Fn(Pos) -> FPAbGroup,
) -> Result<BTreeMap<Pos, Hom>, ExcoupleError> {
    positions(v, key)?
        .into_iter()
        .map(|(x, h)| {
            let (d, c) = (dom(x), cod(x));
            let m = h.get("matrix").unwrap_or(h);
            let m = matrix_from_json(m, c.ngens(), d.ngens()).map_err(|e| err(format!("{key} at {x:?}: {e}")))?;
            let f = Hom::new(d, c, m).map_err(|e| ExcoupleError::InvalidInput(format!("{key} at {x:?}: {e}")))?;
            Ok((x, f))
        })
        .collect()
}

pub fn couple_from_json(v: &Value) -> Result<ExactCouple, ExcoupleError> {
    if !v.is_object() {
        return Err(err("a couple must be a JSON object"));
    }
    let bv = v.get("bidegrees").ok_or_else(|| err("missing \"bidegrees\""))?;
    let vec = |k: &str| -> Result<Pos, ExcoupleError> {
        pos_from_json(bv.get(k).ok_or_else(|| err(format!("missing bidegree \"{k}\"")))?).map_err(|e| err(e.to_string()))
    };
    let bd = Bidegrees::new(vec("a")?, vec("b")?, vec("c")?);
    let support = bounds_from_json(v.get("support").ok_or_else(|| err("missing \"support\""))?)
        .map_err(|e| err(e.to_string()))?;
    let d = groups(v, "D")?;
    let e = groups(v, "E")?;
    let dg = |x: Pos| d.get(&x).cloned().unwrap_or_else(FPAbGroup::zero);
    let eg = |x: Pos| e.get(&x).cloned().unwrap_or_else(FPAbGroup::zero);
    let i = homs(v, "i", dg, |x| dg(add(x, bd.a)))?;
    let j = homs(v, "j", dg, |x| eg(add(x, bd.b)))?;
    let k = homs(v, "k", eg, |x| dg(add(x, bd.c)))?;
    let mut tails = BTreeMap::new();
    if let Some(m) = object(v, "diagonal_tails")? {
        for (key, t) in m {
            let n: i64 = key.parse().map_err(|_| err(format!("bad diagonal index {key:?}")))?;
            let pair = t.as_array().filter(|a| a.len() == 2).ok_or_else(|| err(format!("tails of {n} must be a pair")))?;
            let spec = |w: &Value| {
                w.as_str().and_then(TailSpec::parse).ok_or_else(|| err(format!("bad tail {w} for diagonal {n}")))
            };
            tails.insert(n, (spec(&pair[0])?, spec(&pair[1])?));
        }
    }
    ExactCouple::new(bd, support, d, e, i, j, k, tails)
}

pub fn couple_from_str(s: &str) -> Result<ExactCouple, ExcoupleError> {
    let v: Value = serde_json::from_str(s).map_err(|e| err(e.to_string()))?;
    couple_from_json(&v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::demos;

    #[test]
    fn demo_round_trip() {
        for c in [demos::couple1(), demos::couple2(), demos::couple3()] {
            let s = couple_to_string(&c);
            let back = couple_from_str(&s).unwrap();
            assert_eq!(back, c);
            assert_eq!(couple_to_string(&back), s);
        }
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(couple_from_str("[1]"), Err(ExcoupleError::Parse(_))));
        assert!(matches!(couple_from_str("{\"bidegrees\": {}}"), Err(ExcoupleError::Parse(_))));
        let bad = couple_to_string(&demos::couple1()).replace("\"0,0\"", "\"zero\"");
        assert!(matches!(couple_from_str(&bad), Err(ExcoupleError::Parse(_))));
    }
}
