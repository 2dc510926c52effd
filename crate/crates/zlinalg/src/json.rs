//! JSON encodings of integers, matrices, groups, elements and homomorphisms.
//!
//! Integers are JSON numbers when they fit in an `i64` and decimal strings
//! otherwise. Groups are `{"rank": n, "torsion": [d₁, ...]}` in canonical
//! form, or `{"presentation": [[...], ...], "generators": n}` with one row per
//! relation. Homomorphisms are `{"matrix": [[...], ...]}`, one row per
//! codomain generator, on canonical generators (free part first, then torsion
//! in divisibility order).

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::{subquotient, Elem, FPAbGroup, Hom, IntMatrix, Lattice, Subgroup};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{0}")]
pub struct JsonError(pub String);

impl JsonError {
    pub fn new(msg: impl Into<String>) -> Self {
        JsonError(msg.into())
    }
}

pub type JsonResult<T> = Result<T, JsonError>;

pub fn int_to_json(v: &BigInt) -> Value {
    match v.to_i64() {
        Some(i) => json!(i),
        None => Value::String(v.to_string()),
    }
}

pub fn int_from_json(v: &Value) -> JsonResult<BigInt> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| JsonError::new(format!("expected an integer, found {n}"))),
        Value::String(s) => s.parse().map_err(|_| JsonError::new(format!("expected an integer, found {s:?}"))),
        other => Err(JsonError::new(format!("expected an integer, found {other}"))),
    }
}

pub fn usize_from_json(v: &Value) -> JsonResult<usize> {
    v.as_u64()
        .and_then(|x| usize::try_from(x).ok())
        .ok_or_else(|| JsonError::new(format!("expected a non-negative count, found {v}")))
}

pub fn i64_from_json(v: &Value) -> JsonResult<i64> {
    v.as_i64().ok_or_else(|| JsonError::new(format!("expected a machine integer, found {v}")))
}

pub fn elem_to_json(x: &[BigInt]) -> Value {
    Value::Array(x.iter().map(int_to_json).collect())
}

pub fn elem_from_json(v: &Value) -> JsonResult<Elem> {
    v.as_array()
        .ok_or_else(|| JsonError::new(format!("expected an integer list, found {v}")))?
        .iter()
        .map(int_from_json)
        .collect()
}

pub fn matrix_to_json(m: &IntMatrix) -> Value {
    Value::Array((0..m.rows()).map(|i| elem_to_json(&m.row(i))).collect())
}

/// Parses a list of rows and checks it against the expected shape.
pub fn matrix_from_json(v: &Value, rows: usize, cols: usize) -> JsonResult<IntMatrix> {
    let arr = v.as_array().ok_or_else(|| JsonError::new("matrix must be a list of rows"))?;
    if arr.len() != rows {
        return Err(JsonError::new(format!("matrix has {} rows, expected {rows}", arr.len())));
    }
    let parsed = arr.iter().map(elem_from_json).collect::<JsonResult<Vec<_>>>()?;
    IntMatrix::from_rows(cols, &parsed).map_err(|e| JsonError::new(e.to_string()))
}

pub fn group_to_json(g: &FPAbGroup) -> Value {
    if g.is_canonical() {
        json!({
            "rank": g.rank(),
            "torsion": g.torsion().iter().map(int_to_json).collect::<Vec<_>>(),
        })
    } else {
        json!({
            "presentation": matrix_to_json(&g.presentation()),
            "generators": g.ngens(),
        })
    }
}

pub fn group_from_json(v: &Value) -> JsonResult<FPAbGroup> {
    let obj = v.as_object().ok_or_else(|| JsonError::new(format!("group must be an object, found {v}")))?;
    if let Some(p) = obj.get("presentation") {
        return presentation_from_json(p, obj);
    }
    let rank = match obj.get("rank") {
        Some(r) => usize_from_json(r)?,
        None => 0,
    };
    let torsion = match obj.get("torsion") {
        Some(t) => elem_from_json(t)?,
        None => Vec::new(),
    };
    FPAbGroup::from_invariants(rank, &torsion).map_err(|e| JsonError::new(e.to_string()))
}

fn presentation_from_json(p: &Value, obj: &Map<String, Value>) -> JsonResult<FPAbGroup> {
    let rows = p.as_array().ok_or_else(|| JsonError::new("presentation must be a list of rows"))?;
    let rows = rows.iter().map(elem_from_json).collect::<JsonResult<Vec<_>>>()?;
    let n = match obj.get("generators") {
        Some(g) => usize_from_json(g)?,
        None => rows.first().map(|r| r.len()).ok_or_else(|| {
            JsonError::new("an empty presentation needs a \"generators\" count")
        })?,
    };
    if rows.iter().any(|r| r.len() != n) {
        return Err(JsonError::new(format!("presentation rows must have {n} entries")));
    }
    // a diagonal presentation with distinct generators of order ≥ 2 keeps its generators
    let mut orders = vec![BigInt::zero(); n];
    let mut diagonal = true;
    for r in &rows {
        let nz: Vec<usize> = (0..n).filter(|&i| !r[i].is_zero()).collect();
        match nz.as_slice() {
            [] => {}
            [i] if orders[*i].is_zero() && r[*i].magnitude() >= &2u32.into() => {
                orders[*i] = BigInt::from(r[*i].magnitude().clone());
            }
            _ => diagonal = false,
        }
    }
    if diagonal {
        return FPAbGroup::new(orders).map_err(|e| JsonError::new(e.to_string()));
    }
    let free = FPAbGroup::from_invariants(n, &[]).map_err(|e| JsonError::new(e.to_string()))?;
    let rel = Subgroup::from_generators(&free, &rows);
    let q = subquotient(&Subgroup::whole(&free), &rel).map_err(|e| JsonError::new(e.to_string()))?;
    Ok(q.group().clone())
}

pub fn hom_to_json(h: &Hom) -> Value {
    json!({ "matrix": matrix_to_json(h.matrix()) })
}

/// Accepts `{"matrix": rows}` or a bare list of rows.
pub fn hom_from_json(v: &Value, dom: &FPAbGroup, cod: &FPAbGroup) -> JsonResult<Hom> {
    let m = match v.get("matrix") {
        Some(m) => m,
        None => v,
    };
    let m = matrix_from_json(m, cod.ngens(), dom.ngens())?;
    Hom::new(dom.clone(), cod.clone(), m).map_err(|e| JsonError::new(e.to_string()))
}

pub fn lattice_to_json(l: &Lattice) -> Value {
    Value::Array(l.basis().iter().map(|b| elem_to_json(b)).collect())
}

/// A subgroup as its list of non-trivial generators.
pub fn subgroup_to_json(s: &Subgroup) -> Value {
    Value::Array(s.generators().iter().map(|g| elem_to_json(g)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elem;

    #[test]
    fn big_integers_become_strings() {
        let big: BigInt = "123456789012345678901234567890".parse().unwrap();
        let v = int_to_json(&big);
        assert!(v.is_string());
        assert_eq!(int_from_json(&v).unwrap(), big);
        assert_eq!(int_to_json(&BigInt::from(-7)), json!(-7));
    }

    #[test]
    fn group_round_trip() {
        let g = FPAbGroup::from_invariants_i64(1, &[2, 6]).unwrap();
        assert_eq!(group_from_json(&group_to_json(&g)).unwrap(), g);
        let h = FPAbGroup::z_mod(2).direct_sum(&FPAbGroup::z_mod(3));
        assert_eq!(group_from_json(&group_to_json(&h)).unwrap(), h);
    }

    #[test]
    fn non_diagonal_presentation_is_canonicalized() {
        let g = group_from_json(&json!({"presentation": [[2, 4], [6, 8]]})).unwrap();
        assert_eq!(g, FPAbGroup::from_invariants_i64(0, &[2, 4]).unwrap());
        let z = group_from_json(&json!({"presentation": [], "generators": 1})).unwrap();
        assert_eq!(z, FPAbGroup::z());
    }

    #[test]
    fn hom_round_trip() {
        let z = FPAbGroup::z();
        let z6 = FPAbGroup::z_mod(6);
        let h = Hom::from_i64(&z, &z6, &[vec![5]]).unwrap();
        assert_eq!(hom_from_json(&hom_to_json(&h), &z, &z6).unwrap(), h);
        assert!(hom_from_json(&json!([[1, 2]]), &z, &z6).is_err());
        assert_eq!(elem_from_json(&elem_to_json(&elem(&[1, -2]))).unwrap(), elem(&[1, -2]));
    }
}
