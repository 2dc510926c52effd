//! Input files other than couples.

use std::collections::BTreeMap;

use serde_json::{json, Value};
use spectral::json::{abutment_from_json, abutment_to_json};
use spectral::FilteredAbutment;
use zlinalg::json::{group_from_json, group_to_json, i64_from_json};
use zlinalg::FPAbGroup;

use crate::CliError;

/// `{"N": max degree, "abutment": {...}, "known": {"p": group}}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoRowInstance {
    pub n_max: i64,
    pub abutment: FilteredAbutment,
    pub known: BTreeMap<i64, FPAbGroup>,
}

impl TwoRowInstance {
    pub fn to_json(&self) -> Value {
        let known: serde_json::Map<String, Value> =
            self.known.iter().map(|(p, g)| (p.to_string(), group_to_json(g))).collect();
        json!({"N": self.n_max, "abutment": abutment_to_json(&self.abutment), "known": known})
    }

    pub fn from_json(v: &Value) -> Result<Self, CliError> {
        let n_max = i64_from_json(v.get("N").ok_or_else(|| CliError::parse("two-row instance needs \"N\""))?)
            .map_err(|e| CliError::parse(e.0))?;
        let abutment = abutment_from_json(v.get("abutment").ok_or_else(|| CliError::parse("missing \"abutment\""))?)?;
        let mut known = BTreeMap::new();
        if let Some(k) = v.get("known") {
            let m = k.as_object().ok_or_else(|| CliError::parse("\"known\" must map degrees to groups"))?;
            for (p, g) in m {
                let p: i64 = p.parse().map_err(|_| CliError::parse(format!("bad degree {p:?}")))?;
                known.insert(p, group_from_json(g).map_err(|e| CliError::parse(e.0))?);
            }
        }
        Ok(TwoRowInstance { n_max, abutment, known })
    }
}

pub fn to_pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

pub fn parse_json(text: &str) -> Result<Value, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::parse(format!("invalid JSON: {e}")))
}
