use serde_json::{json, Map, Value};
use spectral::{pos_key, BigradedGroup, Bounds, Pos};
use zlinalg::json::matrix_to_json;
use zlinalg::{FPAbGroup, Hom};

pub fn group(g: &FPAbGroup) -> Value {
    Value::String(g.invariant_string())
}

pub fn groups<'a>(items: impl IntoIterator<Item = (Pos, &'a FPAbGroup)>) -> Value {
    Value::Object(items.into_iter().map(|(x, g)| (pos_key(x), group(g))).collect())
}

pub fn hom(h: &Hom) -> Value {
    json!({
        "matrix": matrix_to_json(h.matrix()),
        "domain": h.domain().invariant_string(),
        "codomain": h.codomain().invariant_string(),
    })
}

pub fn pos(x: Pos) -> Value {
    json!([x.0, x.1])
}

pub fn object(pairs: Vec<(&str, Value)>) -> Value {
    Value::Object(pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect::<Map<_, _>>())
}

/// Grid of right-aligned cells, the first column separated by `|`.
pub fn grid(rows: &[Vec<String>]) -> String {
    let ncols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let width: Vec<usize> =
        (0..ncols).map(|j| rows.iter().filter_map(|r| r.get(j)).map(|c| c.chars().count()).max().unwrap_or(0)).collect();
    let mut out = String::new();
    for row in rows {
        for (j, cell) in row.iter().enumerate() {
            let pad = " ".repeat(width[j] - cell.chars().count());
            match j {
                0 => out.push_str(&format!("{pad}{cell} |")),
                _ => out.push_str(&format!(" {pad}{cell}")),
            }
        }
        out.push('\n');
    }
    out
}

pub fn page_table(title: &str, g: &BigradedGroup) -> String {
    format!("{title}\n{}", g.table())
}

/// The groups at every position of `bounds`, as a bigraded group.
pub fn bigraded(bounds: Bounds, f: impl Fn(Pos) -> FPAbGroup) -> BigradedGroup {
    let groups = bounds.positions().map(|x| (x, f(x))).filter(|(_, g)| !g.is_trivial()).collect();
    BigradedGroup::new(bounds, groups).expect("positions lie in the bounds")
}
