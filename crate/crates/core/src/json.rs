//! Byte-stable JSON emission.
//!
//! Floats are always written with 17 significant digits in lowercase
//! scientific notation (`-1.5707963267948966e0`), object keys keep insertion
//! order, and arrays of scalars stay on one line. serde_json's shortest
//! round-trip float formatting is not used here so that golden files do not
//! depend on its formatting choices.

use crate::numerics::{OperatorMatrix, StateVector, C64};

#[derive(Debug, Clone, PartialEq)]
pub enum Json {
    Null,
    Bool(bool),
    Int(i64),
    Num(f64),
    Str(String),
    Arr(Vec<Json>),
    Obj(Vec<(String, Json)>),
}

impl Json {
    pub fn obj<K: Into<String>>(fields: impl IntoIterator<Item = (K, Json)>) -> Json {
        Json::Obj(fields.into_iter().map(|(k, v)| (k.into(), v)).collect())
    }

    pub fn str(s: impl Into<String>) -> Json {
        Json::Str(s.into())
    }

    pub fn complex(z: C64) -> Json {
        Json::Arr(vec![Json::Num(z.re), Json::Num(z.im)])
    }

    pub fn state(v: &StateVector) -> Json {
        Json::Arr(v.amp().iter().copied().map(Json::complex).collect())
    }

    pub fn matrix(m: &OperatorMatrix) -> Json {
        Json::Arr(
            m.rows()
                .map(|row| Json::Arr(row.iter().copied().map(Json::complex).collect()))
                .collect(),
        )
    }

    pub fn real_matrix(rows: Vec<Vec<f64>>) -> Json {
        Json::Arr(
            rows.into_iter()
                .map(|r| Json::Arr(r.into_iter().map(Json::Num).collect()))
                .collect(),
        )
    }

    /// Scalars, arrays of scalars and arrays of those stay on one line.
    fn is_inline(&self) -> bool {
        fn depth(j: &Json) -> usize {
            match j {
                Json::Arr(items) => 1 + items.iter().map(depth).max().unwrap_or(0),
                Json::Obj(_) => usize::MAX / 2,
                _ => 0,
            }
        }
        depth(self) <= 2
    }

    /// Pretty rendering with two-space indentation and a trailing newline.
    pub fn render(&self) -> String {
        let mut out = String::new();
        self.write(&mut out, 0);
        out.push('\n');
        out
    }

    fn write(&self, out: &mut String, indent: usize) {
        match self {
            Json::Null => out.push_str("null"),
            Json::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
            Json::Int(i) => out.push_str(&i.to_string()),
            Json::Num(x) => out.push_str(&format_float(*x)),
            Json::Str(s) => out.push_str(&serde_json::to_string(s).expect("strings serialize")),
            Json::Arr(items) if items.is_empty() => out.push_str("[]"),
            Json::Arr(items) if self.is_inline() => {
                out.push('[');
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    item.write(out, indent);
                }
                out.push(']');
            }
            Json::Arr(items) => {
                out.push_str("[\n");
                for (i, item) in items.iter().enumerate() {
                    pad(out, indent + 1);
                    item.write(out, indent + 1);
                    if i + 1 < items.len() {
                        out.push(',');
                    }
                    out.push('\n');
                }
                pad(out, indent);
                out.push(']');
            }
            Json::Obj(fields) if fields.is_empty() => out.push_str("{}"),
            Json::Obj(fields) => {
                out.push_str("{\n");
                for (i, (key, value)) in fields.iter().enumerate() {
                    pad(out, indent + 1);
                    out.push_str(&serde_json::to_string(key).expect("strings serialize"));
                    out.push_str(": ");
                    value.write(out, indent + 1);
                    if i + 1 < fields.len() {
                        out.push(',');
                    }
                    out.push('\n');
                }
                pad(out, indent);
                out.push('}');
            }
        }
    }
}

fn pad(out: &mut String, indent: usize) {
    for _ in 0..indent {
        out.push_str("  ");
    }
}

/// 17 significant digits, lowercase exponent. Negative zero prints as zero;
/// non-finite values have no JSON number form and print as `null`.
pub fn format_float(x: f64) -> String {
    if !x.is_finite() {
        return "null".to_string();
    }
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.16e}")
}
