//! Deterministic report serialization.
//!
//! Reports are built as explicit value trees with insertion-ordered object
//! keys and rendered with fixed float formatting (17 significant digits via
//! `{:.16e}`), so identical inputs produce byte-identical output on every
//! platform. No timestamps are emitted; the schema carries a version tag.

use std::fmt::Write as _;

/// A JSON value with deterministic rendering.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Null,
    Bool(bool),
    Int(i64),
    Num(f64),
    Str(String),
    Arr(Vec<Value>),
    Obj(Vec<(String, Value)>),
}

impl Value {
    pub fn obj() -> Self {
        Value::Obj(Vec::new())
    }

    /// Appends a key; panics on a duplicate (reports never shadow fields).
    pub fn push(&mut self, key: &str, value: Value) -> &mut Self {
        match self {
            Value::Obj(pairs) => {
                debug_assert!(
                    pairs.iter().all(|(k, _)| k != key),
                    "duplicate report key `{key}`"
                );
                pairs.push((key.to_string(), value));
            }
            _ => unreachable!("push called on a non-object report value"),
        }
        self
    }

    pub fn from_f64_slice(values: &[f64]) -> Self {
        Value::Arr(values.iter().map(|v| Value::Num(*v)).collect())
    }
}

impl From<&str> for Value {
    fn from(s: &str) -> Self {
        Value::Str(s.to_string())
    }
}

impl From<String> for Value {
    fn from(s: String) -> Self {
        Value::Str(s)
    }
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Num(v)
    }
}

impl From<usize> for Value {
    fn from(v: usize) -> Self {
        Value::Int(v as i64)
    }
}

impl From<bool> for Value {
    fn from(v: bool) -> Self {
        Value::Bool(v)
    }
}

/// Fixed-width scientific formatting used for every float in every report
/// (JSON and CSV alike).
pub fn fmt_f64(v: f64) -> String {
    debug_assert!(v.is_finite(), "reports must not contain NaN or infinity");
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        "null".to_string()
    }
}

fn escape_into(out: &mut String, s: &str) {
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04x}", c as u32);
            }
            c => out.push(c),
        }
    }
    out.push('"');
}

fn render_into(out: &mut String, v: &Value, indent: usize) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Int(i) => {
            let _ = write!(out, "{i}");
        }
        Value::Num(x) => out.push_str(&fmt_f64(*x)),
        Value::Str(s) => escape_into(out, s),
        Value::Arr(items) => {
            if items.is_empty() {
                out.push_str("[]");
                return;
            }
            // Scalar-only arrays stay on one line; nested ones stack.
            let scalar = items
                .iter()
                .all(|i| !matches!(i, Value::Arr(_) | Value::Obj(_)));
            if scalar {
                out.push('[');
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    render_into(out, item, indent);
                }
                out.push(']');
            } else {
                out.push_str("[\n");
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        out.push_str(",\n");
                    }
                    out.push_str(&pad);
                    out.push_str("  ");
                    render_into(out, item, indent + 1);
                }
                out.push('\n');
                out.push_str(&pad);
                out.push(']');
            }
        }
        Value::Obj(pairs) => {
            if pairs.is_empty() {
                out.push_str("{}");
                return;
            }
            out.push_str("{\n");
            for (i, (k, val)) in pairs.iter().enumerate() {
                if i > 0 {
                    out.push_str(",\n");
                }
                out.push_str(&pad);
                out.push_str("  ");
                escape_into(out, k);
                out.push_str(": ");
                render_into(out, val, indent + 1);
            }
            out.push('\n');
            out.push_str(&pad);
            out.push('}');
        }
    }
}

/// Renders the value as pretty-printed JSON with a trailing newline.
pub fn render_json(v: &Value) -> String {
    let mut out = String::new();
    render_into(&mut out, v, 0);
    out.push('\n');
    out
}

/// One CSV record; fields containing separators or quotes are quoted.
pub fn csv_row(fields: &[String]) -> String {
    let mut out = String::new();
    for (i, f) in fields.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        if f.contains(',') || f.contains('"') || f.contains('\n') {
            out.push('"');
            out.push_str(&f.replace('"', "\"\""));
            out.push('"');
        } else {
            out.push_str(f);
        }
    }
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn objects_render_in_insertion_order() {
        let mut v = Value::obj();
        v.push("zeta", Value::Int(1));
        v.push("alpha", Value::from(0.5));
        let text = render_json(&v);
        assert_eq!(text, "{\n  \"zeta\": 1,\n  \"alpha\": 5.0000000000000000e-1\n}\n");
    }

    #[test]
    fn floats_use_fixed_scientific_notation() {
        assert_eq!(fmt_f64(1.0), "1.0000000000000000e0");
        assert_eq!(fmt_f64(-0.125), "-1.2500000000000000e-1");
        assert_eq!(fmt_f64(3.0e-17), "3.0000000000000000e-17");
    }

    #[test]
    fn strings_are_escaped() {
        let v = Value::Str("a \"b\"\nc".into());
        assert_eq!(render_json(&v), "\"a \\\"b\\\"\\nc\"\n");
    }

    #[test]
    fn scalar_arrays_stay_inline() {
        let v = Value::from_f64_slice(&[1.0, 2.0]);
        assert_eq!(render_json(&v), "[1.0000000000000000e0, 2.0000000000000000e0]\n");
    }

    #[test]
    fn csv_quotes_only_when_needed() {
        assert_eq!(csv_row(&["a".into(), "b,c".into()]), "a,\"b,c\"\n");
        assert_eq!(csv_row(&["x\"y".into()]), "\"x\"\"y\"\n");
    }

    #[test]
    fn rendering_is_reproducible() {
        let mut v = Value::obj();
        v.push("values", Value::from_f64_slice(&[0.1, 0.2, 0.3]));
        v.push("nested", {
            let mut n = Value::obj();
            n.push("flag", Value::Bool(true));
            n
        });
        assert_eq!(render_json(&v), render_json(&v.clone()));
    }
}
