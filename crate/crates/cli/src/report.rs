//! Byte-stable JSON rendering: keys sorted, floats in `{:.16e}` (17
//! significant digits), non-finite numbers as `null`, two-space indent.

use std::fmt::Write;

use serde::Serialize;
use serde_json::Value;

/// Converts any serializable value; serialization of report types cannot
/// fail, so errors become a string node.
pub fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).unwrap_or_else(|e| Value::String(format!("<unserializable: {e}>")))
}

pub fn format_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        "null".into()
    }
}

pub fn to_canonical_string(v: &Value) -> String {
    let mut out = String::new();
    write_value(&mut out, v, 0);
    out.push('\n');
    out
}

fn indent(out: &mut String, level: usize) {
    for _ in 0..level {
        out.push_str("  ");
    }
}

fn write_value(out: &mut String, v: &Value, level: usize) {
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if n.is_f64() {
                out.push_str(&format_float(n.as_f64().unwrap_or(f64::NAN)));
            } else {
                let _ = write!(out, "{n}");
            }
        }
        Value::String(s) => out.push_str(&Value::String(s.clone()).to_string()),
        Value::Array(xs) => {
            if xs.is_empty() {
                out.push_str("[]");
                return;
            }
            out.push_str("[\n");
            for (i, x) in xs.iter().enumerate() {
                indent(out, level + 1);
                write_value(out, x, level + 1);
                if i + 1 < xs.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            indent(out, level);
            out.push(']');
        }
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return;
            }
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            out.push_str("{\n");
            for (i, k) in keys.iter().enumerate() {
                indent(out, level + 1);
                out.push_str(&Value::String((*k).clone()).to_string());
                out.push_str(": ");
                write_value(out, &map[*k], level + 1);
                if i + 1 < keys.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            indent(out, level);
            out.push('}');
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn floats_use_seventeen_significant_digits() {
        assert_eq!(format_float(0.1), "1.0000000000000001e-1");
        assert_eq!(format_float(2.0), "2.0000000000000000e0");
        assert_eq!(format_float(f64::INFINITY), "null");
        assert_eq!(format_float(f64::NAN), "null");
    }

    #[test]
    fn output_is_valid_sorted_json() {
        let v = json!({"b": [1, 2.5, "x\"y"], "a": {"z": null, "c": true}, "e": []});
        let s = to_canonical_string(&v);
        let back: Value = serde_json::from_str(&s).unwrap();
        assert_eq!(back["b"][1].as_f64(), Some(2.5));
        assert_eq!(back["b"][2], "x\"y");
        assert!(s.find("\"a\"").unwrap() < s.find("\"b\"").unwrap());
        assert!(s.find("\"c\"").unwrap() < s.find("\"z\"").unwrap());
        assert_eq!(s, to_canonical_string(&back));
    }

    #[test]
    fn non_finite_serializes_to_null() {
        assert_eq!(to_value(&f64::NAN), Value::Null);
        assert_eq!(
            to_canonical_string(&to_value(&vec![1.0, f64::INFINITY])),
            "[\n  1.0000000000000000e0,\n  null\n]\n"
        );
    }
}
