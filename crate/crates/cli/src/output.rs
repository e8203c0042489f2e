//! The JSON envelope and the plain-text renderer.

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{Map, Number, Value};

/// Significant digits kept for every float in the output.
pub const FLOAT_DIGITS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Violation,
    Error,
}

impl Status {
    pub fn exit_code(self) -> u8 {
        match self {
            Status::Ok => 0,
            Status::Violation => 1,
            Status::Error => 2,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Envelope {
    pub command: String,
    pub inputs: Value,
    pub result: Value,
    pub status: Status,
}

impl Envelope {
    pub fn new(command: &str, inputs: Value, result: Value, status: Status) -> Self {
        Envelope { command: command.to_string(), inputs: canonical(inputs), result: canonical(result), status }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("envelope values are plain JSON")
    }
}

/// Rounds `x` to [`FLOAT_DIGITS`] significant digits.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", FLOAT_DIGITS - 1, x).parse().expect("formatted float parses")
}

/// Rounds every float in `v`; integers are left alone.
pub fn canonical(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = round_sig(n.as_f64().expect("f64 number"));
            Number::from_f64(x).map_or(Value::Null, Value::Number)
        }
        Value::Array(xs) => Value::Array(xs.into_iter().map(canonical).collect()),
        Value::Object(m) => Value::Object(m.into_iter().map(|(k, v)| (k, canonical(v))).collect()),
        other => other,
    }
}

/// Aligned `key  value` lines; nested objects are indented.
pub fn render_text(v: &Value) -> String {
    let mut out = String::new();
    match v {
        Value::Object(m) => render_object(&mut out, m, 0),
        other => {
            out.push_str(&scalar(other));
            out.push('\n');
        }
    }
    out
}

fn render_object(out: &mut String, m: &Map<String, Value>, indent: usize) {
    let width = m.keys().map(|k| k.chars().count()).max().unwrap_or(0);
    for (k, v) in m {
        let pad = " ".repeat(indent);
        match v {
            Value::Object(inner) if !inner.is_empty() => {
                let _ = writeln!(out, "{pad}{k}");
                render_object(out, inner, indent + 2);
            }
            Value::Array(xs) if xs.iter().any(|x| x.is_string()) => {
                let _ = writeln!(out, "{pad}{k}");
                for x in xs {
                    let _ = writeln!(out, "{pad}  {}", scalar(x));
                }
            }
            _ => {
                let _ = writeln!(out, "{pad}{k:<width$}  {}", scalar(v));
            }
        }
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".to_string(),
        Value::Array(xs) if xs.is_empty() => "-".to_string(),
        Value::Array(xs) if xs.iter().all(|x| !x.is_object() && !x.is_array()) => {
            xs.iter().map(scalar).collect::<Vec<_>>().join(" ")
        }
        other => other.to_string(),
    }
}
