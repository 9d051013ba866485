//! JSON encodings of core values and a plain-text renderer for reports.

use hyperdet_core::chambers::{Chamber, ChamberKind};
use hyperdet_core::exact::Rational;
use num_complex::Complex64;
use serde_json::{json, Map, Value};

use crate::schema::format_rational;

pub fn complex(z: Complex64) -> Value {
    json!({"re": z.re, "im": z.im})
}

pub fn rational(q: &Rational) -> Value {
    Value::String(format_rational(q))
}

pub fn point(x: &[Rational]) -> Value {
    Value::Array(x.iter().map(rational).collect())
}

pub fn points(xs: &[Vec<Rational>]) -> Value {
    Value::Array(xs.iter().map(|x| point(x)).collect())
}

pub fn matrix(m: &[Vec<Complex64>]) -> Value {
    Value::Array(m.iter().map(|r| Value::Array(r.iter().map(|&z| complex(z)).collect())).collect())
}

pub fn kind(k: ChamberKind) -> &'static str {
    match k {
        ChamberKind::Bounded => "bounded",
        ChamberKind::Growing => "growing",
        ChamberKind::Unbounded => "unbounded",
    }
}

pub fn chamber(c: &Chamber) -> Value {
    json!({
        "signs": c.signs,
        "kind": kind(c.kind),
        "point": point(&c.point),
        "vertices": points(&c.vertices),
        "rays": points(&c.rays),
    })
}

/// JSON numbers cannot hold NaN or infinities; those become strings.
pub fn real(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::String(format!("{x}"))
    }
}

/// Indented `key: value` lines; short scalar arrays stay on one line.
pub fn table(v: &Value) -> String {
    let mut out = String::new();
    render(v, 0, &mut out);
    out
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Object(m) if m.len() == 2 && m.contains_key("re") && m.contains_key("im") => {
            let re = m["re"].as_f64().unwrap_or(f64::NAN);
            let im = m["im"].as_f64().unwrap_or(f64::NAN);
            Some(format!("{re:.12e} {} {:.12e}i", if im < 0.0 { '-' } else { '+' }, im.abs()))
        }
        Value::Array(xs) if xs.len() <= 12 && xs.iter().all(|x| !x.is_array() && !x.is_object()) => {
            Some(format!("[{}]", xs.iter().filter_map(scalar).collect::<Vec<_>>().join(", ")))
        }
        _ => None,
    }
}

fn render(v: &Value, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(m) => render_object(m, depth, out),
        Value::Array(xs) => {
            for (i, x) in xs.iter().enumerate() {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{pad}[{i}] {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}[{i}]\n"));
                        render(x, depth + 1, out);
                    }
                }
            }
        }
        _ => out.push_str(&format!("{pad}{}\n", scalar(v).unwrap_or_default())),
    }
}

fn render_object(m: &Map<String, Value>, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    let width = m.keys().map(String::len).max().unwrap_or(0);
    for (k, x) in m {
        match scalar(x) {
            Some(s) => out.push_str(&format!("{pad}{k:<width$}  {s}\n")),
            None => {
                out.push_str(&format!("{pad}{k}:\n"));
                render(x, depth + 1, out);
            }
        }
    }
}
