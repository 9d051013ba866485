//! Arrangement documents (schema version 1).
//!
//! ```json
//! {
//!   "version": 1,
//!   "dimension": 1,
//!   "hyperplanes": [
//!     {"coeffs": ["1"], "const": "0", "weight": {"re": 0.6, "im": 0.0}},
//!     {"coeffs": ["1"], "const": "-1", "weight": {"re": 0.8, "im": 0.0}}
//!   ],
//!   "f0": {"coeffs": ["1"], "const": "0"}
//! }
//! ```
//!
//! Hyperplane `i` is `coeffs · x + const = 0`. Rationals are strings `"n"` or
//! `"n/d"` and are written back in lowest terms. `f0` is optional, and so is
//! `version` (missing means 1). A document with a top-level `"input"` member
//! (as written by `analyze`) is read through that member.

use std::fmt;

use hyperdet_core::exact::Rational;
use hyperdet_core::geometry::{Arrangement, LinearForm};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

pub const VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightDoc {
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HyperplaneDoc {
    pub coeffs: Vec<String>,
    #[serde(rename = "const")]
    pub constant: String,
    pub weight: WeightDoc,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FormDoc {
    pub coeffs: Vec<String>,
    #[serde(rename = "const")]
    pub constant: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArrangementDoc {
    #[serde(default = "default_version")]
    pub version: u32,
    pub dimension: usize,
    pub hyperplanes: Vec<HyperplaneDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f0: Option<FormDoc>,
}

fn default_version() -> u32 {
    VERSION
}

/// A parsed document: the arrangement and the optional `f0`.
#[derive(Clone, Debug)]
pub struct Instance {
    pub arrangement: Arrangement,
    pub f0: Option<LinearForm>,
}

#[derive(Debug)]
pub enum InputError {
    Io(String),
    Parse(String),
    Schema(String),
    Arrangement(hyperdet_core::Error),
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InputError::Io(m) => write!(f, "IoError: {m}"),
            InputError::Parse(m) => write!(f, "ParseError: {m}"),
            InputError::Schema(m) => write!(f, "SchemaError: {m}"),
            InputError::Arrangement(e) => write!(f, "ArrangementError: {e}"),
        }
    }
}

impl std::error::Error for InputError {}

impl InputError {
    pub fn kind(&self) -> &'static str {
        match self {
            InputError::Io(_) => "IoError",
            InputError::Parse(_) => "ParseError",
            InputError::Schema(_) => "SchemaError",
            InputError::Arrangement(_) => "ArrangementError",
        }
    }
}

pub fn parse_rational(s: &str) -> Result<Rational, String> {
    let t = s.trim();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| format!("bad numerator in rational {s:?}"))?;
    let den: BigInt = den.parse().map_err(|_| format!("bad denominator in rational {s:?}"))?;
    if den.is_zero() {
        return Err(format!("zero denominator in rational {s:?}"));
    }
    Ok(Rational::new(num, den))
}

pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn form(coeffs: &[String], constant: &str, dim: usize, what: &str) -> Result<LinearForm, InputError> {
    if coeffs.len() != dim {
        return Err(InputError::Schema(format!("{what}: expected {dim} coefficients, found {}", coeffs.len())));
    }
    let c = coeffs
        .iter()
        .map(|s| parse_rational(s))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|m| InputError::Schema(format!("{what}: {m}")))?;
    let k = parse_rational(constant).map_err(|m| InputError::Schema(format!("{what}: {m}")))?;
    Ok(LinearForm::new(c, k))
}

fn form_doc(f: &LinearForm) -> FormDoc {
    FormDoc { coeffs: f.coeffs.iter().map(format_rational).collect(), constant: format_rational(&f.constant) }
}

impl ArrangementDoc {
    pub fn from_instance(a: &Arrangement, f0: Option<&LinearForm>) -> Self {
        let hyperplanes = a
            .forms()
            .iter()
            .zip(a.weights())
            .map(|(f, w)| {
                let d = form_doc(f);
                HyperplaneDoc { coeffs: d.coeffs, constant: d.constant, weight: WeightDoc { re: w.re, im: w.im } }
            })
            .collect();
        ArrangementDoc { version: VERSION, dimension: a.dim(), hyperplanes, f0: f0.map(form_doc) }
    }

    pub fn to_instance(&self) -> Result<Instance, InputError> {
        if self.version != VERSION {
            return Err(InputError::Schema(format!("unsupported schema version {}", self.version)));
        }
        let mut forms = Vec::with_capacity(self.hyperplanes.len());
        let mut weights = Vec::with_capacity(self.hyperplanes.len());
        for (i, h) in self.hyperplanes.iter().enumerate() {
            forms.push(form(&h.coeffs, &h.constant, self.dimension, &format!("hyperplane {i}"))?);
            if !h.weight.re.is_finite() || !h.weight.im.is_finite() {
                return Err(InputError::Schema(format!("hyperplane {i}: weight is not finite")));
            }
            weights.push(Complex64::new(h.weight.re, h.weight.im));
        }
        let f0 = self.f0.as_ref().map(|f| form(&f.coeffs, &f.constant, self.dimension, "f0")).transpose()?;
        let arrangement = Arrangement::new(self.dimension, forms, weights).map_err(InputError::Arrangement)?;
        Ok(Instance { arrangement, f0 })
    }
}

pub fn parse_document(text: &str) -> Result<ArrangementDoc, InputError> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| InputError::Parse(e.to_string()))?;
    let value = match value.get("input") {
        Some(inner) => inner.clone(),
        None => value,
    };
    serde_json::from_value(value).map_err(|e| InputError::Schema(e.to_string()))
}

pub fn load(path: &std::path::Path) -> Result<Instance, InputError> {
    let text = std::fs::read_to_string(path).map_err(|e| InputError::Io(format!("{}: {e}", path.display())))?;
    parse_document(&text)?.to_instance()
}
