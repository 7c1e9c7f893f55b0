//! Canonical JSON encoding of torus elements:
//!
//! ```text
//! {"m":4,"terms":[{"coeff":[[vpow,int],...],"exp":[a,b,c,d]},...]}
//! ```
//!
//! Terms are sorted lexicographically by `exp`, coefficients by `vpow`, and
//! object keys are emitted in sorted order.

use std::str::FromStr;

use serde_json::{json, Number, Value};
use thiserror::Error;

use super::{ExpVec, TorusElement, VPoly};
use crate::int::Int;

#[derive(Debug, Error)]
pub enum JsonError {
    #[error("malformed JSON: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("invalid {what}: {detail}")]
    Shape { what: &'static str, detail: String },
}

pub(crate) fn shape(what: &'static str, detail: impl Into<String>) -> JsonError {
    JsonError::Shape { what, detail: detail.into() }
}

pub fn int_to_json(c: &Int) -> Value {
    match c.to_i64() {
        Some(s) => Value::from(s),
        None => Value::Number(Number::from_str(&c.to_string()).expect("integer literal")),
    }
}

pub fn int_from_json(v: &Value) -> Result<Int, JsonError> {
    match v {
        Value::Number(n) => n.to_string().parse::<Int>().map_err(|_| shape("integer", n.to_string())),
        other => Err(shape("integer", other.to_string())),
    }
}

pub(crate) fn i64_from_json(v: &Value, what: &'static str) -> Result<i64, JsonError> {
    v.as_i64().ok_or_else(|| shape(what, v.to_string()))
}

impl VPoly {
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms().iter().map(|(k, c)| json!([k, int_to_json(c)])).collect(),
        )
    }

    pub fn from_json(v: &Value) -> Result<VPoly, JsonError> {
        let arr = v.as_array().ok_or_else(|| shape("coeff", v.to_string()))?;
        let mut pairs = Vec::with_capacity(arr.len());
        for p in arr {
            match p.as_array().map(Vec::as_slice) {
                Some([k, c]) => pairs.push((i64_from_json(k, "vpow")?, int_from_json(c)?)),
                _ => return Err(shape("coeff pair", p.to_string())),
            }
        }
        Ok(VPoly::from_terms(pairs))
    }
}

impl TorusElement {
    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .iter()
            .map(|(e, c)| json!({ "exp": e.coords(), "coeff": c.to_json() }))
            .collect();
        json!({ "m": self.dim(), "terms": terms })
    }

    pub fn from_json(v: &Value) -> Result<TorusElement, JsonError> {
        let m = v
            .get("m")
            .and_then(Value::as_u64)
            .ok_or_else(|| shape("torus element", "missing or invalid \"m\""))? as usize;
        let terms = v
            .get("terms")
            .and_then(Value::as_array)
            .ok_or_else(|| shape("torus element", "missing \"terms\" array"))?;
        let mut out = TorusElement::zero(m);
        for t in terms {
            let exp = t
                .get("exp")
                .and_then(Value::as_array)
                .ok_or_else(|| shape("term", t.to_string()))?;
            if exp.len() != m {
                return Err(shape("exp", format!("expected length {m}, got {}", exp.len())));
            }
            let e = exp
                .iter()
                .map(|x| i64_from_json(x, "exponent"))
                .collect::<Result<Vec<_>, _>>()?;
            let c = VPoly::from_json(t.get("coeff").ok_or_else(|| shape("term", t.to_string()))?)?;
            out.add_term(ExpVec::new(e), &c);
        }
        Ok(out)
    }

    /// Canonical compact serialization.
    pub fn to_json_string(&self) -> String {
        self.to_json().to_string()
    }

    pub fn from_json_str(s: &str) -> Result<TorusElement, JsonError> {
        TorusElement::from_json(&serde_json::from_str(s)?)
    }
}
