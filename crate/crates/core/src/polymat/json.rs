use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{PolyMat, UniPoly};
use crate::error::{GeError, Result};
use crate::scalar::{format_rational, parse_rational, Scalar, ScalarField};

/// Wire format: upper-triangle entries row-major, coefficients ascending.
/// Exact values are written as `"p/q"` strings.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolyMatJson {
    pub n: usize,
    pub d: usize,
    pub entries: Vec<Vec<Value>>,
}

pub(crate) fn scalar_from_value<S: Scalar>(v: &Value) -> Result<S> {
    let text = match v {
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.clone(),
        other => return Err(GeError::Parse(format!("expected a number, got {other}"))),
    };
    match S::FIELD {
        ScalarField::Float64 if !text.contains('/') => text
            .trim()
            .parse::<f64>()
            .map(S::from_f64)
            .map_err(|_| GeError::Parse(format!("not a number: {text:?}"))),
        _ => parse_rational(&text).map(|r| S::from_rational(&r)),
    }
}

pub(crate) fn scalar_to_value<S: Scalar>(v: &S) -> Value {
    match S::FIELD {
        ScalarField::ExactRational => Value::String(format_rational(&v.to_rational())),
        ScalarField::Float64 => serde_json::Number::from_f64(v.to_f64())
            .map(Value::Number)
            .unwrap_or(Value::Null),
    }
}

pub fn polymat_from_json<S: Scalar>(text: &str) -> Result<PolyMat<S>> {
    let raw: PolyMatJson =
        serde_json::from_str(text).map_err(|e| GeError::Parse(e.to_string()))?;
    let entries = raw
        .entries
        .iter()
        .map(|cs| {
            cs.iter()
                .map(scalar_from_value::<S>)
                .collect::<Result<Vec<S>>>()
                .map(UniPoly::new)
        })
        .collect::<Result<Vec<_>>>()?;
    PolyMat::new(raw.n, raw.d, entries)
}

pub fn polymat_to_json<S: Scalar>(p: &PolyMat<S>) -> PolyMatJson {
    PolyMatJson {
        n: p.n(),
        d: p.d(),
        entries: p
            .entries()
            .iter()
            .map(|e| e.coeffs().iter().map(scalar_to_value).collect())
            .collect(),
    }
}

/// Reads a list of square matrices, e.g. `[[[1,0],[0,1]], ...]`.
pub fn matrix_from_json<S: Scalar>(v: &Value) -> Result<Vec<Vec<S>>> {
    let rows = v
        .as_array()
        .ok_or_else(|| GeError::Parse("expected a matrix (array of rows)".into()))?;
    rows.iter()
        .map(|r| {
            r.as_array()
                .ok_or_else(|| GeError::Parse("expected a matrix row".into()))?
                .iter()
                .map(scalar_from_value::<S>)
                .collect()
        })
        .collect()
}
