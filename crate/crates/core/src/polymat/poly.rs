use serde::{Deserialize, Serialize};

use crate::error::{GeError, Result};
use crate::scalar::{Rational, Scalar};

/// Univariate polynomial, coefficients in ascending order.
///
/// Trailing coefficients are stripped: exact zeros for rationals, values
/// below `1e-12 * max|c|` for doubles. The zero polynomial has no
/// coefficients.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UniPoly<S> {
    coeffs: Vec<S>,
}

impl<S: Scalar> UniPoly<S> {
    pub fn new(mut coeffs: Vec<S>) -> Self {
        let scale = coeffs.iter().map(|c| c.to_f64().abs()).fold(0.0, f64::max);
        while coeffs.last().is_some_and(|c| c.negligible(scale)) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: S) -> Self {
        Self::new(vec![c])
    }

    /// `t`
    pub fn x() -> Self {
        Self::new(vec![S::zero(), S::one()])
    }

    pub fn from_i64s(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&v| S::from_i64(v)).collect())
    }

    pub fn from_f64s(c: &[f64]) -> Self {
        Self::new(c.iter().map(|&v| S::from_f64(v)).collect())
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    /// Coefficient of `t^k` (zero beyond the stored range).
    pub fn coeff(&self, k: usize) -> S {
        self.coeffs.get(k).cloned().unwrap_or_else(S::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> S {
        self.coeffs.last().cloned().unwrap_or_else(S::zero)
    }

    pub fn eval(&self, t: &S) -> S {
        let mut acc = S::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * t.clone() + c.clone();
        }
        acc
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k) + o.coeff(k)).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k) - o.coeff(k)).collect())
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }

    pub fn scale(&self, s: &S) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.clone() * s.clone()).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut out = vec![S::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut acc = Self::constant(S::one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.clone() * S::from_i64(k as i64))
                .collect(),
        )
    }

    /// `self(inner(t))`
    pub fn compose(&self, inner: &Self) -> Self {
        let mut acc = Self::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(inner).add(&Self::constant(c.clone()));
        }
        acc
    }

    pub fn to_f64(&self) -> UniPoly<f64> {
        UniPoly::new(self.coeffs.iter().map(|c| c.to_f64()).collect())
    }

    pub fn to_rational(&self) -> UniPoly<Rational> {
        UniPoly::new(self.coeffs.iter().map(|c| c.to_rational()).collect())
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.to_f64().abs()).fold(0.0, f64::max)
    }
}

/// Polynomial through `(nodes[j], values[j])` of degree below `nodes.len()`,
/// via Newton divided differences.
pub fn interpolate<S: Scalar>(nodes: &[S], values: &[S]) -> Result<UniPoly<S>> {
    if nodes.len() != values.len() {
        return Err(GeError::DimensionMismatch(format!(
            "{} nodes, {} values",
            nodes.len(),
            values.len()
        )));
    }
    for i in 0..nodes.len() {
        for j in 0..i {
            if nodes[i] == nodes[j] {
                return Err(GeError::DuplicateNodes);
            }
        }
    }
    let n = nodes.len();
    let mut dd: Vec<S> = values.to_vec();
    for level in 1..n {
        for i in (level..n).rev() {
            dd[i] = (dd[i].clone() - dd[i - 1].clone())
                / (nodes[i].clone() - nodes[i - level].clone());
        }
    }
    // expand the Newton form from the innermost coefficient outwards
    let mut acc: Vec<S> = Vec::with_capacity(n);
    for i in (0..n).rev() {
        // acc = acc * (t - nodes[i]) + dd[i]
        let mut next = vec![S::zero(); acc.len() + 1];
        for (k, c) in acc.iter().enumerate() {
            next[k + 1] = next[k + 1].clone() + c.clone();
            next[k] = next[k].clone() - c.clone() * nodes[i].clone();
        }
        next[0] = next[0].clone() + dd[i].clone();
        acc = next;
    }
    Ok(UniPoly::new(acc))
}
