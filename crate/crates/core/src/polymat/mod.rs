//! Polynomial matrices in one variable and the algebra the rest of the
//! crate builds on.

mod json;
mod poly;

pub use json::{matrix_from_json, polymat_from_json, polymat_to_json, PolyMatJson};
pub use poly::{interpolate, UniPoly};

use serde::{Deserialize, Serialize};

use crate::error::{GeError, Result};
use crate::scalar::{Rational, Scalar};

/// Symmetric `n x n` polynomial matrix of declared degree `d`.
///
/// Only the upper triangle is stored, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolyMat<S> {
    n: usize,
    d: usize,
    entries: Vec<UniPoly<S>>,
}

pub(crate) fn tri_index(n: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    i * n - i * (i + 1) / 2 + j
}

impl<S: Scalar> PolyMat<S> {
    /// Builds from upper-triangle entries (row-major).
    pub fn new(n: usize, d: usize, entries: Vec<UniPoly<S>>) -> Result<Self> {
        if entries.len() != n * (n + 1) / 2 {
            return Err(GeError::DimensionMismatch(format!(
                "expected {} upper-triangle entries for n = {n}, got {}",
                n * (n + 1) / 2,
                entries.len()
            )));
        }
        if entries.iter().any(|e| e.degree().is_some_and(|k| k > d)) {
            return Err(GeError::DegreeMismatch { declared: d });
        }
        Ok(PolyMat { n, d, entries })
    }

    pub fn from_fn(n: usize, d: usize, mut f: impl FnMut(usize, usize) -> UniPoly<S>) -> Result<Self> {
        let mut entries = Vec::with_capacity(n * (n + 1) / 2);
        for i in 0..n {
            for j in i..n {
                entries.push(f(i, j));
            }
        }
        Self::new(n, d, entries)
    }

    /// Constant matrix (degree 0).
    pub fn constant(m: &[Vec<S>]) -> Result<Self> {
        let n = m.len();
        Self::from_fn(n, 0, |i, j| UniPoly::constant(m[i][j].clone()))
    }

    /// Builds from coefficient matrices `P_0, ..., P_d`.
    pub fn from_coefficient_matrices(mats: &[Vec<Vec<S>>]) -> Result<Self> {
        let d = mats.len().saturating_sub(1);
        let n = mats.first().map_or(0, |m| m.len());
        Self::from_fn(n, d, |i, j| UniPoly::new(mats.iter().map(|m| m[i][j].clone()).collect()))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn entries(&self) -> &[UniPoly<S>] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &UniPoly<S> {
        &self.entries[tri_index(self.n, i, j)]
    }

    /// Largest actual entry degree (`None` for the zero matrix).
    pub fn actual_degree(&self) -> Option<usize> {
        self.entries.iter().filter_map(|e| e.degree()).max()
    }

    pub fn with_degree(&self, d: usize) -> Result<Self> {
        Self::new(self.n, d, self.entries.clone())
    }

    pub fn eval(&self, t: &S) -> Vec<Vec<S>> {
        let mut m = vec![vec![S::zero(); self.n]; self.n];
        for i in 0..self.n {
            for j in i..self.n {
                let v = self.get(i, j).eval(t);
                m[j][i] = v.clone();
                m[i][j] = v;
            }
        }
        m
    }

    /// Coefficient matrix of `t^k`.
    pub fn coefficient_matrix(&self, k: usize) -> Vec<Vec<S>> {
        let mut m = vec![vec![S::zero(); self.n]; self.n];
        for i in 0..self.n {
            for j in i..self.n {
                let v = self.get(i, j).coeff(k);
                m[j][i] = v.clone();
                m[i][j] = v;
            }
        }
        m
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.zip(o, |a, b| a.add(b))
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.zip(o, |a, b| a.sub(b))
    }

    fn zip(&self, o: &Self, f: impl Fn(&UniPoly<S>, &UniPoly<S>) -> UniPoly<S>) -> Result<Self> {
        if self.n != o.n {
            return Err(GeError::DimensionMismatch(format!("{} vs {}", self.n, o.n)));
        }
        let entries = self.entries.iter().zip(&o.entries).map(|(a, b)| f(a, b)).collect();
        Self::new(self.n, self.d.max(o.d), entries)
    }

    /// Multiplies every entry by the scalar polynomial `q`.
    pub fn scale_poly(&self, q: &UniPoly<S>) -> Self {
        let d = self.d + q.degree().unwrap_or(0);
        PolyMat {
            n: self.n,
            d,
            entries: self.entries.iter().map(|e| e.mul(q)).collect(),
        }
    }

    /// `P(inner(t))`; the declared degree becomes `d * deg(inner)`.
    pub fn compose(&self, inner: &UniPoly<S>) -> Self {
        let d = self.d * inner.degree().unwrap_or(0).max(1);
        PolyMat {
            n: self.n,
            d,
            entries: self.entries.iter().map(|e| e.compose(inner)).collect(),
        }
    }

    pub fn to_f64(&self) -> PolyMat<f64> {
        PolyMat {
            n: self.n,
            d: self.d,
            entries: self.entries.iter().map(|e| e.to_f64()).collect(),
        }
    }

    pub fn to_rational(&self) -> PolyMat<Rational> {
        PolyMat {
            n: self.n,
            d: self.d,
            entries: self.entries.iter().map(|e| e.to_rational()).collect(),
        }
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.entries.iter().map(|e| e.max_abs_coeff()).fold(0.0, f64::max)
    }
}

/// General `rows x cols` polynomial matrix, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RectPolyMat<S> {
    rows: usize,
    cols: usize,
    entries: Vec<UniPoly<S>>,
}

impl<S: Scalar> RectPolyMat<S> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> UniPoly<S>) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        RectPolyMat { rows, cols, entries }
    }

    pub fn constant(m: &[Vec<S>]) -> Self {
        let rows = m.len();
        let cols = m.first().map_or(0, |r| r.len());
        Self::from_fn(rows, cols, |i, j| UniPoly::constant(m[i][j].clone()))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &UniPoly<S> {
        &self.entries[i * self.cols + j]
    }

    pub fn degree(&self) -> Option<usize> {
        self.entries.iter().filter_map(|e| e.degree()).max()
    }

    pub fn eval(&self, t: &S) -> Vec<Vec<S>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).eval(t)).collect())
            .collect()
    }

    /// `M^T M` with declared degree `d`.
    pub fn gram(&self, d: usize) -> Result<PolyMat<S>> {
        PolyMat::from_fn(self.cols, d, |a, b| {
            let mut acc = UniPoly::zero();
            for r in 0..self.rows {
                acc = acc.add(&self.get(r, a).mul(self.get(r, b)));
            }
            acc
        })
    }

    /// `M^T P M` with declared degree `d`.
    pub fn congruence(&self, p: &PolyMat<S>, d: usize) -> Result<PolyMat<S>> {
        if p.n() != self.rows {
            return Err(GeError::DimensionMismatch(format!(
                "congruence of {}x{} with n = {}",
                self.rows,
                self.cols,
                p.n()
            )));
        }
        // PM first, then M^T (PM)
        let pm: Vec<UniPoly<S>> = (0..self.rows)
            .flat_map(|i| {
                (0..self.cols).map(move |j| (i, j))
            })
            .map(|(i, j)| {
                let mut acc = UniPoly::zero();
                for k in 0..self.rows {
                    acc = acc.add(&p.get(i, k).mul(self.get(k, j)));
                }
                acc
            })
            .collect();
        PolyMat::from_fn(self.cols, d, |a, b| {
            let mut acc = UniPoly::zero();
            for k in 0..self.rows {
                acc = acc.add(&self.get(k, a).mul(&pm[k * self.cols + b]));
            }
            acc
        })
    }

    pub fn to_f64(&self) -> RectPolyMat<f64> {
        RectPolyMat {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| e.to_f64()).collect(),
        }
    }
}

pub fn eval_poly<S: Scalar>(p: &UniPoly<S>, t: &S) -> S {
    p.eval(t)
}

pub fn eval_mat<S: Scalar>(p: &PolyMat<S>, t: &S) -> Vec<Vec<S>> {
    p.eval(t)
}

/// `x^T P(t) x` as a polynomial in `t`.
pub fn quad_form<S: Scalar>(p: &PolyMat<S>, x: &[S]) -> UniPoly<S> {
    let n = p.n();
    let mut acc = vec![S::zero(); p.d() + 1];
    for i in 0..n {
        for j in i..n {
            let w = if i == j {
                x[i].clone() * x[i].clone()
            } else {
                S::from_i64(2) * x[i].clone() * x[j].clone()
            };
            if w.is_zero() {
                continue;
            }
            for (k, c) in p.get(i, j).coeffs().iter().enumerate() {
                acc[k] = acc[k].clone() + w.clone() * c.clone();
            }
        }
    }
    UniPoly::new(acc)
}

/// `Q(t) = (t^2+1)^d P((t^2-1)/(t^2+1))`, degree `2d`.
pub fn mobius_lift<S: Scalar>(p: &PolyMat<S>) -> PolyMat<S> {
    let d = p.d();
    let minus = UniPoly::<S>::from_i64s(&[-1, 0, 1]);
    let plus = UniPoly::<S>::from_i64s(&[1, 0, 1]);
    let basis: Vec<UniPoly<S>> = (0..=d)
        .map(|k| minus.pow(k).mul(&plus.pow(d - k)))
        .collect();
    let entries = p
        .entries()
        .iter()
        .map(|e| {
            let mut acc = UniPoly::zero();
            for (k, c) in e.coeffs().iter().enumerate() {
                acc = acc.add(&basis[k].scale(c));
            }
            acc
        })
        .collect();
    PolyMat { n: p.n(), d: 2 * d, entries }
}

/// Coefficient curves of the leading-principal characteristic polynomials.
///
/// `out[k-1][i]` is the coefficient of `s^i` in `det(P(t)_k + s I_k)`, a
/// polynomial in `t` of degree at most `d (k - i)`. Each is recovered by
/// interpolating determinants on `d(k-i)+1` nodes in `t` and `k+1` nodes in
/// `s`.
pub fn charpoly_coeff_curves<S: Scalar>(p: &PolyMat<S>) -> Result<Vec<Vec<UniPoly<S>>>> {
    let n = p.n();
    let d = p.d();
    let mut out = Vec::with_capacity(n);
    for k in 1..=n {
        let s_nodes = S::interpolation_nodes(k + 1);
        let mut row = Vec::with_capacity(k + 1);
        for i in 0..=k {
            let t_nodes = S::interpolation_nodes(d * (k - i) + 1);
            let mut vals = Vec::with_capacity(t_nodes.len());
            for t in &t_nodes {
                let full = p.eval(t);
                let dets: Vec<S> = s_nodes
                    .iter()
                    .map(|s| {
                        let m: Vec<Vec<S>> = (0..k)
                            .map(|a| {
                                (0..k)
                                    .map(|b| {
                                        if a == b {
                                            full[a][b].clone() + s.clone()
                                        } else {
                                            full[a][b].clone()
                                        }
                                    })
                                    .collect()
                            })
                            .collect();
                        S::determinant(&m)
                    })
                    .collect();
                let in_s = interpolate(&s_nodes, &dets)?;
                vals.push(in_s.coeff(i));
            }
            row.push(interpolate(&t_nodes, &vals)?);
        }
        out.push(row);
    }
    Ok(out)
}

#[cfg(test)]
mod tests;
