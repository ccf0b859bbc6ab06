//! Gram-matrix compilation of `P(t) psd on [-1, 1]` for polynomial matrices
//! whose coefficients are affine in decision variables.
//!
//! Odd degree `d = 2d'+1`: `P = (t+1) X1 + (1-t) X2`.
//! Even degree `d = 2d'`: `P = X1 + (1-t^2) X2`.
//! Each `X(t) = v(t)^T Q v(t)` with the monomial vector `v` ordered
//! variable-major: index `l (d'+1) + k` holds `y_l t^k`.

use serde::Serialize;

use super::problem::{ConicProblem, ConicSolution, LinExpr, PsdBlock};
use crate::error::{GeError, Result};
use crate::polymat::{tri_index, PolyMat, RectPolyMat, UniPoly};
use crate::scalar::Scalar;

/// Symmetric polynomial matrix with coefficients in `LinExpr`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffinePolyMat {
    n: usize,
    d: usize,
    /// upper triangle, row-major; `entries[e][k]` multiplies `t^k`
    entries: Vec<Vec<LinExpr>>,
}

impl AffinePolyMat {
    pub fn zeros(n: usize, d: usize) -> Self {
        AffinePolyMat { n, d, entries: vec![vec![LinExpr::default(); d + 1]; n * (n + 1) / 2] }
    }

    pub fn from_polymat<S: Scalar>(p: &PolyMat<S>) -> Self {
        let mut a = Self::zeros(p.n(), p.d());
        for i in 0..p.n() {
            for j in i..p.n() {
                for (k, c) in p.get(i, j).coeffs().iter().enumerate() {
                    a.add(i, j, k, &LinExpr::constant(c.to_f64()));
                }
            }
        }
        a
    }

    /// Scalar (`n = 1`) polynomial from its coefficient expressions.
    pub fn scalar(coeffs: Vec<LinExpr>) -> Self {
        let d = coeffs.len().saturating_sub(1);
        let mut a = Self::zeros(1, d);
        for (k, c) in coeffs.iter().enumerate() {
            a.add(0, 0, k, c);
        }
        a
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn coeff(&self, i: usize, j: usize, k: usize) -> &LinExpr {
        &self.entries[tri_index(self.n, i, j)][k]
    }

    /// Adds `e t^k` to entry `(i, j)` (and its mirror), growing the degree if needed.
    pub fn add(&mut self, i: usize, j: usize, k: usize, e: &LinExpr) {
        if k > self.d {
            for entry in &mut self.entries {
                entry.resize(k + 1, LinExpr::default());
            }
            self.d = k;
        }
        self.entries[tri_index(self.n, i, j)][k].add_assign(e);
    }

    pub fn add_constant_matrix(&mut self, m: &[Vec<f64>], k: usize) {
        for i in 0..self.n {
            for j in i..self.n {
                self.add(i, j, k, &LinExpr::constant(m[i][j]));
            }
        }
    }

    pub fn add_scaled(&mut self, o: &AffinePolyMat, s: f64) {
        assert_eq!(self.n, o.n);
        for i in 0..self.n {
            for j in i..self.n {
                for k in 0..=o.d {
                    self.add(i, j, k, &o.coeff(i, j, k).scaled(s));
                }
            }
        }
    }

    /// Multiplies every entry by the scalar polynomial `q`.
    pub fn mul_poly(&self, q: &UniPoly<f64>) -> AffinePolyMat {
        let dq = q.degree().unwrap_or(0);
        let mut r = AffinePolyMat::zeros(self.n, self.d + dq);
        for i in 0..self.n {
            for j in i..self.n {
                for k in 0..=self.d {
                    for (a, c) in q.coeffs().iter().enumerate() {
                        if *c != 0.0 {
                            r.add(i, j, k + a, &self.coeff(i, j, k).scaled(*c));
                        }
                    }
                }
            }
        }
        r
    }

    /// `M(t)^T self M(t)` for a constant-coefficient polynomial matrix `M`.
    pub fn congruence(&self, m: &RectPolyMat<f64>) -> AffinePolyMat {
        assert_eq!(m.rows(), self.n);
        let k = m.cols();
        let dm = m.degree().unwrap_or(0);
        let mut r = AffinePolyMat::zeros(k, self.d + 2 * dm);
        for a in 0..k {
            for b in a..k {
                for i in 0..self.n {
                    for j in 0..self.n {
                        let w = m.get(i, a).mul(m.get(j, b));
                        if w.is_zero() {
                            continue;
                        }
                        for e in 0..=self.d {
                            let c = self.coeff(i, j, e);
                            for (q, wq) in w.coeffs().iter().enumerate() {
                                if *wq != 0.0 {
                                    r.add(a, b, e + q, &c.scaled(*wq));
                                }
                            }
                        }
                    }
                }
            }
        }
        r
    }

    /// Polynomial matrix obtained by substituting solved variable values.
    pub fn evaluate(&self, sol: &ConicSolution) -> PolyMat<f64> {
        PolyMat::from_fn(self.n, self.d, |i, j| {
            UniPoly::new((0..=self.d).map(|k| sol.eval(self.coeff(i, j, k))).collect())
        })
        .expect("degree fits by construction")
    }
}

/// Gram block handles introduced for one interval constraint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GramBlocks {
    pub n: usize,
    pub d: usize,
    /// `(block index, d')` of the `(t+1)` / `1` multiplier
    pub q1: Option<(usize, usize)>,
    /// `(block index, d')` of the `(1-t)` / `(1-t^2)` multiplier
    pub q2: Option<(usize, usize)>,
}

impl GramBlocks {
    pub fn odd(&self) -> bool {
        self.d % 2 == 1
    }

    /// Block sizes in order `(Q1, Q2)`, zero where absent.
    pub fn sizes(&self) -> (usize, usize) {
        let s = |q: Option<(usize, usize)>| q.map_or(0, |(_, dp)| self.n * (dp + 1));
        (s(self.q1), s(self.q2))
    }
}

/// Gram block sizes for an `n x n` matrix of degree `d`.
pub fn gram_sizes(n: usize, d: usize) -> (usize, usize) {
    if d % 2 == 1 {
        let s = (d + 1) / 2 * n;
        (s, s)
    } else {
        ((d / 2 + 1) * n, d / 2 * n)
    }
}

/// Coefficient of `t^k` in entry `(a, b)` of `v^T Q v`, as `(i, j)` pairs of `Q`.
fn quad_coeff_pairs(dp: usize, a: usize, b: usize, k: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for j1 in 0..=dp.min(k) {
        let j2 = k - j1;
        if j2 <= dp {
            out.push((a * (dp + 1) + j1, b * (dp + 1) + j2));
        }
    }
    out
}

fn add_quad(e: &mut LinExpr, blk: &PsdBlock, dp: usize, a: usize, b: usize, k: usize, s: f64) {
    for (i, j) in quad_coeff_pairs(dp, a, b, k) {
        e.add_term(blk.at(i, j), s);
    }
}

/// Adds Gram blocks and coefficient-matching equalities enforcing
/// `P(t) psd on [-1, 1]` with `P` treated as degree `d`.
pub fn compile_psd_interval(prob: &mut ConicProblem, p: &AffinePolyMat, d: usize) -> Result<GramBlocks> {
    let n = p.n();
    for i in 0..n {
        for j in i..n {
            for k in d + 1..=p.d() {
                let c = p.coeff(i, j, k).simplified();
                if !c.is_zero() {
                    return Err(GeError::DegreeMismatch { declared: d });
                }
            }
        }
    }
    let coeff = |i: usize, j: usize, k: usize| -> LinExpr {
        if k <= p.d() {
            p.coeff(i, j, k).clone()
        } else {
            LinExpr::default()
        }
    };
    let (s1, s2) = gram_sizes(n, d);
    let b1 = prob.add_psd(s1);
    let b2 = if s2 > 0 { Some(prob.add_psd(s2)) } else { None };
    let odd = d % 2 == 1;
    let (dp1, dp2) = if odd { ((d - 1) / 2, (d - 1) / 2) } else { (d / 2, (d / 2).saturating_sub(1)) };
    for a in 0..n {
        for b in a..n {
            for k in 0..=d {
                let mut e = LinExpr::default();
                if odd {
                    add_quad(&mut e, &b1, dp1, a, b, k, 1.0);
                    if k >= 1 {
                        add_quad(&mut e, &b1, dp1, a, b, k - 1, 1.0);
                    }
                    let q2 = b2.as_ref().unwrap();
                    add_quad(&mut e, q2, dp2, a, b, k, 1.0);
                    if k >= 1 {
                        add_quad(&mut e, q2, dp2, a, b, k - 1, -1.0);
                    }
                } else {
                    add_quad(&mut e, &b1, dp1, a, b, k, 1.0);
                    if let Some(q2) = &b2 {
                        add_quad(&mut e, q2, dp2, a, b, k, 1.0);
                        if k >= 2 {
                            add_quad(&mut e, q2, dp2, a, b, k - 2, -1.0);
                        }
                    }
                }
                e.add_scaled(&coeff(a, b, k), -1.0);
                prob.add_eq(&e);
            }
        }
    }
    Ok(GramBlocks { n, d, q1: Some((b1.index, dp1)), q2: b2.map(|b| (b.index, dp2)) })
}

/// `X(t) = v(t)^T Q v(t)` for a solved Gram block.
pub fn gram_polymat(q: &nalgebra::DMatrix<f64>, n: usize, dp: usize) -> PolyMat<f64> {
    PolyMat::from_fn(n, 2 * dp, |a, b| {
        let c: Vec<f64> = (0..=2 * dp)
            .map(|k| quad_coeff_pairs(dp, a, b, k).iter().map(|&(i, j)| q[(i, j)]).sum())
            .collect();
        UniPoly::new(c)
    })
    .expect("degree fits by construction")
}
