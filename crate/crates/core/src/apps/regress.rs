use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{GeError, Result};
use crate::genellipsoid::univariate_max;
use crate::polymat::{PolyMat, RectPolyMat, UniPoly};
use crate::sdp::{compile_psd_interval, require_optimal, solve, AffinePolyMat, ConicProblem, LinExpr, Residuals};

/// Observations `(x_i, y_i)`, fit degree and shift radius `eps`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegressInstance {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub degree: usize,
    pub eps: f64,
}

impl RegressInstance {
    pub fn new(x: Vec<f64>, y: Vec<f64>, degree: usize, eps: f64) -> Result<Self> {
        let r = RegressInstance { x, y, degree, eps };
        r.validate()?;
        Ok(r)
    }

    pub fn validate(&self) -> Result<()> {
        if self.x.len() != self.y.len() {
            return Err(GeError::DimensionMismatch(format!("{} points, {} targets", self.x.len(), self.y.len())));
        }
        if !(self.eps >= 0.0) {
            return Err(GeError::InvalidArgument("shift radius must be nonnegative".into()));
        }
        let m = self.x.len();
        let ok = (0..m).any(|i| (0..m).any(|j| self.x[i] != self.x[j] && self.y[i] != self.y[j]));
        if !ok {
            return Err(GeError::InvalidArgument("need two observations differing in both x and y".into()));
        }
        Ok(())
    }

    /// `m` equispaced points on `[-1, 1]` sampling `1 / (1 + 25 x^2)`.
    pub fn runge(m: usize, degree: usize, eps: f64) -> Self {
        let x: Vec<f64> = (0..m).map(|i| -1.0 + 2.0 * i as f64 / (m - 1) as f64).collect();
        let y = x.iter().map(|v| 1.0 / (1.0 + 25.0 * v * v)).collect();
        RegressInstance { x, y, degree, eps }
    }

    pub fn m(&self) -> usize {
        self.x.len()
    }

    /// Row `i` of `Phi(x + eps t)` as polynomials in `t`.
    fn shifted_powers(&self, i: usize) -> Vec<UniPoly<f64>> {
        let base = UniPoly::from_f64s(&[self.x[i], self.eps]);
        (0..=self.degree).map(|k| base.pow(k)).collect()
    }

    /// `Psi(t) = [Phi(x + eps t) | -y]`, so `[c; 1]^T Psi^T Psi [c; 1]` is the
    /// shifted squared residual.
    pub fn psi(&self) -> RectPolyMat<f64> {
        let d = self.degree;
        let rows: Vec<Vec<UniPoly<f64>>> = (0..self.m()).map(|i| self.shifted_powers(i)).collect();
        RectPolyMat::from_fn(self.m(), d + 2, |i, k| {
            if k <= d {
                rows[i][k].clone()
            } else {
                UniPoly::constant(-self.y[i])
            }
        })
    }

    /// `P(t) = Psi(t)^T Psi(t)`, of degree `2 d`.
    pub fn factored_matrix(&self) -> Result<PolyMat<f64>> {
        self.psi().gram(2 * self.degree)
    }

    /// `||Phi(x + eps t) c - y||^2` as a polynomial in `t`.
    pub fn residual_poly(&self, c: &[f64]) -> UniPoly<f64> {
        let mut acc = UniPoly::zero();
        for i in 0..self.m() {
            let mut r = UniPoly::constant(-self.y[i]);
            for (k, p) in self.shifted_powers(i).iter().enumerate() {
                r = r.add(&p.scale(&c[k]));
            }
            acc = acc.add(&r.mul(&r));
        }
        acc
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegressFit {
    pub c: Vec<f64>,
    pub gamma: f64,
    pub residuals: Residuals,
}

/// Ordinary least squares on the unshifted design matrix.
pub fn least_squares(r: &RegressInstance) -> Vec<f64> {
    let m = r.m();
    let phi = DMatrix::from_fn(m, r.degree + 1, |i, k| r.x[i].powi(k as i32));
    let y = DVector::from_column_slice(&r.y);
    phi.svd(true, true).solve(&y, 1e-14).map(|c| c.iter().copied().collect()).unwrap_or_default()
}

/// `min_c max_t ||Phi(x + eps t) c - y||^2` through the Schur complement
/// `[[I, Psi(t)[c; 1]], [., g]] psd on [-1, 1]`.
pub fn robust_regress(r: &RegressInstance) -> Result<RegressFit> {
    r.validate()?;
    let m = r.m();
    let d = r.degree;
    let mut prob = ConicProblem::new();
    let c = prob.add_frees(d + 1);
    let g = prob.add_free();
    let deg = if r.eps == 0.0 { 0 } else { d };
    let mut mx = AffinePolyMat::zeros(m + 1, deg);
    for i in 0..m {
        mx.add(i, i, 0, &LinExpr::constant(1.0));
        mx.add(i, m, 0, &LinExpr::constant(-r.y[i]));
        for (k, p) in r.shifted_powers(i).iter().enumerate() {
            for (e, coef) in p.coeffs().iter().enumerate() {
                if *coef != 0.0 {
                    mx.add(i, m, e, &LinExpr::term(c[k], *coef));
                }
            }
        }
    }
    mx.add(m, m, 0, &LinExpr::var(g));
    compile_psd_interval(&mut prob, &mx, deg)?;
    prob.minimize(LinExpr::var(g));
    let s = require_optimal(solve(&prob))?;
    Ok(RegressFit { c: c.iter().map(|v| s.value(*v)).collect(), gamma: s.value(g), residuals: s.residuals })
}

/// `max_t ||Phi(x + eps t) c - y||^2` over `[-1, 1]`, returned with its maximizer.
pub fn worst_case_residual(c: &[f64], r: &RegressInstance) -> (f64, f64) {
    univariate_max(&r.residual_poly(c), -1.0, 1.0)
}
