use nalgebra::DMatrix;
use serde::Serialize;

use super::to_dmatrix;
use crate::error::{GeError, Result};
use crate::genellipsoid::GenEllipsoid;
use crate::polymat::{PolyMat, RectPolyMat, UniPoly};
use crate::sdp::{
    compile_psd_interval, solve, AffinePolyMat, Certificate, ConicProblem, LinExpr, Residuals, SolveStatus,
};

/// Polytope `{x : H x <= 1}` and the matrix segment
/// `A(t) = (1+t)/2 A_hat + (1-t)/2 A_check`.
#[derive(Debug, Clone, PartialEq)]
pub struct RdoInstance {
    pub h: DMatrix<f64>,
    pub a_hat: DMatrix<f64>,
    pub a_check: DMatrix<f64>,
}

impl RdoInstance {
    pub fn new(h: DMatrix<f64>, a_hat: DMatrix<f64>, a_check: DMatrix<f64>) -> Result<Self> {
        let n = h.ncols();
        if a_hat.shape() != (n, n) || a_check.shape() != (n, n) {
            return Err(GeError::DimensionMismatch(format!("H has {n} columns, dynamics must be {n} x {n}")));
        }
        if (0..h.nrows()).any(|i| h.row(i).iter().all(|v| *v == 0.0)) {
            return Err(GeError::InvalidArgument("H has a zero row".into()));
        }
        Ok(RdoInstance { h, a_hat, a_check })
    }

    pub fn from_rows(h: &[Vec<f64>], a_hat: &[Vec<f64>], a_check: &[Vec<f64>]) -> Result<Self> {
        Self::new(to_dmatrix(h)?, to_dmatrix(a_hat)?, to_dmatrix(a_check)?)
    }

    /// Unit box in the plane with two switching modes whose convex hull is
    /// stable but admits no common quadratic Lyapunov function.
    pub fn box_two_modes() -> Self {
        RdoInstance {
            h: DMatrix::from_row_slice(4, 2, &[-1.0, 0.0, 1.0, 0.0, 0.0, -1.0, 0.0, 1.0]),
            a_hat: DMatrix::from_row_slice(2, 2, &[-0.9, 0.6, -1.6, 1.1]),
            a_check: DMatrix::from_row_slice(2, 2, &[1.1, 0.6, -1.6, -0.9]),
        }
    }

    pub fn n(&self) -> usize {
        self.h.ncols()
    }

    pub fn a_at(&self, t: f64) -> DMatrix<f64> {
        &self.a_hat * ((1.0 + t) / 2.0) + &self.a_check * ((1.0 - t) / 2.0)
    }

    /// `A(t)` as a degree-one polynomial matrix.
    pub fn a_poly(&self) -> RectPolyMat<f64> {
        let n = self.n();
        RectPolyMat::from_fn(n, n, |i, j| {
            let (ah, ac) = (self.a_hat[(i, j)], self.a_check[(i, j)]);
            UniPoly::from_f64s(&[(ah + ac) / 2.0, (ah - ac) / 2.0])
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RdoInner {
    pub p: PolyMat<f64>,
    pub gamma: f64,
    #[serde(skip)]
    pub ge: GenEllipsoid,
    pub residuals: Residuals,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum RdoOutcome {
    Feasible(RdoInner),
    Infeasible { certificate: Option<Certificate> },
}

/// Smallest `g` with a degree-`d` matrix `P` satisfying, on `[-1, 1]`,
/// `P <= g I`, `P >= 0`, `P - A(t)^T P A(t) >= 0` and `P >= h_i h_i^T`.
/// The resulting set `{x : x^T P(t) x <= 1 for all t}` stays in the
/// polytope under every product of the dynamics.
pub fn rdo_inner(r: &RdoInstance, d: usize) -> Result<RdoOutcome> {
    let n = r.n();
    let mut prob = ConicProblem::new();
    let g = prob.add_free();
    let mut pa = AffinePolyMat::zeros(n, d);
    for a in 0..n {
        for b in a..n {
            for k in 0..=d {
                let v = prob.add_free();
                pa.add(a, b, k, &LinExpr::var(v));
            }
        }
    }
    let mut upper = AffinePolyMat::zeros(n, d);
    for i in 0..n {
        upper.add(i, i, 0, &LinExpr::var(g));
    }
    upper.add_scaled(&pa, -1.0);
    compile_psd_interval(&mut prob, &upper, d)?;
    compile_psd_interval(&mut prob, &pa, d)?;
    let mut decrease = pa.clone();
    decrease.add_scaled(&pa.congruence(&r.a_poly()), -1.0);
    compile_psd_interval(&mut prob, &decrease, d + 2)?;
    for i in 0..r.h.nrows() {
        let mut cover = pa.clone();
        let hh: Vec<Vec<f64>> = (0..n).map(|a| (0..n).map(|b| -r.h[(i, a)] * r.h[(i, b)]).collect()).collect();
        cover.add_constant_matrix(&hh, 0);
        compile_psd_interval(&mut prob, &cover, d)?;
    }
    prob.minimize(LinExpr::var(g));
    let s = solve(&prob);
    match s.status {
        SolveStatus::Optimal => {
            let p = pa.evaluate(&s);
            let ge = GenEllipsoid::new(&p, None)?;
            Ok(RdoOutcome::Feasible(RdoInner { p, gamma: s.value(g), ge, residuals: s.residuals }))
        }
        SolveStatus::Infeasible => Ok(RdoOutcome::Infeasible { certificate: s.certificate }),
        SolveStatus::Unbounded => Err(GeError::Unbounded),
        SolveStatus::NumericalFailure => Err(GeError::NumericalFailure(format!(
            "degree {d} program stalled after {} iterations",
            s.iterations
        ))),
    }
}

/// Halfspaces `a^T x <= 1` with rows of `H A(t)^k` for `k = 0..=horizon`
/// and `t` in `grid`; `k = 0` contributes `H` once.
pub fn rdo_outer_sample(r: &RdoInstance, horizon: usize, grid: &[f64]) -> Vec<Vec<f64>> {
    let rows = |m: &DMatrix<f64>| -> Vec<Vec<f64>> {
        (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect()
    };
    let mut out = rows(&r.h);
    if horizon == 0 {
        return out;
    }
    for &t in grid {
        let a = r.a_at(t);
        let mut m = r.h.clone();
        for _ in 1..=horizon {
            m = &m * &a;
            out.extend(rows(&m));
        }
    }
    out
}

#[cfg(test)]
mod tests;
