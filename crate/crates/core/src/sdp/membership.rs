//! Semidefinite descriptions of `x in E` for a generalized ellipsoid `E`.
//!
//! Representation 1 uses a factorization of `P` and a Schur complement
//! `M_x(t) psd on [-1, 1]`; representation 2 lifts `x` to `[[X, x], [x^T, 1]]`
//! and asks `Tr(X P(t)) <= 1` on `[-1, 1]`.

use serde::Serialize;

use super::compile::{compile_psd_interval, AffinePolyMat, GramBlocks};
use super::problem::{ConicProblem, LinExpr, PsdBlock, SolveStatus};
use super::solver::solve;
use super::sos::SosFactorization;
use crate::error::{GeError, Result};
use crate::genellipsoid::GenEllipsoid;
use crate::polymat::PolyMat;

/// Degree of `M_x(t)` for a factored matrix of degree `d`.
pub fn rep1_degree(d: usize) -> usize {
    match d {
        0 => 0,
        d if d % 2 == 0 => d / 2 + 1,
        d => (d + 1) / 2,
    }
}

/// Largest psd block of representation 1 with factor widths `r1`, `r2`.
pub fn rep1_size(r1: usize, r2: usize, d: usize) -> usize {
    let w = r1 + r2 + 1;
    match d % 4 {
        0 => (d / 4 + 1) * w,
        1 => (d + 3) / 4 * w,
        2 => ((d + 2) / 4 + 1) * w,
        _ => ((d + 1) / 4 + 1) * w,
    }
}

/// Largest psd block of representation 2.
pub fn rep2_size(n: usize, d: usize) -> usize {
    if d % 2 == 0 {
        (n + 1).max(d / 2 + 1)
    } else {
        (n + 1).max((d + 1) / 2)
    }
}

fn offsets(e: &GenEllipsoid, x: &[LinExpr]) -> Result<Vec<LinExpr>> {
    if x.len() != e.n() {
        return Err(GeError::DimensionMismatch(format!("point of length {} for n = {}", x.len(), e.n())));
    }
    Ok(x.iter().zip(e.center()).map(|(xi, c)| xi.plus(&LinExpr::constant(-c))).collect())
}

/// Representation 1 with `level` in place of the constant `1`: encodes
/// `(x - c)^T P(t) (x - c) <= level` on `[-1, 1]`.
pub fn rep1_with_level(
    prob: &mut ConicProblem,
    e: &GenEllipsoid,
    f: &SosFactorization,
    x: &[LinExpr],
    level: &LinExpr,
) -> Result<GramBlocks> {
    let y = offsets(e, x)?;
    let n = e.n();
    if f.n() != n || f.d != e.d() {
        return Err(GeError::DimensionMismatch("factorization does not match the ellipsoid".into()));
    }
    let (wb, wc) = f.weights();
    let (r1, r2) = (f.b.rows(), f.c.rows());
    let size = r1 + r2 + 1;
    let last = size - 1;
    let mut m = AffinePolyMat::zeros(size, rep1_degree(f.d));
    let mut emit = |rows: usize, off: usize, fac: &crate::polymat::RectPolyMat<f64>, w: &crate::polymat::UniPoly<f64>| {
        for r in 0..rows {
            for (k, c) in w.coeffs().iter().enumerate() {
                m.add(off + r, off + r, k, &LinExpr::constant(*c));
            }
            // w(t) * sum_l F[r, l](t) y_l
            for (l, yl) in y.iter().enumerate() {
                let p = fac.get(r, l).mul(w);
                for (k, c) in p.coeffs().iter().enumerate() {
                    if *c != 0.0 {
                        m.add(off + r, last, k, &yl.scaled(*c));
                    }
                }
            }
        }
    };
    emit(r1, 0, &f.b, &wb);
    emit(r2, r1, &f.c, &wc);
    m.add(last, last, 0, level);
    let d = rep1_degree(f.d).max(m.d());
    compile_psd_interval(prob, &m, d)
}

pub fn membership_constraints_rep1(
    prob: &mut ConicProblem,
    e: &GenEllipsoid,
    f: &SosFactorization,
    x: &[LinExpr],
) -> Result<GramBlocks> {
    rep1_with_level(prob, e, f, x, &LinExpr::constant(1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Rep2Handles {
    /// the `(n+1) x (n+1)` block `[[X, x - c], [(x - c)^T, 1]]`
    pub lift: PsdBlock,
    pub gram: GramBlocks,
}

/// Coefficients of `Tr(X P(t))` for the leading `n x n` part of `lift`.
pub fn trace_coefficients(lift: &PsdBlock, p: &PolyMat<f64>) -> Vec<LinExpr> {
    let n = p.n();
    (0..=p.d())
        .map(|k| {
            let mut e = LinExpr::default();
            for i in 0..n {
                for j in i..n {
                    let c = p.get(i, j).coeff(k);
                    e.add_term(lift.at(i, j), if i == j { c } else { 2.0 * c });
                }
            }
            e
        })
        .collect()
}

/// Representation 2 with `level` in place of the constant `1`.
pub fn rep2_with_level(
    prob: &mut ConicProblem,
    e: &GenEllipsoid,
    x: &[LinExpr],
    level: &LinExpr,
) -> Result<Rep2Handles> {
    let y = offsets(e, x)?;
    let n = e.n();
    let lift = prob.add_psd(n + 1);
    for (i, yi) in y.iter().enumerate() {
        prob.add_eq(&LinExpr::var(lift.at(i, n)).minus(yi));
    }
    prob.add_eq(&LinExpr::var(lift.at(n, n)).minus(&LinExpr::constant(1.0)));
    let mut coeffs: Vec<LinExpr> = trace_coefficients(&lift, e.matrix()).iter().map(|c| c.scaled(-1.0)).collect();
    coeffs[0].add_assign(level);
    let gram = compile_psd_interval(prob, &AffinePolyMat::scalar(coeffs), e.d())?;
    Ok(Rep2Handles { lift, gram })
}

pub fn membership_constraints_rep2(prob: &mut ConicProblem, e: &GenEllipsoid, x: &[LinExpr]) -> Result<Rep2Handles> {
    rep2_with_level(prob, e, x, &LinExpr::constant(1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Representation {
    Factored,
    Lifted,
}

/// Squared gauge `max_t (x - c)^T P(t) (x - c)` computed by the conic program
/// of the chosen representation; `x in E` iff the value is at most 1.
pub fn sdp_gauge(e: &GenEllipsoid, x: &[f64], rep: Representation, f: Option<&SosFactorization>) -> Result<f64> {
    let mut prob = ConicProblem::new();
    let g = prob.add_free();
    let xs: Vec<LinExpr> = x.iter().map(|v| LinExpr::constant(*v)).collect();
    match rep {
        Representation::Factored => {
            let owned;
            let f = match f {
                Some(f) => f,
                None => {
                    owned = super::sos::sos_factorize(e.matrix())?;
                    &owned
                }
            };
            rep1_with_level(&mut prob, e, f, &xs, &LinExpr::var(g))?;
        }
        Representation::Lifted => {
            rep2_with_level(&mut prob, e, &xs, &LinExpr::var(g))?;
        }
    }
    prob.minimize(LinExpr::var(g));
    let s = solve(&prob);
    match s.status {
        SolveStatus::Optimal => Ok(s.value(g)),
        SolveStatus::Infeasible => Err(GeError::Infeasible),
        SolveStatus::Unbounded => Err(GeError::Unbounded),
        SolveStatus::NumericalFailure => Err(GeError::NumericalFailure("gauge program did not converge".into())),
    }
}

#[cfg(test)]
mod tests;
