//! Optimization over generalized ellipsoids.

use serde::Serialize;

use super::membership::membership_constraints_rep2;
use super::problem::{ConicProblem, ConicSolution, LinExpr, Residuals, SolveStatus, Var};
use super::solver::solve;
use crate::error::{GeError, Result};
use crate::genellipsoid::GenEllipsoid;

/// `a^T x = b` or `a^T x <= b`.
#[derive(Debug, Clone, PartialEq)]
pub enum LinearConstraint {
    Eq(Vec<f64>, f64),
    Le(Vec<f64>, f64),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeOptimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub residuals: Residuals,
    pub iterations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeDistance {
    pub distance: f64,
    /// closest point of the first set
    pub y: Vec<f64>,
    /// closest point of the second set
    pub z: Vec<f64>,
    pub residuals: Residuals,
}

/// Maps a solver status to the crate error, passing optimal solutions through.
pub fn require_optimal(s: ConicSolution) -> Result<ConicSolution> {
    match s.status {
        SolveStatus::Optimal => Ok(s),
        SolveStatus::Infeasible => Err(GeError::Infeasible),
        SolveStatus::Unbounded => Err(GeError::Unbounded),
        SolveStatus::NumericalFailure => Err(GeError::NumericalFailure(format!(
            "no convergence after {} iterations (residuals {:.2e}, {:.2e}, {:.2e})",
            s.iterations, s.residuals.primal, s.residuals.dual, s.residuals.gap
        ))),
    }
}

fn dot(a: &[f64], x: &[Var]) -> LinExpr {
    let mut e = LinExpr::default();
    for (c, v) in a.iter().zip(x) {
        e.add_term(*v, *c);
    }
    e
}

fn build_minimize(e: &GenEllipsoid, c: &[f64], extra: &[LinearConstraint]) -> Result<(ConicProblem, Vec<Var>)> {
    let n = e.n();
    if c.len() != n {
        return Err(GeError::DimensionMismatch(format!("objective of length {} for n = {n}", c.len())));
    }
    let mut prob = ConicProblem::new();
    let x = prob.add_frees(n);
    let xe: Vec<LinExpr> = x.iter().map(|v| LinExpr::var(*v)).collect();
    membership_constraints_rep2(&mut prob, e, &xe)?;
    for con in extra {
        match con {
            LinearConstraint::Eq(a, b) | LinearConstraint::Le(a, b) if a.len() != n => {
                return Err(GeError::DimensionMismatch(format!("constraint of length {} (rhs {b})", a.len())));
            }
            LinearConstraint::Eq(a, b) => prob.add_eq(&dot(a, &x).minus(&LinExpr::constant(*b))),
            LinearConstraint::Le(a, b) => prob.add_le(&dot(a, &x).minus(&LinExpr::constant(*b))),
        }
    }
    prob.minimize(dot(c, &x));
    Ok((prob, x))
}

/// The conic program solved by [`minimize_over_ge`]; free variables
/// `0..n` hold `x`.
pub fn minimize_over_ge_problem(e: &GenEllipsoid, c: &[f64], extra: &[LinearConstraint]) -> Result<ConicProblem> {
    Ok(build_minimize(e, c, extra)?.0)
}

/// Minimizes `c^T x` over `x in E` and the extra linear constraints.
pub fn minimize_over_ge(e: &GenEllipsoid, c: &[f64], extra: &[LinearConstraint]) -> Result<GeOptimum> {
    let (prob, x) = build_minimize(e, c, extra)?;
    let s = require_optimal(solve(&prob))?;
    Ok(GeOptimum {
        x: x.iter().map(|v| s.value(*v)).collect(),
        value: s.objective,
        residuals: s.residuals,
        iterations: s.iterations,
    })
}

struct DistanceVars {
    y: Vec<Var>,
    z: Vec<Var>,
    g: Var,
}

fn build_distance(e1: &GenEllipsoid, e2: &GenEllipsoid) -> Result<(ConicProblem, DistanceVars)> {
    let n = e1.n();
    if e2.n() != n {
        return Err(GeError::DimensionMismatch(format!("dimensions {} and {}", n, e2.n())));
    }
    let mut prob = ConicProblem::new();
    let y = prob.add_frees(n);
    let z = prob.add_frees(n);
    let g = prob.add_free();
    let ye: Vec<LinExpr> = y.iter().map(|v| LinExpr::var(*v)).collect();
    let ze: Vec<LinExpr> = z.iter().map(|v| LinExpr::var(*v)).collect();
    membership_constraints_rep2(&mut prob, e1, &ye)?;
    membership_constraints_rep2(&mut prob, e2, &ze)?;
    // [[g I, y - z], [(y - z)^T, g]] psd
    let arrow = prob.add_psd(n + 1);
    for i in 0..=n {
        prob.add_eq(&LinExpr::var(arrow.at(i, i)).minus(&LinExpr::var(g)));
        for j in i + 1..n {
            prob.add_eq(&LinExpr::var(arrow.at(i, j)));
        }
    }
    for i in 0..n {
        prob.add_eq(&LinExpr::var(arrow.at(i, n)).minus(&ye[i]).plus(&ze[i]));
    }
    prob.minimize(LinExpr::var(g));
    Ok((prob, DistanceVars { y, z, g }))
}

/// The conic program solved by [`ge_distance`]: free variables are `y`,
/// then `z`, then the distance.
pub fn ge_distance_problem(e1: &GenEllipsoid, e2: &GenEllipsoid) -> Result<ConicProblem> {
    Ok(build_distance(e1, e2)?.0)
}

/// Euclidean distance between two generalized ellipsoids.
pub fn ge_distance(e1: &GenEllipsoid, e2: &GenEllipsoid) -> Result<GeDistance> {
    let (prob, v) = build_distance(e1, e2)?;
    let s = require_optimal(solve(&prob))?;
    Ok(GeDistance {
        distance: s.value(v.g),
        y: v.y.iter().map(|x| s.value(*x)).collect(),
        z: v.z.iter().map(|x| s.value(*x)).collect(),
        residuals: s.residuals,
    })
}
