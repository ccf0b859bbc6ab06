//! Embedded conic solver and the polynomial-matrix constraints compiled
//! into it.

mod compile;
mod geometry;
mod membership;
mod problem;
mod solver;
mod sos;
#[cfg(test)]
pub(crate) mod testutil;

pub use geometry::{ge_distance, ge_distance_problem, minimize_over_ge, minimize_over_ge_problem, require_optimal, GeDistance, GeOptimum, LinearConstraint};
pub use membership::{
    membership_constraints_rep1, membership_constraints_rep2, rep1_degree, rep1_size, rep1_with_level, rep2_size,
    rep2_with_level, sdp_gauge, trace_coefficients, Rep2Handles, Representation,
};
pub use problem::{
    Certificate, ConicProblem, ConicSolution, Equality, LinExpr, PsdBlock, Residuals, SolveStatus, Var,
};
pub use compile::{compile_psd_interval, gram_polymat, gram_sizes, AffinePolyMat, GramBlocks};
pub use solver::{solve, solve_with, SolverSettings};
pub use sos::{sos_factorize, SosFactorization};
