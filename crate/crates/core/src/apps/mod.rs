//! Application drivers built on the conic solver: time-varying portfolios,
//! contraction certificates, robust-to-dynamics inner approximations and
//! shift-robust regression.

mod contraction;
mod portfolio;
mod rdo;
mod regress;

pub use contraction::{contraction_certificate, contraction_sample_check, ContractionCheck, ContractionVerdict};
pub use portfolio::{
    fit_cov_curve, nearest_psd, portfolio_baseline, portfolio_ge, synth_covariance_demo, worst_case_variance,
    CovDemo, CovSamples, Portfolio, TrueCovariance, DEMO_ASSETS, DEMO_NOISE, DEMO_SAMPLES, DEMO_SEED,
};
pub use rdo::{rdo_inner, rdo_outer_sample, RdoInner, RdoInstance, RdoOutcome};
pub use regress::{least_squares, robust_regress, worst_case_residual, RegressFit, RegressInstance};

use nalgebra::DMatrix;

use crate::error::{GeError, Result};

pub fn to_dmatrix(rows: &[Vec<f64>]) -> Result<DMatrix<f64>> {
    let r = rows.len();
    let c = rows.first().map_or(0, |v| v.len());
    if rows.iter().any(|v| v.len() != c) {
        return Err(GeError::DimensionMismatch("ragged matrix rows".into()));
    }
    Ok(DMatrix::from_fn(r, c, |i, j| rows[i][j]))
}

pub fn to_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect()).collect()
}

/// Golden-section refinement of a maximum of `f` bracketed by `[lo, hi]`.
pub(crate) fn golden_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> (f64, f64) {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut a = hi - g * (hi - lo);
    let mut b = lo + g * (hi - lo);
    let (mut fa, mut fb) = (f(a), f(b));
    for _ in 0..100 {
        if hi - lo < 1e-13 {
            break;
        }
        if fa < fb {
            lo = a;
            a = b;
            fa = fb;
            b = lo + g * (hi - lo);
            fb = f(b);
        } else {
            hi = b;
            b = a;
            fb = fa;
            a = hi - g * (hi - lo);
            fa = f(a);
        }
    }
    if fa > fb {
        (fa, a)
    } else {
        (fb, b)
    }
}
