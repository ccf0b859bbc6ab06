use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, StandardNormal};
use serde::{Deserialize, Serialize};

use super::{golden_max, to_dmatrix};
use crate::error::{GeError, Result};
use crate::polymat::PolyMat;
use crate::sdp::{
    compile_psd_interval, require_optimal, solve_with, trace_coefficients, SolverSettings, AffinePolyMat, ConicProblem, LinExpr,
};

/// Noisy covariance measurements `Sigma_i` at times `t_i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CovSamples {
    pub times: Vec<f64>,
    pub mats: Vec<Vec<Vec<f64>>>,
}

impl CovSamples {
    pub fn new(times: Vec<f64>, mats: Vec<Vec<Vec<f64>>>) -> Result<Self> {
        let s = CovSamples { times, mats };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.times.len() != self.mats.len() {
            return Err(GeError::DimensionMismatch(format!(
                "{} times for {} matrices",
                self.times.len(),
                self.mats.len()
            )));
        }
        if self.mats.is_empty() {
            return Err(GeError::InvalidArgument("no samples".into()));
        }
        if let Some(t) = self.times.iter().find(|t| !(-1.0..=1.0).contains(*t)) {
            return Err(GeError::InvalidArgument(format!("time {t} outside [-1, 1]")));
        }
        let n = self.mats[0].len();
        for m in &self.mats {
            if m.len() != n || m.iter().any(|r| r.len() != n) {
                return Err(GeError::DimensionMismatch("samples of differing sizes".into()));
            }
            for i in 0..n {
                for j in 0..i {
                    if (m[i][j] - m[j][i]).abs() > 1e-9 * (1.0 + m[i][j].abs()) {
                        return Err(GeError::InvalidArgument("sample matrix is not symmetric".into()));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.mats.first().map_or(0, |m| m.len())
    }

    pub fn m(&self) -> usize {
        self.mats.len()
    }

    pub fn matrix(&self, i: usize) -> DMatrix<f64> {
        to_dmatrix(&self.mats[i]).expect("validated")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Portfolio {
    pub x: Vec<f64>,
    /// optimal worst-case variance of the model that produced `x`
    pub value: f64,
}

// Both the weights and the fitted coefficients enter quadratically, so a gap of `e` leaves them
// accurate to about `sqrt(e)`.
fn tight() -> SolverSettings {
    SolverSettings { tol: 1e-12, ..SolverSettings::default() }
}

/// Frobenius projection onto the psd cone.
pub fn nearest_psd(s: &DMatrix<f64>) -> DMatrix<f64> {
    let sym = (s + s.transpose()) * 0.5;
    let e = sym.symmetric_eigen();
    let l = DMatrix::from_diagonal(&e.eigenvalues.map(|v| v.max(0.0)));
    let r = &e.eigenvectors * l * e.eigenvectors.transpose();
    (&r + r.transpose()) * 0.5
}

/// `min_x max_i x^T S_i x` over the simplex, `S_i` the psd projections of
/// the samples.
///
/// Posed in inequality form with one `(n+1)`-block per sample,
/// `[[g, x^T L_i], [L_i^T x, I]] psd` where `S_i = L_i L_i^T`, and solved
/// through its conic dual so the normal equations stay `(n+1) x (n+1)`.
pub fn portfolio_baseline(c: &CovSamples) -> Result<Portfolio> {
    c.validate()?;
    let n = c.n();
    let mut prob = ConicProblem::new();
    // rows 0..n pair with x, row n with g
    let mut rows: Vec<LinExpr> = vec![LinExpr::default(); n + 1];
    let mut objective = LinExpr::default();
    let projected: Vec<DMatrix<f64>> = (0..c.m()).map(|i| nearest_psd(&c.matrix(i))).collect();
    // work with S_i / scale so the block entries are O(1)
    let scale = projected.iter().map(|s| s.trace()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    for s in &projected {
        let e = (s / scale).symmetric_eigen();
        let l = DMatrix::from_fn(n, n, |a, j| e.eigenvectors[(a, j)] * e.eigenvalues[j].max(0.0).sqrt());
        let z = prob.add_psd(n + 1);
        rows[n].add_term(z.at(0, 0), -1.0);
        for (xl, row) in rows.iter_mut().enumerate().take(n) {
            for j in 0..n {
                row.add_term(z.at(0, 1 + j), -2.0 * l[(xl, j)]);
            }
        }
        for j in 0..n {
            objective.add_term(z.at(1 + j, 1 + j), 1.0);
        }
    }
    let u = prob.add_free();
    objective.add_term(u, 1.0);
    for row in rows.iter_mut().take(n) {
        let w = prob.add_nonneg();
        row.add_term(w, -1.0);
        row.add_term(u, 1.0);
    }
    rows[n].constant = 1.0;
    for r in &rows {
        prob.add_eq(r);
    }
    prob.minimize(objective);
    let s = require_optimal(solve_with(&prob, &tight()))?;
    Ok(Portfolio { x: s.dual[..n].to_vec(), value: s.dual[n] * scale })
}

/// Least-squares fit `min sum ||P(t_i) - Sigma_i||_F^2` over symmetric
/// polynomial matrices of degree `d` that are psd on `[-1, 1]`.
pub fn fit_cov_curve(c: &CovSamples, d: usize) -> Result<PolyMat<f64>> {
    c.validate()?;
    let n = c.n();
    let m = c.m();
    let v = DMatrix::from_fn(m, d + 1, |i, k| c.times[i].powi(k as i32));
    let qr = v.qr();
    let (q, r) = (qr.q(), qr.r());
    let mut prob = ConicProblem::new();
    let mut pa = AffinePolyMat::zeros(n, d);
    let mut coeff_vars = Vec::new();
    for a in 0..n {
        for b in a..n {
            let vars = prob.add_frees(d + 1);
            for (k, var) in vars.iter().enumerate() {
                pa.add(a, b, k, &LinExpr::var(*var));
            }
            coeff_vars.push(((a, b), vars));
        }
    }
    let mut objective = LinExpr::default();
    for ((a, b), vars) in &coeff_vars {
        let w: f64 = if a == b { 1.0 } else { 2.0 };
        let s = nalgebra::DVector::from_fn(m, |i, _| c.mats[i][*a][*b]);
        let qs = q.tr_mul(&s);
        for row in 0..r.nrows() {
            // sqrt(w) (R p - Q^T s)_row, bounded through [[1, e], [e, y]] psd
            let mut e = LinExpr::constant(-w.sqrt() * qs[row]);
            for (k, var) in vars.iter().enumerate() {
                e.add_term(*var, w.sqrt() * r[(row, k)]);
            }
            let blk = prob.add_psd(2);
            prob.add_eq(&LinExpr::var(blk.at(0, 0)).minus(&LinExpr::constant(1.0)));
            prob.add_eq(&LinExpr::var(blk.at(0, 1)).minus(&e));
            objective.add_term(blk.at(1, 1), 1.0);
        }
    }
    compile_psd_interval(&mut prob, &pa, d)?;
    prob.minimize(objective);
    let s = require_optimal(solve_with(&prob, &tight()))?;
    Ok(pa.evaluate(&s))
}

/// `min_x max_t x^T P(t) x` over the simplex, through the lifted
/// representation `[[X, x], [x^T, 1]] psd`, `g - Tr(X P(t)) >= 0` on `[-1, 1]`.
pub fn portfolio_ge(p_star: &PolyMat<f64>) -> Result<Portfolio> {
    let n = p_star.n();
    let scale = p_star.max_abs_coeff().max(1.0);
    let grid_min = (0..=400)
        .map(|i| {
            let t = -1.0 + i as f64 / 200.0;
            let m = p_star.eval(&t);
            DMatrix::from_fn(n, n, |a, b| m[a][b]).symmetric_eigenvalues().min()
        })
        .fold(f64::INFINITY, f64::min);
    if grid_min < -1e-6 * scale {
        return Err(GeError::NotPsdOnInterval);
    }
    let mut prob = ConicProblem::new();
    let g = prob.add_free();
    let lift = prob.add_psd(n + 1);
    prob.add_eq(&LinExpr::var(lift.at(n, n)).minus(&LinExpr::constant(1.0)));
    let mut budget = LinExpr::constant(-1.0);
    for i in 0..n {
        budget.add_term(lift.at(i, n), 1.0);
        prob.add_ge(&LinExpr::var(lift.at(i, n)));
    }
    prob.add_eq(&budget);
    let unit = p_star.scale_poly(&crate::polymat::UniPoly::constant(1.0 / scale));
    let mut coeffs: Vec<LinExpr> = trace_coefficients(&lift, &unit).iter().map(|e| e.scaled(-1.0)).collect();
    coeffs[0].add_term(g, 1.0);
    compile_psd_interval(&mut prob, &AffinePolyMat::scalar(coeffs), p_star.d())?;
    prob.minimize(LinExpr::var(g));
    let s = require_optimal(solve_with(&prob, &tight()))?;
    Ok(Portfolio { x: (0..n).map(|i| s.value(lift.at(i, n))).collect(), value: s.value(g) * scale })
}

/// `6 sin(t+1) A1 A1^T + 2 (1-t^2) A2 A2^T + (t+1)^2 A3 A3^T`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrueCovariance {
    pub factors: [DMatrix<f64>; 3],
}

impl TrueCovariance {
    pub fn eval(&self, t: f64) -> DMatrix<f64> {
        let w = [6.0 * (t + 1.0).sin(), 2.0 * (1.0 - t * t), (t + 1.0) * (t + 1.0)];
        let n = self.factors[0].nrows();
        let mut s = DMatrix::zeros(n, n);
        for (a, wk) in self.factors.iter().zip(w) {
            s += a * a.transpose() * wk;
        }
        s
    }
}

#[derive(Debug, Clone)]
pub struct CovDemo {
    pub samples: CovSamples,
    pub truth: TrueCovariance,
}

pub const DEMO_ASSETS: usize = 10;
pub const DEMO_SAMPLES: usize = 500;
pub const DEMO_NOISE: f64 = 30.0;
/// Seed used for the documented demo run.
pub const DEMO_SEED: u64 = 57;

/// Regenerates the ten-asset demo: factors `A_k` (10 x 2, row-major) with
/// standard normal entries drawn in order `A1, A2, A3`, then for each of the
/// 500 equispaced times a symmetric noise matrix whose upper-triangle
/// entries (row-major) are normal with standard deviation 30.
/// The generator is ChaCha8 seeded with `seed`.
pub fn synth_covariance_demo(seed: u64) -> CovDemo {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = DEMO_ASSETS;
    let mut factor = || {
        let v: Vec<f64> = (0..n * 2).map(|_| StandardNormal.sample(&mut rng)).collect();
        DMatrix::from_row_slice(n, 2, &v)
    };
    let truth = TrueCovariance { factors: [factor(), factor(), factor()] };
    let noise = Normal::new(0.0, DEMO_NOISE).expect("positive deviation");
    let m = DEMO_SAMPLES;
    let times: Vec<f64> = (0..m).map(|i| -1.0 + 2.0 * i as f64 / (m - 1) as f64).collect();
    let mats = times
        .iter()
        .map(|&t| {
            let mut s = truth.eval(t);
            for i in 0..n {
                for j in i..n {
                    let z = noise.sample(&mut rng);
                    s[(i, j)] += z;
                    if i != j {
                        s[(j, i)] += z;
                    }
                }
            }
            super::to_rows(&s)
        })
        .collect();
    CovDemo { samples: CovSamples { times, mats }, truth }
}

/// `max_t x^T Sigma(t) x` over `[-1, 1]`: 10001-point grid, then
/// golden-section refinement around the best grid point.
pub fn worst_case_variance(x: &[f64], sigma: impl Fn(f64) -> DMatrix<f64>) -> (f64, f64) {
    let xv = nalgebra::DVector::from_column_slice(x);
    let f = |t: f64| (xv.transpose() * sigma(t) * &xv)[(0, 0)];
    let k = 10_000;
    let mut best = (f64::NEG_INFINITY, -1.0);
    for i in 0..=k {
        let t = -1.0 + 2.0 * i as f64 / k as f64;
        let v = f(t);
        if v > best.0 {
            best = (v, t);
        }
    }
    let h = 2.0 / k as f64;
    let (v, t) = golden_max(f, (best.1 - h).max(-1.0), (best.1 + h).min(1.0));
    if v > best.0 {
        (v, t)
    } else {
        best
    }
}

#[cfg(test)]
mod tests;
