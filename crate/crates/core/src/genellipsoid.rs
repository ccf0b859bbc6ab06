//! Validated generalized ellipsoids, their gauge, membership and boundary.

use serde::Serialize;

use crate::error::{GeError, Result};
use crate::polymat::{quad_form, PolyMat, UniPoly};
use crate::recognition::{nonneg_on_interval, validate_ge};
use crate::scalar::{rationalize, Rational, Scalar};
use crate::sturm::real_roots_in;

/// `{x : (x - x0)^T P(t) (x - x0) <= 1 for all t in [-1, 1]}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GenEllipsoid {
    p: PolyMat<f64>,
    #[serde(skip)]
    exact: PolyMat<Rational>,
    center: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormValue {
    pub value: f64,
    /// Maximizing parameter (smallest one on ties).
    pub t_star: f64,
}

impl GenEllipsoid {
    /// Validates both defining conditions exactly.
    pub fn new<S: Scalar>(p: &PolyMat<S>, center: Option<Vec<f64>>) -> Result<Self> {
        validate_ge(p)?;
        Ok(Self::trusted(p.to_rational(), center))
    }

    /// Skips validation; for constructions whose validity is guaranteed.
    pub fn trusted(exact: PolyMat<Rational>, center: Option<Vec<f64>>) -> Self {
        let n = exact.n();
        GenEllipsoid {
            p: exact.to_f64(),
            exact,
            center: center.unwrap_or_else(|| vec![0.0; n]),
        }
    }

    pub fn with_center(mut self, center: Vec<f64>) -> Result<Self> {
        if center.len() != self.n() {
            return Err(GeError::DimensionMismatch(format!(
                "center of length {} for n = {}",
                center.len(),
                self.n()
            )));
        }
        self.center = center;
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.p.n()
    }

    pub fn d(&self) -> usize {
        self.p.d()
    }

    pub fn matrix(&self) -> &PolyMat<f64> {
        &self.p
    }

    pub fn exact_matrix(&self) -> &PolyMat<Rational> {
        &self.exact
    }

    pub fn center(&self) -> &[f64] {
        &self.center
    }

    fn check_dim(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.n() {
            return Err(GeError::DimensionMismatch(format!(
                "point of length {} for n = {}",
                x.len(),
                self.n()
            )));
        }
        Ok(())
    }

    /// Gauge of `x` relative to the center.
    pub fn gauge(&self, x: &[f64]) -> Result<NormValue> {
        self.check_dim(x)?;
        let y: Vec<f64> = x.iter().zip(&self.center).map(|(a, b)| a - b).collect();
        Ok(ge_norm(&self.p, &y))
    }

    pub fn contains(&self, x: &[f64]) -> Result<bool> {
        Ok(self.gauge(x)?.value <= 1.0 + 1e-9)
    }

    /// Exact membership of a rational point: `1 - q(t) >= 0` on `[-1, 1]`.
    pub fn contains_exact(&self, x: &[Rational]) -> Result<bool> {
        if x.len() != self.n() {
            return Err(GeError::DimensionMismatch("point length".into()));
        }
        let y: Vec<Rational> = x
            .iter()
            .zip(&self.center)
            .map(|(a, c)| a - rationalize(*c))
            .collect();
        let f = quad_form(&self.exact, &y);
        nonneg_on_interval(&UniPoly::constant(Rational::from_i64(1)).sub(&f))
    }

    /// `k` boundary points along equally spaced directions (planar sets).
    pub fn boundary_polyline(&self, k: usize) -> Result<Vec<[f64; 2]>> {
        if self.n() != 2 {
            return Err(GeError::DimensionNotTwo);
        }
        if k < 3 {
            return Err(GeError::InvalidArgument("need at least 3 boundary points".into()));
        }
        Ok((0..k)
            .map(|j| {
                let a = 2.0 * std::f64::consts::PI * j as f64 / k as f64;
                let u = [a.cos(), a.sin()];
                let r = ge_norm(&self.p, &u).value;
                [self.center[0] + u[0] / r, self.center[1] + u[1] / r]
            })
            .collect())
    }
}

/// Maximum of `f` over `[lo, hi]` and the smallest maximizer.
///
/// Candidates are the endpoints and the real roots of `f'`, isolated by
/// Sturm bisection and polished with Newton steps.
pub fn univariate_max(f: &UniPoly<f64>, lo: f64, hi: f64) -> (f64, f64) {
    let mut cands = vec![lo];
    if f.degree().unwrap_or(0) >= 2 {
        let df = f.derivative().to_rational();
        cands.extend(real_roots_in(&df, lo, hi));
    }
    cands.push(hi);
    cands.sort_by(f64::total_cmp);
    let mut best = (f64::NEG_INFINITY, lo);
    for t in cands {
        let v = f.eval(&t);
        if v > best.0 {
            best = (v, t);
        }
    }
    best
}

/// `max_t sqrt(x^T P(t) x)` over `[-1, 1]`.
pub fn ge_norm(p: &PolyMat<f64>, x: &[f64]) -> NormValue {
    let f = quad_form(p, x);
    let (v, t) = univariate_max(&f, -1.0, 1.0);
    NormValue { value: v.max(0.0).sqrt(), t_star: t }
}
