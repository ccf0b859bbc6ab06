use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::error::{GeError, Result};
use crate::genellipsoid::ge_norm;
use crate::polymat::{PolyMat, RectPolyMat, UniPoly};
use crate::recognition::{nonneg_on_interval, psd_on_interval};
use crate::scalar::{Rational, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ContractionVerdict {
    Contracting,
    Inconclusive,
    Falsified,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContractionCheck {
    pub max_ratio: f64,
    pub verdict: ContractionVerdict,
    /// index of the matrix attaining `max_ratio`
    pub worst_matrix: usize,
    pub worst_direction: Vec<f64>,
}

/// Largest observed `V(Ax) / V(x)` over `k` seeded random directions and all
/// matrices, where `V` is the norm defined by `p`.
pub fn contraction_sample_check(p: &PolyMat<f64>, mats: &[DMatrix<f64>], k: usize, seed: u64) -> ContractionCheck {
    let n = p.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = ContractionCheck {
        max_ratio: 0.0,
        verdict: ContractionVerdict::Inconclusive,
        worst_matrix: 0,
        worst_direction: vec![0.0; n],
    };
    for _ in 0..k {
        let v: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
        let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let x = DVector::from_iterator(n, v.iter().map(|a| a / norm));
        let vx = ge_norm(p, x.as_slice()).value;
        for (i, a) in mats.iter().enumerate() {
            let ax = a * &x;
            let r = ge_norm(p, ax.as_slice()).value / vx;
            if r > best.max_ratio {
                best.max_ratio = r;
                best.worst_matrix = i;
                best.worst_direction = x.iter().copied().collect();
            }
        }
    }
    best.verdict = if best.max_ratio <= 1.0 - 1e-9 {
        ContractionVerdict::Contracting
    } else if best.max_ratio > 1.0 + 1e-9 {
        ContractionVerdict::Falsified
    } else {
        ContractionVerdict::Inconclusive
    };
    best
}

/// Exact check of `P(s(t)) - A^T P(t) A psd on [-1, 1]`, which gives
/// `V(Ax) <= V(x)` for all `x` whenever `s` maps `[-1, 1]` into itself.
pub fn contraction_certificate<S: Scalar>(p: &PolyMat<S>, a: &[Vec<S>], s: &UniPoly<S>) -> Result<bool> {
    let pr = p.to_rational();
    let sr = s.to_rational();
    let one = UniPoly::constant(Rational::from_i64(1));
    if !nonneg_on_interval(&one.sub(&sr))? || !nonneg_on_interval(&one.add(&sr))? {
        return Err(GeError::ReindexOutOfRange);
    }
    let ar: Vec<Vec<Rational>> = a.iter().map(|r| r.iter().map(|v| v.to_rational()).collect()).collect();
    if ar.len() != pr.n() || ar.iter().any(|r| r.len() != pr.n()) {
        return Err(GeError::DimensionMismatch("matrix size differs from P".into()));
    }
    let shifted = pr.compose(&sr);
    let image = RectPolyMat::constant(&ar).congruence(&pr, pr.d())?;
    let d = shifted.d().max(image.d());
    let diff = shifted.with_degree(d)?.sub(&image.with_degree(d)?)?;
    Ok(psd_on_interval(&diff)?.holds)
}
