//! Exact generalized-ellipsoid representations of intersections of
//! semiellipsoids and of centrally symmetric polytopes.

use nalgebra::DMatrix;

use crate::error::{GeError, Result};
use crate::genellipsoid::GenEllipsoid;
use crate::polymat::{PolyMat, UniPoly};
use crate::scalar::{Rational, Scalar, ScalarField};
use crate::simplex_tour::build_tour;

fn min_eig(m: &[Vec<f64>]) -> f64 {
    let n = m.len();
    DMatrix::from_fn(n, n, |i, j| m[i][j]).symmetric_eigenvalues().min()
}

/// `{x : x^T P_i x <= 1 for every i}` as `P(t) = sum_i p_i(t) P_i`, where
/// `p_i` is the simplex tour of length `m`. The degree is `2m - 3`
/// (zero when `m = 1`).
pub fn from_semiellipsoids<S: Scalar>(mats: &[Vec<Vec<S>>]) -> Result<GenEllipsoid> {
    let m = mats.len();
    let Some(first) = mats.first() else {
        return Err(GeError::InvalidArgument("no matrices given".into()));
    };
    let n = first.len();
    let mut sum = vec![vec![0.0; n]; n];
    for (idx, p) in mats.iter().enumerate() {
        if p.len() != n || p.iter().any(|r| r.len() != n) {
            return Err(GeError::DimensionMismatch(format!("matrix {idx} is not {n}x{n}")));
        }
        for i in 0..n {
            for j in 0..n {
                if p[i][j] != p[j][i] {
                    return Err(GeError::InvalidArgument(format!("matrix {idx} is not symmetric")));
                }
            }
        }
        let pf: Vec<Vec<f64>> = p.iter().map(|r| r.iter().map(|v| v.to_f64()).collect()).collect();
        if min_eig(&pf) < -1e-10 {
            return Err(GeError::NotPsd { index: idx });
        }
        for i in 0..n {
            for j in 0..n {
                sum[i][j] += pf[i][j];
            }
        }
    }
    if min_eig(&sum) <= 1e-10 {
        return Err(GeError::NotCompact);
    }
    let exact_mats: Vec<Vec<Vec<Rational>>> = mats
        .iter()
        .map(|p| p.iter().map(|r| r.iter().map(|v| v.to_rational()).collect()).collect())
        .collect();
    if m == 1 {
        return Ok(GenEllipsoid::trusted(PolyMat::constant(&exact_mats[0])?, None));
    }
    let field = if S::FIELD == ScalarField::ExactRational && m <= 3 {
        ScalarField::ExactRational
    } else {
        ScalarField::Float64
    };
    let tour = build_tour(m, field)?;
    let d = 2 * m - 3;
    let p = PolyMat::from_fn(n, d, |i, j| {
        tour.exact
            .iter()
            .zip(&exact_mats)
            .fold(UniPoly::zero(), |acc, (pi, mat)| acc.add(&pi.scale(&mat[i][j])))
    })?;
    // psd on [-1,1] since each p_i >= 0 there; the kernel condition follows
    // from P(t_i) = P_i and the nonsingular sum
    Ok(GenEllipsoid::trusted(p, None))
}

/// `{x : |h_i^T x| <= 1}` for the rows `h_i` of `h`.
pub fn from_polytope<S: Scalar>(h: &[Vec<S>]) -> Result<GenEllipsoid> {
    let mats: Vec<Vec<Vec<Rational>>> = h
        .iter()
        .map(|row| {
            let r: Vec<Rational> = row.iter().map(|v| v.to_rational()).collect();
            r.iter().map(|a| r.iter().map(|b| a * b).collect()).collect()
        })
        .collect();
    // rank-one products are formed exactly so each P_i is truly psd
    from_semiellipsoids(&mats)
}

/// Pairs the rows of `{x : A x <= 1}` into symmetric facets `+-h`.
/// Rows without an antipodal partner are rejected.
pub fn symmetric_rows<S: Scalar>(a: &[Vec<S>]) -> Result<Vec<Vec<S>>> {
    let mut used = vec![false; a.len()];
    let mut out = Vec::new();
    for i in 0..a.len() {
        if used[i] {
            continue;
        }
        let neg: Vec<S> = a[i].iter().map(|v| -v.clone()).collect();
        let partner = (i + 1..a.len()).find(|&j| !used[j] && a[j] == neg);
        match partner {
            Some(j) => {
                used[i] = true;
                used[j] = true;
                out.push(a[i].clone());
            }
            None => {
                return Err(GeError::InvalidArgument(format!(
                    "row {i} has no antipodal partner; polytope is not centrally symmetric"
                )))
            }
        }
    }
    Ok(out)
}
