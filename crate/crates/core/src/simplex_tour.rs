//! Nonnegative polynomial partitions of unity on `[-1, 1]` that visit the
//! vertices of the simplex at prescribed nodes.

use serde::Serialize;

use crate::error::{GeError, Result};
use crate::polymat::UniPoly;
use crate::recognition::nonneg_on_interval;
use crate::scalar::{rationalize, Rational, ScalarField};

/// Roots of the Legendre polynomial of degree `k`, ascending.
///
/// Newton iteration on the three-term recurrence from Chebyshev-like
/// starting guesses; the result is symmetrized about zero.
pub fn legendre_nodes(k: usize) -> Vec<f64> {
    let mut roots = Vec::with_capacity(k);
    for i in 1..=k {
        let mut x = (std::f64::consts::PI * (i as f64 - 0.25) / (k as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_eval(k, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        roots.push(x);
    }
    roots.sort_by(f64::total_cmp);
    let sym: Vec<f64> = (0..k).map(|i| 0.5 * (roots[i] - roots[k - 1 - i])).collect();
    let mut out = sym;
    if k % 2 == 1 {
        out[k / 2] = 0.0;
    }
    out
}

/// `(P_k(x), P_k'(x))`.
pub fn legendre_eval(k: usize, x: f64) -> (f64, f64) {
    if k == 0 {
        return (1.0, 0.0);
    }
    let (mut p0, mut p1) = (1.0, x);
    for j in 2..=k {
        let p2 = ((2 * j - 1) as f64 * x * p1 - (j - 1) as f64 * p0) / j as f64;
        p0 = p1;
        p1 = p2;
    }
    let dp = k as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

#[derive(Debug, Clone, Serialize)]
pub struct TourPolynomials {
    pub m: usize,
    pub field: ScalarField,
    pub nodes: Vec<f64>,
    pub polys: Vec<UniPoly<f64>>,
    #[serde(skip)]
    pub exact: Vec<UniPoly<Rational>>,
}

impl TourPolynomials {
    /// Wraps given exact polynomials (used to build perturbed tours).
    pub fn from_parts(nodes: Vec<f64>, exact: Vec<UniPoly<Rational>>, field: ScalarField) -> Self {
        TourPolynomials {
            m: exact.len(),
            field,
            nodes,
            polys: exact.iter().map(|p| p.to_f64()).collect(),
            exact,
        }
    }

    pub fn max_degree(&self) -> usize {
        self.exact.iter().filter_map(|p| p.degree()).max().unwrap_or(0)
    }

    /// `p(t)` as a point of the simplex.
    pub fn eval(&self, t: f64) -> Vec<f64> {
        self.polys.iter().map(|p| p.eval(&t)).collect()
    }
}

/// Unnormalized tour polynomial `q_i` for nodes `t_1 < ... < t_m`.
fn q_poly(i: usize, nodes: &[Rational]) -> UniPoly<Rational> {
    let m = nodes.len();
    let one = Rational::from_integer(1.into());
    let mut q = if i == 0 {
        UniPoly::new(vec![one.clone(), -one.clone()])
    } else if i == m - 1 {
        UniPoly::new(vec![one.clone(), one.clone()])
    } else {
        UniPoly::new(vec![one.clone(), Rational::from_integer(0.into()), -one.clone()])
    };
    for (j, tj) in nodes.iter().enumerate().take(m - 1).skip(1) {
        if j == i {
            continue;
        }
        let f = UniPoly::new(vec![-tj.clone(), one.clone()]);
        q = q.mul(&f.mul(&f));
    }
    q
}

/// Tour through the simplex vertices at `-1`, the Legendre roots of degree
/// `m - 2`, and `1`. Polynomials have degree `2m - 3`.
///
/// The polynomials are formed over the rationals from the (rounded) nodes,
/// so each one is exactly nonnegative on `[-1, 1]`. The exact field is
/// offered for `m <= 3`, where every node is rational.
pub fn build_tour(m: usize, field: ScalarField) -> Result<TourPolynomials> {
    if m < 2 {
        return Err(GeError::InvalidArgument("a tour needs m >= 2".into()));
    }
    if field == ScalarField::ExactRational && m > 3 {
        return Err(GeError::InvalidArgument(
            "exact tours are available for m <= 3 only".into(),
        ));
    }
    let mut nodes = vec![-1.0];
    nodes.extend(legendre_nodes(m - 2));
    nodes.push(1.0);
    let rnodes: Vec<Rational> = nodes.iter().map(|&t| rationalize(t)).collect();
    let exact = (0..m)
        .map(|i| {
            let q = q_poly(i, &rnodes);
            let s = q.eval(&rnodes[i]);
            q.scale(&(Rational::from_integer(1.into()) / s))
        })
        .collect();
    Ok(TourPolynomials::from_parts(nodes, exact, field))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TourReport {
    pub nonnegative: bool,
    pub partition_of_unity: bool,
    pub interpolates_vertices: bool,
    pub degree_optimal: bool,
    pub max_degree: usize,
    pub partition_residual: f64,
    pub interpolation_residual: f64,
}

impl TourReport {
    pub fn passed(&self) -> bool {
        self.nonnegative && self.partition_of_unity && self.interpolates_vertices && self.degree_optimal
    }
}

pub fn verify_tour(tour: &TourPolynomials) -> Result<TourReport> {
    let mut nonnegative = true;
    for p in &tour.exact {
        nonnegative &= nonneg_on_interval(p)?;
    }
    let scale = tour.polys.iter().map(|p| p.max_abs_coeff()).fold(1.0, f64::max);
    let width = tour.polys.iter().map(|p| p.coeffs().len()).max().unwrap_or(1);
    let mut partition_residual: f64 = 0.0;
    for k in 0..width {
        let s: f64 = tour.polys.iter().map(|p| p.coeff(k)).sum();
        let target = if k == 0 { 1.0 } else { 0.0 };
        partition_residual = partition_residual.max((s - target).abs() / scale);
    }
    let interpolation_residual = tour
        .polys
        .iter()
        .zip(&tour.nodes)
        .map(|(p, t)| (p.eval(t) - 1.0).abs())
        .fold(0.0, f64::max);
    let max_degree = tour.max_degree();
    Ok(TourReport {
        nonnegative,
        partition_of_unity: partition_residual <= 1e-9,
        interpolates_vertices: interpolation_residual <= 1e-10,
        degree_optimal: max_degree == 2 * tour.m - 3,
        max_degree,
        partition_residual,
        interpolation_residual,
    })
}
