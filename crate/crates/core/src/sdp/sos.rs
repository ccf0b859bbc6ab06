//! Explicit certificates `P = B^T B + (1-t^2) C^T C` (even degree) or
//! `P = (t+1) B^T B + (1-t) C^T C` (odd degree).

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::compile::{compile_psd_interval, AffinePolyMat, GramBlocks};
use super::problem::{ConicProblem, SolveStatus, Var};
use super::solver::{solve_with, SolverSettings};
use crate::error::{GeError, Result};
use crate::polymat::{PolyMat, RectPolyMat, UniPoly};
use crate::recognition::psd_on_interval;
use crate::scalar::Scalar;

const CLIP: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SosFactorization {
    pub b: RectPolyMat<f64>,
    pub c: RectPolyMat<f64>,
    /// degree of the factored matrix; its parity selects the identity
    pub d: usize,
}

impl SosFactorization {
    pub fn new(b: RectPolyMat<f64>, c: RectPolyMat<f64>, d: usize) -> Result<Self> {
        if b.cols() != c.cols() && b.rows() > 0 && c.rows() > 0 {
            return Err(GeError::DimensionMismatch(format!("B has {} columns, C has {}", b.cols(), c.cols())));
        }
        Ok(SosFactorization { b, c, d })
    }

    pub fn odd(&self) -> bool {
        self.d % 2 == 1
    }

    pub fn n(&self) -> usize {
        self.b.cols().max(self.c.cols())
    }

    /// Weights multiplying `B^T B` and `C^T C`.
    pub fn weights(&self) -> (UniPoly<f64>, UniPoly<f64>) {
        if self.odd() {
            (UniPoly::from_f64s(&[1.0, 1.0]), UniPoly::from_f64s(&[1.0, -1.0]))
        } else {
            (UniPoly::constant(1.0), UniPoly::from_f64s(&[1.0, 0.0, -1.0]))
        }
    }

    pub fn reconstruct(&self) -> Result<PolyMat<f64>> {
        let n = self.n();
        let (wb, wc) = self.weights();
        let part = |m: &RectPolyMat<f64>, w: &UniPoly<f64>| -> Result<PolyMat<f64>> {
            if m.rows() == 0 {
                return PolyMat::from_fn(n, self.d, |_, _| UniPoly::zero());
            }
            let g = m.gram(self.d + 2)?.scale_poly(w);
            let deg = g.actual_degree().unwrap_or(0).max(self.d);
            g.with_degree(deg)
        };
        let b = part(&self.b, &wb)?;
        let c = part(&self.c, &wc)?;
        let d = b.d().max(c.d());
        b.with_degree(d)?.add(&c.with_degree(d)?)
    }

    /// Largest coefficient difference between the reconstruction and `p`.
    pub fn residual(&self, p: &PolyMat<f64>) -> Result<f64> {
        let r = self.reconstruct()?;
        let d = r.d().max(p.d());
        Ok(r.with_degree(d)?.sub(&p.with_degree(d)?)?.max_abs_coeff())
    }
}

/// Symmetric variables of all Gram blocks, in a fixed order.
struct VarLayout {
    vars: Vec<Var>,
}

impl VarLayout {
    fn new(sizes: &[(usize, usize)]) -> Self {
        let mut vars = Vec::new();
        for &(block, s) in sizes {
            for i in 0..s {
                for j in i..s {
                    vars.push(Var::Psd { block, i, j });
                }
            }
        }
        VarLayout { vars }
    }

    fn position(&self, v: Var) -> usize {
        let v = match v {
            Var::Psd { block, i, j } if i > j => Var::Psd { block, i: j, j: i },
            v => v,
        };
        self.vars.binary_search(&v).expect("known variable")
    }

    fn pack(&self, q: &[DMatrix<f64>]) -> DVector<f64> {
        DVector::from_iterator(
            self.vars.len(),
            self.vars.iter().map(|v| match *v {
                Var::Psd { block, i, j } => q[block][(i, j)],
                _ => unreachable!(),
            }),
        )
    }

    fn unpack(&self, x: &DVector<f64>, q: &mut [DMatrix<f64>]) {
        for (k, v) in self.vars.iter().enumerate() {
            if let Var::Psd { block, i, j } = *v {
                q[block][(i, j)] = x[k];
                q[block][(j, i)] = x[k];
            }
        }
    }
}

fn min_eig(m: &DMatrix<f64>) -> f64 {
    if m.nrows() == 0 {
        f64::INFINITY
    } else {
        m.clone().symmetric_eigenvalues().min()
    }
}

/// Gradient and negated Hessian of `sum log det Q_k` in the packed coordinates.
fn logdet_derivatives(layout: &VarLayout, q: &[DMatrix<f64>]) -> Option<(DVector<f64>, DMatrix<f64>)> {
    let inv: Vec<DMatrix<f64>> = q.iter().map(|m| m.clone().try_inverse()).collect::<Option<_>>()?;
    let nv = layout.vars.len();
    let mut g = DVector::zeros(nv);
    let mut h = DMatrix::zeros(nv, nv);
    // E_a = e_i e_j^T + e_j e_i^T (halved on the diagonal)
    let parts = |i: usize, j: usize| -> Vec<(usize, usize, f64)> {
        if i == j {
            vec![(i, i, 1.0)]
        } else {
            vec![(i, j, 1.0), (j, i, 1.0)]
        }
    };
    for (a, va) in layout.vars.iter().enumerate() {
        let Var::Psd { block: ba, i, j } = *va else { unreachable!() };
        let w = &inv[ba];
        g[a] = if i == j { w[(i, i)] } else { 2.0 * w[(i, j)] };
        for (b, vb) in layout.vars.iter().enumerate().skip(a) {
            let Var::Psd { block: bb, i: k, j: l } = *vb else { unreachable!() };
            if bb != ba {
                continue;
            }
            // tr(W E_a W E_b) = sum over parts of W[q, p] W[r, s] for E_a part (p, r), E_b part (s, q)
            let mut v = 0.0;
            for &(p, r, ca) in &parts(i, j) {
                for &(s, t, cb) in &parts(k, l) {
                    v += ca * cb * w[(t, p)] * w[(r, s)];
                }
            }
            h[(a, b)] = v;
            h[(b, a)] = v;
        }
    }
    Some((g, h))
}

/// Least-norm correction onto `A x = b`, then damped Newton centering on
/// `sum log det` when the point is strictly interior.
fn polish(prob: &ConicProblem, blocks: &GramBlocks, q: &mut [DMatrix<f64>]) {
    let mut sizes = Vec::new();
    for (blk, _) in blocks.q1.iter().chain(blocks.q2.iter()) {
        sizes.push((*blk, prob.psd_sizes[*blk]));
    }
    let layout = VarLayout::new(&sizes);
    let nv = layout.vars.len();
    let m = prob.equalities.len();
    let mut a = DMatrix::<f64>::zeros(m, nv);
    let mut b = DVector::zeros(m);
    for (r, e) in prob.equalities.iter().enumerate() {
        b[r] = e.rhs;
        for &(v, c) in &e.terms {
            a[(r, layout.position(v))] += c;
        }
    }
    // basis of the row space and of the null space
    let ata: DMatrix<f64> = a.transpose() * &a;
    let eig = ata.symmetric_eigen();
    let top = eig.eigenvalues.max().max(1e-300f64);
    let null: Vec<usize> = (0..nv).filter(|&k| eig.eigenvalues[k] <= 1e-12 * top).collect();
    let range: Vec<usize> = (0..nv).filter(|&k| eig.eigenvalues[k] > 1e-12 * top).collect();
    let proj_range = |r: &DVector<f64>| -> DVector<f64> {
        // least-norm x with A x = r
        let atr = a.transpose() * r;
        let mut x = DVector::zeros(nv);
        for &k in &range {
            let v = eig.eigenvectors.column(k);
            x += v * (v.dot(&atr) / eig.eigenvalues[k]);
        }
        x
    };
    let mut x = layout.pack(q);
    for _ in 0..2 {
        let r = &b - &a * &x;
        x += proj_range(&r);
    }
    layout.unpack(&x, q);

    let scale = q.iter().map(|m| m.norm()).fold(1.0, f64::max);
    if null.is_empty() || q.iter().any(|m| min_eig(m) <= 1e-7 * scale) {
        return;
    }
    let nb = DMatrix::from_fn(nv, null.len(), |i, j| eig.eigenvectors[(i, null[j])]);
    for _ in 0..60 {
        let Some((g, h)) = logdet_derivatives(&layout, q) else { return };
        let gr = nb.tr_mul(&g);
        let hr = nb.transpose() * &h * &nb;
        let Some(ch) = hr.cholesky() else { return };
        let dz = ch.solve(&gr);
        let dec = gr.dot(&dz);
        if dec < 1e-14 {
            break;
        }
        let step = if dec.sqrt() > 0.25 { 1.0 / (1.0 + dec.sqrt()) } else { 1.0 };
        let trial = &x + &nb * &dz * step;
        let mut qt = q.to_vec();
        layout.unpack(&trial, &mut qt);
        if qt.iter().any(|m| min_eig(m) <= 0.0) {
            break;
        }
        x = trial;
        q.clone_from_slice(&qt);
    }
    let r = &b - &a * &x;
    x += proj_range(&r);
    layout.unpack(&x, q);
}

/// `B(t)` with `B(t)[:, l] = sum_k L[:, l (d'+1) + k] t^k` from `Q = L^T L`.
fn factor_block(q: &DMatrix<f64>, n: usize, dp: usize) -> RectPolyMat<f64> {
    let e = q.clone().symmetric_eigen();
    let keep: Vec<usize> = (0..q.nrows()).filter(|&k| e.eigenvalues[k] > CLIP).collect();
    RectPolyMat::from_fn(keep.len(), n, |r, l| {
        let k = keep[r];
        let s = e.eigenvalues[k].sqrt();
        UniPoly::new((0..=dp).map(|j| s * e.eigenvectors[(l * (dp + 1) + j, k)]).collect())
    })
}

/// Gram-certificate factorization of a matrix that is psd on `[-1, 1]`.
pub fn sos_factorize<S: Scalar>(p: &PolyMat<S>) -> Result<SosFactorization> {
    if !psd_on_interval(p)?.holds {
        return Err(GeError::NotPsdOnInterval);
    }
    let pf = p.to_f64();
    let (n, d) = (pf.n(), pf.d());
    let mut prob = ConicProblem::new();
    let blocks = compile_psd_interval(&mut prob, &AffinePolyMat::from_polymat(&pf), d)?;
    let settings = SolverSettings { tol: 1e-10, ..SolverSettings::default() };
    let sol = solve_with(&prob, &settings);
    match sol.status {
        SolveStatus::Optimal => {}
        SolveStatus::NumericalFailure if sol.residuals.primal < 1e-7 => {}
        SolveStatus::Infeasible => return Err(GeError::NotPsdOnInterval),
        s => return Err(GeError::NumericalFailure(format!("gram certificate solve ended with {s:?}"))),
    }
    let mut q = sol.psd.clone();
    polish(&prob, &blocks, &mut q);
    let (b1, dp1) = blocks.q1.expect("first block always present");
    let b = factor_block(&q[b1], n, dp1);
    let c = match blocks.q2 {
        Some((b2, dp2)) => factor_block(&q[b2], n, dp2),
        None => RectPolyMat::from_fn(0, n, |_, _| UniPoly::zero()),
    };
    SosFactorization::new(b, c, d)
}
