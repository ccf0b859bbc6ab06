//! Homogeneous self-dual interior-point method for
//!
//! ```text
//! minimize  c^T x + f^T u   subject to  A x + B u = b,  x in K,
//! ```
//!
//! with `K` a product of a nonnegative orthant and psd cones and `u` free.
//! Nesterov-Todd scaling, Mehrotra predictor-corrector steps, and dense
//! normal equations augmented with the free columns.

use std::collections::HashMap;

use nalgebra::{DMatrix, DVector};

use super::problem::{Certificate, ConicProblem, ConicSolution, Residuals, SolveStatus, Var};

/// Accuracy accepted when the iteration stalls short of `tol`.
const REDUCED_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy)]
pub struct SolverSettings {
    pub tol: f64,
    pub tol_infeasible: f64,
    pub max_iter: usize,
    /// print one line per iteration to stderr
    pub verbose: bool,
}

impl Default for SolverSettings {
    fn default() -> Self {
        SolverSettings {
            tol: 1e-8,
            tol_infeasible: 1e-8,
            max_iter: 200,
            verbose: std::env::var_os("GE_SOLVER_TRACE").is_some(),
        }
    }
}

/// Element of the cone space: orthant part plus psd blocks.
#[derive(Debug, Clone)]
struct Cone {
    l: DVector<f64>,
    s: Vec<DMatrix<f64>>,
}

impl Cone {
    fn zeros(nl: usize, sizes: &[usize]) -> Cone {
        Cone { l: DVector::zeros(nl), s: sizes.iter().map(|&k| DMatrix::zeros(k, k)).collect() }
    }

    fn identity(nl: usize, sizes: &[usize]) -> Cone {
        Cone {
            l: DVector::from_element(nl, 1.0),
            s: sizes.iter().map(|&k| DMatrix::identity(k, k)).collect(),
        }
    }

    fn dot(&self, o: &Cone) -> f64 {
        self.l.dot(&o.l) + self.s.iter().zip(&o.s).map(|(a, b)| a.dot(b)).sum::<f64>()
    }

    fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    fn axpy(&mut self, a: f64, o: &Cone) {
        self.l.axpy(a, &o.l, 1.0);
        for (x, y) in self.s.iter_mut().zip(&o.s) {
            *x += y * a;
        }
    }

    fn scaled(&self, a: f64) -> Cone {
        Cone { l: &self.l * a, s: self.s.iter().map(|m| m * a).collect() }
    }

    fn add(&self, o: &Cone) -> Cone {
        let mut r = self.clone();
        r.axpy(1.0, o);
        r
    }
}

/// Constraint data after presolve.
struct Data {
    m: usize,
    nf: usize,
    nl: usize,
    sizes: Vec<usize>,
    /// per block: (row, full symmetric entries (i, j, a))
    by_block: Vec<Vec<(usize, Vec<(usize, usize, f64)>)>>,
    /// per orthant coordinate: (row, a)
    by_nonneg: Vec<Vec<(usize, f64)>>,
    /// free columns as a dense m x nf matrix
    bmat: DMatrix<f64>,
    b: DVector<f64>,
    c: Cone,
    f: DVector<f64>,
}

impl Data {
    fn apply_a(&self, x: &Cone, u: &DVector<f64>) -> DVector<f64> {
        let mut r = &self.bmat * u;
        for (l, col) in self.by_nonneg.iter().enumerate() {
            for &(row, a) in col {
                r[row] += a * x.l[l];
            }
        }
        for (k, rows) in self.by_block.iter().enumerate() {
            let xm = &x.s[k];
            for (row, ent) in rows {
                r[*row] += ent.iter().map(|&(i, j, a)| a * xm[(i, j)]).sum::<f64>();
            }
        }
        r
    }

    fn apply_at(&self, y: &DVector<f64>) -> Cone {
        let mut out = Cone::zeros(self.nl, &self.sizes);
        for (l, col) in self.by_nonneg.iter().enumerate() {
            out.l[l] = col.iter().map(|&(row, a)| a * y[row]).sum();
        }
        for (k, rows) in self.by_block.iter().enumerate() {
            let m = &mut out.s[k];
            for (row, ent) in rows {
                let yr = y[*row];
                if yr != 0.0 {
                    for &(i, j, a) in ent {
                        m[(i, j)] += a * yr;
                    }
                }
            }
        }
        out
    }

    fn apply_bt(&self, y: &DVector<f64>) -> DVector<f64> {
        self.bmat.tr_mul(y)
    }

    fn nu(&self) -> f64 {
        (self.nl + self.sizes.iter().sum::<usize>()) as f64
    }
}

/// Nesterov-Todd scaling of one psd block: `r^T S r = r^-1 X r^-T = diag(lambda)`.
struct BlockScaling {
    r: DMatrix<f64>,
    rinv: DMatrix<f64>,
    w: DMatrix<f64>,
    lambda: DVector<f64>,
}

fn chol_factor(m: &DMatrix<f64>) -> DMatrix<f64> {
    let sym = (m + m.transpose()) * 0.5;
    if let Some(c) = sym.clone().cholesky() {
        return c.l();
    }
    let e = sym.symmetric_eigen();
    let n = m.nrows();
    let floor = 1e-300f64.max(e.eigenvalues.max().abs() * 1e-18);
    let mut v = e.eigenvectors.clone();
    for j in 0..n {
        let s = e.eigenvalues[j].max(floor).sqrt();
        for i in 0..n {
            v[(i, j)] *= s;
        }
    }
    // V sqrt(L) is a valid (non-triangular) factor
    v
}

fn nt_block(x: &DMatrix<f64>, s: &DMatrix<f64>) -> BlockScaling {
    let lx = chol_factor(x);
    let ls = chol_factor(s);
    let prod = ls.transpose() * &lx;
    let svd = prod.svd(true, true);
    let u = svd.u.unwrap();
    let vt = svd.v_t.unwrap();
    let lam = svd.singular_values.map(|v| v.max(1e-300));
    let isq = lam.map(|v| 1.0 / v.sqrt());
    let mut r = &lx * vt.transpose();
    let mut rinv_t = &ls * &u;
    for j in 0..lam.len() {
        for i in 0..r.nrows() {
            r[(i, j)] *= isq[j];
            rinv_t[(i, j)] *= isq[j];
        }
    }
    let w = &r * r.transpose();
    BlockScaling { rinv: rinv_t.transpose(), w, r, lambda: lam }
}

struct Scaling {
    wl: DVector<f64>,
    laml: DVector<f64>,
    blocks: Vec<BlockScaling>,
}

impl Scaling {
    fn new(x: &Cone, s: &Cone) -> Scaling {
        let wl = x.l.zip_map(&s.l, |a, b| (a / b).sqrt());
        let laml = x.l.zip_map(&s.l, |a, b| (a * b).sqrt());
        let blocks = x.s.iter().zip(&s.s).map(|(a, b)| nt_block(a, b)).collect();
        Scaling { wl, laml, blocks }
    }

    /// `W v W` per block, `w^2 v` on the orthant.
    fn apply_w(&self, v: &Cone) -> Cone {
        Cone {
            l: v.l.zip_map(&self.wl, |a, w| a * w * w),
            s: v.s
                .iter()
                .zip(&self.blocks)
                .map(|(m, b)| &b.w * m * &b.w)
                .collect(),
        }
    }

    /// Scaled primal and dual directions: `r^-1 dX r^-T`, `r^T dS r`.
    fn scale_pair(&self, dx: &Cone, ds: &Cone) -> (Cone, Cone) {
        let tx = Cone {
            l: dx.l.zip_map(&self.wl, |a, w| a / w),
            s: dx.s.iter().zip(&self.blocks).map(|(m, b)| &b.rinv * m * b.rinv.transpose()).collect(),
        };
        let ts = Cone {
            l: ds.l.zip_map(&self.wl, |a, w| a * w),
            s: ds.s.iter().zip(&self.blocks).map(|(m, b)| b.r.transpose() * m * &b.r).collect(),
        };
        (tx, ts)
    }

    /// Solves `lambda o Y = rc` and maps back: `G = r Y r^T` (`w Y` on the orthant).
    fn complementarity_rhs(&self, rc: &Cone) -> Cone {
        Cone {
            l: DVector::from_fn(rc.l.len(), |i, _| self.wl[i] * rc.l[i] / self.laml[i]),
            s: rc
                .s
                .iter()
                .zip(&self.blocks)
                .map(|(m, b)| {
                    let n = m.nrows();
                    let y = DMatrix::from_fn(n, n, |i, j| 2.0 * m[(i, j)] / (b.lambda[i] + b.lambda[j]));
                    &b.r * y * b.r.transpose()
                })
                .collect(),
        }
    }

    /// `-lambda o lambda`, the affine-scaling complementarity target.
    fn minus_lambda_sq(&self) -> Cone {
        Cone {
            l: self.laml.map(|v| -v * v),
            s: self.blocks.iter().map(|b| DMatrix::from_diagonal(&b.lambda.map(|v| -v * v))).collect(),
        }
    }

    fn lambda_cone(&self) -> Cone {
        Cone {
            l: self.laml.clone(),
            s: self.blocks.iter().map(|b| DMatrix::from_diagonal(&b.lambda)).collect(),
        }
    }
}

fn sym_product(a: &Cone, b: &Cone) -> Cone {
    Cone {
        l: a.l.component_mul(&b.l),
        s: a.s.iter().zip(&b.s).map(|(x, y)| (x * y + y * x) * 0.5).collect(),
    }
}

/// Largest `alpha` (capped at `cap`) keeping `v + alpha dv` in the cone,
/// for `v` given in scaled form `diag(lambda)`.
fn max_step_scaled(lam: &Cone, d: &Cone, cap: f64) -> f64 {
    let mut a = cap;
    for i in 0..lam.l.len() {
        if d.l[i] < 0.0 {
            a = a.min(-lam.l[i] / d.l[i]);
        }
    }
    for (lm, dm) in lam.s.iter().zip(&d.s) {
        let n = lm.nrows();
        if n == 0 {
            continue;
        }
        let isq: Vec<f64> = (0..n).map(|i| 1.0 / lm[(i, i)].sqrt()).collect();
        let t = DMatrix::from_fn(n, n, |i, j| 0.5 * (dm[(i, j)] + dm[(j, i)]) * isq[i] * isq[j]);
        let mn = t.symmetric_eigenvalues().min();
        if mn < 0.0 {
            a = a.min(-1.0 / mn);
        }
    }
    a
}

struct Factor {
    lu: nalgebra::LU<f64, nalgebra::Dyn, nalgebra::Dyn>,
    k: DMatrix<f64>,
    m: usize,
}

impl Factor {
    fn solve(&self, h1: &DVector<f64>, h2: &DVector<f64>) -> (DVector<f64>, DVector<f64>) {
        let m = self.m;
        let mut rhs = DVector::zeros(self.k.nrows());
        rhs.rows_mut(0, m).copy_from(h1);
        rhs.rows_mut(m, h2.len()).copy_from(h2);
        let mut x = self.lu.solve(&rhs).unwrap_or_else(|| DVector::zeros(rhs.len()));
        for _ in 0..2 {
            let r = &rhs - &self.k * &x;
            if let Some(dx) = self.lu.solve(&r) {
                x += dx;
            }
        }
        (x.rows(0, m).into_owned(), x.rows(m, h2.len()).into_owned())
    }
}

fn schur(data: &Data, sc: &Scaling) -> Factor {
    let m = data.m;
    let nf = data.nf;
    let mut mm = DMatrix::<f64>::zeros(m, m);
    for (l, col) in data.by_nonneg.iter().enumerate() {
        let w2 = sc.wl[l] * sc.wl[l];
        for &(p, a) in col {
            for &(q, b) in col {
                mm[(p, q)] += a * b * w2;
            }
        }
    }
    for (k, rows) in data.by_block.iter().enumerate() {
        let w = &sc.blocks[k].w;
        let n = w.nrows();
        for (qi, (q, ent_q)) in rows.iter().enumerate() {
            // T = W A_q W
            let mut t = DMatrix::<f64>::zeros(n, n);
            for &(i, j, a) in ent_q {
                for c in 0..n {
                    let wj = a * w[(j, c)];
                    if wj == 0.0 {
                        continue;
                    }
                    for r in 0..n {
                        t[(r, c)] += w[(r, i)] * wj;
                    }
                }
            }
            for (p, ent_p) in rows.iter().take(qi + 1) {
                let v: f64 = ent_p.iter().map(|&(i, j, a)| a * t[(i, j)]).sum();
                mm[(*p, *q)] += v;
                if p != q {
                    mm[(*q, *p)] += v;
                }
            }
        }
    }
    let maxd = (0..m).map(|i| mm[(i, i)].abs()).fold(1.0, f64::max);
    let delta = 1e-14 * maxd;
    let mut k = DMatrix::<f64>::zeros(m + nf, m + nf);
    k.view_mut((0, 0), (m, m)).copy_from(&mm);
    for i in 0..m {
        k[(i, i)] += delta;
    }
    if nf > 0 {
        k.view_mut((0, m), (m, nf)).copy_from(&data.bmat);
        k.view_mut((m, 0), (nf, m)).copy_from(&data.bmat.transpose());
        for i in 0..nf {
            k[(m + i, m + i)] -= delta;
        }
    }
    Factor { lu: k.clone().lu(), k, m }
}

struct Iterate {
    x: Cone,
    s: Cone,
    u: DVector<f64>,
    y: DVector<f64>,
    tau: f64,
    kappa: f64,
}

struct Direction {
    x: Cone,
    s: Cone,
    u: DVector<f64>,
    y: DVector<f64>,
    tau: f64,
    kappa: f64,
}

struct Resid {
    p: DVector<f64>,
    d: Cone,
    f: DVector<f64>,
    g: f64,
}

fn residuals(data: &Data, it: &Iterate) -> Resid {
    let p = data.apply_a(&it.x, &it.u) - &data.b * it.tau;
    let mut d = data.apply_at(&it.y);
    d.axpy(1.0, &it.s);
    d.axpy(-it.tau, &data.c);
    let f = data.apply_bt(&it.y) - &data.f * it.tau;
    let g = data.b.dot(&it.y) - data.c.dot(&it.x) - data.f.dot(&it.u) - it.kappa;
    Resid { p, d, f, g }
}

#[allow(clippy::too_many_arguments)]
fn direction(
    data: &Data,
    sc: &Scaling,
    fac: &Factor,
    it: &Iterate,
    res: &Resid,
    eta: f64,
    rc: &Cone,
    rtau: f64,
    v2: &(DVector<f64>, DVector<f64>),
    wc: &Cone,
    a_wc: &DVector<f64>,
) -> Direction {
    let g = sc.complementarity_rhs(rc);
    let w_rd = sc.apply_w(&res.d);
    let g_eta = g.add(&w_rd.scaled(eta));
    let h1 = -(&res.p * eta) - data.apply_a(&g_eta, &DVector::zeros(data.nf));
    let h2 = -(&res.f * eta);
    let (dy1, du1) = fac.solve(&h1, &h2);
    let (dy2, du2) = v2;
    let bma = &data.b - a_wc;
    let c_wc = data.c.dot(wc);
    let num = -eta * res.g + data.c.dot(&g_eta) + rtau / it.tau - bma.dot(&dy1) + data.f.dot(&du1);
    let den = bma.dot(dy2) - data.f.dot(du2) + c_wc + it.kappa / it.tau;
    let dtau = num / den;
    let dy = dy1 + dy2 * dtau;
    let du = du1 + du2 * dtau;
    let mut ds = data.apply_at(&dy).scaled(-1.0);
    ds.axpy(-eta, &res.d);
    ds.axpy(dtau, &data.c);
    let mut dx = g;
    dx.axpy(-1.0, &sc.apply_w(&ds));
    let mut dy = dy;
    let mut du = du;
    // refine (dy, du) against the unreduced primal and free-column equations
    for _ in 0..2 {
        let ep = data.apply_a(&dx, &du) - &data.b * dtau + &res.p * eta;
        let ef = data.apply_bt(&dy) - &data.f * dtau + &res.f * eta;
        let scale = 1.0 + dy.amax() + du.amax();
        if ep.amax().max(ef.amax()) <= 1e-15 * scale {
            break;
        }
        let (cy, cu) = fac.solve(&(-ep), &(-ef));
        let atc = data.apply_at(&cy);
        ds.axpy(-1.0, &atc);
        dx.axpy(1.0, &sc.apply_w(&atc));
        dy += cy;
        du += cu;
    }
    let dkappa = (rtau - it.kappa * dtau) / it.tau;
    Direction { x: dx, s: ds, u: du, y: dy, tau: dtau, kappa: dkappa }
}

fn step_length(sc: &Scaling, it: &Iterate, d: &Direction) -> f64 {
    let (tx, ts) = sc.scale_pair(&d.x, &d.s);
    let lam = sc.lambda_cone();
    let mut a = max_step_scaled(&lam, &tx, 1e30);
    a = max_step_scaled(&lam, &ts, a);
    if d.tau < 0.0 {
        a = a.min(-it.tau / d.tau);
    }
    if d.kappa < 0.0 {
        a = a.min(-it.kappa / d.kappa);
    }
    a
}

/// Translated problem plus the bookkeeping needed to map results back.
struct Prepared {
    data: Data,
    kept_rows: Vec<usize>,
    kept_free: Vec<usize>,
}

enum Presolved {
    Ready(Prepared),
    Done(ConicSolution),
}

fn empty_solution(p: &ConicProblem, status: SolveStatus) -> ConicSolution {
    ConicSolution {
        status,
        objective: f64::NAN,
        free: vec![0.0; p.n_free],
        nonneg: vec![0.0; p.n_nonneg],
        psd: p.psd_sizes.iter().map(|&k| DMatrix::zeros(k, k)).collect(),
        dual: vec![0.0; p.equalities.len()],
        residuals: Residuals::default(),
        iterations: 0,
        certificate: None,
    }
}

type RowEntries = (Vec<(usize, f64)>, Vec<(usize, f64)>, Vec<(usize, usize, usize, f64)>);

fn split_terms(terms: &[(Var, f64)]) -> RowEntries {
    let mut fr = Vec::new();
    let mut nn = Vec::new();
    let mut ps = Vec::new();
    let mut acc: HashMap<Var, f64> = HashMap::new();
    for &(v, c) in terms {
        let v = match v {
            Var::Psd { block, i, j } if i > j => Var::Psd { block, i: j, j: i },
            v => v,
        };
        *acc.entry(v).or_insert(0.0) += c;
    }
    let mut items: Vec<(Var, f64)> = acc.into_iter().filter(|(_, c)| *c != 0.0).collect();
    items.sort_by(|a, b| a.0.cmp(&b.0));
    for (v, c) in items {
        match v {
            Var::Free(k) => fr.push((k, c)),
            Var::NonNeg(k) => nn.push((k, c)),
            Var::Psd { block, i, j } => {
                if i == j {
                    ps.push((block, i, i, c));
                } else {
                    ps.push((block, i, j, 0.5 * c));
                    ps.push((block, j, i, 0.5 * c));
                }
            }
        }
    }
    (fr, nn, ps)
}

fn presolve(p: &ConicProblem, settings: &SolverSettings) -> Presolved {
    let rows: Vec<RowEntries> = p.equalities.iter().map(|e| split_terms(&e.terms)).collect();
    let rhs: Vec<f64> = p.equalities.iter().map(|e| e.rhs).collect();
    let (obj_f, obj_n, obj_p) = split_terms(&p.objective.terms);
    let mut fobj = vec![0.0; p.n_free];
    for (k, c) in obj_f {
        fobj[k] = c;
    }

    // free columns that appear in no row
    let mut used_free = vec![false; p.n_free];
    for r in &rows {
        for &(k, _) in &r.0 {
            used_free[k] = true;
        }
    }
    if (0..p.n_free).any(|k| !used_free[k] && fobj[k] != 0.0) {
        return Presolved::Done(empty_solution(p, SolveStatus::Unbounded));
    }
    let kept_free: Vec<usize> = (0..p.n_free).filter(|&k| used_free[k]).collect();
    let free_pos: HashMap<usize, usize> = kept_free.iter().enumerate().map(|(a, &b)| (b, a)).collect();

    // Gram matrix of the rows for dependency detection
    let m0 = rows.len();
    let mut gram = DMatrix::<f64>::zeros(m0, m0);
    {
        let mut by_var: HashMap<(u8, usize, usize, usize), Vec<(usize, f64)>> = HashMap::new();
        for (r, (fr, nn, ps)) in rows.iter().enumerate() {
            for &(k, c) in fr {
                by_var.entry((0, k, 0, 0)).or_default().push((r, c));
            }
            for &(k, c) in nn {
                by_var.entry((1, k, 0, 0)).or_default().push((r, c));
            }
            for &(b, i, j, c) in ps {
                by_var.entry((2, b, i, j)).or_default().push((r, c));
            }
        }
        for list in by_var.values() {
            for &(r1, a) in list {
                for &(r2, b) in list {
                    gram[(r1, r2)] += a * b;
                }
            }
        }
    }
    let mut kept_rows: Vec<usize> = Vec::new();
    let mut lfac: Vec<Vec<f64>> = Vec::new(); // rows of the Cholesky factor
    let mut cert: Option<Vec<f64>> = None;
    for r in 0..m0 {
        let k = kept_rows.len();
        let mut l = vec![0.0; k];
        for a in 0..k {
            let mut v = gram[(kept_rows[a], r)];
            for b in 0..a {
                v -= lfac[a][b] * l[b];
            }
            l[a] = v / lfac[a][a];
        }
        let dd = gram[(r, r)] - l.iter().map(|v| v * v).sum::<f64>();
        if dd > 1e-10 * gram[(r, r)] && gram[(r, r)] > 0.0 {
            let mut row = l;
            row.push(dd.sqrt());
            lfac.push(row);
            kept_rows.push(r);
        } else {
            // lambda = L^-T l expresses row r through the kept rows
            let mut lam = vec![0.0; k];
            for a in (0..k).rev() {
                let mut v = l[a];
                for b in a + 1..k {
                    v -= lfac[b][a] * lam[b];
                }
                lam[a] = v / lfac[a][a];
            }
            let pred: f64 = lam.iter().zip(&kept_rows).map(|(c, &kr)| c * rhs[kr]).sum();
            let scale = 1.0 + rhs[r].abs() + pred.abs();
            if (rhs[r] - pred).abs() > settings.tol * scale && cert.is_none() {
                let sgn = (rhs[r] - pred).signum();
                let mut y = vec![0.0; m0];
                y[r] = sgn;
                for (c, &kr) in lam.iter().zip(&kept_rows) {
                    y[kr] -= sgn * c;
                }
                cert = Some(y);
            }
        }
    }
    if let Some(y) = cert {
        let value: f64 = y.iter().zip(&rhs).map(|(a, b)| a * b).sum();
        let mut sol = empty_solution(p, SolveStatus::Infeasible);
        let norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        sol.certificate = Some(Certificate {
            value: value / norm,
            residual: 0.0,
            ray: y.iter().map(|v| v / norm).collect(),
        });
        return Presolved::Done(sol);
    }

    let m = kept_rows.len();
    let nf = kept_free.len();
    let mut by_block: Vec<Vec<(usize, Vec<(usize, usize, f64)>)>> = vec![Vec::new(); p.psd_sizes.len()];
    let mut by_nonneg: Vec<Vec<(usize, f64)>> = vec![Vec::new(); p.n_nonneg];
    let mut bmat = DMatrix::zeros(m, nf);
    let mut b = DVector::zeros(m);
    for (newr, &r) in kept_rows.iter().enumerate() {
        let (fr, nn, ps) = &rows[r];
        b[newr] = rhs[r];
        for &(k, c) in fr {
            bmat[(newr, free_pos[&k])] = c;
        }
        for &(k, c) in nn {
            by_nonneg[k].push((newr, c));
        }
        let mut per_block: HashMap<usize, Vec<(usize, usize, f64)>> = HashMap::new();
        for &(blk, i, j, c) in ps {
            per_block.entry(blk).or_default().push((i, j, c));
        }
        let mut keys: Vec<usize> = per_block.keys().copied().collect();
        keys.sort_unstable();
        for blk in keys {
            by_block[blk].push((newr, per_block.remove(&blk).unwrap()));
        }
    }
    let mut c = Cone::zeros(p.n_nonneg, &p.psd_sizes);
    for (k, v) in obj_n {
        c.l[k] = v;
    }
    for (blk, i, j, v) in obj_p {
        c.s[blk][(i, j)] += v;
    }
    let f = DVector::from_iterator(nf, kept_free.iter().map(|&k| fobj[k]));
    Presolved::Ready(Prepared {
        data: Data {
            m,
            nf,
            nl: p.n_nonneg,
            sizes: p.psd_sizes.clone(),
            by_block,
            by_nonneg,
            bmat,
            b,
            c,
            f,
        },
        kept_rows,
        kept_free,
    })
}

pub fn solve(p: &ConicProblem) -> ConicSolution {
    solve_with(p, &SolverSettings::default())
}

pub fn solve_with(p: &ConicProblem, settings: &SolverSettings) -> ConicSolution {
    let prep = match presolve(p, settings) {
        Presolved::Done(s) => return s,
        Presolved::Ready(prep) => prep,
    };
    let data = &prep.data;
    let mut it = Iterate {
        x: Cone::identity(data.nl, &data.sizes),
        s: Cone::identity(data.nl, &data.sizes),
        u: DVector::zeros(data.nf),
        y: DVector::zeros(data.m),
        tau: 1.0,
        kappa: 1.0,
    };
    let nu = data.nu();
    let bnorm = data.b.norm();
    let cnorm = (data.c.norm().powi(2) + data.f.norm_squared()).sqrt();
    let mut status = SolveStatus::NumericalFailure;
    let mut certificate = None;
    let mut iterations = 0;
    let mut best: Option<(f64, Iterate)> = None;
    let mut last_gain = 0;
    let mut resid_summary = Residuals::default();

    for iter in 0..=settings.max_iter {
        iterations = iter;
        let res = residuals(data, &it);
        let mu = (it.x.dot(&it.s) + it.tau * it.kappa) / (nu + 1.0);
        let pres = res.p.norm() / it.tau / (1.0 + bnorm);
        let dres = (res.d.norm().powi(2) + res.f.norm_squared()).sqrt() / it.tau / (1.0 + cnorm);
        let pobj = (data.c.dot(&it.x) + data.f.dot(&it.u)) / it.tau;
        let dobj = data.b.dot(&it.y) / it.tau;
        let gap = (pobj - dobj).abs() / (1.0 + pobj.abs() + dobj.abs());
        resid_summary = Residuals { primal: pres, dual: dres, gap };
        let merit = pres.max(dres).max(gap);
        if settings.verbose {
            eprintln!(
                "{iter:3} pres {pres:.2e} dres {dres:.2e} gap {gap:.2e} mu {mu:.2e} tau {:.2e} kappa {:.2e}",
                it.tau, it.kappa
            );
        }
        if best.as_ref().is_none_or(|(m, _)| merit < 0.9 * *m) {
            last_gain = iter;
        }
        if best.as_ref().is_none_or(|(m, _)| merit < *m) {
            best = Some((merit, Iterate {
                x: it.x.clone(),
                s: it.s.clone(),
                u: it.u.clone(),
                y: it.y.clone(),
                tau: it.tau,
                kappa: it.kappa,
            }));
        }
        if pres <= settings.tol && dres <= settings.tol && gap <= settings.tol {
            status = SolveStatus::Optimal;
            break;
        }
        // infeasibility rays
        let by = data.b.dot(&it.y);
        if by > 0.0 {
            let mut aty = data.apply_at(&it.y);
            aty.axpy(1.0, &it.s);
            let r = (aty.norm().powi(2) + data.apply_bt(&it.y).norm_squared()).sqrt() / by;
            if r <= settings.tol_infeasible && it.tau < it.kappa {
                let yn = it.y.norm();
                status = SolveStatus::Infeasible;
                certificate = Some(Certificate {
                    value: by / yn,
                    residual: r,
                    ray: it.y.iter().map(|v| v / yn).collect(),
                });
                break;
            }
        }
        let cx = -(data.c.dot(&it.x) + data.f.dot(&it.u));
        if cx > 0.0 {
            let r = data.apply_a(&it.x, &it.u).norm() / cx;
            if r <= settings.tol_infeasible && it.tau < it.kappa {
                let xn = (it.x.norm().powi(2) + it.u.norm_squared()).sqrt();
                status = SolveStatus::Unbounded;
                certificate = Some(Certificate { value: cx / xn, residual: r, ray: Vec::new() });
                break;
            }
        }
        // stalled: no real progress for a while
        if iter == settings.max_iter || mu < 1e-300 || iter > last_gain + 25 {
            break;
        }

        let sc = Scaling::new(&it.x, &it.s);
        let fac = schur(data, &sc);
        let wc = sc.apply_w(&data.c);
        let a_wc = data.apply_a(&wc, &DVector::zeros(data.nf));
        let v2 = fac.solve(&(&a_wc + &data.b), &data.f);

        // predictor
        let rc_aff = sc.minus_lambda_sq();
        let d_aff = direction(data, &sc, &fac, &it, &res, 1.0, &rc_aff, -it.tau * it.kappa, &v2, &wc, &a_wc);
        let a_aff = step_length(&sc, &it, &d_aff).min(1.0);
        let sigma = (1.0 - a_aff).powi(3).clamp(0.0, 1.0);

        // corrector
        let (tx, ts) = sc.scale_pair(&d_aff.x, &d_aff.s);
        let mut rc = Cone::identity(data.nl, &data.sizes).scaled(sigma * mu);
        rc.axpy(1.0, &rc_aff);
        rc.axpy(-1.0, &sym_product(&tx, &ts));
        let rtau = sigma * mu - it.tau * it.kappa - d_aff.tau * d_aff.kappa;
        let d = direction(data, &sc, &fac, &it, &res, 1.0 - sigma, &rc, rtau, &v2, &wc, &a_wc);
        let amax = step_length(&sc, &it, &d);
        let alpha = (0.99 * amax).min(1.0);
        if settings.verbose {
            eprintln!("    sigma {sigma:.2e} alpha_aff {a_aff:.2e} alpha {alpha:.2e}");
        }
        if !alpha.is_finite() || alpha < 1e-12 {
            break;
        }
        it.x.axpy(alpha, &d.x);
        it.s.axpy(alpha, &d.s);
        it.u.axpy(alpha, &d.u, 1.0);
        it.y.axpy(alpha, &d.y, 1.0);
        it.tau += alpha * d.tau;
        it.kappa += alpha * d.kappa;
        // keep the blocks symmetric
        for m in it.x.s.iter_mut().chain(it.s.s.iter_mut()) {
            let sym = (&*m + m.transpose()) * 0.5;
            *m = sym;
        }
    }

    if status == SolveStatus::NumericalFailure {
        if let Some((_, b)) = best {
            it = b;
            let res = residuals(data, &it);
            let pres = res.p.norm() / it.tau / (1.0 + bnorm);
            let dres = (res.d.norm().powi(2) + res.f.norm_squared()).sqrt() / it.tau / (1.0 + cnorm);
            let pobj = (data.c.dot(&it.x) + data.f.dot(&it.u)) / it.tau;
            let dobj = data.b.dot(&it.y) / it.tau;
            resid_summary = Residuals {
                primal: pres,
                dual: dres,
                gap: (pobj - dobj).abs() / (1.0 + pobj.abs() + dobj.abs()),
            };
            // accept a slightly under-converged point rather than nothing
            let r = resid_summary;
            if r.primal <= REDUCED_TOL && r.dual <= REDUCED_TOL && r.gap <= REDUCED_TOL {
                status = SolveStatus::Optimal;
            }
        }
    }

    // map back to the caller's indexing
    let scale = if status == SolveStatus::Optimal || status == SolveStatus::NumericalFailure {
        1.0 / it.tau
    } else {
        1.0
    };
    let mut free = vec![0.0; p.n_free];
    for (a, &k) in prep.kept_free.iter().enumerate() {
        free[k] = it.u[a] * scale;
    }
    let mut dual = vec![0.0; p.equalities.len()];
    for (a, &r) in prep.kept_rows.iter().enumerate() {
        dual[r] = it.y[a] * scale;
    }
    if let (SolveStatus::Infeasible, Some(c)) = (status, certificate.as_mut()) {
        let mut ray = vec![0.0; p.equalities.len()];
        for (a, &r) in prep.kept_rows.iter().enumerate() {
            ray[r] = c.ray[a];
        }
        c.ray = ray;
    }
    let x = it.x.scaled(scale);
    let objective = p.objective.constant + data.c.dot(&x) + data.f.dot(&(&it.u * scale));
    ConicSolution {
        status,
        objective,
        free,
        nonneg: x.l.iter().copied().collect(),
        psd: x.s,
        dual,
        residuals: resid_summary,
        iterations,
        certificate,
    }
}

#[cfg(test)]
mod tests;
