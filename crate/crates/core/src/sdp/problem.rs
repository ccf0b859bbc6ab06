use std::collections::BTreeMap;

use nalgebra::DMatrix;
use serde::Serialize;

/// A scalar decision variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    Free(usize),
    NonNeg(usize),
    /// Entry `(i, j)` of psd block `block`; `(i, j)` and `(j, i)` name the
    /// same variable.
    Psd { block: usize, i: usize, j: usize },
}

impl Var {
    fn canonical(self) -> Var {
        match self {
            Var::Psd { block, i, j } if i > j => Var::Psd { block, i: j, j: i },
            v => v,
        }
    }

    pub fn label(&self) -> String {
        match self {
            Var::Free(k) => format!("f{k}"),
            Var::NonNeg(k) => format!("n{k}"),
            Var::Psd { block, i, j } => format!("X{block}[{i},{j}]"),
        }
    }
}

/// Affine expression `constant + sum coef * var`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LinExpr {
    pub terms: Vec<(Var, f64)>,
    pub constant: f64,
}

impl LinExpr {
    pub fn constant(c: f64) -> Self {
        LinExpr { terms: Vec::new(), constant: c }
    }

    pub fn var(v: Var) -> Self {
        LinExpr { terms: vec![(v, 1.0)], constant: 0.0 }
    }

    pub fn term(v: Var, c: f64) -> Self {
        LinExpr { terms: vec![(v, c)], constant: 0.0 }
    }

    pub fn is_zero(&self) -> bool {
        self.constant == 0.0 && self.terms.iter().all(|(_, c)| *c == 0.0)
    }

    pub fn add_term(&mut self, v: Var, c: f64) {
        if c != 0.0 {
            self.terms.push((v, c));
        }
    }

    pub fn add_assign(&mut self, o: &LinExpr) {
        self.add_scaled(o, 1.0);
    }

    pub fn add_scaled(&mut self, o: &LinExpr, s: f64) {
        self.constant += s * o.constant;
        for &(v, c) in &o.terms {
            self.add_term(v, s * c);
        }
    }

    pub fn plus(&self, o: &LinExpr) -> LinExpr {
        let mut r = self.clone();
        r.add_assign(o);
        r
    }

    pub fn minus(&self, o: &LinExpr) -> LinExpr {
        let mut r = self.clone();
        r.add_scaled(o, -1.0);
        r
    }

    pub fn scaled(&self, s: f64) -> LinExpr {
        let mut r = LinExpr::constant(0.0);
        r.add_scaled(self, s);
        r
    }

    /// Merges repeated variables.
    pub fn simplified(&self) -> LinExpr {
        let mut acc: BTreeMap<Var, f64> = BTreeMap::new();
        for &(v, c) in &self.terms {
            *acc.entry(v.canonical()).or_insert(0.0) += c;
        }
        LinExpr {
            terms: acc.into_iter().filter(|(_, c)| *c != 0.0).collect(),
            constant: self.constant,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PsdBlock {
    pub index: usize,
    pub size: usize,
}

impl PsdBlock {
    pub fn at(&self, i: usize, j: usize) -> Var {
        Var::Psd { block: self.index, i, j }
    }
}

/// `expr == 0` with the constant moved to the right-hand side.
#[derive(Debug, Clone, PartialEq)]
pub struct Equality {
    pub terms: Vec<(Var, f64)>,
    pub rhs: f64,
}

/// `minimize objective` over free scalars, a nonnegative orthant and psd
/// blocks, subject to linear equalities.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConicProblem {
    pub n_free: usize,
    pub n_nonneg: usize,
    pub psd_sizes: Vec<usize>,
    pub objective: LinExpr,
    pub equalities: Vec<Equality>,
}

impl ConicProblem {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_free(&mut self) -> Var {
        self.n_free += 1;
        Var::Free(self.n_free - 1)
    }

    pub fn add_frees(&mut self, k: usize) -> Vec<Var> {
        (0..k).map(|_| self.add_free()).collect()
    }

    pub fn add_nonneg(&mut self) -> Var {
        self.n_nonneg += 1;
        Var::NonNeg(self.n_nonneg - 1)
    }

    pub fn add_psd(&mut self, size: usize) -> PsdBlock {
        self.psd_sizes.push(size);
        PsdBlock { index: self.psd_sizes.len() - 1, size }
    }

    /// Adds `expr == 0`.
    pub fn add_eq(&mut self, expr: &LinExpr) {
        let e = expr.simplified();
        self.equalities.push(Equality { terms: e.terms, rhs: -e.constant });
    }

    /// Adds `expr <= 0` through a nonnegative slack.
    pub fn add_le(&mut self, expr: &LinExpr) {
        let s = self.add_nonneg();
        let mut e = expr.clone();
        e.add_term(s, 1.0);
        self.add_eq(&e);
    }

    /// Adds `expr >= 0`.
    pub fn add_ge(&mut self, expr: &LinExpr) {
        self.add_le(&expr.scaled(-1.0));
    }

    pub fn minimize(&mut self, objective: LinExpr) {
        self.objective = objective.simplified();
    }

    pub fn maximize(&mut self, objective: LinExpr) {
        self.minimize(objective.scaled(-1.0));
    }

    /// Debug dump: block sizes, objective and equality triplets.
    pub fn to_debug_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Triplet {
            row: usize,
            var: String,
            coef: f64,
        }
        let triplets: Vec<Triplet> = self
            .equalities
            .iter()
            .enumerate()
            .flat_map(|(row, e)| {
                e.terms.iter().map(move |(v, c)| Triplet { row, var: v.label(), coef: *c })
            })
            .collect();
        serde_json::json!({
            "free": self.n_free,
            "nonneg": self.n_nonneg,
            "psd_blocks": self.psd_sizes,
            "objective": self.objective.terms.iter().map(|(v, c)| (v.label(), *c)).collect::<Vec<_>>(),
            "objective_constant": self.objective.constant,
            "rhs": self.equalities.iter().map(|e| e.rhs).collect::<Vec<_>>(),
            "equalities": triplets,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SolveStatus {
    Optimal,
    Infeasible,
    Unbounded,
    NumericalFailure,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct Residuals {
    pub primal: f64,
    pub dual: f64,
    pub gap: f64,
}

/// Farkas-type ray proving infeasibility (`y` on the equalities) or
/// unboundedness (a primal direction).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate {
    /// `b^T y` (or `-c^T x`) for the normalised ray; positive.
    pub value: f64,
    /// Residual of the defining linear conditions, relative to `value`.
    pub residual: f64,
    pub ray: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct ConicSolution {
    pub status: SolveStatus,
    pub objective: f64,
    pub free: Vec<f64>,
    pub nonneg: Vec<f64>,
    pub psd: Vec<DMatrix<f64>>,
    /// Multipliers of the equalities, in input order.
    pub dual: Vec<f64>,
    pub residuals: Residuals,
    pub iterations: usize,
    pub certificate: Option<Certificate>,
}

impl ConicSolution {
    pub fn value(&self, v: Var) -> f64 {
        match v {
            Var::Free(k) => self.free[k],
            Var::NonNeg(k) => self.nonneg[k],
            Var::Psd { block, i, j } => self.psd[block][(i, j)],
        }
    }

    pub fn eval(&self, e: &LinExpr) -> f64 {
        e.constant + e.terms.iter().map(|(v, c)| c * self.value(*v)).sum::<f64>()
    }

    pub fn is_optimal(&self) -> bool {
        self.status == SolveStatus::Optimal
    }
}
