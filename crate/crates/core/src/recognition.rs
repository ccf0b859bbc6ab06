//! Deciding whether a polynomial matrix defines a generalized ellipsoid.
//!
//! All verdicts are computed over the rationals; double-precision inputs
//! are converted to the exact value of each coefficient first.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{GeError, Result};
use crate::polymat::{charpoly_coeff_curves, mobius_lift, PolyMat, UniPoly};
use crate::scalar::{format_rational, rat_to_f64, Rational, Scalar};
use crate::sturm;

pub use crate::sturm::nonneg_on_r;

/// One checked coefficient curve `c_{k,i}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceEntry {
    pub k: usize,
    pub i: usize,
    pub degree: Option<usize>,
    pub nonneg: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PsdVerdict {
    pub holds: bool,
    /// Point where some coefficient curve is negative.
    pub witness: Option<Rational>,
    pub trace: Vec<TraceEntry>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KernelVerdict {
    pub holds: bool,
    /// Nonzero vector in the common kernel when the condition fails.
    pub vector: Option<Vec<Rational>>,
}

/// Whether `P(t)` is positive semidefinite for every real `t`.
pub fn psd_on_r<S: Scalar>(p: &PolyMat<S>) -> Result<PsdVerdict> {
    let p = p.to_rational();
    let curves = charpoly_coeff_curves(&p)?;
    let mut trace = Vec::new();
    let probes: Vec<Rational> = (-6..=6)
        .map(|v: i64| Rational::from_integer(v.into()))
        .collect();
    for (km1, row) in curves.iter().enumerate() {
        for (i, c) in row.iter().enumerate() {
            let early = probes.iter().find(|x| c.eval(x).is_negative()).cloned();
            let witness = match early {
                Some(x) => Some(x),
                None if sturm::nonneg_on_r(c) => None,
                None => Some(sturm::negative_point(c).expect("sign change located")),
            };
            trace.push(TraceEntry {
                k: km1 + 1,
                i,
                degree: c.degree(),
                nonneg: witness.is_none(),
            });
            if witness.is_some() {
                return Ok(PsdVerdict { holds: false, witness, trace });
            }
        }
    }
    Ok(PsdVerdict { holds: true, witness: None, trace })
}

/// Whether `P(t)` is positive semidefinite for every `t` in `[-1, 1]`.
///
/// Reduces to the real line through the lift
/// `t -> (t^2 - 1) / (t^2 + 1)`; witnesses are mapped back to `[-1, 1]`.
pub fn psd_on_interval<S: Scalar>(p: &PolyMat<S>) -> Result<PsdVerdict> {
    let q = mobius_lift(&p.to_rational());
    let mut v = psd_on_r(&q)?;
    v.witness = v.witness.map(|s| {
        let s2 = &s * &s;
        (&s2 - Rational::one()) / (&s2 + Rational::one())
    });
    Ok(v)
}

/// Whether the coefficient matrices of `P` have only `0` in common kernel.
pub fn kernel_condition<S: Scalar>(p: &PolyMat<S>) -> KernelVerdict {
    let p = p.to_rational();
    let n = p.n();
    let d = p.d();
    let mut a: Vec<Vec<Rational>> = Vec::with_capacity(n * (d + 1));
    for k in 0..=d {
        let m = p.coefficient_matrix(k);
        a.extend(m);
    }
    // row reduction; pivot columns recorded
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let Some(pr) = (row..a.len()).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(row, pr);
        let inv = Rational::one() / &a[row][col];
        for x in a[row].iter_mut() {
            *x *= &inv;
        }
        for r in 0..a.len() {
            if r != row && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in 0..n {
                    let v = &f * &a[row][c];
                    a[r][c] -= v;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    if pivots.len() == n {
        return KernelVerdict { holds: true, vector: None };
    }
    let free = (0..n).find(|c| !pivots.contains(c)).unwrap();
    let mut v = vec![Rational::zero(); n];
    v[free] = Rational::one();
    for (r, &pc) in pivots.iter().enumerate() {
        v[pc] = -a[r][free].clone();
    }
    KernelVerdict { holds: false, vector: Some(v) }
}

/// Checks both defining conditions of a generalized ellipsoid.
pub fn validate_ge<S: Scalar>(p: &PolyMat<S>) -> Result<()> {
    let psd = psd_on_interval(p)?;
    if !psd.holds {
        let t = psd.witness.expect("failing verdict carries a witness");
        return Err(GeError::PsdConditionViolated { t: format_rational(&t) });
    }
    let ker = kernel_condition(p);
    if !ker.holds {
        let v = ker.vector.expect("failing verdict carries a vector");
        return Err(GeError::KernelConditionViolated {
            vector: v.iter().map(format_rational).collect(),
        });
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// Point of `[-1, 1]` where `P(t)` has a negative eigenvalue.
    Interval { t: String, t_approx: f64 },
    KernelVector { vector: Vec<String>, approx: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RecognitionReport {
    pub psd_on_interval: bool,
    pub kernel_condition: bool,
    pub witness: Option<Witness>,
    pub method_trace: Vec<TraceEntry>,
}

impl RecognitionReport {
    pub fn is_ge(&self) -> bool {
        self.psd_on_interval && self.kernel_condition
    }
}

pub fn recognize<S: Scalar>(p: &PolyMat<S>) -> Result<RecognitionReport> {
    let psd = psd_on_interval(p)?;
    let ker = kernel_condition(p);
    let witness = match (&psd.witness, &ker.vector) {
        (Some(t), _) => Some(Witness::Interval { t: format_rational(t), t_approx: rat_to_f64(t) }),
        (None, Some(v)) => Some(Witness::KernelVector {
            vector: v.iter().map(format_rational).collect(),
            approx: v.iter().map(rat_to_f64).collect(),
        }),
        _ => None,
    };
    Ok(RecognitionReport {
        psd_on_interval: psd.holds,
        kernel_condition: ker.holds,
        witness,
        method_trace: psd.trace,
    })
}

/// Convenience for scalar polynomials: `p >= 0` on `[-1, 1]`.
pub fn nonneg_on_interval(p: &UniPoly<Rational>) -> Result<bool> {
    let d = p.degree().unwrap_or(0);
    let m = PolyMat::new(1, d, vec![p.clone()])?;
    Ok(psd_on_interval(&m)?.holds)
}
