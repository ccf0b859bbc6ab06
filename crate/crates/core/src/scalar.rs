//! Scalar fields: exact rationals and IEEE doubles behind one trait.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::fmt::Debug;

use crate::error::{GeError, Result};

pub type Rational = BigRational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ScalarField {
    ExactRational,
    Float64,
}

impl ScalarField {
    pub fn parse(s: &str) -> Option<ScalarField> {
        match s.trim().to_ascii_lowercase().as_str() {
            "exact" | "rational" | "exactrational" => Some(ScalarField::ExactRational),
            "float" | "float64" | "f64" => Some(ScalarField::Float64),
            _ => None,
        }
    }
}

pub trait Scalar:
    Clone + Debug + PartialEq + PartialOrd + Num + Signed + Send + Sync + 'static
{
    const FIELD: ScalarField;

    /// Exact conversion for rationals (binary fraction of the double).
    fn from_f64(v: f64) -> Self;
    fn to_f64(&self) -> f64;
    fn from_i64(v: i64) -> Self;
    fn to_rational(&self) -> Rational;
    fn from_rational(r: &Rational) -> Self;
    /// Whether a leading coefficient counts as zero relative to `scale`.
    fn negligible(&self, scale: f64) -> bool;
    fn determinant(m: &[Vec<Self>]) -> Self;
    /// Interpolation nodes for `count` points: 0, 1, -1, 2, ... when exact,
    /// Chebyshev points of the first kind otherwise.
    fn interpolation_nodes(count: usize) -> Vec<Self>;
}

impl Scalar for f64 {
    const FIELD: ScalarField = ScalarField::Float64;

    fn from_f64(v: f64) -> Self {
        v
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn to_rational(&self) -> Rational {
        rationalize(*self)
    }
    fn from_rational(r: &Rational) -> Self {
        rat_to_f64(r)
    }
    fn negligible(&self, scale: f64) -> bool {
        self.abs() <= 1e-12 * scale
    }
    fn determinant(m: &[Vec<f64>]) -> f64 {
        lu_det(m)
    }
    fn interpolation_nodes(count: usize) -> Vec<f64> {
        chebyshev_nodes(count)
    }
}

impl Scalar for Rational {
    const FIELD: ScalarField = ScalarField::ExactRational;

    fn from_f64(v: f64) -> Self {
        rationalize(v)
    }
    fn to_f64(&self) -> f64 {
        rat_to_f64(self)
    }
    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }
    fn to_rational(&self) -> Rational {
        self.clone()
    }
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn negligible(&self, _scale: f64) -> bool {
        self.is_zero()
    }
    fn determinant(m: &[Vec<Rational>]) -> Rational {
        bareiss_det_rational(m)
    }
    fn interpolation_nodes(count: usize) -> Vec<Rational> {
        integer_nodes(count)
            .into_iter()
            .map(|v| Rational::from_integer(BigInt::from(v)))
            .collect()
    }
}

/// 0, 1, -1, 2, -2, ...
pub fn integer_nodes(count: usize) -> Vec<i64> {
    (0..count)
        .map(|j| {
            let h = j.div_ceil(2) as i64;
            if j % 2 == 1 {
                h
            } else {
                -h
            }
        })
        .collect()
}

pub fn chebyshev_nodes(count: usize) -> Vec<f64> {
    (0..count)
        .map(|j| ((2 * j + 1) as f64 * std::f64::consts::PI / (2 * count) as f64).cos())
        .collect()
}

/// Exact value of a finite double as a rational.
pub fn rationalize(v: f64) -> Rational {
    if v == 0.0 {
        return Rational::zero();
    }
    Rational::from_float(v).expect("finite value")
}

pub fn rat_to_f64(r: &Rational) -> f64 {
    if let Some(v) = ToPrimitive::to_f64(r) {
        if v.is_finite() {
            return v;
        }
    }
    // scale down huge numerators/denominators before dividing
    let nb = r.numer().bits() as i64;
    let db = r.denom().bits() as i64;
    let shift = (nb - db) - 60;
    let scaled = if shift > 0 {
        r / Rational::from_integer(BigInt::one() << shift as usize)
    } else {
        r * Rational::from_integer(BigInt::one() << (-shift) as usize)
    };
    let q = ToPrimitive::to_f64(scaled.numer()).unwrap_or(f64::NAN)
        / ToPrimitive::to_f64(scaled.denom()).unwrap_or(f64::NAN);
    q * 2f64.powi(shift as i32)
}

/// Parses "p/q", integers, and decimal notation (with optional exponent) exactly.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let err = || GeError::Parse(format!("not a rational number: {s:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| err())?;
        let q: BigInt = q.trim().parse().map_err(|_| err())?;
        if q.is_zero() {
            return Err(err());
        }
        return Ok(Rational::new(p, q));
    }
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i64>().map_err(|_| err())?),
        None => (s, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (ip, fp) = mant.split_once('.').unwrap_or((mant, ""));
    if ip.is_empty() && fp.is_empty() {
        return Err(err());
    }
    if !ip.chars().chain(fp.chars()).all(|c| c.is_ascii_digit()) {
        return Err(err());
    }
    let digits: BigInt = format!("0{ip}{fp}").parse().map_err(|_| err())?;
    let e = exp - fp.len() as i64;
    let ten = BigInt::from(10);
    let mut r = Rational::from_integer(digits);
    if e >= 0 {
        r *= Rational::from_integer(num_traits::pow(ten, e as usize));
    } else {
        r /= Rational::from_integer(num_traits::pow(ten, (-e) as usize));
    }
    Ok(if neg { -r } else { r })
}

pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

fn lu_det(m: &[Vec<f64>]) -> f64 {
    let n = m.len();
    if n == 0 {
        return 1.0;
    }
    let mut a: Vec<Vec<f64>> = m.to_vec();
    let mut det = 1.0;
    for c in 0..n {
        let p = (c..n)
            .max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs()))
            .unwrap();
        if a[p][c] == 0.0 {
            return 0.0;
        }
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= a[c][c];
        for r in c + 1..n {
            let f = a[r][c] / a[c][c];
            if f != 0.0 {
                for k in c..n {
                    a[r][k] -= f * a[c][k];
                }
            }
        }
    }
    det
}

/// Fraction-free elimination after clearing row denominators.
fn bareiss_det_rational(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    if n == 0 {
        return Rational::one();
    }
    let mut scale = BigInt::one();
    let mut a: Vec<Vec<BigInt>> = m
        .iter()
        .map(|row| {
            let l = row
                .iter()
                .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            scale *= &l;
            row.iter()
                .map(|x| x.numer() * (&l / x.denom()))
                .collect()
        })
        .collect();
    let d = bareiss_det(&mut a);
    Rational::new(d, scale)
}

pub fn bareiss_det(a: &mut [Vec<BigInt>]) -> BigInt {
    let n = a.len();
    let mut sign = 1i32;
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign < 0 {
        -d
    } else {
        d
    }
}

pub fn rational_from_i128(v: i128) -> Rational {
    Rational::from_integer(BigInt::from_i128(v).unwrap())
}
