//! Exact real-root tools on integer polynomials: primitive remainder
//! sequences, square-free decomposition, Sturm counts and isolation.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::polymat::UniPoly;
use crate::scalar::Rational;

/// Integer polynomial, ascending coefficients, no trailing zeros.
pub type IntPoly = Vec<BigInt>;

fn trim(mut p: IntPoly) -> IntPoly {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn deg(p: &IntPoly) -> usize {
    p.len() - 1
}

/// Positive multiple of `p` with coprime integer coefficients.
pub fn primitive(p: &UniPoly<Rational>) -> IntPoly {
    let l = p
        .coeffs()
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    primitive_part(
        p.coeffs()
            .iter()
            .map(|c| c.numer() * (&l / c.denom()))
            .collect(),
    )
}

fn primitive_part(p: IntPoly) -> IntPoly {
    let p = trim(p);
    let g = p.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if g.is_zero() || g.is_one() {
        return p;
    }
    p.into_iter().map(|c| c / &g).collect()
}

fn derivative(p: &IntPoly) -> IntPoly {
    trim(
        p.iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * BigInt::from(k))
            .collect(),
    )
}

/// Remainder of `m * a` by `b` for a positive integer `m`.
fn prem(a: &IntPoly, b: &IntPoly) -> IntPoly {
    let mut r = a.clone();
    let lb = b.last().unwrap().clone();
    let lb_abs = lb.abs();
    let sb = if lb.is_negative() { -BigInt::one() } else { BigInt::one() };
    while !r.is_empty() && r.len() >= b.len() {
        let shift = r.len() - b.len();
        let lr = r.last().unwrap().clone();
        for c in r.iter_mut() {
            *c *= &lb_abs;
        }
        let f = &sb * &lr;
        for (k, c) in b.iter().enumerate() {
            r[k + shift] -= &f * c;
        }
        r = trim(r);
    }
    r
}

pub fn gcd(a: &IntPoly, b: &IntPoly) -> IntPoly {
    let (mut x, mut y) = if a.len() >= b.len() {
        (primitive_part(a.clone()), primitive_part(b.clone()))
    } else {
        (primitive_part(b.clone()), primitive_part(a.clone()))
    };
    while !y.is_empty() {
        let r = primitive_part(prem(&x, &y));
        x = y;
        y = r;
    }
    if x.last().is_some_and(|c| c.is_negative()) {
        x = x.into_iter().map(|c| -c).collect();
    }
    x
}

fn to_rat(p: &IntPoly) -> UniPoly<Rational> {
    UniPoly::new(p.iter().map(|c| Rational::from_integer(c.clone())).collect())
}

fn monic_gcd(a: &UniPoly<Rational>, b: &UniPoly<Rational>) -> UniPoly<Rational> {
    let g = to_rat(&gcd(&primitive(a), &primitive(b)));
    let lc = g.leading();
    g.scale(&(Rational::one() / lc))
}

/// Exact quotient of `a` by `b` (remainder discarded).
fn div_rat(a: &UniPoly<Rational>, b: &UniPoly<Rational>) -> UniPoly<Rational> {
    let mut r: Vec<Rational> = a.coeffs().to_vec();
    let bc = b.coeffs();
    let lb = b.leading();
    if r.len() < bc.len() {
        return UniPoly::zero();
    }
    let mut quo = vec![Rational::zero(); r.len() - bc.len() + 1];
    for shift in (0..quo.len()).rev() {
        let f = &r[shift + bc.len() - 1] / &lb;
        for (k, c) in bc.iter().enumerate() {
            r[k + shift] -= &f * c;
        }
        quo[shift] = f;
    }
    UniPoly::new(quo)
}

/// Yun's algorithm: `p = c * f_1 * f_2^2 * ... * f_k^k` with monic,
/// square-free, pairwise coprime factors. Returns `[f_1, ..., f_k]`.
pub fn squarefree_factors(p: &UniPoly<Rational>) -> Vec<UniPoly<Rational>> {
    let mut out = Vec::new();
    if p.degree().unwrap_or(0) == 0 {
        return out;
    }
    let dp = p.derivative();
    let a = monic_gcd(p, &dp);
    let mut b = div_rat(p, &a);
    let c = div_rat(&dp, &a);
    let mut d = c.sub(&b.derivative());
    while b.degree().unwrap_or(0) > 0 {
        let f = monic_gcd(&b, &d);
        b = div_rat(&b, &f);
        let c = div_rat(&d, &f);
        d = c.sub(&b.derivative());
        out.push(f);
    }
    out
}

/// Square-free part as a primitive integer polynomial.
fn squarefree_part(ip: &IntPoly) -> IntPoly {
    let p = to_rat(ip);
    primitive(&div_rat(&p, &monic_gcd(&p, &p.derivative())))
}

/// Sign of `p(x)` for rational `x`.
pub fn sign_at(p: &IntPoly, x: &Rational) -> i32 {
    if p.is_empty() {
        return 0;
    }
    let num = x.numer();
    let den = x.denom();
    let mut v = p.last().unwrap().clone();
    let mut dpow = BigInt::one();
    for c in p.iter().rev().skip(1) {
        dpow *= den;
        v = v * num + c * &dpow;
    }
    if v.is_zero() {
        0
    } else if v.is_positive() {
        1
    } else {
        -1
    }
}

fn sign_at_infinity(p: &IntPoly, positive: bool) -> i32 {
    let lc = p.last().unwrap();
    let s = if lc.is_positive() { 1 } else { -1 };
    if positive || deg(p) % 2 == 0 {
        s
    } else {
        -s
    }
}

pub struct Sturm {
    seq: Vec<IntPoly>,
}

impl Sturm {
    /// Sturm sequence of a nonconstant square-free polynomial.
    pub fn new(g: &IntPoly) -> Sturm {
        let mut seq = vec![g.clone()];
        let mut b = primitive_part(derivative(g));
        let mut a = g.clone();
        while !b.is_empty() {
            seq.push(b.clone());
            let r: IntPoly = primitive_part(prem(&a, &b)).into_iter().map(|c| -c).collect();
            a = b;
            b = r;
        }
        Sturm { seq }
    }

    fn changes(signs: impl Iterator<Item = i32>) -> usize {
        let mut last = 0;
        let mut n = 0;
        for s in signs {
            if s == 0 {
                continue;
            }
            if last != 0 && s != last {
                n += 1;
            }
            last = s;
        }
        n
    }

    pub fn variations_at(&self, x: &Rational) -> usize {
        Self::changes(self.seq.iter().map(|p| sign_at(p, x)))
    }

    pub fn total_real_roots(&self) -> usize {
        let lo = Self::changes(self.seq.iter().map(|p| sign_at_infinity(p, false)));
        let hi = Self::changes(self.seq.iter().map(|p| sign_at_infinity(p, true)));
        lo - hi
    }

    /// Distinct roots in the half-open interval `(a, b]`.
    pub fn roots_in(&self, a: &Rational, b: &Rational) -> usize {
        self.variations_at(a) - self.variations_at(b)
    }
}

/// Cauchy bound: every real root lies in `(-B, B)`.
pub fn root_bound(p: &IntPoly) -> Rational {
    let lc = Rational::from_integer(p.last().unwrap().abs());
    let m = p[..p.len() - 1]
        .iter()
        .map(|c| Rational::from_integer(c.abs()) / &lc)
        .fold(Rational::zero(), |a, b| if b > a { b } else { a });
    m + Rational::one()
}

/// Disjoint intervals `(a, b]` each holding exactly one root of the
/// square-free `g` inside `(lo, hi]`, refined to width at most `width`.
pub fn isolate_roots(g: &IntPoly, lo: &Rational, hi: &Rational, width: &Rational) -> Vec<(Rational, Rational)> {
    let sturm = Sturm::new(g);
    let mut out = Vec::new();
    let mut stack = vec![(lo.clone(), hi.clone(), sturm.roots_in(lo, hi))];
    let two = Rational::from_integer(BigInt::from(2));
    while let Some((a, b, count)) = stack.pop() {
        if count == 0 {
            continue;
        }
        if count == 1 && &(&b - &a) <= width {
            out.push((a, b));
            continue;
        }
        let mid = (&a + &b) / &two;
        let left = sturm.roots_in(&a, &mid);
        stack.push((mid.clone(), b, count - left));
        stack.push((a, mid, left));
    }
    out.sort_by(|x, y| x.0.cmp(&y.0));
    out
}

/// Whether `p >= 0` on the whole real line.
///
/// Square-free decomposition `p = c * prod f_j^j`; the product `g` of the
/// odd-multiplicity factors must be root-free with the right sign.
pub fn nonneg_on_r(p: &UniPoly<Rational>) -> bool {
    if p.is_zero() {
        return true;
    }
    let lc_positive = p.leading().is_positive();
    if p.degree() == Some(0) {
        return lc_positive;
    }
    let mut g = UniPoly::constant(Rational::one());
    for (j, f) in squarefree_factors(p).iter().enumerate() {
        if j % 2 == 0 {
            g = g.mul(f);
        }
    }
    // g is monic, so sign normalisation against p reduces to lc(p) > 0
    let gd = g.degree().unwrap_or(0);
    if !lc_positive || gd % 2 == 1 {
        return false;
    }
    gd == 0 || Sturm::new(&primitive(&g)).total_real_roots() == 0
}

/// A rational point where `p < 0`, if one exists.
pub fn negative_point(p: &UniPoly<Rational>) -> Option<Rational> {
    if p.is_zero() {
        return None;
    }
    let ip = primitive(p);
    if ip.len() == 1 {
        return if ip[0].is_negative() { Some(Rational::zero()) } else { None };
    }
    let g = squarefree_part(&ip);
    let bound = root_bound(&g);
    let one = Rational::one();
    let mut pts = vec![-&bound - &one];
    let width = Rational::new(BigInt::one(), BigInt::from(1u64 << 20));
    let mut ivs = isolate_roots(&g, &(-&bound), &bound, &width);
    let two = Rational::from_integer(BigInt::from(2));
    for i in 0..ivs.len().saturating_sub(1) {
        // push the next interval right until it clears this one
        while ivs[i + 1].0 <= ivs[i].1 {
            let (a, b) = ivs[i + 1].clone();
            let mid = (&a + &b) / &two;
            let s = Sturm::new(&g);
            if s.roots_in(&a, &mid) == 1 {
                ivs[i + 1] = (a, mid);
            } else {
                ivs[i + 1] = (mid, b);
            }
        }
        pts.push((&ivs[i].1 + &ivs[i + 1].0) / &two);
    }
    pts.push(&bound + &one);
    pts.into_iter().find(|x| sign_at(&ip, x) < 0)
}

/// Real roots of `p` in the open interval `(lo, hi)` as floating values,
/// each located to within `1e-12` and polished by Newton steps.
pub fn real_roots_in(p: &UniPoly<Rational>, lo: f64, hi: f64) -> Vec<f64> {
    if p.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let ip = primitive(p);
    let g = squarefree_part(&ip);
    if g.len() <= 1 {
        return Vec::new();
    }
    let rlo = crate::scalar::rationalize(lo);
    let rhi = crate::scalar::rationalize(hi);
    let width = crate::scalar::rationalize(1e-12);
    let gf: Vec<f64> = g.iter().map(|c| crate::scalar::rat_to_f64(&Rational::from_integer(c.clone()))).collect();
    let dg: Vec<f64> = gf.iter().enumerate().skip(1).map(|(k, c)| c * k as f64).collect();
    isolate_roots(&g, &rlo, &rhi, &width)
        .into_iter()
        .filter(|(_, b)| b < &rhi || sign_at(&g, b) != 0)
        .map(|(a, b)| {
            let (af, bf) = (crate::scalar::rat_to_f64(&a), crate::scalar::rat_to_f64(&b));
            if sign_at(&g, &b) == 0 {
                return bf;
            }
            newton_polish(&gf, &dg, af, bf)
        })
        .filter(|&r| r > lo && r < hi)
        .collect()
}

fn horner(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &v| acc * x + v)
}

fn newton_polish(g: &[f64], dg: &[f64], a: f64, b: f64) -> f64 {
    let mut x = 0.5 * (a + b);
    for _ in 0..8 {
        let d = horner(dg, x);
        if d == 0.0 || !d.is_finite() {
            break;
        }
        let nx = x - horner(g, x) / d;
        if !(nx >= a && nx <= b) || !nx.is_finite() {
            break;
        }
        if nx == x {
            break;
        }
        x = nx;
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn q(c: &[i64]) -> UniPoly<Rational> {
        UniPoly::from_i64s(c)
    }

    #[test]
    fn nonnegativity_examples() {
        assert!(nonneg_on_r(&q(&[0, 0, 1])));
        assert!(!nonneg_on_r(&q(&[0, 0, 0, 1])));
        assert!(nonneg_on_r(&q(&[1, 0, -2, 0, 1])));
        assert!(nonneg_on_r(&q(&[])));
        assert!(!nonneg_on_r(&q(&[-1])));
        assert!(nonneg_on_r(&q(&[1, 0, 1])));
        assert!(!nonneg_on_r(&q(&[-1, 0, -1])));
        assert!(!nonneg_on_r(&q(&[-1, 0, 1])));
        // -(t^2+1)(t-1)^2 : even-multiplicity root but negative leading coefficient
        assert!(!nonneg_on_r(&q(&[-1, 0, -1]).mul(&q(&[1, -2, 1]))));
        // (t-1)^3 (t+2)^3 (t^2+1): odd g of even degree but with real roots
        let p = q(&[-1, 1]).pow(3).mul(&q(&[2, 1]).pow(3)).mul(&q(&[1, 0, 1]));
        assert!(!nonneg_on_r(&p));
    }

    #[test]
    fn squarefree_decomposition() {
        // (t-1)(t+1)^2(t-3)^3
        let p = q(&[-1, 1]).mul(&q(&[1, 1]).pow(2)).mul(&q(&[-3, 1]).pow(3));
        let f = squarefree_factors(&p.scale(&rat(-3, 7)));
        assert_eq!(f, vec![q(&[-1, 1]), q(&[1, 1]), q(&[-3, 1])]);
    }

    #[test]
    fn sturm_counts() {
        let g = primitive(&q(&[-1, 0, 0, 1]).mul(&q(&[2, 1]))); // (t^3-1)(t+2)
        let s = Sturm::new(&g);
        assert_eq!(s.total_real_roots(), 2);
        assert_eq!(s.roots_in(&rat(0, 1), &rat(1, 1)), 1);
        assert_eq!(s.roots_in(&rat(1, 1), &rat(5, 1)), 0);
    }

    #[test]
    fn negative_points() {
        let p = q(&[0, 0, 0, 1]);
        let x = negative_point(&p).unwrap();
        assert!(x < rat(0, 1));
        // (t^2 - 1)^2 - 1/100: negative near +-1
        let p = q(&[1, 0, -2, 0, 1]).sub(&UniPoly::constant(rat(1, 100)));
        let x = negative_point(&p).unwrap();
        assert!(p.eval(&x) < rat(0, 1));
        assert!(negative_point(&q(&[1, 0, -2, 0, 1])).is_none());
    }

    #[test]
    fn float_roots() {
        let p = q(&[-1, 0, 2]); // roots +-1/sqrt2
        let r = real_roots_in(&p, -1.0, 1.0);
        assert_eq!(r.len(), 2);
        assert!((r[1] - 0.5f64.sqrt()).abs() < 1e-15);
    }
}
