use super::*;
use crate::scalar::{rat, Rational};
use num_traits::{One, Zero};
use proptest::prelude::*;

fn q(c: &[i64]) -> UniPoly<Rational> {
    UniPoly::from_i64s(c)
}

fn pm(n: usize, d: usize, e: Vec<Vec<i64>>) -> PolyMat<Rational> {
    PolyMat::new(n, d, e.iter().map(|c| q(c)).collect()).unwrap()
}

#[test]
fn evaluation_examples() {
    assert_eq!(q(&[1, 0, -1]).eval(&rat(0, 1)), rat(1, 1));
    assert_eq!(q(&[1, 0, -1]).eval(&rat(1, 1)), rat(0, 1));
    assert_eq!(q(&[5, 2, -2]).eval(&rat(1, 2)), rat(11, 2));
}

#[test]
fn quad_form_examples() {
    let a = pm(2, 1, vec![vec![1], vec![0, 1], vec![1]]);
    let one = vec![rat(1, 1), rat(1, 1)];
    assert_eq!(quad_form(&a, &one), q(&[2, 2]));
    let pz2 = pm(2, 2, vec![vec![2, 0, -1], vec![0, 1], vec![3, 0, -1]]);
    assert_eq!(quad_form(&pz2, &one), q(&[5, 2, -2]));
}

#[test]
fn mobius_examples() {
    let a = pm(1, 1, vec![vec![0, 1]]);
    assert_eq!(mobius_lift(&a).get(0, 0), &q(&[-1, 0, 1]));
    let b = pm(1, 1, vec![vec![1, 1]]);
    assert_eq!(mobius_lift(&b).get(0, 0), &q(&[0, 0, 2]));
    assert_eq!(mobius_lift(&b).d(), 2);
}

#[test]
fn interpolation_examples() {
    let nodes = vec![rat(-1, 1), rat(0, 1), rat(1, 1)];
    let vals = vec![rat(0, 1), rat(1, 1), rat(0, 1)];
    assert_eq!(interpolate(&nodes, &vals).unwrap(), q(&[1, 0, -1]));
    let dup = vec![rat(1, 1), rat(1, 1)];
    assert_eq!(interpolate(&dup, &dup), Err(GeError::DuplicateNodes));
}

#[test]
fn charpoly_example() {
    let a = pm(2, 1, vec![vec![1], vec![0, 1], vec![1]]);
    let c = charpoly_coeff_curves(&a).unwrap();
    assert_eq!(c[1][0], q(&[1, 0, -1]));
    assert_eq!(c[1][1], q(&[2]));
    assert_eq!(c[1][2], q(&[1]));
    assert_eq!(c[0][0], q(&[1, 1]).sub(&q(&[0, 1])));
    assert_eq!(c[0][1], q(&[1]));
}

#[test]
fn charpoly_float_matches_exact() {
    let a = pm(3, 2, vec![vec![2, 0, -1], vec![0, 1], vec![1, -1], vec![3, 0, -1], vec![0, 0, 1], vec![4, 1]]);
    let exact = charpoly_coeff_curves(&a).unwrap();
    let float = charpoly_coeff_curves(&a.to_f64()).unwrap();
    for (re, rf) in exact.iter().zip(&float) {
        for (e, f) in re.iter().zip(rf) {
            for k in 0..=e.degree().unwrap_or(0).max(f.degree().unwrap_or(0)) {
                assert!((e.coeff(k).to_f64() - f.coeff(k)).abs() < 1e-9);
            }
        }
    }
}

/// Faddeev-LeVerrier: coefficients of det(sI + M) from traces of powers.
fn faddeev_charpoly(m: &[Vec<Rational>]) -> Vec<Rational> {
    let k = m.len();
    // det(sI - A) = s^k + a_{k-1} s^{k-1} + ... ; det(sI + M) = (-1)^k det(-sI - M)
    let neg: Vec<Vec<Rational>> = m.iter().map(|r| r.iter().map(|x| -x.clone()).collect()).collect();
    let mut coeffs = vec![Rational::zero(); k + 1];
    coeffs[k] = Rational::one();
    let mut mk = vec![vec![Rational::zero(); k]; k];
    for step in 1..=k {
        // M_step = A M_{step-1} + c_{k-step+1} I
        let mut next = vec![vec![Rational::zero(); k]; k];
        for i in 0..k {
            for j in 0..k {
                let mut acc = Rational::zero();
                for l in 0..k {
                    acc += &neg[i][l] * &mk[l][j];
                }
                if i == j {
                    acc += &coeffs[k - step + 1];
                }
                next[i][j] = acc;
            }
        }
        let mut tr = Rational::zero();
        for i in 0..k {
            for l in 0..k {
                tr += &neg[i][l] * &next[l][i];
            }
        }
        coeffs[k - step] = -tr / Rational::from_integer((step as i64).into());
        mk = next;
    }
    // coeffs describe det(sI - A) with A = -M, which is det(sI + M)
    coeffs
}

fn small_polymat() -> impl Strategy<Value = PolyMat<Rational>> {
    (1usize..4, 0usize..4).prop_flat_map(|(n, d)| {
        proptest::collection::vec(proptest::collection::vec(-4i64..5, d + 1), n * (n + 1) / 2)
            .prop_map(move |e| pm(n, d, e))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn charpoly_curves_match_faddeev(p in small_polymat(), tn in -5i64..6, td in 1i64..4) {
        let t = rat(tn, td);
        let curves = charpoly_coeff_curves(&p).unwrap();
        let m = p.eval(&t);
        for k in 1..=p.n() {
            let sub: Vec<Vec<Rational>> = m[..k].iter().map(|r| r[..k].to_vec()).collect();
            let oracle = faddeev_charpoly(&sub);
            for i in 0..=k {
                prop_assert_eq!(curves[k - 1][i].eval(&t), oracle[i].clone());
                prop_assert!(curves[k - 1][i].degree().unwrap_or(0) <= p.d() * (k - i));
            }
        }
    }

    #[test]
    fn mobius_identity(p in small_polymat(), sn in -6i64..7, sd in 1i64..4) {
        let s = rat(sn, sd);
        let s2 = &s * &s;
        let one = Rational::one();
        let t = (&s2 - &one) / (&s2 + &one);
        let w = num_traits::pow(&s2 + &one, p.d());
        let lifted = mobius_lift(&p).eval(&s);
        let direct = p.eval(&t);
        for i in 0..p.n() {
            for j in 0..p.n() {
                prop_assert_eq!(lifted[i][j].clone(), &w * &direct[i][j]);
            }
        }
    }

    #[test]
    fn interpolation_roundtrip(c in proptest::collection::vec(-9i64..10, 1..7)) {
        let p = q(&c);
        let nodes: Vec<Rational> = Rational::interpolation_nodes(c.len());
        let vals: Vec<Rational> = nodes.iter().map(|x| p.eval(x)).collect();
        prop_assert_eq!(interpolate(&nodes, &vals).unwrap(), p);
    }

    #[test]
    fn exact_json_roundtrip(p in small_polymat(), den in 1i64..7) {
        let scaled = PolyMat::from_fn(p.n(), p.d(), |i, j| p.get(i, j).scale(&rat(1, den))).unwrap();
        let text = serde_json::to_string(&polymat_to_json(&scaled)).unwrap();
        let back: PolyMat<Rational> = polymat_from_json(&text).unwrap();
        prop_assert_eq!(&back, &scaled);
        prop_assert_eq!(serde_json::to_string(&polymat_to_json(&back)).unwrap(), text);
    }

    #[test]
    fn quad_form_matches_eval(p in small_polymat(), x in proptest::collection::vec(-3i64..4, 3), tn in -3i64..4) {
        let x: Vec<Rational> = x[..p.n()].iter().map(|&v| rat(v, 1)).collect();
        let t = rat(tn, 2);
        let m = p.eval(&t);
        let mut direct = Rational::zero();
        for i in 0..p.n() { for j in 0..p.n() { direct += &x[i] * &m[i][j] * &x[j]; } }
        prop_assert_eq!(quad_form(&p, &x).eval(&t), direct);
    }
}

#[test]
fn float_json_parses_numbers_and_fractions() {
    let text = r#"{"n":1,"d":1,"entries":[["1/4", 0.5]]}"#;
    let p: PolyMat<f64> = polymat_from_json(text).unwrap();
    assert_eq!(p.get(0, 0).coeffs(), &[0.25, 0.5]);
    let e: PolyMat<Rational> = polymat_from_json(r#"{"n":1,"d":0,"entries":[[0.1]]}"#).unwrap();
    assert_eq!(e.get(0, 0).coeff(0), rat(1, 10));
}

#[test]
fn degree_bound_enforced() {
    let r = PolyMat::<Rational>::new(1, 1, vec![q(&[0, 0, 1])]);
    assert_eq!(r, Err(GeError::DegreeMismatch { declared: 1 }));
}
