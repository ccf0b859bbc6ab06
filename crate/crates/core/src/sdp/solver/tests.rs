use super::*;
use crate::sdp::problem::{ConicProblem, LinExpr, SolveStatus, Var};
use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn lambda_min_problem(a: &DMatrix<f64>) -> ConicProblem {
    // max t s.t. A - t I psd  <=>  X = A - tI, X psd
    let n = a.nrows();
    let mut p = ConicProblem::new();
    let t = p.add_free();
    let x = p.add_psd(n);
    for i in 0..n {
        for j in i..n {
            let mut e = LinExpr::var(x.at(i, j));
            if i == j {
                e.add_term(t, 1.0);
            }
            e.constant = -a[(i, j)];
            p.add_eq(&e);
        }
    }
    p.maximize(LinExpr::var(t));
    p
}

#[test]
fn two_by_two_scalar() {
    let mut p = ConicProblem::new();
    let x = p.add_free();
    let b = p.add_psd(2);
    let mut e = LinExpr::var(b.at(0, 0));
    e.add_term(x, -1.0);
    p.add_eq(&e);
    let mut e = LinExpr::var(b.at(1, 1));
    e.add_term(x, -1.0);
    p.add_eq(&e);
    let mut e = LinExpr::var(b.at(0, 1));
    e.constant = -1.0;
    p.add_eq(&e);
    p.minimize(LinExpr::var(x));
    let s = solve(&p);
    assert_eq!(s.status, SolveStatus::Optimal);
    assert!((s.value(x) - 1.0).abs() < 1e-7, "{}", s.value(x));
}

#[test]
fn small_lp() {
    // min -x - y s.t. x + 2y <= 4, 3x + y <= 6, x,y >= 0 -> (8/5, 6/5)
    let mut p = ConicProblem::new();
    let x = p.add_nonneg();
    let y = p.add_nonneg();
    let mut e = LinExpr::term(x, 1.0).plus(&LinExpr::term(y, 2.0));
    e.constant = -4.0;
    p.add_le(&e);
    let mut e = LinExpr::term(x, 3.0).plus(&LinExpr::term(y, 1.0));
    e.constant = -6.0;
    p.add_le(&e);
    p.minimize(LinExpr::term(x, -1.0).plus(&LinExpr::term(y, -1.0)));
    let s = solve(&p);
    assert_eq!(s.status, SolveStatus::Optimal);
    assert!((s.value(x) - 1.6).abs() < 1e-6);
    assert!((s.value(y) - 1.2).abs() < 1e-6);
    assert!((s.objective + 2.8).abs() < 1e-6);
}

#[test]
fn infeasible_lp_has_certificate() {
    // x >= 0, x <= -1
    let mut p = ConicProblem::new();
    let x = p.add_nonneg();
    let mut e = LinExpr::var(x);
    e.constant = 1.0;
    p.add_le(&e);
    p.minimize(LinExpr::var(x));
    let s = solve(&p);
    assert_eq!(s.status, SolveStatus::Infeasible);
    assert!(s.certificate.is_some());
}

#[test]
fn infeasible_sdp() {
    // X psd 2x2, X00 = -1
    let mut p = ConicProblem::new();
    let b = p.add_psd(2);
    let mut e = LinExpr::var(b.at(0, 0));
    e.constant = 1.0;
    p.add_eq(&e);
    p.minimize(LinExpr::var(b.at(1, 1)));
    let s = solve(&p);
    assert_eq!(s.status, SolveStatus::Infeasible);
}

#[test]
fn unbounded_lp() {
    let mut p = ConicProblem::new();
    let x = p.add_nonneg();
    let y = p.add_nonneg();
    p.add_eq(&LinExpr::var(x).minus(&LinExpr::var(y)));
    p.minimize(LinExpr::term(x, -1.0));
    let s = solve(&p);
    assert_eq!(s.status, SolveStatus::Unbounded);
}

#[test]
fn free_variable_without_rows_is_unbounded() {
    let mut p = ConicProblem::new();
    let x = p.add_free();
    p.minimize(LinExpr::var(x));
    assert_eq!(solve(&p).status, SolveStatus::Unbounded);
}

#[test]
fn duplicate_rows_are_removed() {
    let mut p = ConicProblem::new();
    let x = p.add_nonneg();
    let y = p.add_nonneg();
    let mut e = LinExpr::var(x).plus(&LinExpr::var(y));
    e.constant = -1.0;
    p.add_eq(&e);
    p.add_eq(&e.scaled(2.0));
    p.minimize(LinExpr::var(x).plus(&LinExpr::term(y, 2.0)));
    let s = solve(&p);
    assert_eq!(s.status, SolveStatus::Optimal);
    assert!((s.objective - 1.0).abs() < 1e-7);
}

#[test]
fn inconsistent_duplicate_rows_are_infeasible() {
    let mut p = ConicProblem::new();
    let x = p.add_free();
    let mut e = LinExpr::var(x);
    e.constant = -1.0;
    p.add_eq(&e);
    let mut e = LinExpr::var(x);
    e.constant = -2.0;
    p.add_eq(&e);
    let s = solve(&p);
    assert_eq!(s.status, SolveStatus::Infeasible);
    let c = s.certificate.unwrap();
    assert!(c.value > 0.0);
}

#[test]
fn dual_values_satisfy_stationarity() {
    // min <C, X> s.t. tr X = 1: optimum = lambda_min(C), y = lambda_min
    let c = DMatrix::from_row_slice(3, 3, &[2.0, 1.0, 0.0, 1.0, 3.0, 1.0, 0.0, 1.0, 4.0]);
    let mut p = ConicProblem::new();
    let b = p.add_psd(3);
    let mut tr = LinExpr::constant(-1.0);
    for i in 0..3 {
        tr.add_term(b.at(i, i), 1.0);
    }
    p.add_eq(&tr);
    let mut obj = LinExpr::default();
    for i in 0..3 {
        for j in i..3 {
            obj.add_term(b.at(i, j), if i == j { c[(i, j)] } else { 2.0 * c[(i, j)] });
        }
    }
    p.minimize(obj);
    let s = solve(&p);
    let lmin = c.clone().symmetric_eigenvalues().min();
    assert_eq!(s.status, SolveStatus::Optimal);
    assert!((s.objective - lmin).abs() < 1e-7);
    assert!((s.dual[0] - lmin).abs() < 1e-6);
}

#[test]
fn mixed_cones() {
    // min t s.t. ||(1, 2)|| <= t via arrow block, plus t >= 0 slack
    let mut p = ConicProblem::new();
    let t = p.add_free();
    let b = p.add_psd(3);
    for i in 0..2 {
        let mut e = LinExpr::var(b.at(i, i));
        e.add_term(t, -1.0);
        p.add_eq(&e);
    }
    p.add_eq(&LinExpr::var(b.at(0, 1)));
    let mut e = LinExpr::var(b.at(2, 2));
    e.add_term(t, -1.0);
    p.add_eq(&e);
    for (i, v) in [1.0, 2.0].iter().enumerate() {
        let mut e = LinExpr::var(b.at(i, 2));
        e.constant = -v;
        p.add_eq(&e);
    }
    let z = p.add_nonneg();
    p.add_eq(&LinExpr::var(z).minus(&LinExpr::var(t)));
    p.minimize(LinExpr::var(t));
    let s = solve(&p);
    assert_eq!(s.status, SolveStatus::Optimal);
    assert!((s.value(t) - 5f64.sqrt()).abs() < 1e-6);
    assert_eq!(s.value(Var::NonNeg(0)), s.nonneg[0]);
}

fn random_sym(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<f64> {
    let m = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
    (&m + m.transpose()) * 0.5
}

#[test]
fn battery_lambda_min() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for n in 1..=8 {
        for _ in 0..3 {
            let a = random_sym(&mut rng, n);
            let s = solve(&lambda_min_problem(&a));
            let oracle = a.clone().symmetric_eigenvalues().min();
            assert_eq!(s.status, SolveStatus::Optimal);
            assert!((-s.objective - oracle).abs() < 1e-6, "n={n} {} vs {oracle}", -s.objective);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn lambda_min_matches_eigen(seed in 0u64..10_000, n in 1usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_sym(&mut rng, n);
        let s = solve(&lambda_min_problem(&a));
        let oracle = a.clone().symmetric_eigenvalues().min();
        prop_assert_eq!(s.status, SolveStatus::Optimal);
        prop_assert!((-s.objective - oracle).abs() < 1e-6);
    }

    #[test]
    fn nearest_diagonal_projection(seed in 0u64..10_000, n in 2usize..5) {
        // min sum (X_ii - a_i)^2-free variant: min tr(X) s.t. X >= diag(a) with a > 0
        // optimum is sum a_i, attained at X = diag(a)
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a: Vec<f64> = (0..n).map(|_| rng.gen_range(0.1..3.0)).collect();
        let mut p = ConicProblem::new();
        let x = p.add_psd(n);
        let z = p.add_psd(n);
        for i in 0..n {
            for j in i..n {
                let mut e = LinExpr::var(x.at(i, j)).minus(&LinExpr::var(z.at(i, j)));
                if i == j {
                    e.constant = -a[i];
                }
                p.add_eq(&e);
            }
        }
        let mut tr = LinExpr::default();
        for i in 0..n {
            tr.add_term(x.at(i, i), 1.0);
        }
        p.minimize(tr);
        let s = solve(&p);
        prop_assert_eq!(s.status, SolveStatus::Optimal);
        prop_assert!((s.objective - a.iter().sum::<f64>()).abs() < 1e-6);
    }
}

#[test]
fn single_free_equality() {
    let mut p = ConicProblem::new();
    let c = p.add_free();
    p.add_eq(&LinExpr::var(c).minus(&LinExpr::constant(3.0)));
    p.minimize(LinExpr::var(c));
    let s = solve(&p);
    assert_eq!(s.status, SolveStatus::Optimal);
    assert!((s.objective - 3.0).abs() < 1e-7 && (s.free[0] - 3.0).abs() < 1e-7, "{s:?}");
}

#[test]
fn trace_pinned_to_one() {
    let mut p = ConicProblem::new();
    let b = p.add_psd(3);
    let tr = LinExpr { terms: (0..3).map(|i| (b.at(i, i), 1.0)).collect(), constant: 0.0 };
    p.add_eq(&tr.minus(&LinExpr::constant(1.0)));
    p.maximize(tr);
    let s = solve(&p);
    assert_eq!(s.status, SolveStatus::Optimal);
    assert!((s.objective + 1.0).abs() < 1e-8, "{}", s.objective);
    assert!((s.psd[0].trace() - 1.0).abs() < 1e-8);
}
