use super::*;
use crate::polymat::UniPoly;

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

fn single(m: Vec<Vec<f64>>) -> CovSamples {
    CovSamples::new(vec![0.0], vec![m]).unwrap()
}

#[test]
fn nearest_psd_examples() {
    let s = DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, -1.0]);
    let p = nearest_psd(&s);
    assert!((p - DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 0.0])).amax() < 1e-12);
    let q = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 3.0]);
    assert!((nearest_psd(&q) - &q).amax() < 1e-12);
    assert_eq!(nearest_psd(&DMatrix::zeros(3, 3)).amax(), 0.0);
}

#[test]
fn nearest_psd_is_a_projection() {
    // residual is orthogonal to the projection and negative semidefinite
    let s = DMatrix::from_row_slice(3, 3, &[1.0, 2.0, -1.0, 2.0, -3.0, 0.5, -1.0, 0.5, 0.2]);
    let p = nearest_psd(&s);
    let r = &s - &p;
    assert!(p.dot(&r).abs() < 1e-10);
    assert!(r.symmetric_eigenvalues().max() < 1e-10);
    assert!(p.symmetric_eigenvalues().min() > -1e-12);
}

#[test]
fn baseline_examples() {
    let b = portfolio_baseline(&single(vec![vec![1.0, 0.0], vec![0.0, 1.0]])).unwrap();
    assert!(close(b.x[0], 0.5, 1e-6) && close(b.x[1], 0.5, 1e-6), "{:?}", b.x);
    assert!(close(b.value, 0.5, 1e-6));

    let b = portfolio_baseline(&single(vec![vec![1.0, 0.0], vec![0.0, 100.0]])).unwrap();
    assert!(close(b.x[0], 100.0 / 101.0, 1e-6) && close(b.x[1], 1.0 / 101.0, 1e-6), "{:?}", b.x);
    assert!(close(b.value, 100.0 / 101.0, 1e-6));

    let b = portfolio_baseline(&single(vec![vec![3.0]])).unwrap();
    assert!(close(b.x[0], 1.0, 1e-7));
    assert!(close(b.value, 3.0, 1e-6));
}

#[test]
fn baseline_takes_the_worst_sample() {
    // diag(1, 4) and diag(4, 1): symmetric optimum at the midpoint, value 5/4
    let c = CovSamples::new(
        vec![-1.0, 1.0],
        vec![vec![vec![1.0, 0.0], vec![0.0, 4.0]], vec![vec![4.0, 0.0], vec![0.0, 1.0]]],
    )
    .unwrap();
    let b = portfolio_baseline(&c).unwrap();
    assert!(close(b.x[0], 0.5, 1e-6), "{:?}", b.x);
    assert!(close(b.value, 1.25, 1e-6));
}

#[test]
fn samples_are_validated() {
    assert!(CovSamples::new(vec![2.0], vec![vec![vec![1.0]]]).is_err());
    assert!(CovSamples::new(vec![0.0], vec![vec![vec![1.0, 2.0], vec![0.0, 1.0]]]).is_err());
    assert!(CovSamples::new(vec![0.0, 0.5], vec![vec![vec![1.0]]]).is_err());
    assert!(CovSamples::new(vec![], vec![]).is_err());
}

#[test]
fn fit_constant_examples() {
    let m = vec![vec![2.0, 1.0], vec![1.0, 3.0]];
    let p = fit_cov_curve(&single(m.clone()), 0).unwrap();
    for (i, row) in m.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            assert!(close(p.get(i, j).coeff(0), *v, 1e-6));
        }
    }
    let p = fit_cov_curve(&single(vec![vec![1.0, 0.0], vec![0.0, -1.0]]), 0).unwrap();
    assert!(close(p.get(0, 0).coeff(0), 1.0, 1e-6));
    assert!(close(p.get(0, 1).coeff(0), 0.0, 1e-6));
    assert!(close(p.get(1, 1).coeff(0), 0.0, 1e-6));
}

#[test]
fn fit_recovers_an_exact_curve() {
    // P(t) = B(t)^T B(t) with B linear, strictly psd on [-1, 1]
    let truth: PolyMat<f64> = PolyMat::new(
        2,
        2,
        vec![
            UniPoly::from_f64s(&[2.0, 0.5, 0.25]),
            UniPoly::from_f64s(&[0.5, -0.5]),
            UniPoly::from_f64s(&[1.5, 0.0, 0.5]),
        ],
    )
    .unwrap();
    let times: Vec<f64> = (0..15).map(|i| -1.0 + i as f64 / 7.0).collect();
    let mats = times.iter().map(|t| truth.eval(t)).collect();
    let p = fit_cov_curve(&CovSamples::new(times, mats).unwrap(), 2).unwrap();
    for (a, b) in p.entries().iter().zip(truth.entries()) {
        for k in 0..=2 {
            assert!(close(a.coeff(k), b.coeff(k), 1e-6), "{a:?} vs {b:?}");
        }
    }
}

#[test]
fn fit_output_is_psd_on_interval() {
    let demo = synth_covariance_demo(DEMO_SEED);
    let sub = CovSamples::new(demo.samples.times[..60].to_vec(), demo.samples.mats[..60].to_vec()).unwrap();
    let p = fit_cov_curve(&sub, 1).unwrap();
    let scale = p.max_abs_coeff();
    for i in 0..=200 {
        let t = -1.0 + i as f64 / 100.0;
        let m = p.eval(&t);
        let e = DMatrix::from_fn(10, 10, |a, b| m[a][b]).symmetric_eigenvalues().min();
        assert!(e > -1e-6 * scale, "t={t} min eig {e}");
    }
}

#[test]
fn ge_portfolio_examples() {
    let id: PolyMat<f64> = PolyMat::constant(&[vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]]).unwrap();
    let g = portfolio_ge(&id).unwrap();
    for v in &g.x {
        assert!(close(*v, 1.0 / 3.0, 1e-6), "{:?}", g.x);
    }
    assert!(close(g.value, 1.0 / 3.0, 1e-6));

    // max(x1^2, x2^2) on the simplex
    let sq: PolyMat<f64> =
        PolyMat::new(2, 1, vec![UniPoly::from_f64s(&[0.5, -0.5]), UniPoly::zero(), UniPoly::from_f64s(&[0.5, 0.5])])
            .unwrap();
    let g = portfolio_ge(&sq).unwrap();
    assert!(close(g.x[0], 0.5, 1e-6) && close(g.x[1], 0.5, 1e-6), "{:?}", g.x);
    assert!(close(g.value, 0.25, 1e-6));
}

#[test]
fn ge_portfolio_rejects_indefinite() {
    let p: PolyMat<f64> = PolyMat::constant(&[vec![1.0, 0.0], vec![0.0, -1.0]]).unwrap();
    assert!(matches!(portfolio_ge(&p), Err(GeError::NotPsdOnInterval)));
}

#[test]
fn degree_zero_matches_baseline_on_one_time() {
    let m = vec![vec![4.0, 1.0, -2.0], vec![1.0, 2.0, 0.5], vec![-2.0, 0.5, -1.0]];
    let c = CovSamples::new(vec![0.3, 0.3], vec![m.clone(), m]).unwrap();
    let base = portfolio_baseline(&c).unwrap();
    let ge = portfolio_ge(&fit_cov_curve(&c, 0).unwrap()).unwrap();
    for (a, b) in base.x.iter().zip(&ge.x) {
        assert!(close(*a, *b, 1e-6), "{:?} vs {:?}", base.x, ge.x);
    }
    assert!(close(base.value, ge.value, 1e-6));
}

#[test]
fn demo_shape() {
    let demo = synth_covariance_demo(DEMO_SEED);
    assert_eq!(demo.samples.m(), DEMO_SAMPLES);
    assert_eq!(demo.samples.n(), DEMO_ASSETS);
    assert_eq!(demo.samples.times[0], -1.0);
    assert_eq!(demo.samples.times[DEMO_SAMPLES - 1], 1.0);
    let h = demo.samples.times[1] - demo.samples.times[0];
    assert!(demo.samples.times.windows(2).all(|w| close(w[1] - w[0], h, 1e-12)));
    assert!(demo.truth.eval(-1.0).amax() < 1e-12);
    for i in 0..=100 {
        let t = -1.0 + i as f64 / 50.0;
        assert!(demo.truth.eval(t).symmetric_eigenvalues().min() > -1e-9);
    }
    // deterministic
    assert_eq!(synth_covariance_demo(DEMO_SEED).samples, demo.samples);
}

#[test]
fn worst_case_variance_examples() {
    assert_eq!(worst_case_variance(&[0.0, 0.0], |_| DMatrix::identity(2, 2)).0, 0.0);
    assert!(close(worst_case_variance(&[0.5, 0.5], |_| DMatrix::identity(2, 2)).0, 0.5, 1e-15));
    // interior maximum of 1 - t^2 + t/2, refined off the grid
    let (v, t) = worst_case_variance(&[1.0], |t| DMatrix::from_element(1, 1, 1.0 - t * t + t / 2.0));
    assert!(close(t, 0.25, 1e-7) && close(v, 1.0625, 1e-12), "{v} {t}");
}
