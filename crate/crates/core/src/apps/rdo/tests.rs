use super::*;
use nalgebra::DVector;

fn feasible(o: RdoOutcome) -> RdoInner {
    match o {
        RdoOutcome::Feasible(r) => r,
        RdoOutcome::Infeasible { .. } => panic!("expected a feasible program"),
    }
}

fn grid(k: usize) -> Vec<f64> {
    (0..=k).map(|i| -1.0 + 2.0 * i as f64 / k as f64).collect()
}

#[test]
fn example_degree_ladder() {
    let r = RdoInstance::box_two_modes();
    match rdo_inner(&r, 0).unwrap() {
        RdoOutcome::Infeasible { certificate } => {
            let c = certificate.expect("infeasibility ray");
            assert!(c.value > 0.0 && c.residual < 1e-6);
        }
        RdoOutcome::Feasible(f) => panic!("degree 0 should be infeasible, got gamma {}", f.gamma),
    }
    let one = feasible(rdo_inner(&r, 1).unwrap());
    let two = feasible(rdo_inner(&r, 2).unwrap());
    // a richer family can only shrink the bound
    assert!(two.gamma <= one.gamma + 1e-6, "{} vs {}", two.gamma, one.gamma);
}

#[test]
fn degree_two_set_is_invariant() {
    let r = RdoInstance::box_two_modes();
    let inner = feasible(rdo_inner(&r, 2).unwrap());
    let mats: Vec<DMatrix<f64>> = grid(20).iter().map(|t| r.a_at(*t)).collect();
    let outer = rdo_outer_sample(&r, 10, &grid(20));
    let pts = inner.ge.boundary_polyline(200).unwrap();
    for (j, p) in pts.iter().enumerate() {
        let x0 = DVector::from_column_slice(p);
        assert!((&r.h * &x0).max() <= 1.0 + 1e-7);
        for row in &outer {
            assert!(row[0] * p[0] + row[1] * p[1] <= 1.0 + 1e-7);
        }
        // ten steps under each sampled member of the segment
        for (i, a) in mats.iter().enumerate() {
            let mut x = x0.clone();
            for k in 0..10 {
                x = a * x;
                assert!((&r.h * &x).max() <= 1.0 + 1e-7, "point {j}, matrix {i} left the box at step {k}");
            }
        }
    }
}

#[test]
fn zero_dynamics_fit_the_square() {
    let z = DMatrix::zeros(2, 2);
    let r = RdoInstance::new(RdoInstance::box_two_modes().h, z.clone(), z).unwrap();
    let inner = feasible(rdo_inner(&r, 0).unwrap());
    // P >= e_i e_i^T forces P >= I, and minimizing g gives P = I
    assert!((inner.gamma - 1.0).abs() < 1e-6);
    for k in 0..16 {
        let a = std::f64::consts::PI * k as f64 / 8.0;
        assert!(inner.ge.contains(&[a.cos() * (1.0 - 1e-6), a.sin() * (1.0 - 1e-6)]).unwrap());
    }
}

#[test]
fn outer_sample_rows() {
    let r = RdoInstance::box_two_modes();
    let k0 = rdo_outer_sample(&r, 0, &grid(20));
    assert_eq!(k0.len(), 4);
    for (i, row) in k0.iter().enumerate() {
        assert_eq!(row.as_slice(), r.h.row(i).iter().copied().collect::<Vec<_>>().as_slice());
    }
    assert_eq!(rdo_outer_sample(&r, 10, &grid(20)).len(), 4 + 21 * 10 * 4);

    let z = DMatrix::zeros(2, 2);
    let r0 = RdoInstance::new(r.h.clone(), z.clone(), z).unwrap();
    let rows = rdo_outer_sample(&r0, 3, &grid(4));
    assert!(rows[4..].iter().all(|row| row.iter().all(|v| *v == 0.0)));
}

#[test]
fn segment_endpoints() {
    let r = RdoInstance::box_two_modes();
    assert_eq!(r.a_at(1.0), r.a_hat);
    assert_eq!(r.a_at(-1.0), r.a_check);
    let ap = r.a_poly();
    for t in [-1.0, -0.3, 0.0, 0.8] {
        let m = ap.eval(&t);
        let d = r.a_at(t);
        for i in 0..2 {
            for j in 0..2 {
                assert!((m[i][j] - d[(i, j)]).abs() < 1e-15);
            }
        }
    }
}

#[test]
fn instance_is_validated() {
    let h = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 0.0]);
    let a = DMatrix::identity(2, 2);
    assert!(RdoInstance::new(h, a.clone(), a.clone()).is_err());
    let h = DMatrix::from_row_slice(1, 2, &[1.0, 0.0]);
    assert!(RdoInstance::new(h, DMatrix::identity(3, 3), a).is_err());
}
