use super::*;
use crate::polymat::{RectPolyMat, UniPoly};
use crate::sdp::sos::sos_factorize;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn ge(n: usize, d: usize, entries: &[&[f64]], center: Option<Vec<f64>>) -> GenEllipsoid {
    let p: PolyMat<f64> = PolyMat::new(n, d, entries.iter().map(|c| UniPoly::from_f64s(c)).collect()).unwrap();
    GenEllipsoid::new(&p, center).unwrap()
}

fn disk() -> GenEllipsoid {
    ge(2, 0, &[&[1.0], &[0.0], &[1.0]], None)
}

fn l1() -> GenEllipsoid {
    ge(2, 1, &[&[1.0], &[0.0, 1.0], &[1.0]], None)
}

fn pz() -> GenEllipsoid {
    ge(3, 2, &[&[2.0, 0.0, -1.0], &[0.0, 1.0], &[0.0], &[3.0, 0.0, -1.0], &[0.0], &[1.0]], None)
}

fn feasible(e: &GenEllipsoid, x: &[f64], rep: Representation) -> SolveStatus {
    let mut prob = ConicProblem::new();
    let xs: Vec<LinExpr> = x.iter().map(|v| LinExpr::constant(*v)).collect();
    match rep {
        Representation::Factored => {
            let f = sos_factorize(e.matrix()).unwrap();
            membership_constraints_rep1(&mut prob, e, &f, &xs).unwrap();
        }
        Representation::Lifted => {
            membership_constraints_rep2(&mut prob, e, &xs).unwrap();
        }
    }
    solve(&prob).status
}

#[test]
fn gauge_examples_both_representations() {
    for rep in [Representation::Factored, Representation::Lifted] {
        assert!((sdp_gauge(&disk(), &[1.0, 0.0], rep, None).unwrap() - 1.0).abs() < 1e-6);
        assert!((sdp_gauge(&disk(), &[1.1, 0.0], rep, None).unwrap() - 1.21).abs() < 1e-6);
        assert!((sdp_gauge(&pz(), &[0.0, 0.0, 0.9], rep, None).unwrap() - 0.81).abs() < 1e-6);
        assert!((sdp_gauge(&l1(), &[0.5, 0.5], rep, None).unwrap() - 1.0).abs() < 1e-6);
    }
}

#[test]
fn direct_feasibility_verdicts() {
    for rep in [Representation::Factored, Representation::Lifted] {
        assert_eq!(feasible(&disk(), &[0.6, 0.0], rep), SolveStatus::Optimal);
        assert_eq!(feasible(&disk(), &[1.1, 0.0], rep), SolveStatus::Infeasible);
        assert_eq!(feasible(&pz(), &[0.0, 0.0, 0.9], rep), SolveStatus::Optimal);
        assert_eq!(feasible(&l1(), &[0.5, 0.4], rep), SolveStatus::Optimal);
    }
}

#[test]
fn center_is_member_with_rank_one_lift() {
    let e = ge(2, 0, &[&[1.0], &[0.0], &[1.0]], Some(vec![2.0, -1.0]));
    let mut prob = ConicProblem::new();
    let xs = vec![LinExpr::constant(2.0), LinExpr::constant(-1.0)];
    let h = membership_constraints_rep2(&mut prob, &e, &xs).unwrap();
    let s = solve(&prob);
    assert_eq!(s.status, SolveStatus::Optimal);
    // the offset is zero, so X = 0 is the rank-one choice and the lift has X psd
    assert!(s.psd[h.lift.index][(2, 2)] - 1.0 < 1e-9);
}

#[test]
fn printed_factorization_gives_same_gauge() {
    let r2 = 0.5f64.sqrt();
    let b = RectPolyMat::from_fn(3, 3, |i, j| match (i, j) {
        (0, 0) => UniPoly::constant(r2),
        (1, 2) => UniPoly::constant(-1.0),
        (2, 0) => UniPoly::from_f64s(&[0.0, r2]),
        (2, 1) => UniPoly::constant(2f64.sqrt()),
        _ => UniPoly::zero(),
    });
    let c = RectPolyMat::from_fn(2, 3, |i, j| match (i, j) {
        (0, 1) => UniPoly::constant(1.0),
        (1, 0) => UniPoly::constant(1.5f64.sqrt()),
        _ => UniPoly::zero(),
    });
    let f = SosFactorization::new(b, c, 2).unwrap();
    let x = [0.3, -0.2, 0.5];
    let g1 = sdp_gauge(&pz(), &x, Representation::Factored, Some(&f)).unwrap();
    let direct = pz().gauge(&x).unwrap().value.powi(2);
    assert!((g1 - direct).abs() < 1e-6, "{g1} vs {direct}");
}

#[test]
fn representations_agree_with_direct_gauge() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let shifted = ge(3, 2, &[&[2.0, 0.0, -1.0], &[0.0, 1.0], &[0.0], &[3.0, 0.0, -1.0], &[0.0], &[1.0]], Some(vec![1.0, -1.0, 1.0]));
    let cubic = ge(2, 3, &[&[2.0, 0.0, 0.0, 1.0], &[0.0, 1.0], &[2.0, -1.0]], None);
    for e in [disk(), l1(), pz(), shifted, cubic] {
        let f = sos_factorize(e.matrix()).unwrap();
        for _ in 0..40 {
            let x: Vec<f64> = e.center().iter().map(|c| c + rng.gen_range(-1.5..1.5)).collect();
            let direct = e.gauge(&x).unwrap().value.powi(2);
            let a = sdp_gauge(&e, &x, Representation::Factored, Some(&f)).unwrap();
            let b = sdp_gauge(&e, &x, Representation::Lifted, None).unwrap();
            assert!((a - direct).abs() < 1e-6 * (1.0 + direct), "rep1 {a} vs {direct}");
            assert!((b - direct).abs() < 1e-6 * (1.0 + direct), "rep2 {b} vs {direct}");
        }
    }
}

#[test]
fn block_sizes_follow_size_formulas() {
    for d in 0..=7usize {
        for n in 1..=2usize {
            // P = (2 + t^d) I is psd on [-1, 1] with degree d
            let mut c = vec![0.0; d + 1];
            c[0] += 2.0;
            c[d] += 1.0;
            let p: PolyMat<f64> = PolyMat::from_fn(n, d, |i, j| if i == j { UniPoly::from_f64s(&c) } else { UniPoly::zero() }).unwrap();
            let e = GenEllipsoid::new(&p, None).unwrap();
            let f = sos_factorize(&p).unwrap();
            let xs: Vec<LinExpr> = (0..n).map(|_| LinExpr::constant(0.1)).collect();
            let mut prob = ConicProblem::new();
            let g = membership_constraints_rep1(&mut prob, &e, &f, &xs).unwrap();
            let (s1, s2) = g.sizes();
            assert_eq!(s1.max(s2), rep1_size(f.b.rows(), f.c.rows(), d), "d = {d}");
            let mut prob = ConicProblem::new();
            membership_constraints_rep2(&mut prob, &e, &xs).unwrap();
            assert_eq!(prob.psd_sizes.iter().copied().max().unwrap(), rep2_size(n, d));
        }
    }
}
