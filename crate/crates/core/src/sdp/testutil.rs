use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::polymat::{PolyMat, UniPoly};

/// Smallest eigenvalue of `p` over `k` equispaced points of `[-1, 1]`.
pub fn grid_min_eig(p: &PolyMat<f64>, k: usize) -> f64 {
    (0..k)
        .map(|i| {
            let t = -1.0 + 2.0 * i as f64 / (k - 1) as f64;
            let m = p.eval(&t);
            let n = p.n();
            DMatrix::from_fn(n, n, |a, b| m[a][b]).symmetric_eigenvalues().min()
        })
        .fold(f64::INFINITY, f64::min)
}

/// Random matrix with coefficients on a 1/8 grid, shifted so its grid
/// minimum eigenvalue lands in `[-0.6, 0.6]`.
pub fn random_instance(rng: &mut ChaCha8Rng, n: usize, d: usize) -> PolyMat<f64> {
    let base = PolyMat::from_fn(n, d, |_, _| {
        UniPoly::new((0..=d).map(|_| (rng.gen_range(-1.0..1.0f64) * 8.0).round() / 8.0).collect())
    })
    .unwrap();
    let m = grid_min_eig(&base, 401);
    let shift = ((-m + rng.gen_range(-0.6..0.6)) * 16.0).round() / 16.0;
    let id = PolyMat::from_fn(n, d, |i, j| UniPoly::constant(if i == j { shift } else { 0.0 })).unwrap();
    base.add(&id).unwrap()
}

