//! Inputs shared by the benchmarks.

use ge_core::{PolyMat, Rational, UniPoly};

/// `[[1, t], [t, 1]]` padded with an identity block to size `n`.
pub fn pencil(n: usize) -> PolyMat<f64> {
    PolyMat::from_fn(n, 1, |i, j| match (i, j) {
        (0, 1) => UniPoly::from_f64s(&[0.0, 1.0]),
        _ if i == j => UniPoly::constant(1.0),
        _ => UniPoly::zero(),
    })
    .expect("valid pencil")
}

pub fn pencil_exact(n: usize) -> PolyMat<Rational> {
    pencil(n).to_rational()
}

/// Facet normals of a regular `2k`-gon.
pub fn polygon(k: usize) -> Vec<Vec<Rational>> {
    (0..k)
        .map(|i| {
            let a = std::f64::consts::PI * i as f64 / k as f64;
            vec![ge_core::scalar::rationalize(a.cos()), ge_core::scalar::rationalize(a.sin())]
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inputs_are_well_formed() {
        assert_eq!(pencil(4).n(), 4);
        assert_eq!(polygon(3).len(), 3);
        assert!(ge_core::recognition::recognize(&pencil_exact(3)).unwrap().is_ge());
    }
}
