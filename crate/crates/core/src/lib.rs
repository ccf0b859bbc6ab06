//! Generalized ellipsoids: sets cut out by a polynomial family of quadratic
//! forms, `{x : (x - x0)^T P(t) (x - x0) <= 1 for all t in [-1, 1]}`.

pub mod apps;
pub mod error;
pub mod exact_rep;
pub mod genellipsoid;
pub mod polymat;
pub mod recognition;
pub mod scalar;
pub mod sdp;
pub mod simplex_tour;
pub mod sturm;

pub use error::{GeError, Result};
pub use polymat::{PolyMat, RectPolyMat, UniPoly};
pub use scalar::{Rational, Scalar, ScalarField};
