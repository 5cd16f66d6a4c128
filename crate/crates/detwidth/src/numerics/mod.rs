//! Shared low-level numerics: matrices, quadrature, contours, RNG streams.

mod contour;
mod matrix;
mod quadrature;
mod rng;

pub use contour::{Contour, ContourKind};
pub use matrix::{det_lu, det_lu_full, ComplexMatrix, DetValue};
pub use quadrature::{circle_rule, gauss_legendre, gauss_legendre_real, QuadratureRule};
pub use rng::{geometric_variate, normal_pair, uniform_open01, SeedSpec};
