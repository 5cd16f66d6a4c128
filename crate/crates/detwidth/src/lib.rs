//! Numerical library for structured determinants and width distributions.
//!
//! The crate has three layers:
//!
//! * low-level numerics: complex dense matrices with LU determinants,
//!   circle/Gauss-Legendre quadrature, oriented contours, and seeded RNG
//!   streams ([`numerics`]);
//! * determinant machinery: orthogonal polynomials on the circle and the
//!   line with their Christoffel-Darboux kernels ([`orthopoly`]), discrete
//!   and continuous Toeplitz/Hankel determinants ([`dets`]), and Nystrom
//!   evaluation of Fredholm determinants including the Airy kernel and a
//!   contour form of its soft-edge limit ([`fredholm`]);
//! * applications: exact width distributions of three non-intersecting path
//!   ensembles ([`width`]) and Monte-Carlo last-passage percolation with
//!   Tracy-Widom comparisons ([`lpp`]).
//!
//! The central objects are the identities relating a determinant built from
//! finitely many nodes (roots of unity, rotated roots, a shifted lattice) to
//! the corresponding continuous determinant times a Fredholm correction
//! factor. Every identity implemented here is covered by a cross-check in
//! the test suite that computes both sides through independent routes.

pub mod dets;
pub mod fredholm;
pub mod lpp;
pub mod numerics;
pub mod orthopoly;
pub mod stats;
pub mod width;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("Gram matrix numerically singular at degree {degree}")]
    SingularGram { degree: usize },
    #[error("kernel evaluation produced a non-finite value at nodes ({z}, {w})")]
    KernelEval { z: num_complex::Complex64, w: num_complex::Complex64 },
    #[error("quadrature truncation insufficient: {0}")]
    Truncation(String),
    #[error("oracle out of range: {0}")]
    OracleScale(String),
}

pub type Result<T> = std::result::Result<T, Error>;
