//! Numeric substrate: dense complex linear algebra, circle quadrature,
//! polynomial eigenvalues and exact rationals.

mod contour;
mod matrix;
mod polyeig;
mod rational;

pub use contour::{
    contour_integrate, contour_integrate_converged, contour_integrate_scalar, winding_number,
    CircleContour,
};
pub use matrix::{mat_rank, CMat, ComplexMatrix, ToleranceConfig};
pub use polyeig::{poly_eigenvalues, PolyEigen};
pub use rational::{big_gcd, ExactRational};

pub(crate) use matrix::{is_finite_matrix, null_space, numerical_rank_floored, singular_values};
pub(crate) use polyeig::poly_eigenvalues_raw;
