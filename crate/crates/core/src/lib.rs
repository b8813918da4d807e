//! Discrete end-periodic operator engine and Seifert homology sphere
//! invariant calculator.
//!
//! * [`numerics`]: complex dense linear algebra, circle quadrature,
//!   matrix-polynomial eigenvalues, exact rationals.
//! * [`family`]: affine holomorphic families `D(mu) = T + mu A` with their
//!   spectral points, resolvents, residue projections, Laurent data and
//!   Jordan-chain dimensions.
//! * [`endperiodic`]: block-Toeplitz operators on weighted half-line sequence
//!   spaces with Laurent symbol `D(z)`: Fredholm test, index, change of index
//!   across annuli, spectral flow along symbol paths.
//! * [`seifert`]: exact invariants of Seifert fibered homology spheres
//!   `Sigma(a_1, ..., a_n)`.
//! * [`io`]: JSON wire formats shared with the command-line front end.

// `!(a < b)` rejects NaN; index loops mirror the matrix formulas.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod endperiodic;
pub mod error;
pub mod family;
pub mod io;
pub mod numerics;
pub mod seifert;

pub use error::{Error, Result};
pub use num_complex::Complex64;
