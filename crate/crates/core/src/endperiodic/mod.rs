//! Discrete end-periodic operators.
//!
//! Sections over the periodic end become half-line block sequences, the deck
//! translation becomes the shift, and the Fourier–Laplace transform becomes
//! the generating function `u_hat(z) = sum u(n) z^n`. An operator is then a
//! block-Toeplitz operator with Laurent symbol `D(z)`, possibly modified on
//! a finite cap near the boundary, acting on sequences weighted by
//! `e^{delta n}`.
//!
//! The `d(z)` contribution of a zero of `det D` is its multiplicity as a
//! zero of the determinant. For families affine in `ln z` this coincides
//! with the Jordan-chain count of [`crate::family::jordan_chain_dim`].

mod flow;
mod operator;
mod sequence;
mod symbol;

pub use flow::{
    endpoint_indices, spectral_flow, track_spectral_curves, CrossingEvent, SpectralCurve,
    SymbolPath,
};
pub use operator::{
    annulus_contributions, fredholm_report, index, index_change, is_fredholm, symbol_index,
    truncation_kernels, truncation_snapshot, CapEntry, EndPeriodicOperator, FredholmReport,
    TruncationKernels, TruncationSnapshot,
};
pub use sequence::{fl_inverse, fl_transform, weighted_norm, SampledTransform, Sequence};
pub use symbol::{d_value, kernel_dim, symbol_zeros, DValue, LaurentSymbol};
