//! Half-line block-Toeplitz operators `(Lu)(i) = sum_k D_k u(i - k)`,
//! `i >= 0`, on the weighted space with norm `sum e^{2 delta n} |u(n)|^2`,
//! optionally modified on finitely many entries near the boundary.
//!
//! Conjugating by the weight turns `L` into the Toeplitz operator of the
//! rescaled symbol `D(e^delta z)`. It is Fredholm exactly when `det D` has
//! no zeros on `|z| = e^delta`, and then
//!
//! ```text
//! index = -winding(det D, |z| = e^delta).
//! ```
//!
//! The sign is the one reproduced by [`truncation_kernels`]: for
//! `D(z) = z - 0.5` on the unweighted space the operator is injective with
//! one-dimensional cokernel.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::symbol::{d_value, symbol_zeros, LaurentSymbol};
use crate::error::{Error, Result};
use crate::numerics::{is_finite_matrix, CMat, ComplexMatrix};

/// Replacement for the block at sites `(row, col)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CapEntry {
    pub row: usize,
    pub col: usize,
    pub block: CMat,
}

#[derive(Clone, Debug)]
pub struct EndPeriodicOperator {
    symbol: LaurentSymbol,
    delta: f64,
    cap: Vec<CapEntry>,
}

impl EndPeriodicOperator {
    pub fn new(symbol: LaurentSymbol, delta: f64) -> Result<Self> {
        Self::with_cap(symbol, delta, Vec::new())
    }

    pub fn with_cap(symbol: LaurentSymbol, delta: f64, cap: Vec<CapEntry>) -> Result<Self> {
        if !delta.is_finite() {
            return Err(Error::InvalidInput(format!(
                "weight must be finite, got {delta}"
            )));
        }
        let n = symbol.n();
        for e in &cap {
            if e.block.nrows() != n || e.block.ncols() != n {
                return Err(Error::Dimension(format!(
                    "cap block at ({}, {}) is {}x{}, symbol blocks are {n}x{n}",
                    e.row,
                    e.col,
                    e.block.nrows(),
                    e.block.ncols()
                )));
            }
            if !is_finite_matrix(&e.block) {
                return Err(Error::InvalidInput("non-finite cap block".into()));
            }
        }
        Ok(Self { symbol, delta, cap })
    }

    pub fn symbol(&self) -> &LaurentSymbol {
        &self.symbol
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn cap(&self) -> &[CapEntry] {
        &self.cap
    }

    /// One past the largest site touched by the cap.
    pub fn cap_size(&self) -> usize {
        self.cap
            .iter()
            .map(|e| e.row.max(e.col) + 1)
            .max()
            .unwrap_or(0)
    }

    /// Dense matrix of the weight-conjugated operator on sites `0..sites`.
    pub fn truncation(&self, sites: usize) -> ComplexMatrix {
        ComplexMatrix::new(self.truncation_raw(sites)).expect("finite entries")
    }

    fn truncation_raw(&self, sites: usize) -> CMat {
        let n = self.symbol.n();
        let scaled = self.symbol.rescaled(self.delta);
        let mut m = CMat::zeros(sites * n, sites * n);
        for i in 0..sites as i64 {
            for (k, b) in scaled.blocks() {
                let j = i - k;
                if j >= 0 && j < sites as i64 {
                    m.view_mut((i as usize * n, j as usize * n), (n, n))
                        .copy_from(b);
                }
            }
        }
        for e in &self.cap {
            if e.row < sites && e.col < sites {
                let w = (self.delta * (e.row as f64 - e.col as f64)).exp();
                m.view_mut((e.row * n, e.col * n), (n, n))
                    .copy_from(&(&e.block * Complex64::new(w, 0.0)));
            }
        }
        m
    }
}

/// Outcome of the Fredholm test on `|z| = e^delta`.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct FredholmReport {
    pub fredholm: bool,
    /// Smallest singular value of `D(z)` found on the circle.
    pub min_singular: f64,
    /// Largest singular value of `D(z)` found on the circle.
    pub scale: f64,
    /// Circle point where `min_singular` was attained.
    pub worst: Complex64,
}

const CIRCLE_SAMPLES: usize = 64;

/// Samples `D(z)` on `|z| = e^delta` at equispaced nodes and at the radial
/// projections of all zeros of `det D`.
pub fn fredholm_report(sym: &LaurentSymbol, delta: f64) -> FredholmReport {
    let r = delta.exp();
    let mut points: Vec<Complex64> = (0..CIRCLE_SAMPLES)
        .map(|j| Complex64::from_polar(r, 2.0 * PI * j as f64 / CIRCLE_SAMPLES as f64))
        .collect();
    points.extend(sym.all_zeros().iter().map(|(z, _)| z * (r / z.norm())));
    let mut min_singular = f64::INFINITY;
    let mut scale: f64 = 0.0;
    let mut worst = points[0];
    for z in points {
        let (lo, hi) = sym.smallest_singular_value(z);
        scale = scale.max(hi);
        if lo < min_singular {
            min_singular = lo;
            worst = z;
        }
    }
    FredholmReport {
        fredholm: min_singular > sym.tolerance().rank_threshold * scale,
        min_singular,
        scale,
        worst,
    }
}

/// The cap is irrelevant: Fredholmness depends only on the symbol.
pub fn is_fredholm(op: &EndPeriodicOperator) -> bool {
    fredholm_report(&op.symbol, op.delta).fredholm
}

fn require_fredholm(sym: &LaurentSymbol, delta: f64) -> Result<()> {
    let rep = fredholm_report(sym, delta);
    if rep.fredholm {
        Ok(())
    } else {
        Err(Error::NotFredholm {
            delta,
            zero: rep.worst,
        })
    }
}

/// Fredholm index on the weighted space, `-winding(det D, |z| = e^delta)`.
/// Finite caps do not change it.
pub fn index(op: &EndPeriodicOperator) -> Result<i64> {
    symbol_index(&op.symbol, op.delta)
}

pub fn symbol_index(sym: &LaurentSymbol, delta: f64) -> Result<i64> {
    require_fredholm(sym, delta)?;
    let w = crate::numerics::winding_number(|z| sym.det(z), Complex64::new(0.0, 0.0), delta.exp())?;
    Ok(-w)
}

/// Kernel and cokernel dimensions read off dense truncations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct TruncationKernels {
    pub ker_dim: usize,
    pub coker_dim: usize,
    /// Smallest tried site count `N` whose result agreed with `2N`.
    pub sites: usize,
}

impl TruncationKernels {
    pub fn index(&self) -> i64 {
        self.ker_dim as i64 - self.coker_dim as i64
    }
}

/// Result of a single truncation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TruncationSnapshot {
    pub ker_dim: usize,
    pub coker_dim: usize,
    /// False if a singular value or a localization weight fell in the
    /// ambiguous band, so the counts at this size are not trusted.
    pub clean: bool,
}

/// Relative size below which a singular value of the truncation counts as
/// an approximate null direction.
const SMALL_SV: f64 = 1e-8;
/// Singular values between `SMALL_SV` and this are ambiguous.
const CLEAR_SV: f64 = 1e-5;

/// Dense SVD of the `sites`-site truncation. Small singular directions
/// concentrated on the first half of the sites are kernel (right vectors)
/// or cokernel (left vectors) directions of the half-line operator; those
/// concentrated near the cut-off are truncation artifacts.
pub fn truncation_snapshot(op: &EndPeriodicOperator, sites: usize) -> TruncationSnapshot {
    let n = op.symbol.n();
    let m = op.truncation_raw(sites);
    let dim = m.nrows();
    let Ok(svd) = faer::Mat::from_fn(dim, dim, |i, j| m[(i, j)]).svd() else {
        return TruncationSnapshot {
            ker_dim: 0,
            coker_dim: 0,
            clean: false,
        };
    };
    let s: Vec<f64> = (0..dim).map(|k| svd.S()[k].re).collect();
    let smax = s.iter().copied().fold(0.0, f64::max);
    let mut clean = true;
    let small: Vec<usize> = (0..s.len())
        .filter(|&k| {
            let rel = if smax > 0.0 { s[k] / smax } else { 0.0 };
            if (SMALL_SV..CLEAR_SV).contains(&rel) {
                clean = false;
            }
            rel < SMALL_SV
        })
        .collect();
    let head = (sites / 2) * n;
    let mut count_head = |basis: faer::MatRef<'_, Complex64>| -> usize {
        if small.is_empty() {
            return 0;
        }
        let restricted = DMatrix::from_fn(head, small.len(), |i, c| basis[(i, small[c])]);
        let w = restricted.svd(false, false).singular_values;
        w.iter()
            .filter(|&&x| {
                if x > 0.1 && x < 0.9 {
                    clean = false;
                }
                x >= 0.5
            })
            .count()
    };
    let ker_dim = count_head(svd.V());
    let coker_dim = count_head(svd.U());
    TruncationSnapshot {
        ker_dim,
        coker_dim,
        clean,
    }
}

/// Kernel and cokernel dimensions of the half-line operator from dense
/// weight-conjugated truncations at `N = n_max / 4, n_max / 2, n_max`
/// (raised to a minimum fixed by the band and the cap). The first clean
/// `N` whose counts agree with those at `2N` is reported.
pub fn truncation_kernels(op: &EndPeriodicOperator, n_max: usize) -> Result<TruncationKernels> {
    require_fredholm(&op.symbol, op.delta)?;
    let band = (op.symbol.k_max() - op.symbol.k_min()).unsigned_abs() as usize;
    let floor = 2 * (op.cap_size() + band) + 8;
    let mut sites = (n_max / 4).max(floor);
    if 2 * sites > n_max {
        return Err(Error::InvalidInput(format!(
            "n_max = {n_max} too small; need at least {}",
            2 * floor
        )));
    }
    let mut prev = truncation_snapshot(op, sites);
    while 2 * sites <= n_max {
        let next = truncation_snapshot(op, 2 * sites);
        if prev.clean
            && next.clean
            && (prev.ker_dim, prev.coker_dim) == (next.ker_dim, next.coker_dim)
        {
            return Ok(TruncationKernels {
                ker_dim: prev.ker_dim,
                coker_dim: prev.coker_dim,
                sites,
            });
        }
        prev = next;
        sites *= 2;
    }
    Err(Error::Unstabilized { n_max })
}

/// `index(delta) - index(delta')` for `delta <= delta'`, as the sum of
/// `d(z)` over zeros of `det D` in `e^delta < |z| < e^delta'`.
pub fn index_change(sym: &LaurentSymbol, delta: f64, delta2: f64) -> Result<i64> {
    Ok(annulus_contributions(sym, delta, delta2)?
        .iter()
        .map(|(_, d)| *d as i64)
        .sum())
}

/// The zeros in the annulus with their `d` values.
pub fn annulus_contributions(
    sym: &LaurentSymbol,
    delta: f64,
    delta2: f64,
) -> Result<Vec<(Complex64, usize)>> {
    if !(delta <= delta2) {
        return Err(Error::InvalidInput(format!(
            "need delta <= delta', got {delta} > {delta2}"
        )));
    }
    require_fredholm(sym, delta)?;
    require_fredholm(sym, delta2)?;
    if delta == delta2 {
        return Ok(Vec::new());
    }
    let zeros = symbol_zeros(sym, delta.exp(), delta2.exp())?;
    Ok(zeros
        .into_iter()
        .map(|(z, _)| (z, d_value(sym, z).d))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn z_minus(a: f64) -> LaurentSymbol {
        LaurentSymbol::scalar(0, &[c(-a), c(1.0)]).unwrap()
    }

    #[test]
    fn fredholm_examples() {
        assert!(is_fredholm(
            &EndPeriodicOperator::new(z_minus(0.5), 0.0).unwrap()
        ));
        assert!(!is_fredholm(
            &EndPeriodicOperator::new(z_minus(0.5), 0.5f64.ln()).unwrap()
        ));
        let d0 = ComplexMatrix::diag(&[c(-0.5), c(-2.0)]);
        let s = LaurentSymbol::new(0, vec![d0, ComplexMatrix::identity(2)]).unwrap();
        assert!(is_fredholm(&EndPeriodicOperator::new(s, 0.0).unwrap()));
    }

    #[test]
    fn index_examples() {
        let op = EndPeriodicOperator::new(z_minus(0.5), 0.0).unwrap();
        assert_eq!(index(&op).unwrap(), -1);
        let op = EndPeriodicOperator::new(z_minus(0.5), 0.25f64.ln()).unwrap();
        assert_eq!(index(&op).unwrap(), 0);
        let k = LaurentSymbol::scalar(0, &[c(3.0)]).unwrap();
        assert_eq!(
            index(&EndPeriodicOperator::new(k, 0.4).unwrap()).unwrap(),
            0
        );
        let op = EndPeriodicOperator::new(z_minus(0.5), 0.5f64.ln()).unwrap();
        assert!(matches!(index(&op), Err(Error::NotFredholm { .. })));
    }

    #[test]
    fn pure_shifts() {
        // u(i - 1): injective, cokernel spanned by the first site.
        let s = LaurentSymbol::scalar(1, &[c(1.0)]).unwrap();
        let op = EndPeriodicOperator::new(s, 0.0).unwrap();
        assert_eq!(index(&op).unwrap(), -1);
        let t = truncation_kernels(&op, 200).unwrap();
        assert_eq!((t.ker_dim, t.coker_dim), (0, 1));
        // u(i + 1): surjective, kernel spanned by the first site.
        let s = LaurentSymbol::scalar(-1, &[c(1.0)]).unwrap();
        let op = EndPeriodicOperator::new(s, 0.0).unwrap();
        assert_eq!(index(&op).unwrap(), 1);
        let t = truncation_kernels(&op, 200).unwrap();
        assert_eq!((t.ker_dim, t.coker_dim), (1, 0));
    }

    #[test]
    fn truncation_examples() {
        let op = EndPeriodicOperator::new(z_minus(0.5), 0.0).unwrap();
        let t = truncation_kernels(&op, 200).unwrap();
        assert_eq!((t.ker_dim, t.coker_dim), (0, 1));
        let op = EndPeriodicOperator::new(z_minus(0.5), 0.25f64.ln()).unwrap();
        let t = truncation_kernels(&op, 200).unwrap();
        assert_eq!((t.ker_dim, t.coker_dim), (0, 0));
        let id = LaurentSymbol::new(0, vec![ComplexMatrix::identity(2)]).unwrap();
        let t = truncation_kernels(&EndPeriodicOperator::new(id, 0.0).unwrap(), 200).unwrap();
        assert_eq!((t.ker_dim, t.coker_dim), (0, 0));
    }

    #[test]
    fn cap_keeps_index() {
        let cap = vec![CapEntry {
            row: 0,
            col: 0,
            block: CMat::from_element(1, 1, c(0.0)),
        }];
        let op = EndPeriodicOperator::with_cap(z_minus(0.5), 0.0, cap).unwrap();
        assert_eq!(index(&op).unwrap(), -1);
        let t = truncation_kernels(&op, 200).unwrap();
        assert_eq!(t.index(), -1);
    }

    #[test]
    fn index_change_examples() {
        let s = z_minus(0.5);
        assert_eq!(index_change(&s, 0.25f64.ln(), 0.0).unwrap(), 1);
        assert_eq!(index_change(&s, 1.0, 2.0).unwrap(), 0);
        let sq = LaurentSymbol::scalar(0, &[c(0.25), c(-1.0), c(1.0)]).unwrap();
        assert_eq!(index_change(&sq, 0.25f64.ln(), 0.0).unwrap(), 2);
        assert!(index_change(&s, 0.0, -1.0).is_err());
        assert!(index_change(&s, 0.5f64.ln(), 0.0).is_err());
    }
}
