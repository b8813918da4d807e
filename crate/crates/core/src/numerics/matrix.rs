//! Dense complex matrices and rank decisions.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Raw dense complex matrix used throughout the crate internals.
pub type CMat = DMatrix<Complex64>;

/// A dense complex matrix with finite entries.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix(CMat);

impl ComplexMatrix {
    pub fn new(m: CMat) -> Result<Self> {
        if m.nrows() == 0 || m.ncols() == 0 {
            return Err(Error::Dimension("empty matrix".into()));
        }
        if let Some((idx, _)) = m
            .iter()
            .enumerate()
            .find(|(_, z)| !(z.re.is_finite() && z.im.is_finite()))
        {
            // nalgebra storage is column-major
            let (r, c) = (idx % m.nrows(), idx / m.nrows());
            return Err(Error::InvalidInput(format!(
                "non-finite matrix entry at ({r}, {c})"
            )));
        }
        Ok(Self(m))
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self(CMat::zeros(rows, cols))
    }

    pub fn identity(n: usize) -> Self {
        Self(CMat::identity(n, n))
    }

    /// Builds a matrix from row slices of complex entries.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Self::new(CMat::from_fn(nrows, ncols, |i, j| rows[i][j]))
    }

    /// Builds a matrix from real row slices.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let rows: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn diag(entries: &[Complex64]) -> Self {
        let n = entries.len();
        Self(CMat::from_fn(n, n, |i, j| {
            if i == j {
                entries[i]
            } else {
                Complex64::new(0.0, 0.0)
            }
        }))
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn as_matrix(&self) -> &CMat {
        &self.0
    }

    pub fn into_matrix(self) -> CMat {
        self.0
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.0[(i, j)]
    }

    /// Row-major copy of the entries.
    pub fn to_rows(&self) -> Vec<Vec<Complex64>> {
        (0..self.rows())
            .map(|i| (0..self.cols()).map(|j| self.0[(i, j)]).collect())
            .collect()
    }

    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        max_abs_diff(&self.0, &other.0)
    }
}

impl AsRef<CMat> for ComplexMatrix {
    fn as_ref(&self) -> &CMat {
        &self.0
    }
}

pub(crate) fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub(crate) fn is_finite_matrix(m: &CMat) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Singular values in descending order.
pub(crate) fn singular_values(m: &CMat) -> Vec<f64> {
    let mut s: Vec<f64> = m
        .clone()
        .svd(false, false)
        .singular_values
        .iter()
        .copied()
        .collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Number of singular values above `rel` times the largest one.
pub(crate) fn numerical_rank(m: &CMat, rel: f64) -> usize {
    let s = singular_values(m);
    match s.first() {
        Some(&smax) if smax > 0.0 => s.iter().filter(|&&x| x > rel * smax).count(),
        _ => 0,
    }
}

/// Like [`numerical_rank`], but singular values must also exceed `floor`.
pub(crate) fn numerical_rank_floored(m: &CMat, rel: f64, floor: f64) -> usize {
    let s = singular_values(m);
    let cut = s.first().map_or(0.0, |&smax| rel * smax).max(floor);
    s.iter().filter(|&&x| x > cut).count()
}

/// Smallest singular value divided by the largest; 0 for the zero matrix.
pub(crate) fn reciprocal_condition(m: &CMat) -> f64 {
    let s = singular_values(m);
    match (s.first(), s.last()) {
        (Some(&hi), Some(&lo)) if hi > 0.0 => lo / hi,
        _ => 0.0,
    }
}

/// Orthonormal basis (as columns) of the numerical null space: right singular
/// vectors whose singular value is at most `rel` times the largest one, or at
/// most `floor`.
pub(crate) fn null_space(m: &CMat, rel: f64, floor: f64) -> CMat {
    let ncols = m.ncols();
    // Pad to at least square so the thin SVD exposes every right singular vector.
    let padded = if m.nrows() < ncols {
        let mut p = CMat::zeros(ncols, ncols);
        p.view_mut((0, 0), (m.nrows(), ncols)).copy_from(m);
        p
    } else {
        m.clone()
    };
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let cols: Vec<_> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s <= (rel * smax).max(floor))
        .map(|(k, _)| v_t.row(k).adjoint())
        .collect();
    if cols.is_empty() {
        CMat::zeros(ncols, 0)
    } else {
        CMat::from_columns(&cols)
    }
}

/// Tolerances shared by every numerical decision in the crate.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ToleranceConfig {
    /// Relative singular-value cutoff for rank decisions.
    pub rank_threshold: f64,
    /// Minimum admissible distance from a contour or circle to a spectral point.
    pub zero_guard: f64,
    /// Target accuracy of contour quadrature.
    pub quadrature_tol: f64,
    /// Relative radius within which computed eigenvalues are merged into one
    /// multiple eigenvalue. Split Jordan blocks of size k scatter by roughly
    /// eps^(1/k), so this must sit well above that.
    pub cluster_tol: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            rank_threshold: 1e-9,
            zero_guard: 1e-3,
            quadrature_tol: 1e-10,
            cluster_tol: 1e-4,
        }
    }
}

impl ToleranceConfig {
    pub fn validate(&self) -> Result<()> {
        let all_positive = [
            self.rank_threshold,
            self.zero_guard,
            self.quadrature_tol,
            self.cluster_tol,
        ]
        .iter()
        .all(|x| x.is_finite() && *x > 0.0);
        if !all_positive || self.rank_threshold >= 1.0 {
            return Err(Error::InvalidInput(format!(
                "tolerances must be positive with rank_threshold < 1: {self:?}"
            )));
        }
        Ok(())
    }
}

/// Numerical rank: singular values above `rank_threshold` times the largest.
pub fn mat_rank(m: &ComplexMatrix, tol: &ToleranceConfig) -> usize {
    numerical_rank(m.as_matrix(), tol.rank_threshold)
}
