//! Matrix Laurent polynomials `D(z) = sum_k D_k z^k` and their zeros.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{
    numerical_rank_floored, poly_eigenvalues_raw, CMat, ComplexMatrix, PolyEigen, ToleranceConfig,
};

/// Coefficient blocks `D_k`, `k_min <= k <= k_max`, of a square matrix
/// Laurent polynomial whose determinant is not identically zero.
#[derive(Clone, Debug)]
pub struct LaurentSymbol {
    k_min: i64,
    blocks: Vec<CMat>,
    tol: ToleranceConfig,
    zeros: PolyEigen,
}

impl LaurentSymbol {
    pub fn new(k_min: i64, blocks: Vec<ComplexMatrix>) -> Result<Self> {
        Self::with_tolerance(k_min, blocks, ToleranceConfig::default())
    }

    pub fn with_tolerance(
        k_min: i64,
        blocks: Vec<ComplexMatrix>,
        tol: ToleranceConfig,
    ) -> Result<Self> {
        Self::from_raw(
            k_min,
            blocks.into_iter().map(ComplexMatrix::into_matrix).collect(),
            tol,
        )
    }

    pub(crate) fn from_raw(k_min: i64, blocks: Vec<CMat>, tol: ToleranceConfig) -> Result<Self> {
        tol.validate()?;
        let first = blocks
            .first()
            .ok_or_else(|| Error::Dimension("symbol needs at least one block".into()))?;
        let n = first.nrows();
        if n == 0 || blocks.iter().any(|b| b.nrows() != n || b.ncols() != n) {
            return Err(Error::Dimension(
                "symbol blocks must be square and of equal size".into(),
            ));
        }
        if blocks.iter().any(|b| !crate::numerics::is_finite_matrix(b)) {
            return Err(Error::InvalidInput("non-finite symbol coefficient".into()));
        }
        // z^{-k_min} D(z) is an ordinary matrix polynomial; its eigenvalues
        // are the zeros of det D away from the origin.
        let zeros = poly_eigenvalues_raw(&blocks, &tol)?;
        Ok(Self {
            k_min,
            blocks,
            tol,
            zeros,
        })
    }

    /// Scalar symbol from its coefficients, lowest power first.
    pub fn scalar(k_min: i64, coeffs: &[Complex64]) -> Result<Self> {
        let blocks = coeffs
            .iter()
            .map(|&c| CMat::from_element(1, 1, c))
            .collect();
        Self::from_raw(k_min, blocks, ToleranceConfig::default())
    }

    pub fn n(&self) -> usize {
        self.blocks[0].nrows()
    }

    pub fn k_min(&self) -> i64 {
        self.k_min
    }

    pub fn k_max(&self) -> i64 {
        self.k_min + self.blocks.len() as i64 - 1
    }

    pub fn tolerance(&self) -> &ToleranceConfig {
        &self.tol
    }

    /// `D_k`, or `None` outside the band.
    pub fn block(&self, k: i64) -> Option<&CMat> {
        if k < self.k_min || k > self.k_max() {
            None
        } else {
            self.blocks.get((k - self.k_min) as usize)
        }
    }

    pub fn blocks(&self) -> impl Iterator<Item = (i64, &CMat)> {
        self.blocks
            .iter()
            .enumerate()
            .map(move |(i, b)| (self.k_min + i as i64, b))
    }

    pub fn eval(&self, z: Complex64) -> ComplexMatrix {
        ComplexMatrix::new(self.eval_raw(z)).expect("finite coefficients at finite z")
    }

    pub(crate) fn eval_raw(&self, z: Complex64) -> CMat {
        let n = self.n();
        let mut acc = CMat::zeros(n, n);
        for b in self.blocks.iter().rev() {
            acc = acc * z + b;
        }
        if self.k_min != 0 {
            acc *= z.powi(self.k_min as i32);
        }
        acc
    }

    pub(crate) fn det(&self, z: Complex64) -> Complex64 {
        self.eval_raw(z).determinant()
    }

    /// The symbol of the conjugated operator `e^{delta i} L e^{-delta j}`,
    /// i.e. `z -> D(e^delta z)`.
    pub fn rescaled(&self, delta: f64) -> LaurentSymbol {
        let blocks = self
            .blocks()
            .map(|(k, b)| b * Complex64::new((delta * k as f64).exp(), 0.0))
            .collect();
        Self::from_raw(self.k_min, blocks, self.tol).expect("rescaling keeps the symbol regular")
    }

    /// Every nonzero zero of `det D` with its multiplicity, in deterministic
    /// order. Points within `cluster_tol` of the origin are dropped.
    pub fn all_zeros(&self) -> Vec<(Complex64, usize)> {
        self.zeros
            .finite
            .iter()
            .copied()
            .filter(|(z, _)| z.norm() > self.tol.cluster_tol)
            .collect()
    }

    pub(crate) fn smallest_singular_value(&self, z: Complex64) -> (f64, f64) {
        let s = crate::numerics::singular_values(&self.eval_raw(z));
        (*s.last().unwrap_or(&0.0), *s.first().unwrap_or(&0.0))
    }
}

/// Zeros of `det D` with `r_min < |z| < r_max`. `r_max` may be infinite.
/// Fails if a zero lies within `zero_guard` of either boundary circle.
pub fn symbol_zeros(
    sym: &LaurentSymbol,
    r_min: f64,
    r_max: f64,
) -> Result<Vec<(Complex64, usize)>> {
    if !(r_min >= 0.0 && r_max > r_min) || r_min.is_nan() {
        return Err(Error::InvalidInput(format!(
            "invalid annulus ({r_min}, {r_max})"
        )));
    }
    let guard = sym.tol.zero_guard;
    let mut out = Vec::new();
    for (z, m) in sym.all_zeros() {
        let r = z.norm();
        for bound in [r_min, r_max] {
            if bound > 0.0 && bound.is_finite() && (r - bound).abs() < guard {
                return Err(Error::BoundaryZero {
                    zero: z,
                    radius: bound,
                });
            }
        }
        if r > r_min && r < r_max {
            out.push((z, m));
        }
    }
    Ok(out)
}

/// Result of [`d_value`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct DValue {
    pub d: usize,
    /// False when `z0` is not a zero of `det D`; `d` is then 0.
    pub is_zero: bool,
}

/// Contribution of `z0` to the change of index: the multiplicity of `z0` as
/// a zero of `det D(z)`. A requested point is matched to a computed zero
/// within `zero_guard * max(1, |z0|)`.
pub fn d_value(sym: &LaurentSymbol, z0: Complex64) -> DValue {
    let reach = sym.tol.zero_guard * z0.norm().max(1.0);
    let nearest = sym
        .all_zeros()
        .into_iter()
        .map(|(z, m)| ((z - z0).norm(), m))
        .filter(|(dist, _)| *dist <= reach)
        .min_by(|a, b| a.0.total_cmp(&b.0));
    match nearest {
        Some((_, m)) => DValue {
            d: m,
            is_zero: true,
        },
        None => DValue {
            d: 0,
            is_zero: false,
        },
    }
}

/// Numerical dimension of `ker D(z0)`.
pub fn kernel_dim(sym: &LaurentSymbol, z0: Complex64) -> usize {
    let rel = sym.tol.rank_threshold.sqrt();
    let scale: f64 = sym
        .blocks()
        .map(|(k, b)| b.norm() * z0.norm().powi(k as i32))
        .sum();
    sym.n() - numerical_rank_floored(&sym.eval_raw(z0), rel, rel * scale)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn scalar_zero() {
        let s = LaurentSymbol::scalar(0, &[c(-0.5), c(1.0)]).unwrap();
        let z = symbol_zeros(&s, 0.1, 2.0).unwrap();
        assert_eq!(z.len(), 1);
        assert!((z[0].0 - c(0.5)).norm() < 1e-12);
        assert_eq!(z[0].1, 1);
    }

    #[test]
    fn block_diagonal_zeros() {
        let d0 = ComplexMatrix::diag(&[c(-0.5), c(-2.0)]);
        let d1 = ComplexMatrix::identity(2);
        let s = LaurentSymbol::new(0, vec![d0, d1]).unwrap();
        let z = symbol_zeros(&s, 0.1, 1.0).unwrap();
        assert_eq!(z.len(), 1);
        assert!((z[0].0 - c(0.5)).norm() < 1e-12);
    }

    #[test]
    fn double_zero() {
        let s = LaurentSymbol::scalar(0, &[c(0.25), c(-1.0), c(1.0)]).unwrap();
        let z = symbol_zeros(&s, 0.1, 1.0).unwrap();
        assert_eq!(z.len(), 1);
        assert_eq!(z[0].1, 2);
        assert_eq!(
            d_value(&s, c(0.5)),
            DValue {
                d: 2,
                is_zero: true
            }
        );
    }

    #[test]
    fn d_values() {
        let s = LaurentSymbol::scalar(0, &[c(-0.5), c(1.0)]).unwrap();
        assert_eq!(d_value(&s, c(0.5)).d, 1);
        assert_eq!(kernel_dim(&s, c(0.5)), 1);
        assert_eq!(kernel_dim(&s, c(0.7)), 0);
        assert_eq!(
            d_value(&s, c(0.7)),
            DValue {
                d: 0,
                is_zero: false
            }
        );
    }

    #[test]
    fn boundary_zero_rejected() {
        let s = LaurentSymbol::scalar(0, &[c(-0.5), c(1.0)]).unwrap();
        assert!(matches!(
            symbol_zeros(&s, 0.5, 2.0),
            Err(Error::BoundaryZero { .. })
        ));
    }

    #[test]
    fn negative_powers_and_origin() {
        // z^{-1} (z - 0.5)(z - 3): zeros 0.5 and 3, nothing at the origin.
        let s = LaurentSymbol::scalar(-1, &[c(1.5), c(-3.5), c(1.0)]).unwrap();
        let z = symbol_zeros(&s, 0.0, f64::INFINITY).unwrap();
        assert_eq!(z.len(), 2);
        let v = s.eval_raw(c(2.0))[(0, 0)];
        assert!((v - c(-1.5 / 2.0)).norm() < 1e-12);
        // z (z - 0.5) has a zero at the origin that is not reported.
        let s = LaurentSymbol::scalar(0, &[c(0.0), c(-0.5), c(1.0)]).unwrap();
        assert_eq!(symbol_zeros(&s, 0.0, 10.0).unwrap().len(), 1);
    }

    #[test]
    fn identically_singular_rejected() {
        let z = ComplexMatrix::zeros(2, 2);
        let one = ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, 0.0]]).unwrap();
        assert!(LaurentSymbol::new(0, vec![z, one]).is_err());
    }

    #[test]
    fn rescaling_moves_zeros() {
        let s = LaurentSymbol::scalar(0, &[c(-0.5), c(1.0)]).unwrap();
        let r = s.rescaled(0.5f64.ln());
        let z = r.all_zeros();
        assert!((z[0].0 - c(1.0)).norm() < 1e-12);
    }
}
