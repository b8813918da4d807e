//! Affine holomorphic families `D(mu) = T + mu A` in finite dimension.
//!
//! Sign convention: the chain system is written with `V = -A`, so that
//! `D(mu_j) b_{-m} = 0` and `D(mu_j) b_{-l} = V b_{-l-1}` for `1 <= l < m`.
//! The dimension of the solution space does not depend on the sign of `V`
//! (rescale `b_{-l}` by `(-1)^l`); the stored chains follow this convention.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{
    contour_integrate_converged, null_space, numerical_rank_floored, poly_eigenvalues_raw, CMat,
    CircleContour, ComplexMatrix, PolyEigen, ToleranceConfig,
};

const CONTOUR_NODES: usize = 128;
const MAX_CONTOUR_NODES: usize = 2048;
const MAX_CONTOUR_RADIUS: f64 = 1.0;

/// The family `mu -> T + mu A`; `det(T + mu A)` is not identically zero.
#[derive(Clone, Debug)]
pub struct AffineFamily {
    t: CMat,
    a: CMat,
    tol: ToleranceConfig,
    eig: PolyEigen,
}

/// A zero of `det D(mu)` together with its multiplicity data.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectralPoint {
    pub mu: Complex64,
    pub det_multiplicity: usize,
    pub kernel_dim: usize,
    /// Dimension of the solution space of the chain system.
    pub d_value: usize,
    /// Rank of the residue projection.
    pub proj_rank: usize,
    /// Order of the pole of the resolvent.
    pub pole_order: usize,
}

/// Principal part `A_{-m}, ..., A_{-1}` of the resolvent at `center`.
#[derive(Clone, Debug)]
pub struct LaurentData {
    pub center: Complex64,
    pub pole_order: usize,
    /// `coefficients[k - 1]` is `A_{-k}`.
    pub coefficients: Vec<ComplexMatrix>,
    moment_scale: f64,
}

impl LaurentData {
    /// `A_{-k}` for `1 <= k <= pole_order`.
    pub fn coefficient(&self, k: usize) -> Option<&ComplexMatrix> {
        k.checked_sub(1).and_then(|i| self.coefficients.get(i))
    }

    /// Numerical rank of `A_{-1}`, the residue projection.
    pub fn residue_rank(&self, rel: f64) -> usize {
        self.coefficient(1)
            .map_or(0, |p| residue_rank(p.as_matrix(), rel, self.moment_scale))
    }

    /// Largest entry of `D(mu_j) A_{-l} - V A_{-l-1}` over the chain system,
    /// with `A_{-m-1} = 0`.
    pub fn chain_residual(&self, fam: &AffineFamily) -> f64 {
        let d = fam.eval_raw(self.center);
        let m = self.pole_order;
        (1..=m)
            .map(|l| {
                let lhs = &d * self.coefficients[l - 1].as_matrix();
                let rhs = if l < m {
                    -(&fam.a * self.coefficients[l].as_matrix())
                } else {
                    CMat::zeros(fam.n(), fam.n())
                };
                (lhs - rhs).camax()
            })
            .fold(0.0, f64::max)
    }
}

/// Basis of solutions `(b_{-1}, ..., b_{-m})` of the chain system.
#[derive(Clone, Debug)]
pub struct JordanChainSet {
    /// Each chain lists `b_{-1}, ..., b_{-m}`.
    pub chains: Vec<Vec<Vec<Complex64>>>,
    pub solution_space_dim: usize,
}

impl JordanChainSet {
    /// Largest residual of the chain recurrences over all stored chains.
    pub fn max_residual(&self, fam: &AffineFamily, mu: Complex64) -> f64 {
        let d = fam.eval_raw(mu);
        let v = -fam.a.clone();
        let to_vec = |x: &Vec<Complex64>| nalgebra::DVector::from_column_slice(x);
        let mut worst: f64 = 0.0;
        for chain in &self.chains {
            let m = chain.len();
            for l in 0..m {
                let lhs = &d * to_vec(&chain[l]);
                let rhs = if l + 1 < m {
                    &v * to_vec(&chain[l + 1])
                } else {
                    nalgebra::DVector::zeros(fam.n())
                };
                worst = worst.max((lhs - rhs).camax());
            }
        }
        worst
    }
}

impl AffineFamily {
    pub fn new(t: ComplexMatrix, a: ComplexMatrix) -> Result<Self> {
        Self::with_tolerance(t, a, ToleranceConfig::default())
    }

    pub fn with_tolerance(
        t: ComplexMatrix,
        a: ComplexMatrix,
        tol: ToleranceConfig,
    ) -> Result<Self> {
        tol.validate()?;
        if !t.is_square() || t.rows() != a.rows() || t.cols() != a.cols() {
            return Err(Error::Dimension(format!(
                "T is {}x{}, A is {}x{}; need equal square matrices",
                t.rows(),
                t.cols(),
                a.rows(),
                a.cols()
            )));
        }
        let t = t.into_matrix();
        let a = a.into_matrix();
        let eig = poly_eigenvalues_raw(&[t.clone(), a.clone()], &tol)?;
        Ok(Self { t, a, tol, eig })
    }

    pub fn n(&self) -> usize {
        self.t.nrows()
    }

    pub fn t(&self) -> ComplexMatrix {
        ComplexMatrix::new(self.t.clone()).expect("validated")
    }

    pub fn a(&self) -> ComplexMatrix {
        ComplexMatrix::new(self.a.clone()).expect("validated")
    }

    pub fn tolerance(&self) -> &ToleranceConfig {
        &self.tol
    }

    /// `T + mu A`.
    pub fn eval(&self, mu: Complex64) -> ComplexMatrix {
        ComplexMatrix::new(self.eval_raw(mu)).expect("finite")
    }

    pub(crate) fn eval_raw(&self, mu: Complex64) -> CMat {
        &self.t + &self.a * mu
    }

    /// `|T| + |mu| |A|` (Frobenius norms): the size against which a singular
    /// value of `T + mu A` counts as zero.
    pub(crate) fn scale_at(&self, mu: Complex64) -> f64 {
        self.t.norm() + mu.norm() * self.a.norm()
    }

    /// Zeros of `det(T + mu A)` with multiplicities, before any further analysis.
    pub fn eigen_data(&self) -> &PolyEigen {
        &self.eig
    }

    fn nearest_spectral(&self, mu: Complex64) -> Option<(Complex64, f64)> {
        self.eig
            .finite
            .iter()
            .map(|(p, _)| (*p, (*p - mu).norm()))
            .min_by(|x, y| x.1.total_cmp(&y.1))
    }

    /// Default loop around `mu`: half the distance to the nearest spectral
    /// point other than (a point within the guard of) `mu`, floored at the
    /// guard and capped at 1.
    pub fn default_contour(&self, mu: Complex64) -> CircleContour {
        let guard = self.tol.zero_guard;
        let other = self
            .eig
            .finite
            .iter()
            .map(|(p, _)| (*p - mu).norm())
            .filter(|&d| d > guard)
            .fold(f64::INFINITY, f64::min);
        let radius = (0.5 * other).clamp(guard, MAX_CONTOUR_RADIUS);
        CircleContour::new(mu, radius, CONTOUR_NODES).expect("valid contour")
    }

    fn check_contour(&self, contour: &CircleContour) -> Result<()> {
        for (p, _) in &self.eig.finite {
            let gap = ((*p - contour.center()).norm() - contour.radius()).abs();
            if gap < self.tol.zero_guard {
                return Err(Error::ContourTooClose {
                    center: contour.center(),
                    radius: contour.radius(),
                    point: *p,
                });
            }
        }
        Ok(())
    }

    fn raw_inverse(&self, mu: Complex64) -> CMat {
        self.eval_raw(mu).try_inverse().unwrap_or_else(|| {
            CMat::from_element(self.n(), self.n(), Complex64::new(f64::NAN, 0.0))
        })
    }

    /// `(1/2 pi i) \oint (mu - c)^(k-1) R_mu d mu` for `k = 1..=kmax`, plus the
    /// largest resolvent norm seen on the contour.
    fn principal_moments(&self, contour: &CircleContour, kmax: usize) -> Result<(Vec<CMat>, f64)> {
        self.check_contour(contour)?;
        let c = contour.center();
        let mut moments = Vec::with_capacity(kmax);
        for k in 1..=kmax {
            let m = contour_integrate_converged(
                |mu| self.raw_inverse(mu) * (mu - c).powu(k as u32 - 1),
                contour,
                self.tol.quadrature_tol,
                MAX_CONTOUR_NODES,
            )?;
            moments.push(m.into_matrix());
        }
        let scale = contour
            .nodes()
            .map(|mu| self.raw_inverse(mu).norm())
            .fold(0.0, f64::max);
        Ok((moments, scale))
    }
}

/// All zeros of `det(T + mu A)` with multiplicity data.
pub fn spectral_set(fam: &AffineFamily) -> Result<Vec<SpectralPoint>> {
    let n = fam.n();
    fam.eig
        .finite
        .iter()
        .map(|&(mu, det_multiplicity)| {
            let kernel_dim = n - numerical_rank_floored(
                &fam.eval_raw(mu),
                fam.tol.rank_threshold,
                fam.tol.rank_threshold * fam.scale_at(mu),
            );
            let laurent = laurent_coefficients(fam, mu, None)?;
            let (d_value, _) = chains_for_order(fam, mu, laurent.pole_order);
            let proj_rank = laurent.residue_rank(fam.tol.rank_threshold);
            Ok(SpectralPoint {
                mu,
                det_multiplicity,
                kernel_dim,
                d_value,
                proj_rank,
                pole_order: laurent.pole_order,
            })
        })
        .collect()
}

/// `R_mu = (T + mu A)^{-1}`, refused within the guard of the spectral set.
pub fn resolvent(fam: &AffineFamily, mu: Complex64) -> Result<ComplexMatrix> {
    if let Some((point, distance)) = fam.nearest_spectral(mu) {
        if distance <= fam.tol.zero_guard {
            return Err(Error::NearSingular {
                mu,
                point,
                distance,
            });
        }
    }
    let inv = fam.eval_raw(mu).try_inverse().ok_or(Error::NearSingular {
        mu,
        point: mu,
        distance: 0.0,
    })?;
    ComplexMatrix::new(inv)
}

/// `K = A (T + mu0 A)^{-1}`; nonzero eigenvalues `zeta` of `K` correspond to
/// spectral points via `mu = mu0 - 1/zeta`.
pub fn compact_reduction(fam: &AffineFamily, mu0: Complex64) -> Result<ComplexMatrix> {
    if let Some((point, distance)) = fam.nearest_spectral(mu0) {
        if distance <= fam.tol.zero_guard {
            return Err(Error::SpectralBasePoint { mu: point });
        }
    }
    let r = resolvent(fam, mu0)?;
    ComplexMatrix::new(&fam.a * r.as_matrix())
}

/// Residue projection `P = (1/2 pi i) \oint R_mu d mu` on the default loop
/// around `mu`, with its numerical rank.
pub fn residue_projection(fam: &AffineFamily, mu: Complex64) -> Result<(ComplexMatrix, usize)> {
    residue_projection_on(fam, &fam.default_contour(mu))
}

/// Residue projection over an explicit loop.
pub fn residue_projection_on(
    fam: &AffineFamily,
    contour: &CircleContour,
) -> Result<(ComplexMatrix, usize)> {
    let (moments, scale) = fam.principal_moments(contour, 1)?;
    let p = moments.into_iter().next().expect("one moment");
    let rank = residue_rank(&p, fam.tol.rank_threshold, contour.radius() * scale);
    Ok((ComplexMatrix::new(p)?, rank))
}

/// Rank of a contour moment; quadrature noise is measured against the size
/// the moment would have if the loop enclosed a pole (`radius * max |R|`).
fn residue_rank(p: &CMat, rel: f64, moment_scale: f64) -> usize {
    numerical_rank_floored(p, rel, rel * moment_scale)
}

/// Principal part of the Laurent series of `R_mu` at `mu` on the default loop.
///
/// The detected pole order is the largest `k <= n` whose coefficient
/// contributes more than `rank_threshold` of the resolvent scale on the loop.
/// With `order = Some(m)` the first `m` coefficients are returned, and `m`
/// above the detected order is an error.
pub fn laurent_coefficients(
    fam: &AffineFamily,
    mu: Complex64,
    order: Option<usize>,
) -> Result<LaurentData> {
    let contour = fam.default_contour(mu);
    let n = fam.n();
    let (moments, scale) = fam.principal_moments(&contour, n)?;
    let r = contour.radius();
    let detected = (1..=n)
        .rev()
        .find(|&k| {
            let contribution = moments[k - 1].norm() / r.powi(k as i32);
            contribution > fam.tol.rank_threshold * scale
        })
        .unwrap_or(0);
    let m = match order {
        Some(m) if m > detected => {
            return Err(Error::PoleOrderExceeded {
                requested: m,
                detected,
            })
        }
        Some(m) => m,
        None => detected,
    };
    let coefficients = moments
        .into_iter()
        .take(m)
        .map(ComplexMatrix::new)
        .collect::<Result<Vec<_>>>()?;
    Ok(LaurentData {
        center: mu,
        pole_order: m,
        coefficients,
        moment_scale: r * scale,
    })
}

/// Dimension of the solution space of the chain system at `mu`, whose length
/// is the pole order of the resolvent there, with a basis of chains.
pub fn jordan_chain_dim(fam: &AffineFamily, mu: Complex64) -> Result<(usize, JordanChainSet)> {
    let m = laurent_coefficients(fam, mu, None)?.pole_order;
    Ok(chains_for_order(fam, mu, m))
}

fn chains_for_order(fam: &AffineFamily, mu: Complex64, m: usize) -> (usize, JordanChainSet) {
    let n = fam.n();
    if m == 0 {
        return (
            0,
            JordanChainSet {
                chains: Vec::new(),
                solution_space_dim: 0,
            },
        );
    }
    // Unknown vector is (b_{-1}, ..., b_{-m}); block row l encodes
    // D b_{-l} + A b_{-l-1} = 0, the last one D b_{-m} = 0.
    let d = fam.eval_raw(mu);
    let mut system = CMat::zeros(m * n, m * n);
    for l in 0..m {
        system.view_mut((l * n, l * n), (n, n)).copy_from(&d);
        if l + 1 < m {
            system
                .view_mut((l * n, (l + 1) * n), (n, n))
                .copy_from(&fam.a);
        }
    }
    let basis = null_space(
        &system,
        fam.tol.rank_threshold,
        fam.tol.rank_threshold * fam.scale_at(mu),
    );
    let chains: Vec<Vec<Vec<Complex64>>> = basis
        .column_iter()
        .map(|col| {
            (0..m)
                .map(|l| col.rows(l * n, n).iter().copied().collect())
                .collect()
        })
        .collect();
    let dim = chains.len();
    (
        dim,
        JordanChainSet {
            chains,
            solution_space_dim: dim,
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn m(rows: &[&[f64]]) -> ComplexMatrix {
        ComplexMatrix::from_real_rows(rows).unwrap()
    }

    fn diag_family() -> AffineFamily {
        AffineFamily::new(m(&[&[1.0, 0.0], &[0.0, -1.0]]), ComplexMatrix::identity(2)).unwrap()
    }

    fn nilpotent_family() -> AffineFamily {
        AffineFamily::new(m(&[&[0.0, 1.0], &[0.0, 0.0]]), ComplexMatrix::identity(2)).unwrap()
    }

    #[test]
    fn spectral_set_of_diagonal_family() {
        let pts = spectral_set(&diag_family()).unwrap();
        assert_eq!(pts.len(), 2);
        assert!((pts[0].mu - c(-1.0)).norm() < 1e-12);
        assert!((pts[1].mu - c(1.0)).norm() < 1e-12);
        for p in &pts {
            assert_eq!(
                (p.det_multiplicity, p.kernel_dim, p.d_value, p.proj_rank),
                (1, 1, 1, 1)
            );
        }
    }

    #[test]
    fn constant_invertible_family_has_empty_spectrum() {
        let fam =
            AffineFamily::new(ComplexMatrix::identity(2), ComplexMatrix::zeros(2, 2)).unwrap();
        assert!(spectral_set(&fam).unwrap().is_empty());
    }

    #[test]
    fn nilpotent_family_double_point() {
        let pts = spectral_set(&nilpotent_family()).unwrap();
        assert_eq!(pts.len(), 1);
        let p = &pts[0];
        assert!(p.mu.norm() < 1e-10);
        assert_eq!(p.det_multiplicity, 2);
        assert_eq!(p.kernel_dim, 1);
        assert_eq!(p.d_value, 2);
        assert_eq!(p.proj_rank, 2);
        assert_eq!(p.pole_order, 2);
    }

    #[test]
    fn degenerate_pencil_rejected() {
        let z = m(&[&[1.0, 0.0], &[0.0, 0.0]]);
        assert!(matches!(
            AffineFamily::new(z.clone(), z),
            Err(Error::SingularPencil)
        ));
    }

    #[test]
    fn resolvent_examples() {
        let r = resolvent(&diag_family(), c(0.0)).unwrap();
        assert!(r.max_abs_diff(&m(&[&[1.0, 0.0], &[0.0, -1.0]])) < 1e-14);

        let r = resolvent(&nilpotent_family(), c(2.0)).unwrap();
        let expected = m(&[&[0.5, -0.25], &[0.0, 0.5]]);
        assert!(r.max_abs_diff(&expected) < 1e-14);

        let err = resolvent(&diag_family(), c(1.0 + 1e-4)).unwrap_err();
        assert!(matches!(err, Error::NearSingular { .. }));
    }

    #[test]
    fn compact_reduction_example() {
        let fam = AffineFamily::new(
            m(&[&[1.0, 0.0], &[0.0, -1.0]]),
            m(&[&[-1.0, 0.0], &[0.0, -1.0]]),
        )
        .unwrap();
        let k = compact_reduction(&fam, c(0.0)).unwrap();
        assert!(k.max_abs_diff(&m(&[&[-1.0, 0.0], &[0.0, 1.0]])) < 1e-14);
        assert!(matches!(
            compact_reduction(&fam, c(1.0)),
            Err(Error::SpectralBasePoint { .. })
        ));

        let zero_a =
            AffineFamily::new(ComplexMatrix::identity(2), ComplexMatrix::zeros(2, 2)).unwrap();
        assert_eq!(compact_reduction(&zero_a, c(0.3)).unwrap().norm(), 0.0);
    }

    #[test]
    fn residue_projection_examples() {
        let (p, rank) = residue_projection(&diag_family(), c(1.0)).unwrap();
        assert_eq!(rank, 1);
        assert!(p.max_abs_diff(&m(&[&[0.0, 0.0], &[0.0, 1.0]])) < 1e-10);

        let (p, rank) = residue_projection(&nilpotent_family(), c(0.0)).unwrap();
        assert_eq!(rank, 2);
        assert!(p.max_abs_diff(&ComplexMatrix::identity(2)) < 1e-10);

        let empty = CircleContour::new(c(5.0), 0.5, 64).unwrap();
        let (p, rank) = residue_projection_on(&diag_family(), &empty).unwrap();
        assert_eq!(rank, 0);
        assert!(p.norm() < 1e-12);
    }

    #[test]
    fn contour_near_other_point_rejected() {
        let bad = CircleContour::new(c(0.0), 1.0, 64).unwrap();
        assert!(matches!(
            residue_projection_on(&diag_family(), &bad),
            Err(Error::ContourTooClose { .. })
        ));
    }

    #[test]
    fn laurent_examples() {
        let l = laurent_coefficients(&diag_family(), c(1.0), None).unwrap();
        assert_eq!(l.pole_order, 1);
        assert!(
            l.coefficient(1)
                .unwrap()
                .max_abs_diff(&m(&[&[0.0, 0.0], &[0.0, 1.0]]))
                < 1e-10
        );

        let fam = nilpotent_family();
        let l = laurent_coefficients(&fam, c(0.0), None).unwrap();
        assert_eq!(l.pole_order, 2);
        assert!(
            l.coefficient(2)
                .unwrap()
                .max_abs_diff(&m(&[&[0.0, -1.0], &[0.0, 0.0]]))
                < 1e-10
        );
        assert!(l.chain_residual(&fam) < 1e-10);

        let l = laurent_coefficients(&diag_family(), c(0.0), None).unwrap();
        assert_eq!(l.pole_order, 0);
        assert!(l.coefficients.is_empty());

        let err = laurent_coefficients(&diag_family(), c(1.0), Some(2)).unwrap_err();
        assert!(matches!(
            err,
            Error::PoleOrderExceeded {
                requested: 2,
                detected: 1
            }
        ));
    }

    #[test]
    fn chain_dimension_examples() {
        let (d, chains) = jordan_chain_dim(&diag_family(), c(1.0)).unwrap();
        assert_eq!(d, 1);
        assert!(chains.max_residual(&diag_family(), c(1.0)) < 1e-10);

        let fam = nilpotent_family();
        let (d, chains) = jordan_chain_dim(&fam, c(0.0)).unwrap();
        assert_eq!(d, 2);
        assert_eq!(chains.solution_space_dim, 2);
        assert!(chains.max_residual(&fam, c(0.0)) < 1e-10);

        let (d, _) = jordan_chain_dim(&diag_family(), c(0.25)).unwrap();
        assert_eq!(d, 0);
    }

    #[test]
    fn chain_dimension_is_sign_convention_independent() {
        // Flipping V -> -V corresponds to the family T - mu A at -mu.
        let fam = nilpotent_family();
        let flipped = AffineFamily::new(fam.t(), m(&[&[-1.0, 0.0], &[0.0, -1.0]])).unwrap();
        let (d1, _) = jordan_chain_dim(&fam, c(0.0)).unwrap();
        let (d2, _) = jordan_chain_dim(&flipped, c(0.0)).unwrap();
        assert_eq!(d1, d2);
    }
}
