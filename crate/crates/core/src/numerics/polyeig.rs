//! Zeros of `det P(mu)` for matrix polynomials `P(mu) = sum_k P_k mu^k`.
//!
//! The leading block may be singular, so the polynomial is first moved by a
//! Moebius substitution `mu = alpha + 1/nu` with `P(alpha)` well conditioned.
//! The reversed polynomial `nu^d P(alpha + 1/nu)` then has the invertible
//! leading coefficient `P(alpha)` and a standard block companion matrix.
//! Eigenvalues `nu = 0` are eigenvalues of `P` at infinity.

use num_complex::Complex64;

use super::matrix::{reciprocal_condition, CMat, ComplexMatrix, ToleranceConfig};
use crate::error::{Error, Result};

/// Finite eigenvalues with algebraic multiplicities, plus the count of
/// eigenvalues at infinity.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyEigen {
    pub finite: Vec<(Complex64, usize)>,
    pub infinite: usize,
}

impl PolyEigen {
    /// Degree of `det P`, i.e. the number of finite eigenvalues with multiplicity.
    pub fn det_degree(&self) -> usize {
        self.finite.iter().map(|(_, m)| m).sum()
    }
}

/// Below this reciprocal condition number of `P(alpha)` at every trial shift,
/// the pencil is declared singular.
const SINGULAR_RCOND: f64 = 1e-13;

pub(crate) fn eval_poly(coeffs: &[CMat], mu: Complex64) -> CMat {
    // Horner
    let mut acc = coeffs.last().expect("non-empty").clone();
    for c in coeffs.iter().rev().skip(1) {
        acc = acc * mu + c;
    }
    acc
}

fn trial_shifts() -> impl Iterator<Item = Complex64> {
    // Deterministic points spread over an annulus around the unit circle.
    (0..12).map(|k| {
        let r = 0.55 + 0.13 * k as f64;
        Complex64::from_polar(r, 0.41 + 2.399_963_229_728_653 * k as f64)
    })
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Finite eigenvalues of the matrix polynomial with the given coefficients
/// (constant term first). Infinite eigenvalues are counted separately.
pub fn poly_eigenvalues(coeffs: &[ComplexMatrix], tol: &ToleranceConfig) -> Result<PolyEigen> {
    let raw: Vec<CMat> = coeffs.iter().map(|c| c.as_matrix().clone()).collect();
    poly_eigenvalues_raw(&raw, tol)
}

pub(crate) fn poly_eigenvalues_raw(coeffs: &[CMat], tol: &ToleranceConfig) -> Result<PolyEigen> {
    let n = coeffs
        .first()
        .ok_or_else(|| Error::InvalidInput("empty coefficient list".into()))?
        .nrows();
    if coeffs.iter().any(|c| c.nrows() != n || c.ncols() != n) {
        return Err(Error::Dimension(
            "coefficients must be square of equal size".into(),
        ));
    }
    let d = coeffs.len() - 1;

    let (alpha, p_alpha) = trial_shifts()
        .map(|a| (a, eval_poly(coeffs, a)))
        .map(|(a, p)| (a, reciprocal_condition(&p), p))
        .max_by(|x, y| x.1.total_cmp(&y.1))
        .map(|(a, rc, p)| (a, (rc, p)))
        .expect("non-empty shift list");
    let (rcond, p_alpha) = p_alpha;
    if rcond < SINGULAR_RCOND {
        return Err(Error::SingularPencil);
    }
    if d == 0 {
        return Ok(PolyEigen {
            finite: Vec::new(),
            infinite: 0,
        });
    }

    // Q(nu) = sum_k P_k (alpha nu + 1)^k nu^(d-k), leading coefficient P(alpha).
    let mut q = vec![CMat::zeros(n, n); d + 1];
    for (k, pk) in coeffs.iter().enumerate() {
        for i in 0..=k {
            let w = Complex64::new(binomial(k, i), 0.0) * alpha.powu(i as u32);
            q[i + d - k] += pk * w;
        }
    }
    let lead_inv = p_alpha.try_inverse().ok_or(Error::SingularPencil)?;
    let size = n * d;
    let mut companion = CMat::zeros(size, size);
    for blk in 0..d.saturating_sub(1) {
        for i in 0..n {
            companion[(blk * n + i, (blk + 1) * n + i)] = Complex64::new(1.0, 0.0);
        }
    }
    for (j, qj) in q.iter().take(d).enumerate() {
        let mj = -(&lead_inv * qj);
        companion
            .view_mut(((d - 1) * n, j * n), (n, n))
            .copy_from(&mj);
    }

    let nus: Vec<Complex64> = companion
        .schur()
        .eigenvalues()
        .ok_or_else(|| Error::Consistency("complex Schur form did not yield eigenvalues".into()))?
        .iter()
        .copied()
        .collect();

    let mut infinite = 0usize;
    let mut finite_mu = Vec::new();
    for nu in nus {
        if nu.norm() < tol.cluster_tol {
            infinite += 1;
        } else {
            finite_mu.push(alpha + 1.0 / nu);
        }
    }
    Ok(PolyEigen {
        finite: cluster_points(&finite_mu, tol.cluster_tol),
        infinite,
    })
}

/// Single-linkage clustering with relative radius `rel`; returns centroid and
/// size per cluster, sorted by real then imaginary part.
pub(crate) fn cluster_points(points: &[Complex64], rel: f64) -> Vec<(Complex64, usize)> {
    let n = points.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let scale = 1f64.max(points[i].norm()).max(points[j].norm());
            if (points[i] - points[j]).norm() <= rel * scale {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[rj] = ri;
                }
            }
        }
    }
    let mut groups: Vec<(usize, Complex64, usize)> = Vec::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        match groups.iter_mut().find(|g| g.0 == r) {
            Some(g) => {
                g.1 += points[i];
                g.2 += 1;
            }
            None => groups.push((r, points[i], 1)),
        }
    }
    let mut out: Vec<(Complex64, usize)> = groups
        .into_iter()
        .map(|(_, sum, count)| (sum / count as f64, count))
        .collect();
    out.sort_by(|a, b| a.0.re.total_cmp(&b.0.re).then(a.0.im.total_cmp(&b.0.im)));
    out
}
