//! Trapezoidal quadrature on circles and argument-principle zero counting.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use super::matrix::{is_finite_matrix, CMat, ComplexMatrix};
use crate::error::{Error, Result};

/// A positively oriented circle sampled at `node_count` equispaced nodes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CircleContour {
    center: Complex64,
    radius: f64,
    node_count: usize,
}

impl CircleContour {
    pub const MIN_NODES: usize = 16;

    pub fn new(center: Complex64, radius: f64, node_count: usize) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::InvalidInput(format!(
                "contour radius {radius} must be > 0"
            )));
        }
        if node_count < Self::MIN_NODES || !node_count.is_multiple_of(2) {
            return Err(Error::InvalidInput(format!(
                "contour node count {node_count} must be even and >= {}",
                Self::MIN_NODES
            )));
        }
        Ok(Self {
            center,
            radius,
            node_count,
        })
    }

    pub fn center(&self) -> Complex64 {
        self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    /// Same circle with twice the nodes.
    pub fn refined(&self) -> Self {
        Self {
            node_count: 2 * self.node_count,
            ..*self
        }
    }

    /// The j-th node `center + r e^{2 pi i j / N}`.
    pub fn node(&self, j: usize) -> Complex64 {
        self.center + Complex64::from_polar(self.radius, TAU * j as f64 / self.node_count as f64)
    }

    /// Quadrature weight of node j for `(1/2 pi i) \oint f d mu`.
    fn weight(&self, j: usize) -> Complex64 {
        (self.node(j) - self.center) / self.node_count as f64
    }

    pub fn nodes(&self) -> impl Iterator<Item = Complex64> + '_ {
        (0..self.node_count).map(|j| self.node(j))
    }
}

/// `(1/2 pi i) \oint_Gamma f(mu) d mu` by the trapezoidal rule.
pub fn contour_integrate<F>(mut f: F, contour: &CircleContour) -> Result<ComplexMatrix>
where
    F: FnMut(Complex64) -> CMat,
{
    let mut acc: Option<CMat> = None;
    for j in 0..contour.node_count() {
        let mu = contour.node(j);
        let sample = f(mu);
        if !is_finite_matrix(&sample) {
            return Err(Error::NonFiniteSample { node: j, mu });
        }
        let term = sample * contour.weight(j);
        acc = Some(match acc {
            None => term,
            Some(a) => {
                if a.shape() != term.shape() {
                    return Err(Error::Dimension("integrand changed shape".into()));
                }
                a + term
            }
        });
    }
    ComplexMatrix::new(acc.expect("node_count >= 16"))
}

/// Scalar convenience wrapper around [`contour_integrate`].
pub fn contour_integrate_scalar<F>(mut f: F, contour: &CircleContour) -> Result<Complex64>
where
    F: FnMut(Complex64) -> Complex64,
{
    contour_integrate(|mu| CMat::from_element(1, 1, f(mu)), contour).map(|m| m.get(0, 0))
}

/// Doubles the node count until successive results differ by less than `tol`
/// (entrywise max), starting from `contour`. Gives up after `max_nodes`.
pub fn contour_integrate_converged<F>(
    mut f: F,
    contour: &CircleContour,
    tol: f64,
    max_nodes: usize,
) -> Result<ComplexMatrix>
where
    F: FnMut(Complex64) -> CMat,
{
    let mut current = *contour;
    let mut prev = contour_integrate(&mut f, &current)?;
    while current.node_count() < max_nodes {
        current = current.refined();
        let next = contour_integrate(&mut f, &current)?;
        if next.max_abs_diff(&prev) < tol {
            return Ok(next);
        }
        prev = next;
    }
    Ok(prev)
}

/// Winding number of `f` around 0 along `|z - center| = radius`, i.e. the number
/// of zeros minus poles of a meromorphic `f` inside the circle.
///
/// Phase increments are tracked arc by arc; an arc is bisected until its phase
/// change is below pi/4 and agrees with the sum over its halves.
pub fn winding_number<F>(f: F, center: Complex64, radius: f64) -> Result<i64>
where
    F: Fn(Complex64) -> Complex64,
{
    const START_NODES: usize = 64;
    const MAX_DEPTH: u32 = 40;

    let fail = |reason: String| Error::Winding {
        center,
        radius,
        reason,
    };
    let point = |theta: f64| center + Complex64::from_polar(radius, theta);
    let eval = |theta: f64| -> Result<Complex64> {
        let v = f(point(theta));
        if !(v.re.is_finite() && v.im.is_finite()) || v == Complex64::new(0.0, 0.0) {
            return Err(fail(format!(
                "function vanishes or is non-finite at {}",
                point(theta)
            )));
        }
        Ok(v)
    };

    fn arc(
        eval: &dyn Fn(f64) -> Result<Complex64>,
        a: f64,
        b: f64,
        fa: Complex64,
        fb: Complex64,
        depth: u32,
    ) -> Result<Option<f64>> {
        let whole = (fb / fa).arg();
        let m = 0.5 * (a + b);
        let fm = eval(m)?;
        let left = (fm / fa).arg();
        let right = (fb / fm).arg();
        if whole.abs() < PI / 4.0 && (left + right - whole).abs() < 1e-9 {
            return Ok(Some(whole));
        }
        if depth == 0 {
            return Ok(None);
        }
        let l = arc(eval, a, m, fa, fm, depth - 1)?;
        let r = arc(eval, m, b, fm, fb, depth - 1)?;
        Ok(l.zip(r).map(|(x, y)| x + y))
    }

    let mut total = 0.0;
    let step = TAU / START_NODES as f64;
    let mut fa = eval(0.0)?;
    let f0 = fa;
    for k in 0..START_NODES {
        let a = step * k as f64;
        let b = step * (k + 1) as f64;
        let fb = if k + 1 == START_NODES { f0 } else { eval(b)? };
        match arc(&eval, a, b, fa, fb, MAX_DEPTH)? {
            Some(d) => total += d,
            None => return Err(fail(format!("phase unresolved on arc [{a:.6}, {b:.6}]"))),
        }
        fa = fb;
    }
    let turns = total / TAU;
    let rounded = turns.round();
    if (turns - rounded).abs() > 1e-6 {
        return Err(fail(format!("non-integral phase total {turns}")));
    }
    Ok(rounded as i64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn unit() -> CircleContour {
        CircleContour::new(c(0.0, 0.0), 1.0, 64).unwrap()
    }

    #[test]
    fn cauchy_integral_examples() {
        let one_over = contour_integrate_scalar(|mu| 1.0 / mu, &unit()).unwrap();
        assert!((one_over - c(1.0, 0.0)).norm() < 1e-14);
        let constant = contour_integrate_scalar(|_| c(1.0, 0.0), &unit()).unwrap();
        assert!(constant.norm() < 1e-14);
        let outside = contour_integrate_scalar(|mu| 1.0 / (mu - 2.0), &unit()).unwrap();
        assert!(outside.norm() < 1e-14);
    }

    #[test]
    fn non_finite_sample_names_node() {
        // node 0 of the unit circle is mu = 1
        let err = contour_integrate_scalar(|mu| 1.0 / (mu - 1.0), &unit()).unwrap_err();
        assert!(matches!(err, Error::NonFiniteSample { node: 0, .. }));
    }

    #[test]
    fn contour_validation() {
        assert!(CircleContour::new(c(0.0, 0.0), 0.0, 64).is_err());
        assert!(CircleContour::new(c(0.0, 0.0), 1.0, 15).is_err());
        assert!(CircleContour::new(c(0.0, 0.0), 1.0, 18).is_ok());
    }

    #[test]
    fn quadrature_error_decays_geometrically() {
        // 1/(mu - 1.5) on the unit circle integrates to 0; trapezoid error ~ (1/1.5)^N
        let f = |mu: Complex64| 1.0 / (mu - 1.5) + 1.0 / (mu - 0.3);
        let exact = c(1.0, 0.0);
        let mut prev_err = None;
        for n in [16usize, 32, 64] {
            let contour = CircleContour::new(c(0.0, 0.0), 1.0, n).unwrap();
            let err = (contour_integrate_scalar(f, &contour).unwrap() - exact).norm();
            if let Some(p) = prev_err {
                if p > 1e-14 {
                    assert!(err / p < 0.1, "ratio {}", err / p);
                }
            }
            prev_err = Some(err);
        }
    }

    #[test]
    fn winding_counts_zeros_and_poles() {
        let f = |z: Complex64| (z - 0.5) * (z - c(0.0, 0.3)) / (z - 3.0);
        assert_eq!(winding_number(f, c(0.0, 0.0), 1.0).unwrap(), 2);
        let g = |z: Complex64| (z - 0.999) * (z - 0.998) / (z * z * z);
        assert_eq!(winding_number(g, c(0.0, 0.0), 1.0).unwrap(), -1);
        assert!(winding_number(|z| z - 1.0, c(0.0, 0.0), 1.0).is_err());
    }
}
