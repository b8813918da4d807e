//! Finitely supported vector sequences and their generating-function
//! transform `u_hat(z) = sum_n u(n) z^n` sampled on circles.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// `u(offset), u(offset + 1), ...`, each value a vector of length `dim`;
/// zero elsewhere.
#[derive(Clone, Debug, PartialEq)]
pub struct Sequence {
    offset: i64,
    dim: usize,
    values: Vec<Vec<Complex64>>,
}

impl Sequence {
    pub fn new(offset: i64, values: Vec<Vec<Complex64>>) -> Result<Self> {
        let dim = values
            .first()
            .map(Vec::len)
            .ok_or_else(|| Error::InvalidInput("empty sequence".into()))?;
        if dim == 0 || values.iter().any(|v| v.len() != dim) {
            return Err(Error::Dimension(
                "sequence values must share one length".into(),
            ));
        }
        if values
            .iter()
            .flatten()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::InvalidInput("non-finite sequence value".into()));
        }
        Ok(Self {
            offset,
            dim,
            values,
        })
    }

    /// Unit-free impulse: `v` at site `n`, zero elsewhere.
    pub fn delta(n: i64, v: Vec<Complex64>) -> Result<Self> {
        Self::new(n, vec![v])
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of stored sites.
    pub fn width(&self) -> usize {
        self.values.len()
    }

    pub fn get(&self, n: i64) -> Vec<Complex64> {
        let i = n - self.offset;
        if i >= 0 && (i as usize) < self.values.len() {
            self.values[i as usize].clone()
        } else {
            vec![Complex64::new(0.0, 0.0); self.dim]
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &[Complex64])> {
        self.values
            .iter()
            .enumerate()
            .map(move |(i, v)| (self.offset + i as i64, v.as_slice()))
    }

    /// `u_hat(z)`, evaluated by Horner's rule.
    pub fn transform_at(&self, z: Complex64) -> Vec<Complex64> {
        let mut acc = vec![Complex64::new(0.0, 0.0); self.dim];
        for v in self.values.iter().rev() {
            for (a, x) in acc.iter_mut().zip(v) {
                *a = *a * z + x;
            }
        }
        let shift = z.powi(self.offset as i32);
        acc.iter_mut().for_each(|a| *a *= shift);
        acc
    }
}

/// Samples of a transform at `z_j = r exp(2 pi i j / N)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledTransform {
    pub radius: f64,
    pub values: Vec<Vec<Complex64>>,
}

impl SampledTransform {
    pub fn node_count(&self) -> usize {
        self.values.len()
    }

    pub fn node(&self, j: usize) -> Complex64 {
        Complex64::from_polar(self.radius, 2.0 * PI * j as f64 / self.node_count() as f64)
    }

    /// `(1 / 2 pi) integral |u_hat|^2 dtheta` by the trapezoidal rule.
    pub fn mean_square(&self) -> f64 {
        let total: f64 = self
            .values
            .iter()
            .map(|v| v.iter().map(Complex64::norm_sqr).sum::<f64>())
            .sum();
        total / self.node_count() as f64
    }
}

pub fn fl_transform(u: &Sequence, radius: f64, node_count: usize) -> Result<SampledTransform> {
    if !(radius > 0.0 && radius.is_finite()) || node_count == 0 {
        return Err(Error::InvalidInput(format!(
            "need radius > 0 and nodes > 0, got {radius}, {node_count}"
        )));
    }
    let values = (0..node_count)
        .map(|j| {
            let z = Complex64::from_polar(radius, 2.0 * PI * j as f64 / node_count as f64);
            u.transform_at(z)
        })
        .collect();
    Ok(SampledTransform { radius, values })
}

/// `u(n) = (1 / 2 pi i) contour integral of u_hat(z) z^{-n-1} dz` over the
/// sampled circle. Exact when the node count exceeds the support width.
pub fn fl_inverse(u_hat: &SampledTransform, n: i64) -> Vec<Complex64> {
    let count = u_hat.node_count();
    let dim = u_hat.values.first().map_or(0, Vec::len);
    let mut acc = vec![Complex64::new(0.0, 0.0); dim];
    for (j, v) in u_hat.values.iter().enumerate() {
        // z_j^{-n}, with the angle reduced mod 2 pi before scaling
        let k = (j as i128 * n as i128).rem_euclid(count as i128) as f64;
        let w = Complex64::from_polar(u_hat.radius.powf(-(n as f64)), -2.0 * PI * k / count as f64);
        for (a, x) in acc.iter_mut().zip(v) {
            *a += x * w;
        }
    }
    acc.iter_mut().for_each(|a| *a /= count as f64);
    acc
}

/// `(sum_n e^{2 delta n} |u(n)|^2)^{1/2}`.
pub fn weighted_norm(u: &Sequence, delta: f64) -> f64 {
    u.iter()
        .map(|(n, v)| {
            (2.0 * delta * n as f64).exp() * v.iter().map(Complex64::norm_sqr).sum::<f64>()
        })
        .sum::<f64>()
        .sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn transform_examples() {
        let v = vec![c(2.0), Complex64::new(0.0, 1.0)];
        let d0 = Sequence::delta(0, v.clone()).unwrap();
        let t = fl_transform(&d0, 1.5, 16).unwrap();
        assert!(t.values.iter().all(|w| w == &v));

        let d1 = Sequence::delta(1, v.clone()).unwrap();
        let t = fl_transform(&d1, 1.5, 16).unwrap();
        for (j, w) in t.values.iter().enumerate() {
            let z = t.node(j);
            assert!((w[0] - z * v[0]).norm() < 1e-14);
        }

        let u = Sequence::new(0, vec![vec![c(1.0)], vec![c(1.0)]]).unwrap();
        assert!(u.transform_at(c(-1.0))[0].norm() < 1e-15);
    }

    #[test]
    fn inverse_examples() {
        let ones = SampledTransform {
            radius: 1.0,
            values: vec![vec![c(1.0)]; 16],
        };
        assert!((fl_inverse(&ones, 0)[0] - c(1.0)).norm() < 1e-14);
        assert!(fl_inverse(&ones, 3)[0].norm() < 1e-14);

        let sq = Sequence::delta(2, vec![c(1.0)]).unwrap();
        let t = fl_transform(&sq, 0.7, 16).unwrap();
        assert!((fl_inverse(&t, 2)[0] - c(1.0)).norm() < 1e-13);
        assert!(fl_inverse(&t, 1)[0].norm() < 1e-13);
    }

    #[test]
    fn weighted_norm_examples() {
        let d0 = Sequence::delta(0, vec![c(1.0)]).unwrap();
        assert!((weighted_norm(&d0, 3.7) - 1.0).abs() < 1e-15);
        let d1 = Sequence::delta(1, vec![c(1.0)]).unwrap();
        assert!((weighted_norm(&d1, 2f64.ln()) - 2.0).abs() < 1e-14);
    }

    #[test]
    fn negative_sites() {
        let u = Sequence::new(
            -3,
            vec![vec![c(1.0)], vec![c(0.0)], vec![c(0.0)], vec![c(4.0)]],
        )
        .unwrap();
        let t = fl_transform(&u, 1.2, 32).unwrap();
        assert!((fl_inverse(&t, -3)[0] - c(1.0)).norm() < 1e-12);
        assert!((fl_inverse(&t, 0)[0] - c(4.0)).norm() < 1e-12);
        let lhs = t.mean_square();
        let rhs = weighted_norm(&u, 1.2f64.ln()).powi(2);
        assert!((lhs - rhs).abs() < 1e-12 * rhs);
    }
}
