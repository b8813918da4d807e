//! Star-shaped plumbing graphs bounded by Seifert homology spheres, their
//! intersection forms and the Neumann–Siebenmann invariant.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::SeifertData;
use crate::error::{Error, Result};
use crate::numerics::ExactRational;

/// Unnormalized Seifert invariants `(b0; (a_k, b_k))` with `0 < b_k < a_k`
/// and Euler number `b0 + sum b_k / a_k = -1 / (a_1 ... a_n)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Normalization {
    pub b0: i64,
    pub b: Vec<u64>,
}

fn mod_inverse(x: i128, m: i128) -> Option<i128> {
    let (mut r0, mut r1) = (x.rem_euclid(m), m);
    let (mut s0, mut s1) = (1i128, 0i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    (r0 == 1).then(|| s0.rem_euclid(m))
}

pub fn normalization(s: &SeifertData) -> Result<Normalization> {
    s.require_genuine()?;
    let a = s.product();
    let mut b = Vec::with_capacity(s.fibers().len());
    for &ak in s.fibers() {
        let ak = ak as i128;
        let inv = mod_inverse((a / ak) % ak, ak)
            .ok_or_else(|| Error::Normalization(format!("a/a_k not invertible mod {ak}")))?;
        b.push((-inv).rem_euclid(ak) as u64);
    }
    // a * b0 = -1 - sum b_k a / a_k
    let num: i128 = -1
        - s.fibers()
            .iter()
            .zip(&b)
            .map(|(&ak, &bk)| bk as i128 * (a / ak as i128))
            .sum::<i128>();
    if num % a != 0 || b.contains(&0) {
        return Err(Error::Normalization(format!(
            "no integral b0 for {:?}",
            s.fibers()
        )));
    }
    let b0 = i64::try_from(num / a).map_err(|_| Error::Normalization("b0 out of range".into()))?;
    Ok(Normalization { b0, b })
}

/// `p / q = c_1 - 1 / (c_2 - 1 / (...))` with every `c_i >= 2`, for `p > q > 0`.
pub fn negative_continued_fraction(p: u64, q: u64) -> Vec<u64> {
    let (mut p, mut q) = (p, q);
    let mut out = Vec::new();
    while q > 0 {
        let c = p.div_ceil(q);
        out.push(c);
        (p, q) = (q, c * q - p);
    }
    out
}

/// Central vertex `0` of weight `e0`; each leg is a chain of vertices whose
/// first element is adjacent to the centre.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlumbingGraph {
    pub weights: Vec<i64>,
    pub legs: Vec<Vec<usize>>,
}

impl PlumbingGraph {
    pub fn vertex_count(&self) -> usize {
        self.weights.len()
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for leg in &self.legs {
            let mut prev = 0;
            for &v in leg {
                out.push((prev, v));
                prev = v;
            }
        }
        out
    }

    /// Symmetric intersection matrix: weights on the diagonal, 1 per edge.
    pub fn intersection_matrix(&self) -> Vec<Vec<i64>> {
        let n = self.vertex_count();
        let mut q = vec![vec![0i64; n]; n];
        for (i, &w) in self.weights.iter().enumerate() {
            q[i][i] = w;
        }
        for (u, v) in self.edges() {
            q[u][v] = 1;
            q[v][u] = 1;
        }
        q
    }

    pub fn is_even(&self) -> bool {
        self.weights.iter().all(|w| w % 2 == 0)
    }

    /// Pivots of symmetric Gaussian elimination from the leaves inwards,
    /// or `None` if a zero pivot occurs.
    fn tree_pivots(&self) -> Option<Vec<ExactRational>> {
        let mut pivots = Vec::with_capacity(self.vertex_count());
        let mut centre = ExactRational::from_integer(self.weights[0]);
        for leg in &self.legs {
            let mut p: Option<ExactRational> = None;
            for &v in leg.iter().rev() {
                let w = ExactRational::from_integer(self.weights[v]);
                let next = match p {
                    None => w,
                    Some(prev) => w - prev.recip(),
                };
                if next.is_zero() {
                    return None;
                }
                pivots.push(next.clone());
                p = Some(next);
            }
            if let Some(prev) = p {
                centre = centre - prev.recip();
            }
        }
        if centre.is_zero() {
            return None;
        }
        pivots.push(centre);
        Some(pivots)
    }

    /// `(signature, determinant)` of the intersection form.
    pub fn signature_and_det(&self) -> (i64, BigInt) {
        match self.tree_pivots() {
            Some(p) => {
                let sig = p.iter().map(|x| x.signum() as i64).sum();
                let det = p.into_iter().fold(ExactRational::one(), |a, b| a * b);
                (sig, det.numer().clone())
            }
            None => {
                let (pos, neg, zero, det) = dense_inertia(&self.intersection_matrix());
                debug_assert!(zero == 0 || det.is_zero());
                (pos as i64 - neg as i64, det)
            }
        }
    }

    pub fn signature(&self) -> i64 {
        self.signature_and_det().0
    }

    pub fn determinant(&self) -> BigInt {
        self.signature_and_det().1
    }

    /// The 0/1 vector `w` with `w . x = x . x (mod 2)` for every vertex `x`.
    pub fn wu_class(&self) -> Result<Vec<bool>> {
        let q = self.intersection_matrix();
        let n = q.len();
        let words = (n + 1).div_ceil(64);
        // Augmented rows [Q mod 2 | diag(Q) mod 2]; Q is symmetric.
        let mut rows: Vec<Vec<u64>> = (0..n)
            .map(|i| {
                let mut r = vec![0u64; words];
                for (j, &x) in q[i].iter().enumerate() {
                    if x.rem_euclid(2) == 1 {
                        r[j / 64] |= 1 << (j % 64);
                    }
                }
                if q[i][i].rem_euclid(2) == 1 {
                    r[n / 64] |= 1 << (n % 64);
                }
                r
            })
            .collect();
        let bit = |r: &[u64], j: usize| r[j / 64] >> (j % 64) & 1 == 1;
        for col in 0..n {
            let pivot = (col..n)
                .find(|&i| bit(&rows[i], col))
                .ok_or_else(|| Error::Consistency("Wu class equation singular mod 2".into()))?;
            rows.swap(col, pivot);
            let pr = rows[col].clone();
            for (i, r) in rows.iter_mut().enumerate() {
                if i != col && bit(r, col) {
                    r.iter_mut().zip(&pr).for_each(|(x, y)| *x ^= y);
                }
            }
        }
        Ok((0..n).map(|i| bit(&rows[i], n)).collect())
    }

    /// `w . w` for a 0/1 vector.
    pub fn square(&self, w: &[bool]) -> i64 {
        let q = self.intersection_matrix();
        let mut s = 0i64;
        for i in (0..w.len()).filter(|&i| w[i]) {
            for j in (0..w.len()).filter(|&j| w[j]) {
                s += q[i][j];
            }
        }
        s
    }
}

/// `(#positive, #negative, #zero)` eigenvalue counts and determinant of a
/// symmetric integer matrix, by exact congruence diagonalization.
pub fn dense_inertia(q: &[Vec<i64>]) -> (usize, usize, usize, BigInt) {
    let n = q.len();
    let mut m: Vec<Vec<ExactRational>> = q
        .iter()
        .map(|r| r.iter().map(|&x| ExactRational::from_integer(x)).collect())
        .collect();
    let (mut pos, mut neg, mut zero) = (0, 0, 0);
    let mut det = ExactRational::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            if let Some(i) = (k + 1..n).find(|&i| !m[i][i].is_zero()) {
                m.swap(k, i);
                for r in m.iter_mut() {
                    r.swap(k, i);
                }
            } else if let Some(i) = (k + 1..n).find(|&i| !m[k][i].is_zero()) {
                // x_k -> x_k + x_i has square 2 m[k][i] != 0; it is unimodular,
                // so the determinant is unchanged.
                for j in 0..n {
                    let v = m[i][j].clone();
                    m[k][j] = &m[k][j] + &v;
                }
                for r in m.iter_mut() {
                    let v = r[i].clone();
                    r[k] = &r[k] + &v;
                }
            }
        }
        let p = m[k][k].clone();
        if p.is_zero() {
            zero += 1;
            det = ExactRational::zero();
            continue;
        }
        if p.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        det = det * p.clone();
        for i in k + 1..n {
            if m[i][k].is_zero() {
                continue;
            }
            let f = &m[i][k] / &p;
            for j in k..n {
                let v = &f * &m[k][j];
                m[i][j] = &m[i][j] - &v;
            }
        }
        for i in k + 1..n {
            m[k][i] = ExactRational::zero();
        }
    }
    debug_assert!(det.is_integer());
    (pos, neg, zero, det.numer().clone())
}

/// Negative-definite star-shaped plumbing with boundary `s`: centre weight
/// `b0`, and on leg `k` the weights `-c_i` of `a_k / b_k = [c_1, c_2, ...]`.
pub fn plumbing_graph(s: &SeifertData) -> Result<PlumbingGraph> {
    let norm = normalization(s)?;
    let mut weights = vec![norm.b0];
    let mut legs = Vec::new();
    for (&ak, &bk) in s.fibers().iter().zip(&norm.b) {
        let mut leg = Vec::new();
        for c in negative_continued_fraction(ak, bk) {
            leg.push(weights.len());
            weights.push(-(c as i64));
        }
        legs.push(leg);
    }
    let g = PlumbingGraph { weights, legs };
    let (sig, det) = g.signature_and_det();
    if det.abs() != BigInt::one() || sig != -(g.vertex_count() as i64) {
        return Err(Error::Consistency(format!(
            "plumbing for {:?} has det {det} and signature {sig} on {} vertices",
            s.fibers(),
            g.vertex_count()
        )));
    }
    Ok(g)
}

/// `(sigma - w . w) / 8` for the plumbing and its Wu class.
pub fn mu_bar(s: &SeifertData) -> Result<i64> {
    let g = plumbing_graph(s)?;
    let w = g.wu_class()?;
    let num = g.signature() - g.square(&w);
    if num % 8 != 0 {
        return Err(Error::Consistency(format!(
            "sigma - w.w = {num} is not divisible by 8 for {:?}",
            s.fibers()
        )));
    }
    Ok(num / 8)
}
