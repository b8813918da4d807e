//! Orbifold Euler characteristic, vortex counts, eta invariants and the
//! Casson-type invariants built from them.
//!
//! With `a = a_1 ... a_n`, normalized invariants `b_k` and Euler number
//! `e = -1/a`:
//!
//! ```text
//! eta_sign = 1 - 1/(3a) - 4 sum s(b_k, a_k)
//! eta_dir  = -(a/12) (2 - n + sum 1/a_k^2) - 4 v
//! ```
//!
//! where `v` is the number of holomorphic vortices. The first is the
//! orbifold signature-defect formula; the second is the Dirac eta
//! invariant of the adiabatic Seifert metric.

use num_bigint::BigInt;
use serde::Serialize;

use super::dedekind::dedekind_sum;
use super::plumbing::normalization;
use super::SeifertData;
use crate::error::{Error, Result};
use crate::numerics::ExactRational;

/// `chi(F) = 2 - sum (1 - 1/a_k)`.
pub fn euler_orbifold(s: &SeifertData) -> ExactRational {
    let two = ExactRational::from_integer(2);
    two - s
        .fibers()
        .iter()
        .map(|&a| ExactRational::one() - ExactRational::new(1, a))
        .sum::<ExactRational>()
}

/// Number of `eps` with `0 <= eps_k < a_k` and `sum eps_k / a_k <= -chi / 2`.
pub fn vortex_count(s: &SeifertData) -> u64 {
    let f = s.fibers();
    if f.is_empty() {
        return 0;
    }
    let a = s.product();
    let weights: Vec<i128> = f.iter().map(|&ak| a / ak as i128).collect();
    // 2 sum eps_k a/a_k <= -a chi = a (n - 2) - sum a/a_k
    let budget = a * (f.len() as i128 - 2) - weights.iter().sum::<i128>();
    fn count(f: &[u64], w: &[i128], budget: i128) -> u64 {
        if budget < 0 {
            return 0;
        }
        match (f.split_first(), w.split_first()) {
            (Some((&ak, f_rest)), Some((&wk, w_rest))) => (0..ak as i128)
                .map(|e| budget - 2 * e * wk)
                .take_while(|&b| b >= 0)
                .map(|b| count(f_rest, w_rest, b))
                .sum(),
            _ => 1,
        }
    }
    count(f, &weights, budget)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EtaPair {
    pub eta_dir: ExactRational,
    pub eta_sign: ExactRational,
}

impl EtaPair {
    /// `eta_dir / 2 + eta_sign / 8`.
    pub fn combo(&self) -> ExactRational {
        &self.eta_dir / &ExactRational::from_integer(2)
            + &self.eta_sign / &ExactRational::from_integer(8)
    }
}

pub fn eta_invariants(s: &SeifertData) -> Result<EtaPair> {
    let norm = normalization(s)?;
    let a = ExactRational::from_integer(BigInt::from(s.product()));
    let n = s.fibers().len() as i64;
    let mut dedekind = ExactRational::zero();
    let mut inv_sq = ExactRational::zero();
    for (&ak, &bk) in s.fibers().iter().zip(&norm.b) {
        dedekind = dedekind + dedekind_sum(bk as i64, ak as i64)?;
        inv_sq = inv_sq + ExactRational::new(1, ak as i128 * ak as i128);
    }
    let four = ExactRational::from_integer(4);
    let eta_sign =
        ExactRational::one() - (&ExactRational::from_integer(3) * &a).recip() - &four * &dedekind;
    let v = ExactRational::from_integer(vortex_count(s));
    let eta_dir = -(&a / &ExactRational::from_integer(12))
        * (ExactRational::from_integer(2 - n) + inv_sq)
        - &four * &v;
    Ok(EtaPair { eta_dir, eta_sign })
}

/// `w = -(eta_dir / 2 + eta_sign / 8)`.
pub fn w_correction(s: &SeifertData) -> Result<ExactRational> {
    Ok(-eta_invariants(s)?.combo())
}

fn to_integer(r: &ExactRational, what: &str, s: &SeifertData) -> Result<i64> {
    r.to_i64().ok_or_else(|| {
        Error::Consistency(format!(
            "{what} = {r} is not an integer for {:?}",
            s.fibers()
        ))
    })
}

/// Casson invariant, normalized so that `lambda(Sigma(2,3,5)) = -1`, from
/// `lambda_SW(S^1 x Y) = 2 v + combo = -lambda(Y)`.
pub fn casson(s: &SeifertData) -> Result<i64> {
    let combo = eta_invariants(s)?.combo();
    let moduli = ExactRational::from_integer(2 * vortex_count(s));
    to_integer(&-(moduli + combo), "casson", s)
}

/// Seiberg–Witten invariants of mapping tori of `Y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LambdaSw {
    /// `S^1 x Y`.
    pub product: i64,
    /// A finite-order map contained in the circle action; equal to the
    /// product value whichever fiber is used.
    pub circle_action: i64,
    /// Complex conjugation: `eta_dir / 2 + eta_sign / 8`.
    pub conjugation: i64,
}

pub fn lambda_sw_mapping_tori(s: &SeifertData) -> Result<LambdaSw> {
    let lambda = casson(s)?;
    let conjugation = to_integer(&eta_invariants(s)?.combo(), "eta combination", s)?;
    Ok(LambdaSw {
        product: -lambda,
        circle_action: -lambda,
        conjugation,
    })
}
