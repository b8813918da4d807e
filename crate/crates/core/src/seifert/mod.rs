//! Exact invariants of Seifert fibered homology spheres `Sigma(a_1, ..., a_n)`.
//!
//! Everything here is computed with big-integer rationals. The Casson
//! invariant follows the orientation for which `lambda(Sigma(2,3,5)) = -1`.

mod dedekind;
mod invariants;
mod plumbing;

use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;

pub use dedekind::dedekind_sum;
pub use invariants::{
    casson, eta_invariants, euler_orbifold, lambda_sw_mapping_tori, vortex_count, w_correction,
    EtaPair, LambdaSw,
};
pub use plumbing::{
    dense_inertia, mu_bar, negative_continued_fraction, normalization, plumbing_graph,
    Normalization, PlumbingGraph,
};

use crate::error::{Error, Result};
use crate::numerics::ExactRational;

/// Products above this are rejected so that all intermediate integer
/// arithmetic stays inside `i128`.
const MAX_PRODUCT: u64 = 1 << 62;

/// Pairwise coprime multiplicities, with 1's removed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SeifertData {
    fibers: Vec<u64>,
}

impl SeifertData {
    /// Requires at least three multiplicities greater than 1.
    pub fn new(multiplicities: &[u64]) -> Result<Self> {
        let s = Self::degenerate(multiplicities)?;
        s.require_genuine()?;
        Ok(s)
    }

    /// Like [`SeifertData::new`] but accepts fewer than three fibers
    /// (such data describe `S^3`); only [`euler_orbifold`] and
    /// [`vortex_count`] accept it.
    pub fn degenerate(multiplicities: &[u64]) -> Result<Self> {
        if multiplicities.contains(&0) {
            return Err(Error::InvalidInput("multiplicities must be >= 1".into()));
        }
        for (i, &x) in multiplicities.iter().enumerate() {
            for &y in &multiplicities[i + 1..] {
                if x.gcd(&y) != 1 {
                    return Err(Error::NotCoprime(multiplicities.to_vec()));
                }
            }
        }
        let fibers: Vec<u64> = multiplicities.iter().copied().filter(|&a| a > 1).collect();
        let mut p: u64 = 1;
        for &a in &fibers {
            p = p
                .checked_mul(a)
                .filter(|&p| p <= MAX_PRODUCT)
                .ok_or_else(|| Error::InvalidInput("product of multiplicities too large".into()))?;
        }
        Ok(Self { fibers })
    }

    pub fn fibers(&self) -> &[u64] {
        &self.fibers
    }

    pub fn product(&self) -> i128 {
        self.fibers.iter().map(|&a| a as i128).product()
    }

    pub fn is_genuine(&self) -> bool {
        self.fibers.len() >= 3
    }

    pub(crate) fn require_genuine(&self) -> Result<()> {
        if self.is_genuine() {
            Ok(())
        } else {
            Err(Error::UnsupportedSeifert(self.fibers.clone()))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantReport {
    pub fibers: Vec<u64>,
    pub chi: ExactRational,
    pub vortex_count: u64,
    pub moduli_count: u64,
    pub normalization: Normalization,
    pub etas: EtaPair,
    pub combo: ExactRational,
    pub w: ExactRational,
    pub casson: i64,
    pub mu_bar: i64,
    pub lambda_sw_product: i64,
    pub lambda_sw_circle_action: i64,
    pub lambda_sw_conjugation: i64,
    /// `combo == -mu_bar`.
    pub barmu_holds: bool,
    /// Every `lambda_sw_*` is congruent to `mu_bar` mod 2.
    pub rohlin_parity_ok: bool,
}

pub fn report(s: &SeifertData) -> Result<InvariantReport> {
    let etas = eta_invariants(s)?;
    let combo = etas.combo();
    let v = vortex_count(s);
    let lambda = lambda_sw_mapping_tori(s)?;
    let mu = mu_bar(s)?;
    let parity = [lambda.product, lambda.circle_action, lambda.conjugation]
        .iter()
        .all(|x| (x - mu).rem_euclid(2) == 0);
    Ok(InvariantReport {
        fibers: s.fibers().to_vec(),
        chi: euler_orbifold(s),
        vortex_count: v,
        moduli_count: 2 * v,
        normalization: normalization(s)?,
        w: -combo.clone(),
        barmu_holds: combo == ExactRational::from_integer(-mu),
        combo,
        etas,
        casson: casson(s)?,
        mu_bar: mu,
        lambda_sw_product: lambda.product,
        lambda_sw_circle_action: lambda.circle_action,
        lambda_sw_conjugation: lambda.conjugation,
        rohlin_parity_ok: parity,
    })
}

/// Strictly increasing, pairwise coprime lists of `fibers` integers >= 2
/// with product at most `max_product`, in lexicographic order.
pub fn enumerate_seifert(fibers: usize, max_product: u64) -> Vec<Vec<u64>> {
    fn go(
        fibers: usize,
        max_product: u64,
        start: u64,
        prod: u64,
        cur: &mut Vec<u64>,
        out: &mut Vec<Vec<u64>>,
    ) {
        if cur.len() == fibers {
            out.push(cur.clone());
            return;
        }
        let left = (fibers - cur.len()) as u32;
        let mut a = start;
        // the remaining entries are all >= a
        while a
            .checked_pow(left)
            .is_some_and(|p| prod.saturating_mul(p) <= max_product)
        {
            if cur.iter().all(|&x| x.gcd(&a) == 1) {
                cur.push(a);
                go(fibers, max_product, a + 1, prod * a, cur, out);
                cur.pop();
            }
            a += 1;
        }
    }
    let mut out = Vec::new();
    if fibers > 0 {
        go(fibers, max_product, 2, 1, &mut Vec::new(), &mut out);
    }
    out
}

/// Reports for many instances, computed in parallel, in input order.
pub fn sweep(instances: &[Vec<u64>]) -> Vec<Result<InvariantReport>> {
    instances
        .par_iter()
        .map(|a| report(&SeifertData::new(a)?))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BarmuCheck {
    pub fibers: Vec<u64>,
    /// `eta_dir / 2 + eta_sign / 8`, if it could be computed.
    pub combo: Option<ExactRational>,
    pub mu_bar: Option<i64>,
    pub pass: bool,
    /// Full invariant dump or error text for failures.
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BarmuReport {
    pub checked: usize,
    pub passed: usize,
    pub failures: Vec<BarmuCheck>,
}

impl BarmuReport {
    pub fn all_pass(&self) -> bool {
        self.passed == self.checked
    }
}

fn check_one(a: &[u64]) -> BarmuCheck {
    let s = match SeifertData::new(a) {
        Ok(s) => s,
        Err(e) => {
            return BarmuCheck {
                fibers: a.to_vec(),
                combo: None,
                mu_bar: None,
                pass: false,
                detail: Some(e.to_string()),
            }
        }
    };
    let combo = eta_invariants(&s).map(|e| e.combo());
    let mu = mu_bar(&s);
    let pass = matches!((&combo, &mu), (Ok(c), Ok(m)) if *c == ExactRational::from_integer(-m));
    let detail = (!pass).then(|| match report(&s) {
        Ok(r) => serde_json::to_string(&r).unwrap_or_default(),
        Err(e) => e.to_string(),
    });
    BarmuCheck {
        fibers: s.fibers().to_vec(),
        combo: combo.ok(),
        mu_bar: mu.ok(),
        pass,
        detail,
    }
}

/// Checks `eta_dir / 2 + eta_sign / 8 = -mu_bar` on every instance.
pub fn check_barmu(instances: &[Vec<u64>]) -> BarmuReport {
    let checks: Vec<BarmuCheck> = instances.par_iter().map(|a| check_one(a)).collect();
    let passed = checks.iter().filter(|c| c.pass).count();
    BarmuReport {
        checked: checks.len(),
        passed,
        failures: checks.into_iter().filter(|c| !c.pass).collect(),
    }
}
