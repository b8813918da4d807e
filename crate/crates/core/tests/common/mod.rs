//! Seeded generators shared by the integration and acceptance tests.
#![allow(dead_code)]

use perispec::endperiodic::{CapEntry, LaurentSymbol, Sequence, SymbolPath};
use perispec::numerics::{CMat, ComplexMatrix};
use perispec::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn random_complex(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

pub fn random_block(rng: &mut ChaCha8Rng, n: usize) -> CMat {
    CMat::from_fn(n, n, |_, _| random_complex(rng))
}

/// Symbol with i.i.d. complex entries, block size `1..=3`, band `1..=2`.
pub fn random_symbol(rng: &mut ChaCha8Rng) -> LaurentSymbol {
    let n = rng.random_range(1..=3);
    let band = rng.random_range(1..=2i64);
    let k_min = rng.random_range(-band..=0);
    random_symbol_shaped(rng, n, k_min, k_min + band)
}

pub fn random_symbol_shaped(
    rng: &mut ChaCha8Rng,
    n: usize,
    k_min: i64,
    k_max: i64,
) -> LaurentSymbol {
    loop {
        let blocks = (k_min..=k_max)
            .map(|_| ComplexMatrix::new(random_block(rng, n)).unwrap())
            .collect();
        if let Ok(s) = LaurentSymbol::new(k_min, blocks) {
            return s;
        }
    }
}

/// `ln|z|` of every zero, with multiplicity.
pub fn log_radii(sym: &LaurentSymbol) -> Vec<f64> {
    sym.all_zeros()
        .iter()
        .flat_map(|(z, m)| std::iter::repeat_n(z.norm().ln(), *m))
        .collect()
}

/// Weights on a grid in `[-1.5, 1.5]` whose circles keep `guard` (in
/// `ln|z|`) from every zero.
pub fn admissible_weights(sym: &LaurentSymbol, guard: f64) -> Vec<f64> {
    let logs = log_radii(sym);
    (0..=60)
        .map(|i| -1.5 + 0.05 * i as f64)
        .filter(|d| logs.iter().all(|l| (l - d).abs() >= guard))
        .collect()
}

/// A pair `delta < delta'` of admissible weights, preferring annuli that
/// contain zeros.
pub fn weight_pair(rng: &mut ChaCha8Rng, sym: &LaurentSymbol, guard: f64) -> Option<(f64, f64)> {
    let w = admissible_weights(sym, guard);
    if w.len() < 2 {
        return None;
    }
    let logs = log_radii(sym);
    let mut pairs = Vec::new();
    for i in 0..w.len() {
        for j in i + 1..w.len() {
            if logs.iter().any(|l| *l > w[i] && *l < w[j]) {
                pairs.push((w[i], w[j]));
            }
        }
    }
    if pairs.is_empty() || rng.random_bool(0.1) {
        let i = rng.random_range(0..w.len() - 1);
        let j = rng.random_range(i + 1..w.len());
        return Some((w[i], w[j]));
    }
    Some(pairs[rng.random_range(0..pairs.len())])
}

/// A few cap blocks on sites `< cap_sites`.
pub fn random_cap(rng: &mut ChaCha8Rng, n: usize, cap_sites: usize) -> Vec<CapEntry> {
    let count = rng.random_range(1..=4);
    (0..count)
        .map(|_| CapEntry {
            row: rng.random_range(0..cap_sites),
            col: rng.random_range(0..cap_sites),
            block: random_block(rng, n) * Complex64::new(rng.random_range(0.0..3.0), 0.0),
        })
        .collect()
}

pub fn random_sequence(rng: &mut ChaCha8Rng) -> Sequence {
    let dim = rng.random_range(1..=3);
    let offset = rng.random_range(-5..=5);
    let width = rng.random_range(1..=12);
    let values = (0..width)
        .map(|_| (0..dim).map(|_| random_complex(rng)).collect())
        .collect();
    Sequence::new(offset, values).unwrap()
}

/// Piecewise-linear path of symbols with a common shape whose endpoint
/// zeros stay `guard` away from the unit circle in `ln|z|`.
pub fn random_path(rng: &mut ChaCha8Rng, guard: f64) -> SymbolPath {
    let n = rng.random_range(1..=2);
    let band = rng.random_range(1..=2i64);
    let k_min = rng.random_range(-band..=0);
    let k_max = k_min + band;
    let nodes = rng.random_range(2..=4);
    let regular = |s: &LaurentSymbol| log_radii(s).iter().all(|l| l.abs() >= guard);
    loop {
        let mut grid: Vec<f64> = (1..nodes - 1).map(|_| rng.random_range(0.1..0.9)).collect();
        grid.sort_by(f64::total_cmp);
        grid.insert(0, 0.0);
        grid.push(1.0);
        if grid.windows(2).any(|w| w[1] - w[0] < 0.05) {
            continue;
        }
        let symbols: Vec<LaurentSymbol> = (0..nodes)
            .map(|_| random_symbol_shaped(rng, n, k_min, k_max))
            .collect();
        if !regular(&symbols[0]) || !regular(symbols.last().unwrap()) {
            continue;
        }
        if let Ok(p) = SymbolPath::new(grid, symbols) {
            return p;
        }
    }
}
