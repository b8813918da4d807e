//! Symbol paths, spectral curves and spectral flow through `|z| = 1`.
//!
//! A crossing of the unit circle by a zero curve `z(t)` counts
//! `sign(d/dt ln|z(t)|)`: leaving the unit disk is `+1`, entering is `-1`.
//! With this convention `index(1) - index(0) = SF` for the unweighted index.

use num_complex::Complex64;

use super::operator::symbol_index;
use super::symbol::LaurentSymbol;
use crate::error::{Error, Result};
use crate::numerics::CMat;

/// Substeps per grid interval before adaptive refinement.
const BASE_SUBSTEPS: usize = 16;
/// Steps shorter than this are not refined further.
const MIN_STEP: f64 = 1e-10;
/// Bisection stops once `|ln|z||` or the `t`-bracket is below this.
const LOCATE_TOL: f64 = 1e-10;
/// Half-width of the central difference for `d/dt ln|z|`.
const RATE_STEP: f64 = 1e-6;
/// Near the unit circle a single step may move `ln|z|` by at most this.
const NEAR_CIRCLE: f64 = 0.25;
const MAX_LOG_STEP: f64 = 0.05;

/// Piecewise-linear family of symbols over `0 = t_0 < ... < t_M = 1`.
#[derive(Clone, Debug)]
pub struct SymbolPath {
    grid: Vec<f64>,
    symbols: Vec<LaurentSymbol>,
}

impl SymbolPath {
    pub fn new(grid: Vec<f64>, symbols: Vec<LaurentSymbol>) -> Result<Self> {
        if grid.len() < 2 || grid.len() != symbols.len() {
            return Err(Error::InvalidInput(format!(
                "path needs at least two nodes and one symbol per node, got {} and {}",
                grid.len(),
                symbols.len()
            )));
        }
        if grid[0] != 0.0 || *grid.last().unwrap() != 1.0 || grid.windows(2).any(|w| !(w[0] < w[1]))
        {
            return Err(Error::InvalidInput(
                "grid must increase strictly from 0 to 1".into(),
            ));
        }
        let n = symbols[0].n();
        if symbols.iter().any(|s| s.n() != n) {
            return Err(Error::Dimension("path symbols differ in block size".into()));
        }
        for (t, s) in [(0.0, &symbols[0]), (1.0, symbols.last().unwrap())] {
            let rep = super::operator::fredholm_report(s, 0.0);
            if !rep.fredholm {
                return Err(Error::InvalidInput(format!(
                    "endpoint t = {t} has a zero of det D near {} on |z| = 1",
                    rep.worst
                )));
            }
        }
        Ok(Self { grid, symbols })
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn symbols(&self) -> &[LaurentSymbol] {
        &self.symbols
    }

    pub fn start(&self) -> &LaurentSymbol {
        &self.symbols[0]
    }

    pub fn end(&self) -> &LaurentSymbol {
        self.symbols.last().unwrap()
    }

    /// The same family traversed backwards, `t -> 1 - t`.
    pub fn reversed(&self) -> SymbolPath {
        let grid = self.grid.iter().rev().map(|t| 1.0 - t).collect();
        let symbols = self.symbols.iter().rev().cloned().collect();
        SymbolPath { grid, symbols }
    }

    /// Symbol at `t`, interpolating coefficient blocks linearly.
    pub fn symbol_at(&self, t: f64) -> Result<LaurentSymbol> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::InvalidInput(format!("t = {t} outside [0, 1]")));
        }
        let i = match self.grid.iter().position(|&g| g == t) {
            Some(i) => return Ok(self.symbols[i].clone()),
            None => self.grid.partition_point(|&g| g < t) - 1,
        };
        let (a, b) = (&self.symbols[i], &self.symbols[i + 1]);
        let s = (t - self.grid[i]) / (self.grid[i + 1] - self.grid[i]);
        let k_min = a.k_min().min(b.k_min());
        let k_max = a.k_max().max(b.k_max());
        let n = a.n();
        let zero = CMat::zeros(n, n);
        let blocks = (k_min..=k_max)
            .map(|k| {
                let x = a.block(k).unwrap_or(&zero);
                let y = b.block(k).unwrap_or(&zero);
                x * Complex64::new(1.0 - s, 0.0) + y * Complex64::new(s, 0.0)
            })
            .collect();
        LaurentSymbol::from_raw(k_min, blocks, *a.tolerance())
    }

    fn zeros_at(&self, t: f64) -> Result<Vec<(Complex64, usize)>> {
        Ok(self.symbol_at(t)?.all_zeros())
    }
}

/// One zero of `det D_t` followed in `t`.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct SpectralCurve {
    pub id: usize,
    /// Multiplicity of the zero along the curve.
    pub multiplicity: usize,
    pub samples: Vec<(f64, Complex64)>,
}

#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct CrossingEvent {
    pub t_star: f64,
    pub z_star: Complex64,
    /// `+1` leaving the unit disk, `-1` entering.
    pub sign: i32,
    /// `d` of the crossing zero.
    pub d: usize,
    /// `d/dt ln|z(t)|` at `t_star`.
    pub rate: f64,
}

fn total(zs: &[(Complex64, usize)]) -> usize {
    zs.iter().map(|(_, m)| m).sum()
}

fn nearest(zs: &[(Complex64, usize)], z: Complex64) -> (usize, f64) {
    zs.iter()
        .enumerate()
        .map(|(i, (w, _))| (i, (w - z).norm()))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("non-empty zero set")
}

/// Permutation `p` with `b[p[i]]` the continuation of `a[i]`, if unambiguous.
fn match_zeros(a: &[(Complex64, usize)], b: &[(Complex64, usize)]) -> Option<Vec<usize>> {
    if a.len() != b.len() {
        return None;
    }
    if a.is_empty() {
        return Some(Vec::new());
    }
    let mut gap = f64::INFINITY;
    for set in [a, b] {
        for i in 0..set.len() {
            for j in (i + 1)..set.len() {
                gap = gap.min((set[i].0 - set[j].0).norm());
            }
        }
    }
    let mut used = vec![false; b.len()];
    let mut perm = Vec::with_capacity(a.len());
    for (z, m) in a {
        let (j, dist) = nearest(b, *z);
        if used[j] || b[j].1 != *m || dist >= 0.5 * gap {
            return None;
        }
        let (la, lb) = (z.norm().ln(), b[j].0.norm().ln());
        if la.abs().min(lb.abs()) < NEAR_CIRCLE && (la - lb).abs() > MAX_LOG_STEP {
            return None;
        }
        used[j] = true;
        perm.push(j);
    }
    Some(perm)
}

/// Follows every nonzero zero of `det D_t` over `[0, 1]`. Steps are halved
/// until nearest-neighbour matching is unambiguous; an unresolvable step is
/// reported as a collision. When `annulus = Some((r_min, r_max))` only curves
/// that visit `r_min < |z| < r_max` are returned.
pub fn track_spectral_curves(
    path: &SymbolPath,
    annulus: Option<(f64, f64)>,
) -> Result<Vec<SpectralCurve>> {
    let start = path.zeros_at(0.0)?;
    let expected = total(&start);
    let mut curves: Vec<SpectralCurve> = start
        .iter()
        .enumerate()
        .map(|(id, &(z, m))| SpectralCurve {
            id,
            multiplicity: m,
            samples: vec![(0.0, z)],
        })
        .collect();
    let mut current = start;
    let mut t = 0.0;
    for w in path.grid.windows(2) {
        let h = (w[1] - w[0]) / BASE_SUBSTEPS as f64;
        for s in 1..=BASE_SUBSTEPS {
            let target = if s == BASE_SUBSTEPS {
                w[1]
            } else {
                w[0] + h * s as f64
            };
            current = advance(path, t, current, target, expected, &mut curves)?;
            t = target;
        }
    }
    if let Some((r_min, r_max)) = annulus {
        curves.retain(|c| {
            c.samples
                .iter()
                .any(|(_, z)| z.norm() > r_min && z.norm() < r_max)
        });
    }
    Ok(curves)
}

/// Advances all curves from `t0` (zeros `z0`, in curve order) to `t1`.
fn advance(
    path: &SymbolPath,
    t0: f64,
    z0: Vec<(Complex64, usize)>,
    t1: f64,
    expected: usize,
    curves: &mut [SpectralCurve],
) -> Result<Vec<(Complex64, usize)>> {
    let z1 = path.zeros_at(t1)?;
    if total(&z1) != expected {
        return Err(Error::ZeroCountChanged { t: t1 });
    }
    if let Some(perm) = match_zeros(&z0, &z1) {
        let next: Vec<_> = perm.iter().map(|&j| z1[j]).collect();
        for (c, &(z, _)) in curves.iter_mut().zip(&next) {
            c.samples.push((t1, z));
        }
        return Ok(next);
    }
    if t1 - t0 < MIN_STEP {
        return Err(Error::Collision { t_lo: t0, t_hi: t1 });
    }
    let mid = 0.5 * (t0 + t1);
    let zm = advance(path, t0, z0, mid, expected, curves)?;
    advance(path, mid, zm, t1, expected, curves)
}

/// Zero of `det D_t` nearest to `guess`.
fn follow(path: &SymbolPath, t: f64, guess: Complex64) -> Result<(Complex64, usize)> {
    let zs = path.zeros_at(t)?;
    if zs.is_empty() {
        return Err(Error::ZeroCountChanged { t });
    }
    Ok(zs[nearest(&zs, guess).0])
}

fn outside(z: Complex64) -> bool {
    z.norm().ln() >= 0.0
}

/// Locates the crossing on `(ta, za) .. (tb, zb)` of one curve.
fn locate(
    path: &SymbolPath,
    (mut lo, mut z_lo): (f64, Complex64),
    (mut hi, mut z_hi): (f64, Complex64),
) -> Result<(f64, Complex64, usize)> {
    let side_lo = outside(z_lo);
    let mut mult = follow(path, lo, z_lo)?.1;
    for _ in 0..200 {
        if z_lo.norm().ln().abs() < LOCATE_TOL {
            return Ok((lo, z_lo, mult));
        }
        if z_hi.norm().ln().abs() < LOCATE_TOL || hi - lo < LOCATE_TOL {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let (zm, m) = follow(path, mid, 0.5 * (z_lo + z_hi))?;
        mult = m;
        if outside(zm) == side_lo {
            lo = mid;
            z_lo = zm;
        } else {
            hi = mid;
            z_hi = zm;
        }
    }
    if z_lo.norm().ln().abs() < z_hi.norm().ln().abs() {
        Ok((lo, z_lo, mult))
    } else {
        Ok((hi, z_hi, follow(path, hi, z_hi)?.1))
    }
}

/// Spectral flow through `|z| = 1` along the path, with its crossings
/// ordered by `t`, then by `arg z`.
pub fn spectral_flow(path: &SymbolPath) -> Result<(i64, Vec<CrossingEvent>)> {
    let tol = *path.start().tolerance();
    let curves = track_spectral_curves(path, None)?;
    let mut events = Vec::new();
    for c in &curves {
        for w in c.samples.windows(2) {
            let (a, b) = (w[0], w[1]);
            if outside(a.1) == outside(b.1) {
                continue;
            }
            let (t_star, z_star, d) = locate(path, a, b)?;
            if d > 1 {
                return Err(Error::DegenerateCrossing {
                    t: t_star,
                    z: z_star,
                    d,
                });
            }
            let (tm, tp) = ((t_star - RATE_STEP).max(0.0), (t_star + RATE_STEP).min(1.0));
            let zm = follow(path, tm, z_star)?.0;
            let zp = follow(path, tp, z_star)?.0;
            let rate = (zp.norm().ln() - zm.norm().ln()) / (tp - tm);
            if !(rate.abs() > tol.zero_guard) {
                return Err(Error::TangentialCrossing { t: t_star, rate });
            }
            events.push(CrossingEvent {
                t_star,
                z_star,
                sign: if rate > 0.0 { 1 } else { -1 },
                d,
                rate,
            });
        }
    }
    events.sort_by(|a, b| {
        a.t_star
            .total_cmp(&b.t_star)
            .then(a.z_star.arg().total_cmp(&b.z_star.arg()))
    });
    let sf = events.iter().map(|e| e.sign as i64).sum();
    Ok((sf, events))
}

/// Unweighted indices at `t = 0` and `t = 1`.
pub fn endpoint_indices(path: &SymbolPath) -> Result<(i64, i64)> {
    Ok((
        symbol_index(path.start(), 0.0)?,
        symbol_index(path.end(), 0.0)?,
    ))
}
