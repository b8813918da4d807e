//! JSON wire formats.
//!
//! Matrices are row-major arrays of `[re, im]` pairs.
//!
//! * family: `{"n": 2, "T": [[[re, im], ...], ...], "A": ...}`
//! * symbol: `{"n": 1, "k_min": 0, "k_max": 1, "blocks": {"0": ..., "1": ...}}`
//!   with an optional `"cap": [{"row": 0, "col": 0, "block": ...}]`;
//!   blocks missing from the band are zero
//! * path: `{"grid": [0.0, ..., 1.0], "symbols": [symbol, ...]}`

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::endperiodic::{CapEntry, LaurentSymbol, SymbolPath};
use crate::error::{Error, Result};
use crate::family::AffineFamily;
use crate::numerics::{CMat, ComplexMatrix};

pub type MatrixWire = Vec<Vec<[f64; 2]>>;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FamilyWire {
    pub n: usize,
    #[serde(rename = "T")]
    pub t: MatrixWire,
    #[serde(rename = "A")]
    pub a: MatrixWire,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CapWire {
    pub row: usize,
    pub col: usize,
    pub block: MatrixWire,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SymbolWire {
    pub n: usize,
    pub k_min: i64,
    pub k_max: i64,
    pub blocks: BTreeMap<String, MatrixWire>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub cap: Vec<CapWire>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PathWire {
    pub grid: Vec<f64>,
    pub symbols: Vec<SymbolWire>,
}

pub fn matrix_from_wire(w: &MatrixWire, n: usize, what: &str) -> Result<ComplexMatrix> {
    if w.len() != n || w.iter().any(|r| r.len() != n) {
        return Err(Error::Dimension(format!("{what} must be {n}x{n}")));
    }
    let rows: Vec<Vec<Complex64>> = w
        .iter()
        .map(|r| r.iter().map(|&[re, im]| Complex64::new(re, im)).collect())
        .collect();
    ComplexMatrix::from_rows(&rows).map_err(|e| Error::InvalidInput(format!("{what}: {e}")))
}

pub fn matrix_to_wire(m: &CMat) -> MatrixWire {
    (0..m.nrows())
        .map(|i| {
            (0..m.ncols())
                .map(|j| [m[(i, j)].re, m[(i, j)].im])
                .collect()
        })
        .collect()
}

impl FamilyWire {
    pub fn build(&self) -> Result<AffineFamily> {
        let t = matrix_from_wire(&self.t, self.n, "T")?;
        let a = matrix_from_wire(&self.a, self.n, "A")?;
        AffineFamily::new(t, a)
    }

    pub fn from_family(f: &AffineFamily) -> Self {
        Self {
            n: f.n(),
            t: matrix_to_wire(f.t().as_matrix()),
            a: matrix_to_wire(f.a().as_matrix()),
        }
    }
}

impl SymbolWire {
    pub fn build(&self) -> Result<LaurentSymbol> {
        if self.n == 0 || self.k_min > self.k_max {
            return Err(Error::InvalidInput(format!(
                "need n >= 1 and k_min <= k_max, got n = {}, [{}, {}]",
                self.n, self.k_min, self.k_max
            )));
        }
        let mut blocks: Vec<ComplexMatrix> =
            vec![ComplexMatrix::zeros(self.n, self.n); (self.k_max - self.k_min + 1) as usize];
        for (key, w) in &self.blocks {
            let k: i64 = key
                .trim()
                .parse()
                .map_err(|_| Error::InvalidInput(format!("block key {key:?} is not an integer")))?;
            if k < self.k_min || k > self.k_max {
                return Err(Error::InvalidInput(format!(
                    "block {k} outside [{}, {}]",
                    self.k_min, self.k_max
                )));
            }
            blocks[(k - self.k_min) as usize] = matrix_from_wire(w, self.n, &format!("block {k}"))?;
        }
        LaurentSymbol::new(self.k_min, blocks)
    }

    pub fn build_cap(&self) -> Result<Vec<CapEntry>> {
        self.cap
            .iter()
            .map(|c| {
                let what = format!("cap block ({}, {})", c.row, c.col);
                Ok(CapEntry {
                    row: c.row,
                    col: c.col,
                    block: matrix_from_wire(&c.block, self.n, &what)?.into_matrix(),
                })
            })
            .collect()
    }

    pub fn from_symbol(s: &LaurentSymbol) -> Self {
        Self {
            n: s.n(),
            k_min: s.k_min(),
            k_max: s.k_max(),
            blocks: s
                .blocks()
                .map(|(k, b)| (k.to_string(), matrix_to_wire(b)))
                .collect(),
            cap: Vec::new(),
        }
    }
}

impl PathWire {
    pub fn build(&self) -> Result<SymbolPath> {
        let symbols = self
            .symbols
            .iter()
            .map(SymbolWire::build)
            .collect::<Result<Vec<_>>>()?;
        SymbolPath::new(self.grid.clone(), symbols)
    }

    pub fn from_path(p: &SymbolPath) -> Self {
        Self {
            grid: p.grid().to_vec(),
            symbols: p.symbols().iter().map(SymbolWire::from_symbol).collect(),
        }
    }
}

pub fn parse_family(json: &str) -> Result<AffineFamily> {
    serde_json::from_str::<FamilyWire>(json)?.build()
}

/// Symbol together with its optional cap.
pub fn parse_symbol(json: &str) -> Result<(LaurentSymbol, Vec<CapEntry>)> {
    let w: SymbolWire = serde_json::from_str(json)?;
    Ok((w.build()?, w.build_cap()?))
}

pub fn parse_path(json: &str) -> Result<SymbolPath> {
    serde_json::from_str::<PathWire>(json)?.build()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symbol_round_trip() {
        let json = r#"{"n": 1, "k_min": 0, "k_max": 1,
                       "blocks": {"0": [[[-0.5, 0.0]]], "1": [[[1.0, 0.0]]]}}"#;
        let (s, cap) = parse_symbol(json).unwrap();
        assert!(cap.is_empty());
        assert_eq!((s.k_min(), s.k_max()), (0, 1));
        let again = serde_json::to_string(&SymbolWire::from_symbol(&s)).unwrap();
        let (t, _) = parse_symbol(&again).unwrap();
        assert_eq!(t.block(0), s.block(0));
    }

    #[test]
    fn missing_blocks_are_zero() {
        let json = r#"{"n": 1, "k_min": -1, "k_max": 1,
                       "blocks": {"-1": [[[1.0, 0.0]]], "1": [[[1.0, 0.0]]]}}"#;
        let (s, _) = parse_symbol(json).unwrap();
        assert_eq!(s.block(0).unwrap()[(0, 0)], Complex64::new(0.0, 0.0));
    }

    #[test]
    fn cap_and_errors() {
        let json = r#"{"n": 1, "k_min": 0, "k_max": 0, "blocks": {"0": [[[2.0, 0.0]]]},
                       "cap": [{"row": 0, "col": 1, "block": [[[1.0, 0.0]]]}]}"#;
        let (_, cap) = parse_symbol(json).unwrap();
        assert_eq!((cap[0].row, cap[0].col), (0, 1));
        let bad = r#"{"n": 2, "k_min": 0, "k_max": 0, "blocks": {"0": [[[2.0, 0.0]]]}}"#;
        assert!(matches!(parse_symbol(bad), Err(Error::Dimension(_))));
        assert!(matches!(parse_symbol("{"), Err(Error::Json(_))));
    }

    #[test]
    fn family_wire() {
        let json =
            r#"{"n": 2, "T": [[[1,0],[0,0]],[[0,0],[2,0]]], "A": [[[1,0],[0,0]],[[0,0],[1,0]]]}"#;
        let f = parse_family(json).unwrap();
        assert_eq!(f.n(), 2);
        let back = serde_json::to_string(&FamilyWire::from_family(&f)).unwrap();
        assert_eq!(parse_family(&back).unwrap().n(), 2);
    }
}
