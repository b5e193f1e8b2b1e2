//! Binary download schedules for minimum-communication reconstruction.
//!
//! Column `i` of a good matrix `N` lists the partners `j` (rows with
//! `N[j][i] = 1`) for which node `i` ships the pair element `φ(u_i; u_j)·x`.
//! The six conditions checked by [`validate_good_matrix`] guarantee that every
//! unordered pair is shipped exactly once and that the load is balanced.
//!
//! Documentation numbers rows and columns from 1; storage is 0-based.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::plucker::pair_count;

/// A violated condition, with the 1-based row/column where it applies.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Violation {
    /// (1) last column must be zero.
    LastColumnNonzero { row: usize },
    /// (2) last row must be ones on columns 1..b−1.
    LastRowNotOnes { col: usize },
    /// (3) zero diagonal.
    DiagonalNonzero { index: usize },
    /// (4) exactly one of N[i][j], N[j][i] is set.
    PairNotExclusive { i: usize, j: usize },
    /// (5) even b: column weight b/2.
    EvenColumnWeight { col: usize, weight: usize },
    /// (6) odd b: column weight (b±1)/2.
    OddColumnWeight { col: usize, weight: usize },
    /// (6) odd b: total weight C(b, 2).
    TotalWeight { weight: usize },
}

impl Violation {
    /// Number of the condition this violation belongs to.
    pub fn condition(&self) -> u8 {
        match self {
            Violation::LastColumnNonzero { .. } => 1,
            Violation::LastRowNotOnes { .. } => 2,
            Violation::DiagonalNonzero { .. } => 3,
            Violation::PairNotExclusive { .. } => 4,
            Violation::EvenColumnWeight { .. } => 5,
            Violation::OddColumnWeight { .. } | Violation::TotalWeight { .. } => 6,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoodMatrix {
    b: usize,
    bits: Vec<Vec<bool>>,
}

impl GoodMatrix {
    /// Validates an arbitrary square 0/1 matrix.
    pub fn from_bits(bits: Vec<Vec<bool>>) -> Result<Self> {
        let violations = validate_good_matrix(&bits)?;
        if !violations.is_empty() {
            return Err(Error::InvalidGoodMatrix(violations));
        }
        Ok(Self { b: bits.len(), bits })
    }

    pub fn size(&self) -> usize {
        self.b
    }

    pub fn get(&self, row: usize, col: usize) -> bool {
        self.bits[row][col]
    }

    pub fn bits(&self) -> &[Vec<bool>] {
        &self.bits
    }

    pub fn column_weight(&self, col: usize) -> usize {
        self.bits.iter().filter(|r| r[col]).count()
    }

    /// Partners `j` of node `col`: rows with `N[j][col] = 1`.
    pub fn partners(&self, col: usize) -> Vec<usize> {
        (0..self.b).filter(|&j| self.bits[j][col]).collect()
    }

    /// Row-major, space-separated 0/1 grid, one row per line.
    pub fn to_grid(&self) -> String {
        let mut out = String::new();
        for row in &self.bits {
            let line: Vec<&str> = row.iter().map(|&x| if x { "1" } else { "0" }).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for GoodMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_grid())
    }
}

/// Construction for b ≥ 3: the upper-left (b−1)×(b−1) block is a first row
/// of zeros followed by ones and its successive right cyclic shifts; for odd
/// b the pairs at cyclic distance (b−1)/2 are covered by extra ones at
/// `(i, (b−1)/2 + i)`. The last column is zero and the last row is ones.
pub fn build_good_matrix(b: usize) -> Result<GoodMatrix> {
    if b < 3 {
        return Err(Error::InvalidParameters(format!(
            "good matrix needs b >= 3, got {b}"
        )));
    }
    let k = b - 1;
    let (zeros, ones) = if b % 2 == 0 {
        (b / 2, b / 2 - 1)
    } else {
        ((b + 1) / 2, (b - 3) / 2)
    };
    debug_assert_eq!(zeros + ones, k);
    let first: Vec<bool> = (0..k).map(|c| c >= zeros).collect();

    let mut bits = vec![vec![false; b]; b];
    for (r, row) in bits.iter_mut().enumerate().take(k) {
        for c in 0..k {
            // row r is the first row shifted right by r
            row[c] = first[(c + k - r) % k];
        }
    }
    if b % 2 == 1 {
        let half = (b - 1) / 2;
        for i in 0..half {
            bits[i][half + i] = true;
        }
    }
    for c in 0..k {
        bits[k][c] = true;
    }
    Ok(GoodMatrix { b, bits })
}

/// Checks all six conditions; an empty list means the matrix is good.
pub fn validate_good_matrix(bits: &[Vec<bool>]) -> Result<Vec<Violation>> {
    let b = bits.len();
    if let Some(row) = bits.iter().find(|r| r.len() != b) {
        return Err(Error::DimensionMismatch {
            expected: b,
            got: row.len(),
        });
    }
    if b < 2 {
        return Err(Error::InvalidParameters(format!("matrix of size {b}")));
    }
    let mut v = Vec::new();
    let last = b - 1;
    for (i, row) in bits.iter().enumerate() {
        if row[last] {
            v.push(Violation::LastColumnNonzero { row: i + 1 });
        }
    }
    for c in 0..last {
        if !bits[last][c] {
            v.push(Violation::LastRowNotOnes { col: c + 1 });
        }
    }
    for i in 0..b {
        if bits[i][i] {
            v.push(Violation::DiagonalNonzero { index: i + 1 });
        }
    }
    for i in 0..b {
        for j in i + 1..b {
            if bits[i][j] == bits[j][i] {
                v.push(Violation::PairNotExclusive { i: i + 1, j: j + 1 });
            }
        }
    }
    let weight = |c: usize| bits.iter().filter(|r| r[c]).count();
    if b % 2 == 0 {
        for c in 0..last {
            let w = weight(c);
            if w != b / 2 {
                v.push(Violation::EvenColumnWeight { col: c + 1, weight: w });
            }
        }
    } else {
        for c in 0..last {
            let w = weight(c);
            if w != (b - 1) / 2 && w != (b + 1) / 2 {
                v.push(Violation::OddColumnWeight { col: c + 1, weight: w });
            }
        }
        let total: usize = (0..b).map(weight).sum();
        if total != pair_count(b) {
            v.push(Violation::TotalWeight { weight: total });
        }
    }
    Ok(v)
}

/// Parses a whitespace-separated 0/1 grid.
pub fn parse_grid(text: &str) -> Result<Vec<Vec<bool>>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(n, line)| {
            line.split_whitespace()
                .map(|tok| match tok {
                    "0" => Ok(false),
                    "1" => Ok(true),
                    other => Err(Error::Parse {
                        line: n + 1,
                        message: format!("expected 0 or 1, got {other:?}"),
                    }),
                })
                .collect()
        })
        .collect()
}
