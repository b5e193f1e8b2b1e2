//! Choosing identifier vectors for the nodes, and brute-force oracles that
//! certify how many failures an assignment survives.

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{self, Matrix};
use crate::plucker::{normalized_vectors, projective_point_count, NodeVector};

/// Default cap on brute-force enumerations.
pub const DEFAULT_ENUMERATION_BUDGET: u128 = 1 << 22;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Full,
    GeneratorMatrix,
    LocalityPartition,
    Explicit,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment<E> {
    pub vectors: Vec<NodeVector<E>>,
    /// Number of simultaneous failures the set is certified to survive.
    pub claimed_resilience: Option<usize>,
    /// Largest helper set needed by local repair.
    pub claimed_locality: Option<usize>,
    pub provenance: Provenance,
}

impl<E: Copy + Eq + std::hash::Hash> Assignment<E> {
    /// An explicit list; directions must be distinct.
    pub fn explicit(vectors: Vec<NodeVector<E>>) -> Result<Self> {
        check_distinct(&vectors)?;
        Ok(Self {
            vectors,
            claimed_resilience: None,
            claimed_locality: None,
            provenance: Provenance::Explicit,
        })
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn dim(&self) -> Option<usize> {
        self.vectors.first().map(NodeVector::dim)
    }
}

fn check_distinct<E: Copy + Eq + std::hash::Hash>(vectors: &[NodeVector<E>]) -> Result<()> {
    let mut seen = std::collections::HashMap::new();
    for (i, v) in vectors.iter().enumerate() {
        if let Some(&first) = seen.get(v) {
            return Err(Error::DuplicateDirection { first, second: i });
        }
        seen.insert(v, i);
    }
    Ok(())
}

fn ensure_budget(needed: u128, budget: u128) -> Result<()> {
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    Ok(())
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Every normalized vector of F_q^b: (q^b − 1)/(q − 1) nodes.
pub fn full_assignment<F: Field>(f: &F, b: usize, budget: usize) -> Result<Assignment<F::Elem>> {
    let size = projective_point_count(f.order(), b).unwrap_or(u128::MAX);
    ensure_budget(size, budget as u128)?;
    Ok(Assignment {
        vectors: normalized_vectors(f, b),
        claimed_resilience: None,
        claimed_locality: None,
        provenance: Provenance::Full,
    })
}

/// Minimum Hamming weight of `m·G` over nonzero messages `m`.
///
/// Scaling `m` does not change the weight, so only normalized messages are
/// enumerated.
pub fn min_distance_bruteforce<F: Field>(f: &F, g: &Matrix<F::Elem>, budget: u128) -> Result<usize> {
    let k = g.rows();
    if k == 0 {
        return Err(Error::InvalidParameters("generator matrix has no rows".into()));
    }
    let needed = (f.order() as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    ensure_budget(needed, budget)?;
    let gt = g.transpose();
    let best = normalized_vectors(f, k)
        .iter()
        .map(|m| {
            linalg::mat_vec(f, &gt, m.coords())
                .into_iter()
                .filter(|&c| !f.is_zero(c))
                .count()
        })
        .min()
        .expect("at least one message");
    Ok(best)
}

/// Columns of a rank-`b` generator matrix, normalized; certified resilience
/// is `δ − 1` for the code's minimum distance `δ`.
pub fn from_generator_matrix<F: Field>(
    f: &F,
    g: &Matrix<F::Elem>,
    budget: u128,
) -> Result<Assignment<F::Elem>> {
    let b = g.rows();
    let rank = linalg::rank(f, g);
    if rank < b {
        return Err(Error::DependentNodes { rank, needed: b });
    }
    let columns = g.transpose();
    let vectors = (0..columns.rows())
        .map(|c| NodeVector::normalize(f, columns.row(c)))
        .collect::<Result<Vec<_>>>()?;
    check_distinct(&vectors)?;
    let delta = min_distance_bruteforce(f, g, budget)?;
    Ok(Assignment {
        vectors,
        claimed_resilience: Some(delta - 1),
        claimed_locality: None,
        provenance: Provenance::GeneratorMatrix,
    })
}

/// Splits `basis` into groups of `c` consecutive vectors and takes one
/// representative of every 1-subspace of each group's span.
pub fn locality_partition_assignment<F: Field>(
    f: &F,
    basis: &[NodeVector<F::Elem>],
    c: usize,
) -> Result<Assignment<F::Elem>> {
    let b = basis.len();
    if c < 2 || b % c != 0 {
        return Err(Error::InvalidParameters(format!(
            "group size {c} must be at least 2 and divide b = {b}"
        )));
    }
    if basis.iter().any(|v| v.dim() != b) {
        return Err(Error::InvalidParameters("basis vectors must have length b".into()));
    }
    let rows: Vec<Vec<F::Elem>> = basis.iter().map(|v| v.coords().to_vec()).collect();
    let rank = linalg::rank_of(f, b, &rows)?;
    if rank != b {
        return Err(Error::DependentNodes { rank, needed: b });
    }
    let coefficients = normalized_vectors(f, c);
    let mut vectors = Vec::new();
    for group in basis.chunks(c) {
        for lambda in &coefficients {
            let mut v = vec![f.zero(); b];
            for (l, a) in lambda.coords().iter().zip(group) {
                linalg::axpy(f, &mut v, *l, a.coords());
            }
            vectors.push(NodeVector::normalize(f, &v)?);
        }
    }
    let q = f.order() as usize;
    Ok(Assignment {
        vectors,
        claimed_resilience: Some(q.pow(c as u32 - 1) - 1),
        claimed_locality: Some(c),
        provenance: Provenance::LocalityPartition,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Resilience {
    Resilient,
    /// Removing these positions leaves a set that does not span F_q^b.
    Broken { witness: Vec<usize> },
}

impl Resilience {
    pub fn is_resilient(&self) -> bool {
        matches!(self, Resilience::Resilient)
    }
}

/// Exhaustively checks that removing any `t` vectors leaves a spanning set.
pub fn is_t_resilient<F: Field>(
    f: &F,
    vectors: &[NodeVector<F::Elem>],
    t: usize,
    budget: u128,
) -> Result<Resilience> {
    let Some(b) = vectors.first().map(NodeVector::dim) else {
        return Ok(Resilience::Broken { witness: Vec::new() });
    };
    let n = vectors.len();
    if t > n {
        return Ok(Resilience::Broken {
            witness: (0..n).collect(),
        });
    }
    ensure_budget(binomial(n, t), budget)?;
    let rows: Vec<Vec<F::Elem>> = vectors.iter().map(|v| v.coords().to_vec()).collect();
    for removed in (0..n).combinations(t) {
        let rest: Vec<Vec<F::Elem>> = rows
            .iter()
            .enumerate()
            .filter(|(i, _)| !removed.contains(i))
            .map(|(_, r)| r.clone())
            .collect();
        if linalg::rank_of(f, b, &rest)? < b {
            return Ok(Resilience::Broken { witness: removed });
        }
    }
    Ok(Resilience::Resilient)
}

/// Largest `t` for which the set is t-resilient, by increasing search.
pub fn max_resilience<F: Field>(f: &F, vectors: &[NodeVector<F::Elem>], budget: u128) -> Result<Option<usize>> {
    let mut best = None;
    for t in 0..=vectors.len() {
        if is_t_resilient(f, vectors, t, budget)?.is_resilient() {
            best = Some(t);
        } else {
            break;
        }
    }
    Ok(best)
}

/// Smallest independent subset of `active` (positions, registry order on ties)
/// of size at most `max_helpers` whose span contains `failed`.
pub fn find_local_repair_set<F: Field>(
    f: &F,
    active: &[NodeVector<F::Elem>],
    failed: &NodeVector<F::Elem>,
    max_helpers: usize,
) -> Option<Vec<usize>> {
    let b = failed.dim();
    for size in 1..=max_helpers.min(active.len()) {
        for subset in (0..active.len()).combinations(size) {
            let rows: Vec<Vec<F::Elem>> = subset.iter().map(|&i| active[i].coords().to_vec()).collect();
            if linalg::rank_of(f, b, &rows).ok()? != size {
                continue;
            }
            if linalg::span_contains(f, &rows, failed.coords()) {
                return Some(subset);
            }
        }
    }
    None
}

/// Matrix whose columns are the given vectors.
pub fn column_matrix<E: Copy + Eq>(vectors: &[NodeVector<E>]) -> Result<Matrix<E>> {
    let b = vectors.first().map(NodeVector::dim).unwrap_or(0);
    let rows: Vec<Vec<E>> = vectors.iter().map(|v| v.coords().to_vec()).collect();
    Ok(Matrix::from_rows(b, &rows)?.transpose())
}

/// Reads a whitespace-separated matrix of canonical integers, one row per
/// line; `#` starts a comment.
pub fn parse_matrix<F: Field>(f: &F, text: &str) -> Result<Matrix<F::Elem>> {
    let mut rows = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let row = line
            .split_whitespace()
            .map(|tok| {
                let v: u64 = tok.parse().map_err(|_| Error::Parse {
                    line: n + 1,
                    message: format!("not an integer: {tok:?}"),
                })?;
                f.element(v).map_err(|e| Error::Parse {
                    line: n + 1,
                    message: e.to_string(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        if let Some(first) = rows.first().map(Vec::len) {
            if row.len() != first {
                return Err(Error::Parse {
                    line: n + 1,
                    message: format!("expected {first} entries, found {}", row.len()),
                });
            }
        }
        rows.push(row);
    }
    let cols = rows.first().map(Vec::len).unwrap_or(0);
    Matrix::from_rows(cols, &rows)
}

/// One vector per row; rows are normalized.
pub fn parse_vectors<F: Field>(f: &F, text: &str) -> Result<Vec<NodeVector<F::Elem>>> {
    let m = parse_matrix(f, text)?;
    (0..m.rows())
        .map(|r| NodeVector::normalize(f, m.row(r)))
        .collect()
}

/// Inverse of [`parse_vectors`].
pub fn format_vectors<F: Field>(f: &F, vectors: &[NodeVector<F::Elem>]) -> String {
    let mut out = String::new();
    for v in vectors {
        let line: Vec<String> = v.coords().iter().map(|&c| f.value(c).to_string()).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}
