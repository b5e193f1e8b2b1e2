//! Dense matrices and schoolbook Gaussian elimination over a [`Field`].
//!
//! Row reduction records every elementary row operation it performs, so the
//! same operations can be replayed on a right-hand side (or on any vector of
//! values `M·x` known only through `M`'s rows).

use crate::error::{Error, Result};
use crate::field::Field;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

impl<E: Copy> Matrix<E> {
    pub fn zeros<F: Field<Elem = E>>(f: &F, rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![f.zero(); rows * cols],
        }
    }

    pub fn identity<F: Field<Elem = E>>(f: &F, n: usize) -> Self {
        let mut m = Self::zeros(f, n, n);
        for i in 0..n {
            m.set(i, i, f.one());
        }
        m
    }

    /// Builds a matrix from equal-length rows. `cols` is needed for the
    /// zero-row case.
    pub fn from_rows(cols: usize, rows: &[Vec<E>]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    got: r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> E {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: E) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[E] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<E>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                data.push(self.get(r, c));
            }
        }
        Self {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn push_row(&mut self, row: &[E]) -> Result<()> {
        if row.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: row.len(),
            });
        }
        self.data.extend_from_slice(row);
        self.rows += 1;
        Ok(())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }
}

/// One elementary row operation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowOp<E> {
    Swap(usize, usize),
    Scale { row: usize, by: E },
    /// `row[target] += factor * row[source]`
    AddMultiple { target: usize, source: usize, factor: E },
}

impl<E: Copy> RowOp<E> {
    pub fn apply<F: Field<Elem = E>>(&self, f: &F, values: &mut [E]) {
        match *self {
            RowOp::Swap(a, b) => values.swap(a, b),
            RowOp::Scale { row, by } => values[row] = f.mul(values[row], by),
            RowOp::AddMultiple {
                target,
                source,
                factor,
            } => values[target] = f.mul_add(factor, values[source], values[target]),
        }
    }
}

/// Reduced row echelon form plus the transcript that produced it.
#[derive(Debug, Clone)]
pub struct Echelon<E> {
    pub reduced: Matrix<E>,
    /// Pivot column of each of the first `rank` rows.
    pub pivots: Vec<usize>,
    pub ops: Vec<RowOp<E>>,
}

impl<E: Copy> Echelon<E> {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Applies the recorded row operations, in order, to a column of values.
    pub fn replay<F: Field<Elem = E>>(&self, f: &F, values: &mut [E]) {
        for op in &self.ops {
            op.apply(f, values);
        }
    }
}

/// Gauss-Jordan elimination to reduced row echelon form.
pub fn row_reduce<F: Field>(f: &F, mut m: Matrix<F::Elem>) -> Echelon<F::Elem> {
    let mut ops = Vec::new();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..m.cols {
        if r == m.rows {
            break;
        }
        let Some(p) = (r..m.rows).find(|&i| !f.is_zero(m.get(i, c))) else {
            continue;
        };
        if p != r {
            m.swap_rows(p, r);
            ops.push(RowOp::Swap(p, r));
        }
        let lead = m.get(r, c);
        if lead != f.one() {
            let by = f.inv(lead).expect("pivot is nonzero");
            for k in c..m.cols {
                m.set(r, k, f.mul(m.get(r, k), by));
            }
            ops.push(RowOp::Scale { row: r, by });
        }
        for i in 0..m.rows {
            if i == r {
                continue;
            }
            let v = m.get(i, c);
            if f.is_zero(v) {
                continue;
            }
            let factor = f.neg(v);
            for k in c..m.cols {
                let updated = f.mul_add(factor, m.get(r, k), m.get(i, k));
                m.set(i, k, updated);
            }
            ops.push(RowOp::AddMultiple {
                target: i,
                source: r,
                factor,
            });
        }
        pivots.push(c);
        r += 1;
    }
    Echelon {
        reduced: m,
        pivots,
        ops,
    }
}

pub fn rank<F: Field>(f: &F, m: &Matrix<F::Elem>) -> usize {
    row_reduce(f, m.clone()).rank()
}

/// Rank of a list of equal-length vectors.
pub fn rank_of<F: Field>(f: &F, len: usize, rows: &[Vec<F::Elem>]) -> Result<usize> {
    Ok(rank(f, &Matrix::from_rows(len, rows)?))
}

/// Result of [`solve`].
#[derive(Debug, Clone)]
pub struct Solution<E> {
    /// A solution; free variables are set to zero.
    pub x: Vec<E>,
    pub rank: usize,
    /// Row operations that reduced the coefficient matrix.
    pub transcript: Vec<RowOp<E>>,
}

impl<E> Solution<E> {
    pub fn is_unique(&self) -> bool {
        self.rank == self.x.len()
    }
}

/// Solves `a · x = w` exactly.
pub fn solve<F: Field>(f: &F, a: &Matrix<F::Elem>, w: &[F::Elem]) -> Result<Solution<F::Elem>> {
    if w.len() != a.rows() {
        return Err(Error::DimensionMismatch {
            expected: a.rows(),
            got: w.len(),
        });
    }
    let ech = row_reduce(f, a.clone());
    let mut rhs = w.to_vec();
    ech.replay(f, &mut rhs);
    let rank = ech.rank();
    if rhs[rank..].iter().any(|&v| !f.is_zero(v)) {
        return Err(Error::Inconsistent { rank });
    }
    let mut x = vec![f.zero(); a.cols()];
    for (k, &c) in ech.pivots.iter().enumerate() {
        x[c] = rhs[k];
    }
    Ok(Solution {
        x,
        rank,
        transcript: ech.ops,
    })
}

pub fn mat_vec<F: Field>(f: &F, a: &Matrix<F::Elem>, x: &[F::Elem]) -> Vec<F::Elem> {
    (0..a.rows()).map(|r| dot(f, a.row(r), x)).collect()
}

pub fn dot<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> F::Elem {
    a.iter()
        .zip(b)
        .fold(f.zero(), |acc, (&x, &y)| f.mul_add(x, y, acc))
}

/// `acc += factor * v`
pub fn axpy<F: Field>(f: &F, acc: &mut [F::Elem], factor: F::Elem, v: &[F::Elem]) {
    for (a, &x) in acc.iter_mut().zip(v) {
        *a = f.mul_add(factor, x, *a);
    }
}

/// Coefficients γ with `Σ γ_t · vectors[t] = target`, if `target` lies in the span.
pub fn express_in_span<F: Field>(
    f: &F,
    vectors: &[Vec<F::Elem>],
    target: &[F::Elem],
) -> Result<Vec<F::Elem>> {
    let a = Matrix::from_rows(target.len(), vectors)?.transpose();
    Ok(solve(f, &a, target)?.x)
}

pub fn span_contains<F: Field>(f: &F, vectors: &[Vec<F::Elem>], target: &[F::Elem]) -> bool {
    express_in_span(f, vectors, target).is_ok()
}

/// Equality of row spaces, by rank.
pub fn same_row_space<F: Field>(
    f: &F,
    len: usize,
    a: &[Vec<F::Elem>],
    b: &[Vec<F::Elem>],
) -> Result<bool> {
    let ra = rank_of(f, len, a)?;
    let rb = rank_of(f, len, b)?;
    let stacked: Vec<_> = a.iter().chain(b).cloned().collect();
    let rs = rank_of(f, len, &stacked)?;
    Ok(ra == rb && rs == ra)
}

/// `dim(⟨a⟩ ∩ ⟨b⟩) = rank(a) + rank(b) − rank(a ∪ b)`.
pub fn intersection_dim<F: Field>(
    f: &F,
    len: usize,
    a: &[Vec<F::Elem>],
    b: &[Vec<F::Elem>],
) -> Result<usize> {
    let stacked: Vec<_> = a.iter().chain(b).cloned().collect();
    Ok(rank_of(f, len, a)? + rank_of(f, len, b)? - rank_of(f, len, &stacked)?)
}
