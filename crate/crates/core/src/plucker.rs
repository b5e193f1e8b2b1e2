//! The Plücker embedding of pairs of vectors and the codeword subspaces built
//! from it.
//!
//! Indices are 0-based throughout. A [`PluckerVector`] has one coordinate per
//! pair `(i, j)`, `i < j < b`, in lexicographic order; coordinate `(i, j)` of
//! `φ(v; u)` is the 2×2 minor `v_i·u_j − v_j·u_i`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg;

/// B = C(b, 2).
pub fn pair_count(b: usize) -> usize {
    b * b.saturating_sub(1) / 2
}

/// Lexicographic rank of the pair `(i, j)` among all pairs of `0..b`.
pub fn pair_index(i: usize, j: usize, b: usize) -> Result<usize> {
    if i >= j || j >= b {
        return Err(Error::InvalidPair { i, j, b });
    }
    Ok(pair_index_unchecked(i, j, b))
}

#[inline]
fn pair_index_unchecked(i: usize, j: usize, b: usize) -> usize {
    i * (b - 1) - i * i.saturating_sub(1) / 2 + (j - i - 1)
}

/// All pairs `(i, j)` with `i < j < b`, in coordinate order.
pub fn pairs(b: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..b).flat_map(move |i| (i + 1..b).map(move |j| (i, j)))
}

/// Normalized identifier of a 1-subspace of F_q^b: nonzero, leftmost nonzero
/// entry equal to one.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NodeVector<E> {
    coords: Vec<E>,
    pivot: usize,
}

impl<E: Copy + Eq> NodeVector<E> {
    /// Accepts an already normalized vector.
    pub fn new<F: Field<Elem = E>>(f: &F, coords: Vec<E>) -> Result<Self> {
        let pivot = coords
            .iter()
            .position(|&c| !f.is_zero(c))
            .ok_or(Error::ZeroVector)?;
        if coords[pivot] != f.one() {
            return Err(Error::NotNormalized);
        }
        Ok(Self { coords, pivot })
    }

    /// Scales a nonzero vector so its leftmost nonzero entry is one.
    pub fn normalize<F: Field<Elem = E>>(f: &F, raw: &[E]) -> Result<Self> {
        let pivot = raw
            .iter()
            .position(|&c| !f.is_zero(c))
            .ok_or(Error::ZeroVector)?;
        let s = f.inv(raw[pivot])?;
        let coords = raw.iter().map(|&c| f.mul(c, s)).collect();
        Ok(Self { coords, pivot })
    }

    pub fn from_values<F: Field<Elem = E>>(f: &F, values: &[u64]) -> Result<Self> {
        let coords = values
            .iter()
            .map(|&v| f.element(v))
            .collect::<Result<Vec<_>>>()?;
        Self::new(f, coords)
    }

    /// The unit vector e_i in F_q^b.
    pub fn unit<F: Field<Elem = E>>(f: &F, b: usize, i: usize) -> Self {
        let mut coords = vec![f.zero(); b];
        coords[i] = f.one();
        Self { coords, pivot: i }
    }

    pub fn coords(&self) -> &[E] {
        &self.coords
    }

    /// Index r(v) of the leftmost nonzero entry.
    pub fn pivot(&self) -> usize {
        self.pivot
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coord(&self, i: usize) -> E {
        self.coords[i]
    }
}

/// Dense vector indexed by pairs of `0..b`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PluckerVector<E> {
    entries: Vec<E>,
}

impl<E: Copy> PluckerVector<E> {
    pub fn entries(&self) -> &[E] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<E> {
        self.entries
    }

    pub fn is_zero<F: Field<Elem = E>>(&self, f: &F) -> bool {
        self.entries.iter().all(|&e| f.is_zero(e))
    }

    pub fn dot<F: Field<Elem = E>>(&self, f: &F, x: &[E]) -> E {
        linalg::dot(f, &self.entries, x)
    }
}

/// Sparse row of (coordinate, value) entries, coordinates increasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseRow<E> {
    entries: Vec<(usize, E)>,
}

impl<E: Copy> SparseRow<E> {
    pub fn entries(&self) -> &[(usize, E)] {
        &self.entries
    }

    pub fn dot<F: Field<Elem = E>>(&self, f: &F, x: &[E]) -> E {
        self.entries
            .iter()
            .fold(f.zero(), |acc, &(k, v)| f.mul_add(v, x[k], acc))
    }

    pub fn to_dense<F: Field<Elem = E>>(&self, f: &F, len: usize) -> Vec<E> {
        let mut out = vec![f.zero(); len];
        for &(k, v) in &self.entries {
            out[k] = v;
        }
        out
    }
}

/// φ(v; u) for raw vectors of equal length.
pub fn plucker_embed<F: Field>(f: &F, v: &[F::Elem], u: &[F::Elem]) -> Result<PluckerVector<F::Elem>> {
    if v.len() != u.len() {
        return Err(Error::DimensionMismatch {
            expected: v.len(),
            got: u.len(),
        });
    }
    let entries = pairs(v.len())
        .map(|(i, j)| f.sub(f.mul(v[i], u[j]), f.mul(v[j], u[i])))
        .collect();
    Ok(PluckerVector { entries })
}

/// φ(v; e_j), sparse: `v_i` at `(i, j)` for `i < j` and `−v_k` at `(j, k)` for `k > j`.
pub fn unit_row<F: Field>(f: &F, v: &[F::Elem], j: usize) -> SparseRow<F::Elem> {
    let b = v.len();
    let mut entries = Vec::with_capacity(b - 1);
    for i in 0..j {
        if !f.is_zero(v[i]) {
            entries.push((pair_index_unchecked(i, j, b), v[i]));
        }
    }
    for k in j + 1..b {
        if !f.is_zero(v[k]) {
            entries.push((pair_index_unchecked(j, k, b), f.neg(v[k])));
        }
    }
    SparseRow { entries }
}

/// Basis of the codeword subspace P_V: rows φ(v; e_j) for `j` in `indices`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodewordBasis<E> {
    owner: NodeVector<E>,
    indices: Vec<usize>,
    rows: Vec<SparseRow<E>>,
}

impl<E: Copy + Eq> CodewordBasis<E> {
    pub fn owner(&self) -> &NodeVector<E> {
        &self.owner
    }

    /// Unit index `j` of each row.
    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn rows(&self) -> &[SparseRow<E>] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn dense_rows<F: Field<Elem = E>>(&self, f: &F) -> Vec<Vec<E>> {
        let len = pair_count(self.owner.dim());
        self.rows.iter().map(|r| r.to_dense(f, len)).collect()
    }

    /// The stored payload `M_v · x`.
    pub fn apply<F: Field<Elem = E>>(&self, f: &F, x: &[E]) -> Vec<E> {
        self.rows.iter().map(|r| r.dot(f, x)).collect()
    }
}

fn basis_without<F: Field>(f: &F, v: &NodeVector<F::Elem>, omit: usize) -> CodewordBasis<F::Elem> {
    let indices: Vec<usize> = (0..v.dim()).filter(|&j| j != omit).collect();
    let rows = indices.iter().map(|&j| unit_row(f, v.coords(), j)).collect();
    CodewordBasis {
        owner: v.clone(),
        indices,
        rows,
    }
}

/// The (b−1)-row basis `M_v` of P_V: rows φ(v; e_j), `j ≠ r(v)`, `j` increasing.
pub fn codeword_basis<F: Field>(f: &F, v: &NodeVector<F::Elem>) -> CodewordBasis<F::Elem> {
    let basis = basis_without(f, v, v.pivot());
    debug_assert_eq!(
        linalg::rank_of(f, pair_count(v.dim()), &basis.dense_rows(f)).ok(),
        Some(v.dim() - 1)
    );
    basis
}

/// Rows φ(v; e_i) for `i ≠ s`; spans P_V whenever `v_s ≠ 0`.
pub fn basis_omit<F: Field>(
    f: &F,
    v: &NodeVector<F::Elem>,
    s: usize,
) -> Result<CodewordBasis<F::Elem>> {
    if s >= v.dim() {
        return Err(Error::DimensionMismatch {
            expected: v.dim(),
            got: s,
        });
    }
    if f.is_zero(v.coord(s)) {
        return Err(Error::ZeroCoordinate { index: s });
    }
    Ok(basis_without(f, v, s))
}

/// Completes a payload `(φ(v; e_j)·x)_{j ≠ r(v)}` to all `b` values using
/// `Σ_j v_j · φ(v; e_j) = 0`.
pub fn extend_payload<F: Field>(
    f: &F,
    v: &NodeVector<F::Elem>,
    payload: &[F::Elem],
) -> Result<Vec<F::Elem>> {
    let b = v.dim();
    if payload.len() + 1 != b {
        return Err(Error::DimensionMismatch {
            expected: b - 1,
            got: payload.len(),
        });
    }
    let r = v.pivot();
    let mut full = Vec::with_capacity(b);
    full.extend_from_slice(&payload[..r]);
    full.push(f.zero());
    full.extend_from_slice(&payload[r..]);
    // v_r = 1, so z_r = −Σ_{j≠r} v_j z_j
    let sum = (0..b)
        .filter(|&j| j != r)
        .fold(f.zero(), |acc, j| f.mul_add(v.coord(j), full[j], acc));
    full[r] = f.neg(sum);
    Ok(full)
}

/// `φ(v; e_s)·x` recovered from the payload; requires `v_s ≠ 0`.
pub fn missing_payload_element<F: Field>(
    f: &F,
    v: &NodeVector<F::Elem>,
    payload: &[F::Elem],
    s: usize,
) -> Result<F::Elem> {
    if s >= v.dim() {
        return Err(Error::DimensionMismatch {
            expected: v.dim(),
            got: s,
        });
    }
    if f.is_zero(v.coord(s)) {
        return Err(Error::ZeroCoordinate { index: s });
    }
    let full = extend_payload(f, v, payload)?;
    Ok(full[s])
}

/// φ(u; v), the generator of P_U ∩ P_V for distinct 1-subspaces.
pub fn intersection_vector<F: Field>(
    f: &F,
    u: &NodeVector<F::Elem>,
    v: &NodeVector<F::Elem>,
) -> Result<PluckerVector<F::Elem>> {
    let phi = plucker_embed(f, u.coords(), v.coords())?;
    if phi.is_zero(f) {
        return Err(Error::DependentVectors);
    }
    Ok(phi)
}

/// All normalized vectors of F_q^b in canonical order: pivot position
/// ascending, then the trailing entries lexicographically.
pub fn normalized_vectors<F: Field>(f: &F, b: usize) -> Vec<NodeVector<F::Elem>> {
    let elems = f.elements();
    let q = elems.len();
    let mut out = Vec::new();
    for pivot in 0..b {
        let tail = b - pivot - 1;
        let count = q.pow(tail as u32);
        for idx in 0..count {
            let mut coords = vec![f.zero(); b];
            coords[pivot] = f.one();
            let mut rest = idx;
            for k in (pivot + 1..b).rev() {
                coords[k] = elems[rest % q];
                rest /= q;
            }
            out.push(NodeVector { coords, pivot });
        }
    }
    out
}

/// (q^b − 1)/(q − 1), or `None` on overflow.
pub fn projective_point_count(q: u64, b: usize) -> Option<u128> {
    let qb = (q as u128).checked_pow(b as u32)?;
    Some((qb - 1) / (q as u128 - 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::linalg::same_row_space;
    use crate::FieldElement;

    fn gf(q: u64) -> FieldSpec {
        FieldSpec::from_order(q).unwrap()
    }

    fn vals(f: &FieldSpec, v: &[u64]) -> Vec<FieldElement> {
        v.iter().map(|&x| f.element(x).unwrap()).collect()
    }

    #[test]
    fn pair_indices() {
        assert_eq!(pair_index(0, 1, 6).unwrap(), 0);
        assert_eq!(pair_index(4, 5, 6).unwrap(), 14);
        assert_eq!(pair_index(1, 2, 6).unwrap(), 5);
        assert!(pair_index(2, 2, 6).is_err());
        assert!(pair_index(3, 1, 6).is_err());
        for b in 2..12 {
            for (k, (i, j)) in pairs(b).enumerate() {
                assert_eq!(pair_index(i, j, b).unwrap(), k);
            }
            assert_eq!(pairs(b).count(), pair_count(b));
        }
    }

    #[test]
    fn embed_examples() {
        let f = gf(2);
        let e0 = NodeVector::unit(&f, 4, 0);
        let e1 = NodeVector::unit(&f, 4, 1);
        let phi = plucker_embed(&f, e0.coords(), e1.coords()).unwrap();
        assert_eq!(phi.entries(), vals(&f, &[1, 0, 0, 0, 0, 0]).as_slice());

        let v = vals(&f, &[1, 1, 0]);
        assert!(plucker_embed(&f, &v, &v).unwrap().is_zero(&f));
        let u = vals(&f, &[0, 1, 1]);
        assert_eq!(plucker_embed(&f, &v, &u).unwrap().entries(), vals(&f, &[1, 1, 1]).as_slice());

        assert!(plucker_embed(&f, &v, &vals(&f, &[1, 0])).is_err());
    }

    #[test]
    fn unit_row_matches_dense_embedding() {
        let f = gf(5);
        let v = vals(&f, &[0, 1, 3, 4, 2]);
        for j in 0..5 {
            let mut e = vec![f.zero(); 5];
            e[j] = f.one();
            let dense = plucker_embed(&f, &v, &e).unwrap();
            assert_eq!(unit_row(&f, &v, j).to_dense(&f, 10), dense.entries());
        }
    }

    #[test]
    fn codeword_basis_examples() {
        let f = gf(2);
        let e0 = NodeVector::unit(&f, 3, 0);
        let basis = codeword_basis(&f, &e0);
        assert_eq!(basis.dense_rows(&f), vec![vals(&f, &[1, 0, 0]), vals(&f, &[0, 1, 0])]);
        assert_eq!(basis.indices(), &[1, 2]);

        let v = NodeVector::from_values(&f, &[1, 1, 0]).unwrap();
        let basis = codeword_basis(&f, &v);
        assert_eq!(basis.len(), 2);
        for (row, &j) in basis.dense_rows(&f).iter().zip(basis.indices()) {
            let mut e = vec![f.zero(); 3];
            e[j] = f.one();
            assert_eq!(row, plucker_embed(&f, v.coords(), &e).unwrap().entries());
        }
        assert_eq!(basis.dense_rows(&f)[0], vals(&f, &[1, 0, 0]));
    }

    #[test]
    fn basis_omit_examples() {
        let f = gf(2);
        let v = NodeVector::from_values(&f, &[1, 1, 0]).unwrap();
        assert_eq!(basis_omit(&f, &v, 0).unwrap(), codeword_basis(&f, &v));
        let omit1 = basis_omit(&f, &v, 1).unwrap();
        assert_eq!(omit1.indices(), &[0, 2]);
        assert!(same_row_space(&f, 3, &omit1.dense_rows(&f), &codeword_basis(&f, &v).dense_rows(&f)).unwrap());
        let e0 = NodeVector::unit(&f, 3, 0);
        assert_eq!(basis_omit(&f, &e0, 1), Err(Error::ZeroCoordinate { index: 1 }));
    }

    #[test]
    fn missing_element_examples() {
        let f = gf(2);
        let e0 = NodeVector::unit(&f, 3, 0);
        let z = missing_payload_element(&f, &e0, &vals(&f, &[1, 1]), 0).unwrap();
        assert_eq!(z, f.zero());

        // v = (1,1,0): z_0 = z_1 over GF(2)
        let v = NodeVector::from_values(&f, &[1, 1, 0]).unwrap();
        for (z1, z2) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            let got = missing_payload_element(&f, &v, &vals(&f, &[z1, z2]), 0).unwrap();
            assert_eq!(got, f.element(z1).unwrap());
        }
        assert_eq!(
            missing_payload_element(&f, &v, &vals(&f, &[0, 0]), 2),
            Err(Error::ZeroCoordinate { index: 2 })
        );
    }

    #[test]
    fn intersection_examples() {
        let f = gf(3);
        let e0 = NodeVector::unit(&f, 3, 0);
        let e1 = NodeVector::unit(&f, 3, 1);
        assert_eq!(
            intersection_vector(&f, &e0, &e1).unwrap().entries(),
            vals(&f, &[1, 0, 0]).as_slice()
        );
        assert_eq!(intersection_vector(&f, &e0, &e0), Err(Error::DependentVectors));
        let u = NodeVector::from_values(&f, &[1, 2, 0]).unwrap();
        let a = intersection_vector(&f, &u, &e1).unwrap();
        let b = intersection_vector(&f, &e1, &u).unwrap();
        let neg: Vec<_> = b.entries().iter().map(|&x| f.neg(x)).collect();
        assert_eq!(a.entries(), neg.as_slice());
    }

    #[test]
    fn normalize_and_enumerate() {
        let f = gf(3);
        let v = NodeVector::normalize(&f, &vals(&f, &[0, 2, 1])).unwrap();
        assert_eq!(v.coords(), vals(&f, &[0, 1, 2]).as_slice());
        assert_eq!(v.pivot(), 1);
        assert_eq!(NodeVector::new(&f, vals(&f, &[0, 2, 1])), Err(Error::NotNormalized));
        assert_eq!(NodeVector::new(&f, vals(&f, &[0, 0])), Err(Error::ZeroVector));

        let all = normalized_vectors(&f, 2);
        let got: Vec<Vec<u64>> = all
            .iter()
            .map(|v| v.coords().iter().map(|&c| f.value(c)).collect())
            .collect();
        assert_eq!(got, vec![vec![1, 0], vec![1, 1], vec![1, 2], vec![0, 1]]);
        assert_eq!(normalized_vectors(&gf(2), 4).len(), 15);
        assert_eq!(projective_point_count(2, 3), Some(7));
        assert_eq!(projective_point_count(5, 4), Some(156));
    }
}
