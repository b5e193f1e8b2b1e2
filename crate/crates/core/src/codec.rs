//! Storage, repair, reconstruction and modification.
//!
//! A file `x ∈ F_q^B`, `B = C(b, 2)`, is stored on node `v` as the payload
//! `M_v · x`, the `b − 1` values `φ(v; e_j)·x` for `j ≠ r(v)`. Every routine
//! here works only from the payloads it is handed; the ground-truth file is
//! never consulted.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::goodmatrix::{validate_good_matrix, GoodMatrix};
use crate::linalg::{self, Matrix};
use crate::plucker::{
    codeword_basis, extend_payload, pair_count, pair_index, plucker_embed, projective_point_count,
    unit_row, NodeVector,
};

/// Parameters of one storage system.
#[derive(Debug, Clone)]
pub struct SystemConfig<F: Field> {
    field: F,
    b: usize,
    n: usize,
}

impl<F: Field> SystemConfig<F> {
    /// Requires `b ≥ 3` and `b ≤ n ≤ (q^b − 1)/(q − 1)`.
    pub fn new(field: F, b: usize, n: usize) -> Result<Self> {
        if b < 3 {
            return Err(Error::InvalidParameters(format!("b must be at least 3, got {b}")));
        }
        let max = projective_point_count(field.order(), b).unwrap_or(u128::MAX);
        if n < b || n as u128 > max {
            return Err(Error::InvalidParameters(format!(
                "node count {n} outside [{b}, {max}]"
            )));
        }
        Ok(Self { field, b, n })
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn b(&self) -> usize {
        self.b
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// File length B.
    pub fn file_len(&self) -> usize {
        pair_count(self.b)
    }

    /// Per-node storage α = b − 1.
    pub fn alpha(&self) -> usize {
        self.b - 1
    }

    /// Per-helper download β in minimum-bandwidth repair.
    pub fn beta(&self) -> usize {
        1
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeState<E> {
    pub id: NodeVector<E>,
    /// `φ(id; e_j)·x` for `j ≠ r(id)`, `j` increasing.
    pub payload: Vec<E>,
    pub alive: bool,
}

impl<E: Copy + Eq> NodeState<E> {
    pub fn new(id: NodeVector<E>, payload: Vec<E>) -> Self {
        Self {
            id,
            payload,
            alive: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RepairMode {
    /// One element from each of b−1 or b helpers.
    MinBandwidth { omitted: usize },
    /// Whole payloads from a few helpers spanning the failed vector.
    Local,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepairPlan<E> {
    pub failed: NodeVector<E>,
    pub helpers: Vec<NodeVector<E>>,
    /// Positions of the helpers in the node list the plan was built from.
    pub helper_indices: Vec<usize>,
    pub mode: RepairMode,
}

fn check_file_len<E>(b: usize, x: &[E]) -> Result<()> {
    let expected = pair_count(b);
    if x.len() != expected {
        return Err(Error::WrongFileLength {
            expected,
            got: x.len(),
        });
    }
    Ok(())
}

/// `M_v · x` for a single node.
pub fn encode_node<F: Field>(f: &F, v: &NodeVector<F::Elem>, x: &[F::Elem]) -> Result<Vec<F::Elem>> {
    check_file_len(v.dim(), x)?;
    Ok(codeword_basis(f, v).apply(f, x))
}

/// Initial storage: each node receives `M_v · x`.
pub fn encode_store<F: Field>(
    f: &F,
    x: &[F::Elem],
    assignment: &[NodeVector<F::Elem>],
) -> Result<Vec<NodeState<F::Elem>>> {
    let Some(first) = assignment.first() else {
        return Ok(Vec::new());
    };
    let b = first.dim();
    check_file_len(b, x)?;
    let mut seen = std::collections::HashMap::new();
    for (i, v) in assignment.iter().enumerate() {
        if v.dim() != b {
            return Err(Error::DimensionMismatch {
                expected: b,
                got: v.dim(),
            });
        }
        // normalized vectors are equal iff they span the same 1-subspace
        if let Some(&first) = seen.get(v) {
            return Err(Error::DuplicateDirection { first, second: i });
        }
        seen.insert(v.clone(), i);
    }
    assignment
        .iter()
        .map(|v| Ok(NodeState::new(v.clone(), encode_node(f, v, x)?)))
        .collect()
}

fn vectors_rank<F: Field>(f: &F, b: usize, vs: &[&NodeVector<F::Elem>]) -> usize {
    let rows: Vec<Vec<F::Elem>> = vs.iter().map(|v| v.coords().to_vec()).collect();
    linalg::rank_of(f, b, &rows).expect("equal lengths")
}

/// Greedy scan in list order keeping candidates that raise the rank, up to `target`.
fn greedy_independent<F: Field>(
    f: &F,
    b: usize,
    candidates: impl Iterator<Item = (usize, NodeVector<F::Elem>)>,
    target: usize,
) -> Vec<(usize, NodeVector<F::Elem>)> {
    let mut chosen: Vec<(usize, NodeVector<F::Elem>)> = Vec::new();
    for (i, v) in candidates {
        if chosen.len() == target {
            break;
        }
        let mut probe: Vec<&NodeVector<F::Elem>> = chosen.iter().map(|(_, c)| c).collect();
        probe.push(&v);
        if vectors_rank(f, b, &probe) == probe.len() {
            chosen.push((i, v));
        }
    }
    chosen
}

/// Chooses helpers for minimum-bandwidth repair of `failed`.
///
/// For each `s` with `failed_s ≠ 0`, in increasing order, looks for b−1 alive
/// nodes spanning the coordinate hyperplane `⟨e_t⟩_{t≠s}`; otherwise falls
/// back to any b independent alive nodes (with `s = r(failed)`).
pub fn plan_min_bw_repair<F: Field>(
    f: &F,
    failed: &NodeVector<F::Elem>,
    active: &[NodeState<F::Elem>],
) -> Result<RepairPlan<F::Elem>> {
    let b = failed.dim();
    let alive = || {
        active
            .iter()
            .enumerate()
            .filter(|(_, n)| n.alive && n.id.dim() == b && n.id != *failed)
            .map(|(i, n)| (i, n.id.clone()))
    };
    for s in (0..b).filter(|&s| !f.is_zero(failed.coord(s))) {
        let in_hyperplane = alive().filter(|(_, v)| f.is_zero(v.coord(s)));
        let chosen = greedy_independent(f, b, in_hyperplane, b - 1);
        if chosen.len() == b - 1 {
            return Ok(make_plan(failed, chosen, RepairMode::MinBandwidth { omitted: s }));
        }
    }
    let chosen = greedy_independent(f, b, alive(), b);
    if chosen.len() == b {
        return Ok(make_plan(
            failed,
            chosen,
            RepairMode::MinBandwidth {
                omitted: failed.pivot(),
            },
        ));
    }
    Err(Error::Unrepairable(format!(
        "alive nodes span dimension {} and no coordinate hyperplane avoiding the failed vector",
        chosen.len()
    )))
}

fn make_plan<E: Copy + Eq>(
    failed: &NodeVector<E>,
    chosen: Vec<(usize, NodeVector<E>)>,
    mode: RepairMode,
) -> RepairPlan<E> {
    let (helper_indices, helpers) = chosen.into_iter().unzip();
    RepairPlan {
        failed: failed.clone(),
        helpers,
        helper_indices,
        mode,
    }
}

/// `φ(u; v)·x`, computed by the helper `u` from its own payload alone.
pub fn helper_pair_share<F: Field>(
    f: &F,
    helper: &NodeState<F::Elem>,
    target: &NodeVector<F::Elem>,
) -> Result<F::Elem> {
    if helper.id.dim() != target.dim() {
        return Err(Error::DimensionMismatch {
            expected: helper.id.dim(),
            got: target.dim(),
        });
    }
    if helper.id == *target {
        return Err(Error::DependentVectors);
    }
    let full = extend_payload(f, &helper.id, &helper.payload)?;
    Ok(linalg::dot(f, target.coords(), &full))
}

/// Rebuilds the failed payload from one share per helper.
///
/// With `z_t = φ(v; e_t)·x`, each share is `φ(u; v)·x = −Σ_t u_t z_t`, and
/// `Σ_t v_t z_t = 0`. Under the plan's span condition this system in `z` has
/// full column rank.
pub fn min_bw_repair_assemble<F: Field>(
    f: &F,
    plan: &RepairPlan<F::Elem>,
    shares: &[F::Elem],
) -> Result<Vec<F::Elem>> {
    if shares.len() != plan.helpers.len() {
        return Err(Error::DimensionMismatch {
            expected: plan.helpers.len(),
            got: shares.len(),
        });
    }
    let v = &plan.failed;
    let b = v.dim();
    let mut rows: Vec<Vec<F::Elem>> = plan
        .helpers
        .iter()
        .map(|u| u.coords().iter().map(|&c| f.neg(c)).collect())
        .collect();
    rows.push(v.coords().to_vec());
    let mut rhs = shares.to_vec();
    rhs.push(f.zero());
    let a = Matrix::from_rows(b, &rows)?;
    let sol = linalg::solve(f, &a, &rhs)
        .map_err(|e| Error::Internal(format!("repair system not solvable: {e}")))?;
    if !sol.is_unique() {
        return Err(Error::Internal(format!(
            "repair system has rank {} < {b}; plan violates the span condition",
            sol.rank
        )));
    }
    let r = v.pivot();
    Ok(sol
        .x
        .into_iter()
        .enumerate()
        .filter(|&(t, _)| t != r)
        .map(|(_, z)| z)
        .collect())
}

/// Outcome of a local or parallel repair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalRepair<E> {
    pub payloads: Vec<Vec<E>>,
    /// Field elements downloaded: `ℓ·(b − 1)` for `ℓ` helpers.
    pub downloaded: usize,
}

fn check_helpers_independent<F: Field>(f: &F, helpers: &[NodeState<F::Elem>]) -> Result<usize> {
    let b = helpers
        .first()
        .map(|h| h.id.dim())
        .ok_or_else(|| Error::Unrepairable("no helpers".into()))?;
    let ids: Vec<&NodeVector<F::Elem>> = helpers.iter().map(|h| &h.id).collect();
    let rank = vectors_rank(f, b, &ids);
    if rank != helpers.len() {
        return Err(Error::Unrepairable(format!(
            "helpers are not linearly independent (rank {rank} of {})",
            helpers.len()
        )));
    }
    Ok(b)
}

/// `φ(v; e_i)·x = Σ_t γ_t φ(u_t; e_i)·x` from extended helper payloads.
fn combine_local<F: Field>(
    f: &F,
    failed: &NodeVector<F::Elem>,
    extended: &[Vec<F::Elem>],
    gamma: &[F::Elem],
) -> Vec<F::Elem> {
    let b = failed.dim();
    let mut full = vec![f.zero(); b];
    for (g, ext) in gamma.iter().zip(extended) {
        linalg::axpy(f, &mut full, *g, ext);
    }
    full.into_iter()
        .enumerate()
        .filter(|&(i, _)| i != failed.pivot())
        .map(|(_, z)| z)
        .collect()
}

/// Repairs several failed nodes from whole payloads of independent helpers.
/// Each helper payload is downloaded once.
pub fn parallel_repair<F: Field>(
    f: &F,
    failed: &[NodeVector<F::Elem>],
    helpers: &[NodeState<F::Elem>],
) -> Result<LocalRepair<F::Elem>> {
    let b = check_helpers_independent(f, helpers)?;
    let helper_rows: Vec<Vec<F::Elem>> = helpers.iter().map(|h| h.id.coords().to_vec()).collect();
    let mut gammas = Vec::with_capacity(failed.len());
    let mut outside = Vec::new();
    for (k, v) in failed.iter().enumerate() {
        if v.dim() != b {
            return Err(Error::DimensionMismatch {
                expected: b,
                got: v.dim(),
            });
        }
        match linalg::express_in_span(f, &helper_rows, v.coords()) {
            Ok(g) => gammas.push(g),
            Err(Error::Inconsistent { .. }) => outside.push(k),
            Err(e) => return Err(e),
        }
    }
    if !outside.is_empty() {
        return Err(Error::OutsideSpan(outside));
    }
    let extended = helpers
        .iter()
        .map(|h| extend_payload(f, &h.id, &h.payload))
        .collect::<Result<Vec<_>>>()?;
    let payloads = failed
        .iter()
        .zip(&gammas)
        .map(|(v, g)| combine_local(f, v, &extended, g))
        .collect();
    Ok(LocalRepair {
        payloads,
        downloaded: helpers.len() * (b - 1),
    })
}

/// Local repair of one node from helpers whose span contains it.
pub fn local_repair<F: Field>(
    f: &F,
    failed: &NodeVector<F::Elem>,
    helpers: &[NodeState<F::Elem>],
) -> Result<LocalRepair<F::Elem>> {
    parallel_repair(f, std::slice::from_ref(failed), helpers).map_err(|e| match e {
        Error::OutsideSpan(_) => Error::Unrepairable("failed vector is outside the helpers' span".into()),
        other => other,
    })
}

/// A reconstructed file with the per-node download counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reconstruction<E> {
    pub file: Vec<E>,
    /// Field elements downloaded from each participating node, in input order.
    pub downloads: Vec<usize>,
}

impl<E> Reconstruction<E> {
    pub fn total_downloaded(&self) -> usize {
        self.downloads.iter().sum()
    }
}

fn check_reconstruction_set<F: Field>(f: &F, nodes: &[NodeState<F::Elem>]) -> Result<usize> {
    let b = nodes.first().map(|n| n.id.dim()).unwrap_or(0);
    if b < 2 || nodes.len() != b {
        return Err(Error::DependentNodes {
            rank: nodes.len().min(b),
            needed: b.max(nodes.len()),
        });
    }
    let ids: Vec<&NodeVector<F::Elem>> = nodes.iter().map(|n| &n.id).collect();
    if ids.iter().any(|v| v.dim() != b) {
        return Err(Error::DimensionMismatch {
            expected: b,
            got: ids.iter().map(|v| v.dim()).find(|&d| d != b).unwrap_or(b),
        });
    }
    let rank = vectors_rank(f, b, &ids);
    if rank != b {
        return Err(Error::DependentNodes { rank, needed: b });
    }
    Ok(b)
}

/// Reconstruction from the full payloads of b independent nodes (2B elements).
///
/// Solves the b²×B system whose rows are `φ(u_i; e_j)` against the extended
/// payloads.
pub fn reconstruct_full<F: Field>(
    f: &F,
    nodes: &[NodeState<F::Elem>],
) -> Result<Reconstruction<F::Elem>> {
    let b = check_reconstruction_set(f, nodes)?;
    let len = pair_count(b);
    let mut a = Matrix::zeros(f, 0, len);
    let mut w = Vec::with_capacity(b * b);
    for node in nodes {
        let ext = extend_payload(f, &node.id, &node.payload)?;
        for (j, &value) in ext.iter().enumerate() {
            a.push_row(&unit_row(f, node.id.coords(), j).to_dense(f, len))?;
            w.push(value);
        }
    }
    let sol = linalg::solve(f, &a, &w)?;
    if !sol.is_unique() {
        return Err(Error::Internal(format!(
            "reconstruction matrix has rank {} < {len}",
            sol.rank
        )));
    }
    Ok(Reconstruction {
        file: sol.x,
        downloads: vec![b - 1; b],
    })
}

/// Reconstruction downloading exactly B elements, scheduled by a good matrix.
///
/// Node `i` ships `φ(u_i; u_j)·x` for each `j` with `N[j][i] = 1`; it knows
/// the identities of all participants. Element `(i, j)`, `i < j`, of the
/// assembled vector is `φ(u_i; u_j)·x`; a value shipped by the higher-indexed
/// node is negated.
pub fn reconstruct_min<F: Field>(
    f: &F,
    nodes: &[NodeState<F::Elem>],
    schedule: &GoodMatrix,
) -> Result<Reconstruction<F::Elem>> {
    let b = check_reconstruction_set(f, nodes)?;
    if schedule.size() != b {
        return Err(Error::DimensionMismatch {
            expected: b,
            got: schedule.size(),
        });
    }
    let violations = validate_good_matrix(schedule.bits())?;
    if !violations.is_empty() {
        return Err(Error::InvalidGoodMatrix(violations));
    }
    let len = pair_count(b);
    let mut w: Vec<Option<F::Elem>> = vec![None; len];
    let mut downloads = vec![0; b];
    for (i, node) in nodes.iter().enumerate() {
        for j in schedule.partners(i) {
            let share = helper_pair_share(f, node, &nodes[j].id)?;
            downloads[i] += 1;
            let (k, value) = if i < j {
                (pair_index(i, j, b)?, share)
            } else {
                (pair_index(j, i, b)?, f.neg(share))
            };
            if w[k].replace(value).is_some() {
                return Err(Error::Internal(format!("pair element {k} received twice")));
            }
        }
    }
    let w = w
        .into_iter()
        .enumerate()
        .map(|(k, v)| v.ok_or_else(|| Error::Internal(format!("pair element {k} never received"))))
        .collect::<Result<Vec<_>>>()?;
    let mut a = Matrix::zeros(f, 0, len);
    for (i, j) in crate::plucker::pairs(b) {
        let row = plucker_embed(f, nodes[i].id.coords(), nodes[j].id.coords())?;
        a.push_row(row.entries())?;
    }
    let sol = linalg::solve(f, &a, &w)?;
    if !sol.is_unique() {
        return Err(Error::Internal(format!(
            "pair matrix has rank {} < {len}",
            sol.rank
        )));
    }
    Ok(Reconstruction {
        file: sol.x,
        downloads,
    })
}

/// What each node received during a modification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModificationReceipt {
    /// (position, value) pairs delivered to each updated node.
    pub pairs_per_node: Vec<usize>,
}

impl ModificationReceipt {
    pub fn total_pairs(&self) -> usize {
        self.pairs_per_node.iter().sum()
    }
}

/// Applies the sparse difference `y − x` to every alive node:
/// `M_v·x + M_v·(y − x) = M_v·y`.
pub fn apply_modification<F: Field>(
    f: &F,
    nodes: &mut [NodeState<F::Elem>],
    diff: &[(usize, F::Elem)],
) -> Result<ModificationReceipt> {
    let Some(b) = nodes.first().map(|n| n.id.dim()) else {
        return Ok(ModificationReceipt {
            pairs_per_node: Vec::new(),
        });
    };
    let len = pair_count(b);
    let mut seen = BTreeSet::new();
    for &(pos, delta) in diff {
        if pos >= len {
            return Err(Error::InvalidDiff(format!(
                "position {pos} out of range for B = {len}"
            )));
        }
        if !seen.insert(pos) {
            return Err(Error::InvalidDiff(format!("position {pos} repeated")));
        }
        if f.is_zero(delta) {
            return Err(Error::InvalidDiff(format!("zero change at position {pos}")));
        }
    }
    let mut sparse = vec![f.zero(); len];
    for &(pos, delta) in diff {
        sparse[pos] = delta;
    }
    let mut pairs_per_node = Vec::new();
    for node in nodes.iter_mut().filter(|n| n.alive) {
        let basis = codeword_basis(f, &node.id);
        for (slot, row) in node.payload.iter_mut().zip(basis.rows()) {
            let delta = row
                .entries()
                .iter()
                .filter(|(k, _)| seen.contains(k))
                .fold(f.zero(), |acc, &(k, c)| f.mul_add(c, sparse[k], acc));
            *slot = f.add(*slot, delta);
        }
        pairs_per_node.push(diff.len());
    }
    Ok(ModificationReceipt { pairs_per_node })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::goodmatrix::build_good_matrix;
    use crate::FieldElement;

    fn gf(q: u64) -> FieldSpec {
        FieldSpec::from_order(q).unwrap()
    }

    fn vals(f: &FieldSpec, v: &[u64]) -> Vec<FieldElement> {
        v.iter().map(|&x| f.element(x).unwrap()).collect()
    }

    fn nv(f: &FieldSpec, v: &[u64]) -> NodeVector<FieldElement> {
        NodeVector::from_values(f, v).unwrap()
    }

    fn units(f: &FieldSpec, b: usize) -> Vec<NodeVector<FieldElement>> {
        (0..b).map(|i| NodeVector::unit(f, b, i)).collect()
    }

    #[test]
    fn config_bounds() {
        let f = gf(2);
        assert!(SystemConfig::new(f, 3, 7).is_ok());
        assert!(SystemConfig::new(f, 3, 8).is_err());
        assert!(SystemConfig::new(f, 3, 2).is_err());
        assert!(SystemConfig::new(f, 2, 3).is_err());
        let c = SystemConfig::new(gf(5), 4, 12).unwrap();
        assert_eq!((c.file_len(), c.alpha(), c.beta()), (6, 3, 1));
    }

    #[test]
    fn store_examples() {
        let f = gf(2);
        let x = vals(&f, &[1, 0, 1]);
        let nodes = encode_store(&f, &x, &[NodeVector::unit(&f, 3, 0), nv(&f, &[1, 1, 0])]).unwrap();
        assert_eq!(nodes[0].payload, vals(&f, &[1, 0]));
        assert_eq!(nodes[1].payload, vals(&f, &[1, 1]));

        let g = gf(7);
        let x = vals(&g, &[3, 5, 6]);
        let e0 = encode_store(&g, &x, &[NodeVector::unit(&g, 3, 0)]).unwrap();
        assert_eq!(e0[0].payload, vals(&g, &[3, 5]));
    }

    #[test]
    fn store_errors() {
        let f = gf(2);
        let a = units(&f, 3);
        assert_eq!(
            encode_store(&f, &vals(&f, &[1, 0]), &a).unwrap_err(),
            Error::WrongFileLength { expected: 3, got: 2 }
        );
        let dup = vec![a[0].clone(), a[1].clone(), a[0].clone()];
        assert_eq!(
            encode_store(&f, &vals(&f, &[1, 0, 1]), &dup).unwrap_err(),
            Error::DuplicateDirection { first: 0, second: 2 }
        );
    }

    #[test]
    fn share_examples() {
        let f = gf(2);
        let x = vals(&f, &[1, 0, 1]);
        let nodes = encode_store(&f, &x, &units(&f, 3)).unwrap();
        let e0 = NodeVector::unit(&f, 3, 0);
        // φ(e_2; e_1)·x = −x_12
        assert_eq!(helper_pair_share(&f, &nodes[1], &e0).unwrap(), f.one());
        assert_eq!(helper_pair_share(&f, &nodes[0], &e0), Err(Error::DependentVectors));

        let g = gf(5);
        let x = vals(&g, &[1, 2, 3]);
        let nodes = encode_store(&g, &x, &units(&g, 3)).unwrap();
        let e0 = NodeVector::unit(&g, 3, 0);
        assert_eq!(helper_pair_share(&g, &nodes[1], &e0).unwrap(), g.element(4).unwrap());
    }

    #[test]
    fn min_bw_repair_by_hand() {
        let f = gf(2);
        let x = vals(&f, &[1, 0, 1]);
        let failed = nv(&f, &[1, 1, 0]);
        let active = encode_store(&f, &x, &units(&f, 3)[1..]).unwrap();
        let plan = plan_min_bw_repair(&f, &failed, &active).unwrap();
        assert_eq!(plan.mode, RepairMode::MinBandwidth { omitted: 0 });
        assert_eq!(plan.helper_indices, vec![0, 1]);
        let shares: Vec<_> = plan
            .helper_indices
            .iter()
            .map(|&i| helper_pair_share(&f, &active[i], &failed).unwrap())
            .collect();
        assert_eq!(min_bw_repair_assemble(&f, &plan, &shares).unwrap(), vals(&f, &[1, 1]));
    }

    #[test]
    fn plan_prefers_unit_hyperplane() {
        let f = gf(3);
        let x = vals(&f, &[1, 2, 0, 1, 1, 2]);
        let failed = nv(&f, &[0, 1, 2, 1]);
        let active = encode_store(&f, &x, &units(&f, 4)).unwrap();
        let plan = plan_min_bw_repair(&f, &failed, &active).unwrap();
        assert_eq!(plan.mode, RepairMode::MinBandwidth { omitted: 1 });
        assert_eq!(plan.helper_indices, vec![0, 2, 3]);
    }

    #[test]
    fn plan_fails_on_a_hyperplane_that_misses_the_condition() {
        // active = {e0, e1} inside b = 3; no b−1 nodes in a coordinate
        // hyperplane avoiding the failed vector's support, no basis
        let f = gf(2);
        let x = vals(&f, &[1, 1, 0]);
        let failed = nv(&f, &[1, 1, 1]);
        let active = encode_store(&f, &x, &[nv(&f, &[1, 1, 0]), nv(&f, &[0, 0, 1])]).unwrap();
        assert!(matches!(
            plan_min_bw_repair(&f, &failed, &active),
            Err(Error::Unrepairable(_))
        ));
    }

    #[test]
    fn dead_nodes_are_not_helpers() {
        let f = gf(2);
        let x = vals(&f, &[1, 0, 1]);
        let mut active = encode_store(&f, &x, &units(&f, 3)).unwrap();
        active[2].alive = false;
        assert!(plan_min_bw_repair(&f, &nv(&f, &[1, 1, 0]), &active).is_err());
        active[2].alive = true;
        active[1].alive = false;
        let plan = plan_min_bw_repair(&f, &nv(&f, &[1, 1, 0]), &active).unwrap();
        assert_eq!(plan.helper_indices, vec![0, 2]);
    }

    #[test]
    fn local_repair_examples() {
        let f = gf(2);
        let x = vals(&f, &[1, 0, 1]);
        let failed = nv(&f, &[1, 1, 0]);
        let expected = encode_node(&f, &failed, &x).unwrap();

        let all = encode_store(&f, &x, &[units(&f, 3)[0].clone(), units(&f, 3)[1].clone(), failed.clone()]).unwrap();
        let r = local_repair(&f, &failed, &all[..2]).unwrap();
        assert_eq!(r.payloads[0], expected);
        assert_eq!(r.downloaded, 4);

        let r = local_repair(&f, &failed, &all[2..]).unwrap();
        assert_eq!(r.payloads[0], expected);
        assert_eq!(r.downloaded, 2);

        let outside = local_repair(&f, &nv(&f, &[0, 0, 1]), &all[..2]);
        assert!(matches!(outside, Err(Error::Unrepairable(_))));
        let dependent = local_repair(&f, &failed, &[all[0].clone(), all[0].clone()]);
        assert!(matches!(dependent, Err(Error::Unrepairable(_))));
    }

    #[test]
    fn parallel_repair_accounts_once_per_helper() {
        let f = gf(3);
        let x = vals(&f, &[1, 2, 0, 1, 1, 2]);
        let helpers = encode_store(&f, &x, &units(&f, 4)[..2]).unwrap();
        let failed = vec![nv(&f, &[1, 1, 0, 0]), nv(&f, &[1, 2, 0, 0])];
        let r = parallel_repair(&f, &failed, &helpers).unwrap();
        assert_eq!(r.downloaded, 2 * 3);
        for (v, p) in failed.iter().zip(&r.payloads) {
            assert_eq!(p, &encode_node(&f, v, &x).unwrap());
        }
        let bad = vec![nv(&f, &[1, 1, 0, 0]), nv(&f, &[0, 0, 1, 0])];
        assert_eq!(parallel_repair(&f, &bad, &helpers).unwrap_err(), Error::OutsideSpan(vec![1]));
    }

    #[test]
    fn reconstruct_full_examples() {
        let f = gf(2);
        let x = vals(&f, &[1, 0, 1]);
        for set in [
            units(&f, 3),
            vec![NodeVector::unit(&f, 3, 0), nv(&f, &[1, 1, 0]), NodeVector::unit(&f, 3, 2)],
        ] {
            let nodes = encode_store(&f, &x, &set).unwrap();
            let r = reconstruct_full(&f, &nodes).unwrap();
            assert_eq!(r.file, x);
            assert_eq!(r.total_downloaded(), 6);
        }
        let dep = encode_store(&f, &x, &[NodeVector::unit(&f, 3, 0), NodeVector::unit(&f, 3, 1), nv(&f, &[1, 1, 0])]).unwrap();
        assert_eq!(
            reconstruct_full(&f, &dep).unwrap_err(),
            Error::DependentNodes { rank: 2, needed: 3 }
        );
    }

    #[test]
    fn reconstruct_min_counts() {
        let f = gf(2);
        for b in [5usize, 6] {
            let x: Vec<_> = (0..pair_count(b)).map(|k| f.element((k % 2) as u64).unwrap()).collect();
            let nodes = encode_store(&f, &x, &units(&f, b)).unwrap();
            let r = reconstruct_min(&f, &nodes, &build_good_matrix(b).unwrap()).unwrap();
            assert_eq!(r.file, x);
            assert_eq!(r.total_downloaded(), pair_count(b));
            if b == 6 {
                assert_eq!(r.downloads, vec![3, 3, 3, 3, 3, 0]);
            } else {
                assert!(r.downloads[..4].iter().all(|&d| d == 2 || d == 3));
                assert_eq!(r.downloads[4], 0);
            }
        }
        let nodes = encode_store(&f, &vals(&f, &[0; 6]), &units(&f, 4)).unwrap();
        assert!(reconstruct_min(&f, &nodes, &build_good_matrix(5).unwrap()).is_err());
    }

    #[test]
    fn modification_example() {
        let f = gf(2);
        let x = vals(&f, &[1, 0, 1]);
        let y = vals(&f, &[1, 1, 1]);
        let assignment = crate::plucker::normalized_vectors(&f, 3);
        let mut nodes = encode_store(&f, &x, &assignment).unwrap();
        let receipt = apply_modification(&f, &mut nodes, &[(1, f.one())]).unwrap();
        assert_eq!(nodes[0].payload, vals(&f, &[1, 1]));
        assert_eq!(nodes, encode_store(&f, &y, &assignment).unwrap());
        assert_eq!(receipt.pairs_per_node, vec![1; 7]);

        let before = nodes.clone();
        apply_modification(&f, &mut nodes, &[]).unwrap();
        assert_eq!(nodes, before);

        assert!(apply_modification(&f, &mut nodes, &[(3, f.one())]).is_err());
        assert!(apply_modification(&f, &mut nodes, &[(1, f.one()), (1, f.one())]).is_err());
        assert!(apply_modification(&f, &mut nodes, &[(1, f.zero())]).is_err());
    }
}
