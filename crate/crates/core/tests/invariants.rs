use plucker_dss::codec::{
    apply_modification, encode_node, encode_store, helper_pair_share, local_repair, min_bw_repair_assemble,
    plan_min_bw_repair, reconstruct_full, reconstruct_min,
};
use plucker_dss::goodmatrix::build_good_matrix;
use plucker_dss::linalg::{self, intersection_dim, same_row_space};
use plucker_dss::plucker::{basis_omit, codeword_basis, pair_count, plucker_embed};
use plucker_dss::{Field, FieldElement, FieldSpec, GfNode, GfVector, NodeVector};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const ORDERS: [u64; 7] = [2, 3, 4, 5, 7, 8, 16];

fn field(idx: usize) -> FieldSpec {
    FieldSpec::from_order(ORDERS[idx % ORDERS.len()]).unwrap()
}

fn rand_vec(f: &FieldSpec, rng: &mut ChaCha8Rng, len: usize) -> Vec<FieldElement> {
    (0..len).map(|_| f.random(rng)).collect()
}

fn rand_node(f: &FieldSpec, rng: &mut ChaCha8Rng, b: usize) -> GfVector {
    loop {
        if let Ok(v) = NodeVector::normalize(f, &rand_vec(f, rng, b)) {
            return v;
        }
    }
}

/// b vectors that are linearly independent.
fn rand_basis(f: &FieldSpec, rng: &mut ChaCha8Rng, b: usize) -> Vec<GfVector> {
    loop {
        let vs: Vec<GfVector> = (0..b).map(|_| rand_node(f, rng, b)).collect();
        let rows: Vec<_> = vs.iter().map(|v| v.coords().to_vec()).collect();
        if linalg::rank_of(f, b, &rows).unwrap() == b {
            return vs;
        }
    }
}

fn scale(f: &FieldSpec, a: FieldElement, v: &[FieldElement]) -> Vec<FieldElement> {
    v.iter().map(|&x| f.mul(a, x)).collect()
}

fn add(f: &FieldSpec, u: &[FieldElement], v: &[FieldElement]) -> Vec<FieldElement> {
    u.iter().zip(v).map(|(&a, &b)| f.add(a, b)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn embedding_is_bilinear_and_antisymmetric(fi in 0usize..7, b in 2usize..7, seed: u64) {
        let f = field(fi);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (u, v, w) = (rand_vec(&f, &mut rng, b), rand_vec(&f, &mut rng, b), rand_vec(&f, &mut rng, b));
        let (a, c) = (f.random(&mut rng), f.random(&mut rng));
        let phi = |x: &[FieldElement], y: &[FieldElement]| plucker_embed(&f, x, y).unwrap().into_entries();

        let lhs = phi(&add(&f, &scale(&f, a, &u), &scale(&f, c, &v)), &w);
        let rhs = add(&f, &scale(&f, a, &phi(&u, &w)), &scale(&f, c, &phi(&v, &w)));
        prop_assert_eq!(lhs, rhs);

        let neg: Vec<_> = phi(&v, &u).into_iter().map(|x| f.neg(x)).collect();
        prop_assert_eq!(phi(&u, &v), neg);
        prop_assert!(phi(&u, &u).iter().all(|x| f.is_zero(*x)));
    }

    #[test]
    fn omitted_bases_span_the_codeword_space(fi in 0usize..7, b in 3usize..7, seed: u64) {
        let f = field(fi);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = rand_node(&f, &mut rng, b);
        let full = codeword_basis(&f, &v).dense_rows(&f);
        prop_assert_eq!(linalg::rank_of(&f, pair_count(b), &full).unwrap(), b - 1);
        for s in (0..b).filter(|&s| !f.is_zero(v.coord(s))) {
            let omitted = basis_omit(&f, &v, s).unwrap().dense_rows(&f);
            prop_assert!(same_row_space(&f, pair_count(b), &full, &omitted).unwrap());
        }
    }

    #[test]
    fn distinct_directions_meet_in_a_line(fi in 0usize..7, b in 3usize..7, seed: u64) {
        let f = field(fi);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = rand_node(&f, &mut rng, b);
        let v = rand_node(&f, &mut rng, b);
        prop_assume!(u != v);
        let pu = codeword_basis(&f, &u).dense_rows(&f);
        let pv = codeword_basis(&f, &v).dense_rows(&f);
        prop_assert_eq!(intersection_dim(&f, pair_count(b), &pu, &pv).unwrap(), 1);
        let w = plucker_embed(&f, u.coords(), v.coords()).unwrap().into_entries();
        prop_assert!(linalg::span_contains(&f, &pu, &w));
        prop_assert!(linalg::span_contains(&f, &pv, &w));
    }

    #[test]
    fn min_bandwidth_repair_round_trip(fi in 0usize..7, b in 3usize..7, seed: u64) {
        let f = field(fi);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut ids = rand_basis(&f, &mut rng, b);
        let target = rand_node(&f, &mut rng, b);
        prop_assume!(!ids.contains(&target));
        ids.push(target.clone());
        let x = rand_vec(&f, &mut rng, pair_count(b));
        let mut nodes = encode_store(&f, &x, &ids).unwrap();
        let original = nodes[b].payload.clone();
        nodes[b].alive = false;

        let plan = plan_min_bw_repair(&f, &target, &nodes).unwrap();
        prop_assert!(plan.helpers.len() == b - 1 || plan.helpers.len() == b);
        let shares: Vec<_> = plan.helper_indices.iter()
            .map(|&i| helper_pair_share(&f, &nodes[i], &target).unwrap())
            .collect();
        prop_assert_eq!(min_bw_repair_assemble(&f, &plan, &shares).unwrap(), original);
    }

    #[test]
    fn local_repair_round_trip(fi in 0usize..7, b in 3usize..7, l in 1usize..7, seed: u64) {
        let f = field(fi);
        let l = l.min(b);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let basis = rand_basis(&f, &mut rng, b);
        let helpers_ids = &basis[..l];
        // random nonzero combination of the helpers
        let target = loop {
            let mut acc = vec![f.zero(); b];
            for h in helpers_ids {
                linalg::axpy(&f, &mut acc, f.random(&mut rng), h.coords());
            }
            if let Ok(v) = NodeVector::normalize(&f, &acc) {
                break v;
            }
        };
        let x = rand_vec(&f, &mut rng, pair_count(b));
        let helpers: Vec<GfNode> = helpers_ids.iter()
            .map(|v| GfNode::new(v.clone(), encode_node(&f, v, &x).unwrap()))
            .collect();
        let r = local_repair(&f, &target, &helpers).unwrap();
        prop_assert_eq!(r.downloaded, l * (b - 1));
        prop_assert_eq!(&r.payloads[0], &encode_node(&f, &target, &x).unwrap());
    }

    #[test]
    fn reconstructions_agree(fi in 0usize..7, b in 3usize..8, seed: u64) {
        let f = field(fi);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ids = rand_basis(&f, &mut rng, b);
        let x = rand_vec(&f, &mut rng, pair_count(b));
        let nodes = encode_store(&f, &x, &ids).unwrap();
        let full = reconstruct_full(&f, &nodes).unwrap();
        let min = reconstruct_min(&f, &nodes, &build_good_matrix(b).unwrap()).unwrap();
        prop_assert_eq!(&full.file, &x);
        prop_assert_eq!(&min.file, &x);
        prop_assert_eq!(full.total_downloaded(), 2 * pair_count(b));
        prop_assert_eq!(min.total_downloaded(), pair_count(b));
    }

    #[test]
    fn modification_matches_fresh_encoding(fi in 0usize..7, b in 3usize..7, d in 1usize..6, seed: u64) {
        let f = field(fi);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ids = rand_basis(&f, &mut rng, b);
        let len = pair_count(b);
        let x = rand_vec(&f, &mut rng, len);
        let mut nodes = encode_store(&f, &x, &ids).unwrap();
        let mut positions = rand::seq::index::sample(&mut rng, len, d.min(len)).into_vec();
        positions.sort_unstable();
        let diff: Vec<_> = positions.iter().map(|&p| (p, f.random_nonzero(&mut rng))).collect();
        let mut y = x.clone();
        for &(p, delta) in &diff {
            y[p] = f.add(y[p], delta);
        }
        let receipt = apply_modification(&f, &mut nodes, &diff).unwrap();
        prop_assert!(receipt.pairs_per_node.iter().all(|&c| c == diff.len()));
        prop_assert_eq!(nodes, encode_store(&f, &y, &ids).unwrap());
    }
}

#[test]
fn gf65536_round_trip() {
    // spot-check a large binary field through the whole pipeline
    let f = FieldSpec::from_order(1 << 16).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let b = 5;
    let ids = rand_basis(&f, &mut rng, b);
    let x = rand_vec(&f, &mut rng, pair_count(b));
    let nodes = encode_store(&f, &x, &ids).unwrap();
    assert_eq!(reconstruct_full(&f, &nodes).unwrap().file, x);
}
