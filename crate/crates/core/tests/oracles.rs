use std::path::PathBuf;

use plucker_dss::assignment::{
    column_matrix, find_local_repair_set, from_generator_matrix, full_assignment, is_t_resilient,
    locality_partition_assignment, max_resilience, min_distance_bruteforce, parse_matrix, parse_vectors,
    DEFAULT_ENUMERATION_BUDGET,
};
use plucker_dss::plucker::projective_point_count;
use plucker_dss::simnet::resilience_sweep;
use plucker_dss::{Field, FieldSpec, GfVector, NodeVector};
use itertools::Itertools;

fn fixture(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn gf(q: u64) -> FieldSpec {
    FieldSpec::from_order(q).unwrap()
}

#[test]
fn example3_set_is_two_but_not_three_resilient() {
    let f = gf(2);
    let s = parse_vectors(&f, &fixture("example3.txt")).unwrap();
    assert_eq!(s.len(), 11);
    assert!(is_t_resilient(&f, &s, 2, DEFAULT_ENUMERATION_BUDGET).unwrap().is_resilient());
    let three = is_t_resilient(&f, &s, 3, DEFAULT_ENUMERATION_BUDGET).unwrap();
    assert!(!three.is_resilient());
    assert_eq!(max_resilience(&f, &s, DEFAULT_ENUMERATION_BUDGET).unwrap(), Some(2));
}

#[test]
fn example3_sweep_passes_at_two() {
    let f = gf(2);
    let s = parse_vectors(&f, &fixture("example3.txt")).unwrap();
    let a = plucker_dss::Assignment::explicit(s).unwrap();
    let r = resilience_sweep(f, &a, 2, 1, DEFAULT_ENUMERATION_BUDGET).unwrap();
    assert!(r.passed, "{}", r.to_text());
    assert_eq!(r.failure_sets, 11 + 55);
}

/// Resilience t holds exactly when the column code has distance at least t + 1.
fn cross_check(f: &FieldSpec, columns: &[GfVector]) {
    let g = column_matrix(columns).unwrap();
    let delta = min_distance_bruteforce(f, &g, DEFAULT_ENUMERATION_BUDGET).unwrap();
    for t in 0..=columns.len() {
        let resilient = is_t_resilient(f, columns, t, DEFAULT_ENUMERATION_BUDGET).unwrap().is_resilient();
        assert_eq!(resilient, delta > t, "t = {t}, delta = {delta}");
    }
}

#[test]
fn generator_fixtures_cross_check() {
    let f = gf(2);
    for (name, delta) in [("identity4.txt", 1), ("identity_parity4.txt", 2), ("hamming74.txt", 3)] {
        let g = parse_matrix(&f, &fixture(name)).unwrap();
        assert_eq!(min_distance_bruteforce(&f, &g, DEFAULT_ENUMERATION_BUDGET).unwrap(), delta, "{name}");
        let a = from_generator_matrix(&f, &g, DEFAULT_ENUMERATION_BUDGET).unwrap();
        assert_eq!(a.claimed_resilience, Some(delta - 1));
        cross_check(&f, &a.vectors);
    }
}

#[test]
fn cross_check_on_every_small_subset() {
    // every set of 5 directions in F_2^3, and of 4 directions in F_3^3
    for (q, k) in [(2u64, 5usize), (3, 4)] {
        let f = gf(q);
        let all = full_assignment(&f, 3, 1000).unwrap().vectors;
        for subset in all.iter().cloned().combinations(k) {
            let rows: Vec<_> = subset.iter().map(|v| v.coords().to_vec()).collect();
            if plucker_dss::linalg::rank_of(&f, 3, &rows).unwrap() == 3 {
                cross_check(&f, &subset);
            }
        }
    }
}

#[test]
fn full_assignment_sizes() {
    for q in [2u64, 3, 4, 5, 7] {
        let f = gf(q);
        for b in 2..=5 {
            let a = full_assignment(&f, b, 1 << 16).unwrap();
            let expected = (q.pow(b as u32) - 1) / (q - 1);
            assert_eq!(a.len() as u64, expected);
            assert_eq!(projective_point_count(q, b), Some(expected as u128));
        }
    }
}

#[test]
fn partition_assignments_are_resilient_and_local() {
    for (q, b, c) in [(2u64, 4usize, 2usize), (3, 4, 2), (5, 4, 2), (2, 6, 3)] {
        let f = gf(q);
        let basis: Vec<_> = (0..b).map(|i| NodeVector::unit(&f, b, i)).collect();
        let a = locality_partition_assignment(&f, &basis, c).unwrap();
        let per_group = (q.pow(c as u32) - 1) / (q - 1);
        assert_eq!(a.len() as u64, (b / c) as u64 * per_group);
        let t = q.pow(c as u32 - 1) as usize - 1;
        assert_eq!(a.claimed_resilience, Some(t));
        assert!(is_t_resilient(&f, &a.vectors, t, DEFAULT_ENUMERATION_BUDGET).unwrap().is_resilient());
        for failed in (0..a.len()).combinations(t) {
            let survivors: Vec<_> = (0..a.len())
                .filter(|i| !failed.contains(i))
                .map(|i| a.vectors[i].clone())
                .collect();
            for &i in &failed {
                let set = find_local_repair_set(&f, &survivors, &a.vectors[i], c);
                assert!(set.is_some_and(|s| s.len() <= c), "q={q} b={b} failed={failed:?}");
            }
        }
    }
}

#[test]
fn local_repair_set_edge_cases() {
    let f = gf(3);
    let units: Vec<_> = (0..3).map(|i| NodeVector::unit(&f, 3, i)).collect();
    assert_eq!(find_local_repair_set(&f, &units, &units[1], 3), Some(vec![1]));
    let v = NodeVector::from_values(&f, &[1, 2, 0]).unwrap();
    assert_eq!(find_local_repair_set(&f, &units, &v, 3), Some(vec![0, 1]));
    assert_eq!(find_local_repair_set(&f, &units[..2], &NodeVector::unit(&f, 3, 2), 3), None);
    assert_eq!(find_local_repair_set(&f, &units, &v, 1), None);
    assert_eq!(f.order(), 3);
}
