mod common;

use common::{box_cells, boxed, count_matchings, torus};
use proptest::prelude::*;
use std::collections::HashSet;
use std::sync::Arc;
use tritile_core::{
    base_tiling, count_tilings, count_tilings_parallel, diff_cycles, enumerate_tilings, enumerate_tilings_parallel,
    find_flips, refine_tiling, walk_samples, Axis, Dir, Enumerator, MoveSet, Region, Tiling, TilingError,
};

#[test]
fn counts_match_matching_oracle() {
    for dims in [[2, 2, 1], [2, 2, 2], [3, 2, 2], [3, 3, 2], [4, 2, 2], [2, 3, 3], [4, 3, 2]] {
        let r = boxed(dims[0] as u32, dims[1] as u32, dims[2] as u32);
        let expected = count_matchings(&box_cells(dims));
        assert_eq!(count_tilings(&r), expected, "box {dims:?}");
        assert_eq!(count_tilings_parallel(&r), expected, "box {dims:?}");
    }
    assert_eq!(count_tilings(&boxed(2, 2, 2)), 9);
    assert_eq!(count_tilings(&boxed(3, 3, 2)), 229);
}

#[test]
fn voxel_count_matches_oracle() {
    let cells: Vec<_> = box_cells([3, 3, 2]).into_iter().filter(|c| *c != [1, 1, 0] && *c != [1, 1, 1]).collect();
    let r = Arc::new(Region::build_voxels(&cells, false).unwrap());
    assert_eq!(count_tilings(&r), count_matchings(&cells));
}

#[test]
fn torus_counts_are_order_independent() {
    let r = torus(2, 2, 4);
    let n = count_tilings(&r);
    assert!(n > 0);
    let reversed = [Dir::ALL[5], Dir::ALL[4], Dir::ALL[3], Dir::ALL[2], Dir::ALL[1], Dir::ALL[0]];
    assert_eq!(Enumerator::with_order(r.clone(), reversed).count(), n);
    assert_eq!(count_tilings_parallel(&r), n);
}

#[test]
fn enumeration_is_valid_distinct_and_ordered() {
    let r = boxed(3, 3, 2);
    let all: Vec<Tiling> = enumerate_tilings(&r).collect();
    assert_eq!(all.len(), 229);
    let hashes: HashSet<u64> = all.iter().map(Tiling::hash).collect();
    assert_eq!(hashes.len(), 229);
    assert!(all.iter().all(|t| t.validate().is_ok()));
    let par = enumerate_tilings_parallel(&r);
    assert!(all.iter().zip(&par).all(|(a, b)| a.mates() == b.mates()));
}

#[test]
fn base_tiling_examples() {
    let r = boxed(3, 3, 2);
    let t = base_tiling(&r, Axis::Z).unwrap();
    assert_eq!(t.num_dimers(), 9);
    assert!(t.dimers().all(|d| t.direction(d).axis == Axis::Z));
    assert!(matches!(base_tiling(&r, Axis::X), Err(TilingError::OddExtent { .. })));
    let tor = torus(4, 4, 4);
    let t = base_tiling(&tor, Axis::X).unwrap();
    assert_eq!(t.num_dimers(), 32);
    for [a, b] in t.coord_pairs() {
        assert_eq!(a[0] / 2, b[0] / 2);
    }
}

#[test]
fn no_flip_tilings_differ_by_three_cycles() {
    let r = boxed(3, 3, 2);
    let frozen: Vec<Tiling> = enumerate_tilings(&r).filter(|t| find_flips(t).is_empty()).collect();
    assert_eq!(frozen.len(), 2);
    let cs = diff_cycles(&frozen[0], &frozen[1]);
    assert_eq!(cs.cycles.len(), 3);
    assert_eq!(cs.num_trivial(), 1);
}

#[test]
fn flip_pair_gives_one_square_cycle() {
    let r = boxed(3, 3, 2);
    for t in enumerate_tilings(&r).step_by(7) {
        for f in find_flips(&t) {
            let u = tritile_core::apply_flip(&t, &f).unwrap();
            let cs = diff_cycles(&u, &t);
            assert_eq!(cs.num_nontrivial(), 1);
            assert_eq!(cs.nontrivial().next().unwrap().len(), 4);
        }
    }
}

#[test]
fn serialization() {
    let r = boxed(3, 3, 2);
    let t = base_tiling(&r, Axis::Z).unwrap();
    let back = Tiling::from_json(&t.to_json()).unwrap();
    assert_eq!(back.hash(), t.hash());

    let mut pairs = t.coord_pairs();
    pairs[1] = [pairs[0][0], pairs[1][1]];
    let text = serde_json::json!({"region": r.to_spec(), "dimers": pairs}).to_string();
    assert!(Tiling::from_json(&text).unwrap_err().to_string().contains("cell covered twice"));

    let mut pairs = t.coord_pairs();
    pairs.pop();
    let text = serde_json::json!({"region": r.to_spec(), "dimers": pairs}).to_string();
    assert!(Tiling::from_json(&text).unwrap_err().to_string().contains("cell uncovered"));
}

#[test]
fn refined_base_tiling() {
    let r = boxed(3, 3, 2);
    let t = base_tiling(&r, Axis::Z).unwrap();
    assert_eq!(refine_tiling(&t, 0).unwrap().mates(), t.mates());
    let f = refine_tiling(&t, 1).unwrap();
    assert_eq!(f.region().box_dims(), Some([15, 15, 10]));
    assert_eq!(f.num_dimers(), 1125);
    assert!(f.dimers().all(|d| f.direction(d).axis == Axis::Z));
    assert!(f.validate().is_ok());
}

fn cycle_properties(t1: &Tiling, t0: &Tiling) {
    let cs = diff_cycles(t1, t0);
    let mut seen = HashSet::new();
    for c in &cs.cycles {
        assert_eq!(c.len() % 2, 0);
        for &v in &c.cells {
            assert!(seen.insert(v), "cycles share a vertex");
        }
        if c.is_trivial() {
            assert_eq!(t1.mate(c.cells[0]), c.cells[1]);
            assert_eq!(t0.mate(c.cells[0]), c.cells[1]);
        } else {
            for (k, &v) in c.cells.iter().enumerate() {
                let next = c.cells[(k + 1) % c.len()];
                let by = if k % 2 == 0 { t1 } else { t0 };
                assert_eq!(by.mate(v), next, "alternation broken");
            }
        }
    }
    assert_eq!(seen.len(), t1.region().num_cells());
    let back = diff_cycles(t0, t1);
    let rev: HashSet<Vec<u32>> = cs.cycles.iter().map(|c| canonical(&c.reversed().cells)).collect();
    let fwd: HashSet<Vec<u32>> = back.cycles.iter().map(|c| canonical(&c.cells)).collect();
    assert_eq!(rev, fwd);
}

/// Rotation-normalized form of a directed cycle.
fn canonical(cells: &[u32]) -> Vec<u32> {
    let k = (0..cells.len()).min_by_key(|&i| cells[i]).unwrap();
    cells[k..].iter().chain(&cells[..k]).copied().collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn scrambled_orders_give_the_same_count(perm in Just(Dir::ALL.to_vec()).prop_shuffle(),
                                            which in 0usize..4) {
        let dims = [[3, 3, 2], [2, 2, 2], [4, 2, 2], [2, 3, 3]][which];
        let r = boxed(dims[0], dims[1], dims[2]);
        let order: [Dir; 6] = perm.try_into().unwrap();
        prop_assert_eq!(Enumerator::with_order(r.clone(), order).count(), count_tilings(&r));
    }

    #[test]
    fn cycles_of_enumerated_pairs(i in 0usize..229, j in 0usize..229) {
        let r = boxed(3, 3, 2);
        let all: Vec<Tiling> = enumerate_tilings(&r).collect();
        cycle_properties(&all[i], &all[j]);
    }

    #[test]
    fn cycles_of_walked_torus_pairs(seed in any::<u64>()) {
        let r = torus(4, 4, 4);
        let start = base_tiling(&r, Axis::Z).unwrap();
        let s = walk_samples(&start, MoveSet::FlipsAndTrits, 2, 60, seed);
        cycle_properties(&s[1], &s[0]);
        cycle_properties(&s[0], &start);
    }

    #[test]
    fn refinement_commutes_with_region_refinement(seed in any::<u64>()) {
        let r = boxed(3, 2, 2);
        let start = base_tiling(&r, Axis::Y).unwrap();
        let t = walk_samples(&start, MoveSet::FlipsAndTrits, 1, 20, seed).pop().unwrap();
        let f = refine_tiling(&t, 1).unwrap();
        prop_assert!(f.region().same_complex(&r.refine(1).unwrap()));
        prop_assert!(f.validate().is_ok());
        for d in t.dimers() {
            let dir = t.direction(d);
            let w = r.coord(d.white).map(|x| 5 * x);
            let fw = f.region().find(w).unwrap();
            let fb = f.mate(fw);
            prop_assert_eq!(f.region().direction(fw, fb), Some(dir));
        }
    }
}
