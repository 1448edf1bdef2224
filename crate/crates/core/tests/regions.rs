mod common;

use common::{box_cells, boxed, torus};
use proptest::prelude::*;
use std::collections::{HashMap, HashSet};
use tritile_core::{Axis, Color, Dir, Region, RegionError, RegionSpec};

fn check_basic_invariants(r: &Region) {
    let (b, w) = r.color_counts();
    assert_eq!(b, w);
    for id in 0..r.num_cells() as u32 {
        for n in r.neighbors_of(id) {
            assert!(r.are_adjacent(n, id), "adjacency not symmetric at {:?}", r.coord(id));
            assert_ne!(r.color(n), r.color(id));
        }
    }
}

/// Counts, for every lattice edge touched by the region, how many cells
/// contain it, working from coordinates only.
fn edge_incidence(r: &Region) -> HashMap<([i32; 3], usize), usize> {
    let mut count = HashMap::new();
    for &c in r.coords() {
        for a in 0..3 {
            let (p, q) = ((a + 1) % 3, (a + 2) % 3);
            for dp in 0..2 {
                for dq in 0..2 {
                    let mut base = c;
                    base[p] += dp;
                    base[q] += dq;
                    if let Some(per) = r.periods() {
                        for k in 0..3 {
                            base[k] = base[k].rem_euclid(per[k] as i32);
                        }
                    }
                    *count.entry((base, a)).or_default() += 1;
                }
            }
        }
    }
    count
}

#[test]
fn spec_examples() {
    let r = Region::build_box(2, 2, 1).unwrap();
    assert_eq!((r.num_cells(), r.color_counts()), (4, (2, 2)));
    let r = Region::build_box(3, 3, 2).unwrap();
    assert_eq!((r.num_cells(), r.color_counts()), (18, (9, 9)));
    assert!(matches!(Region::build_box(3, 3, 3), Err(RegionError::Unbalanced { .. })));
    assert!(matches!(Region::build_torus(3, 4, 4), Err(RegionError::OddPeriod { .. })));

    let t = torus(4, 4, 4);
    assert_eq!(t.num_cells(), 64);
    assert!((0..64).all(|i| t.degree(i) == 6));
    assert!(t.boundary_faces().is_empty());

    let t = torus(2, 2, 2);
    assert_eq!(t.num_cells(), 8);
    assert!(t.has_degenerate_adjacency());
    // a single adjacency per axis: each cell has three distinct neighbors
    assert!((0..8).all(|i| t.neighbors_of(i).collect::<HashSet<_>>().len() == 3));
}

#[test]
fn voxel_examples() {
    let cube = box_cells([2, 2, 2]);
    let v = Region::build_voxels(&cube, false).unwrap();
    assert!(v.same_complex(&Region::build_box(2, 2, 2).unwrap()));

    let mut two = cube.clone();
    two.extend(cube.iter().map(|c| [c[0] + 2, c[1] + 2, c[2]]));
    assert!(matches!(Region::build_voxels(&two, false), Err(RegionError::NonManifoldEdge { .. })));

    let minus_one = &cube[1..];
    assert!(matches!(Region::build_voxels(minus_one, false), Err(RegionError::Unbalanced { .. })));

    let mut corner_touch = cube.clone();
    corner_touch.extend(cube.iter().map(|c| [c[0] + 2, c[1] + 2, c[2] + 2]));
    assert!(matches!(
        Region::build_voxels(&corner_touch, false),
        Err(RegionError::NonManifoldVertex { .. })
    ));

    let apart = [[0, 0, 0], [1, 0, 0], [5, 0, 0], [6, 0, 0]];
    assert!(matches!(Region::build_voxels(&apart, false), Err(RegionError::Disconnected(_))));
}

#[test]
fn interior_edges_have_four_cells() {
    for r in [boxed(3, 3, 2), boxed(4, 4, 4), boxed(2, 3, 5)] {
        let dims = r.box_dims().unwrap().map(|d| d as i32);
        for ((base, a), n) in edge_incidence(&r) {
            let interior = (0..3).all(|k| if k == a { true } else { base[k] > 0 && base[k] < dims[k] });
            if interior {
                assert_eq!(n, 4, "edge at {base:?} along axis {a}");
            }
        }
    }
    for r in [torus(4, 4, 4), torus(2, 4, 6), torus(2, 2, 4)] {
        assert!(edge_incidence(&r).values().all(|&n| n == 4));
    }
}

#[test]
fn refinement_examples() {
    let r = Region::build_box(2, 2, 1).unwrap();
    assert_eq!(r.refine(1).unwrap().box_dims(), Some([10, 10, 5]));
    assert_eq!(r.refine(0).unwrap(), r);
    let fine = r.refine(1).unwrap();
    for &c in r.coords() {
        let col = r.color_at(c);
        let corner = c.map(|x| 5 * x);
        assert_eq!(fine.color_at(corner), col);
        assert_eq!(fine.color_at(corner.map(|x| x + 4)), col);
        assert_eq!(fine.color_at(corner.map(|x| x + 2)), col);
    }
    let v = Region::build_voxels(&[[0, 0, 0], [0, 1, 0], [1, 1, 0], [1, 1, 1]], true).unwrap();
    let fine = v.refine(1).unwrap();
    assert_eq!(fine.num_cells(), 4 * 125);
    assert_eq!(fine.color_at([0, 0, 0]), Color::White);
    check_basic_invariants(&fine);
}

#[test]
fn region_json_roundtrip() {
    for spec in [
        r#"{"kind":"box","dims":[3,3,2]}"#,
        r#"{"kind":"torus","periods":[4,2,6]}"#,
        r#"{"kind":"voxels","cells":[[0,0,0],[1,0,0]],"parity":1}"#,
    ] {
        let s: RegionSpec = serde_json::from_str(spec).unwrap();
        let r = s.build().unwrap();
        assert_eq!(serde_json::to_string(&r.to_spec()).unwrap(), spec);
    }
}

fn small_dims() -> impl Strategy<Value = [u32; 3]> {
    [1u32..5, 1u32..5, 1u32..5].prop_filter("balanced", |d| d.iter().any(|x| x % 2 == 0))
}

fn voxel_blob() -> impl Strategy<Value = Vec<[i32; 3]>> {
    proptest::collection::vec((0..4i32, 0..4i32, 0..3i32), 1..30)
        .prop_map(|v| v.into_iter().map(|(x, y, z)| [x, y, z]).collect::<HashSet<_>>().into_iter().collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn accepted_boxes_satisfy_invariants(d in small_dims()) {
        let r = Region::build_box(d[0], d[1], d[2]).unwrap();
        check_basic_invariants(&r);
        for id in 0..r.num_cells() as u32 {
            let c = r.coord(id);
            prop_assert_eq!(r.color(id) == Color::Black, (c[0] + c[1] + c[2]) % 2 == 0);
        }
    }

    #[test]
    fn accepted_tori_satisfy_invariants(h in [1u32..4, 1u32..4, 1u32..4]) {
        let r = Region::build_torus(2 * h[0], 2 * h[1], 2 * h[2]).unwrap();
        check_basic_invariants(&r);
    }

    #[test]
    fn accepted_voxel_regions_satisfy_invariants(cells in voxel_blob(), flip in any::<bool>()) {
        if let Ok(r) = Region::build_voxels(&cells, flip) {
            check_basic_invariants(&r);
            prop_assert_eq!(r.num_cells(), cells.len());
        }
    }

    #[test]
    fn refining_twice_equals_refining_by_two(d in [1u32..3, 1u32..3, 1u32..3]) {
        prop_assume!(d.iter().any(|x| x % 2 == 0));
        let r = Region::build_box(d[0], d[1], d[2]).unwrap();
        let once = r.refine(1).unwrap().refine(1).unwrap();
        let twice = r.refine(2).unwrap();
        prop_assert_eq!(once.coords(), twice.coords());
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn voxel_copy_of_a_box_is_isomorphic(d in small_dims()) {
        let b = Region::build_box(d[0], d[1], d[2]).unwrap();
        let mut cells = box_cells(d.map(|x| x as i32));
        cells.reverse();
        let v = Region::build_voxels(&cells, false).unwrap();
        prop_assert_eq!(v.num_cells(), b.num_cells());
        for id in 0..b.num_cells() as u32 {
            let c = b.coord(id);
            let vid = v.find(c).unwrap();
            prop_assert_eq!(v.color(vid), b.color(id));
            for dir in Dir::ALL {
                let bn = b.neighbor(id, dir).map(|n| b.coord(n));
                let vn = v.neighbor(vid, dir).map(|n| v.coord(n));
                prop_assert_eq!(bn, vn);
            }
        }
    }
}

#[test]
fn extents() {
    let r = boxed(3, 4, 2);
    assert_eq!(r.extent(Axis::Y), Some(4));
    assert_eq!(torus(2, 4, 6).extent(Axis::Z), Some(6));
}
