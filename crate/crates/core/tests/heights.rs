mod common;

use common::count_matchings;
use num_rational::Ratio;
use std::collections::{BTreeSet, VecDeque};
use tritile_core::{
    flip_connect, height_function, reconstruct, replay, CoquadSurface, HeightError, HeightField, SurfaceTiling,
    TilingClass,
};

fn rect(w: i32, h: i32) -> Vec<[i32; 2]> {
    (0..w).flat_map(|x| (0..h).map(move |y| [x, y])).collect()
}

fn oracle_count(cells: &[[i32; 2]]) -> u64 {
    count_matchings(&cells.iter().map(|&[x, y]| [x, y, 0]).collect::<Vec<_>>())
}

fn symmetric_difference(a: &SurfaceTiling, b: &SurfaceTiling) -> usize {
    let a: BTreeSet<_> = a.edges().iter().collect();
    let b: BTreeSet<_> = b.edges().iter().collect();
    a.symmetric_difference(&b).count()
}

/// All-pairs flip distances, with neighbors read off as tilings whose edge
/// sets differ in exactly four edges.
fn bfs_distances(ts: &[SurfaceTiling]) -> Vec<Vec<usize>> {
    let n = ts.len();
    let adj: Vec<Vec<usize>> =
        (0..n).map(|i| (0..n).filter(|&j| symmetric_difference(&ts[i], &ts[j]) == 4).collect()).collect();
    (0..n)
        .map(|s| {
            let mut d = vec![usize::MAX; n];
            d[s] = 0;
            let mut q = VecDeque::from([s]);
            while let Some(v) = q.pop_front() {
                for &w in &adj[v] {
                    if d[w] == usize::MAX {
                        d[w] = d[v] + 1;
                        q.push_back(w);
                    }
                }
            }
            d
        })
        .collect()
}

#[test]
fn surface_tiling_counts() {
    for (w, h) in [(2, 2), (2, 3), (4, 4), (3, 4), (2, 6)] {
        let cells = rect(w, h);
        let s = CoquadSurface::planar(&cells).unwrap();
        assert_eq!(s.enumerate_tilings().len() as u64, oracle_count(&cells), "{w}x{h}");
    }
    assert_eq!(CoquadSurface::planar(&rect(2, 3)).unwrap().enumerate_tilings().len(), 3);
    assert_eq!(CoquadSurface::planar(&rect(4, 4)).unwrap().enumerate_tilings().len(), 36);
}

#[test]
fn square_heights_are_halves() {
    let s = CoquadSurface::planar(&rect(2, 2)).unwrap();
    let ts = s.enumerate_tilings();
    let cls = TilingClass::of(&s, &ts[0]);
    let mut values: Vec<Ratio<i64>> = ts.iter().map(|t| height_function(&s, t, &cls).unwrap().value(1)).collect();
    values.sort();
    assert_eq!(values, vec![Ratio::new(-1, 2), Ratio::new(1, 2)]);
}

#[test]
fn stability() {
    for cells in [rect(2, 2), rect(2, 3), rect(4, 4)] {
        let s = CoquadSurface::planar(&cells).unwrap();
        let ts = s.enumerate_tilings();
        assert!(TilingClass::of(&s, &ts[0]).is_stable());
    }
    // a 2×2 square with a 1×2 tail continuing its bottom row
    let mut cells = rect(2, 2);
    cells.extend([[2, 0], [3, 0]]);
    let s = CoquadSurface::planar(&cells).unwrap();
    let ts = s.enumerate_tilings();
    let used: BTreeSet<usize> = ts.iter().flat_map(|t| t.edges().to_vec()).collect();
    assert!(used.len() < s.num_edges());
    let cls = TilingClass::of(&s, &ts[0]);
    assert!(!cls.is_stable());
    let other = ts.iter().find(|t| *t != &ts[0]).unwrap();
    assert_eq!(flip_connect(&s, &cls, &ts[0], other).unwrap_err(), HeightError::Unstable);
}

#[test]
fn annuli_have_different_flux() {
    let frame: Vec<[i32; 2]> =
        rect(4, 4).into_iter().filter(|&[x, y]| x == 0 || y == 0 || x == 3 || y == 3).collect();
    let ring: Vec<[i32; 2]> = rect(3, 3).into_iter().filter(|&c| c != [1, 1]).collect();
    for cells in [frame, ring] {
        let s = CoquadSurface::planar(&cells).unwrap();
        let ts = s.enumerate_tilings();
        assert_eq!(ts.len(), 2, "the two rotated tilings of the ring");
        assert_eq!(s.winding(&ts[0], &ts[1]).unwrap_err(), HeightError::DifferentFlux);
        let cls = TilingClass::of(&s, &ts[0]);
        assert_eq!(cls.len(), 1);
        assert_eq!(flip_connect(&s, &cls, &ts[0], &ts[1]).unwrap_err(), HeightError::DifferentFlux);
    }
}

struct Fixture {
    s: CoquadSurface,
    ts: Vec<SurfaceTiling>,
    cls: TilingClass,
    hs: Vec<HeightField>,
}

fn fixture(cells: &[[i32; 2]]) -> Fixture {
    let s = CoquadSurface::planar(cells).unwrap();
    let ts = s.enumerate_tilings();
    let cls = TilingClass::of(&s, &ts[0]);
    assert_eq!(cls.len(), ts.len());
    let hs = ts.iter().map(|t| height_function(&s, t, &cls).unwrap()).collect();
    Fixture { s, ts, cls, hs }
}

#[test]
fn windings_and_heights_telescope() {
    let f = fixture(&rect(4, 4));
    for (i, a) in f.ts.iter().enumerate() {
        assert!(f.s.winding(a, a).unwrap().iter().all(|&x| x == 0));
        for (j, b) in f.ts.iter().enumerate() {
            let w = f.s.winding(a, b).unwrap();
            for v in 0..f.s.num_faces() {
                assert_eq!(f.hs[i].value(v) - f.hs[j].value(v), Ratio::from_integer(w[v]));
            }
        }
    }
}

#[test]
fn flips_change_one_face_by_one() {
    let f = fixture(&rect(4, 4));
    for t in &f.ts {
        for face in f.s.available_flips(t) {
            let u = f.s.flip(t, face).unwrap();
            let w = f.s.winding(&u, t).unwrap();
            for v in 0..w.len() {
                assert_eq!(w[v].abs(), i64::from(v == face));
            }
        }
    }
}

#[test]
fn height_conditions_and_extrema() {
    for cells in [rect(2, 3), rect(4, 4), rect(3, 4)] {
        let f = fixture(&cells);
        for (t, h) in f.ts.iter().zip(&f.hs) {
            let c = h.conditions(&f.s, &f.hs[0]);
            assert!(c.vanishes_at_infinity && c.integral_offsets && c.strict_neighbor_bound);
            assert_eq!(reconstruct(&f.s, &f.cls, h).unwrap(), *t);
            let flips: BTreeSet<usize> = f.s.available_flips(t).into_iter().collect();
            for v in 0..f.s.num_faces() {
                if v != f.s.infinity() {
                    assert_eq!(h.is_local_extremum(&f.s, v), flips.contains(&v), "face {v}");
                }
            }
        }
    }
}

#[test]
fn join_and_meet_are_height_functions() {
    let f = fixture(&rect(4, 4));
    for a in &f.hs {
        for b in &f.hs {
            for m in [a.join(b), a.meet(b)] {
                assert!(m.conditions(&f.s, &f.hs[0]).all());
                let t = reconstruct(&f.s, &f.cls, &m).unwrap();
                assert_eq!(height_function(&f.s, &t, &f.cls).unwrap(), m);
            }
        }
    }
}

#[test]
fn flip_connect_is_shortest() {
    let f = fixture(&rect(4, 4));
    let dist = bfs_distances(&f.ts);
    let mut pairs = 0;
    for i in 0..f.ts.len() {
        for j in i + 1..f.ts.len() {
            let path = flip_connect(&f.s, &f.cls, &f.ts[i], &f.ts[j]).unwrap();
            assert_eq!(replay(&f.s, &f.ts[i], &path).unwrap(), f.ts[j]);
            let total: i64 = f.s.winding(&f.ts[j], &f.ts[i]).unwrap().iter().map(|w| w.abs()).sum();
            assert_eq!(path.len() as i64, total);
            assert_eq!(path.len(), dist[i][j]);
            pairs += 1;
        }
    }
    assert_eq!(pairs, 630);
}
