//! Independent oracles shared by the integration tests. They work from raw
//! coordinates and never consult the library's adjacency tables.

#![allow(dead_code)]

use std::collections::HashMap;
use std::sync::Arc;
use tritile_core::{Coord, Region};

pub fn boxed(l: u32, m: u32, n: u32) -> Arc<Region> {
    Arc::new(Region::build_box(l, m, n).unwrap())
}

pub fn torus(a: u32, b: u32, c: u32) -> Arc<Region> {
    Arc::new(Region::build_torus(a, b, c).unwrap())
}

pub fn box_cells(dims: [i32; 3]) -> Vec<Coord> {
    let mut v = Vec::new();
    for x in 0..dims[0] {
        for y in 0..dims[1] {
            for z in 0..dims[2] {
                v.push([x, y, z]);
            }
        }
    }
    v
}

/// Number of perfect matchings of the face-adjacency graph of a cell set,
/// by memoized recursion over bitmasks of covered cells.
pub fn count_matchings(cells: &[Coord]) -> u64 {
    assert!(cells.len() <= 63);
    let index: HashMap<Coord, usize> = cells.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let adj: Vec<Vec<usize>> = cells
        .iter()
        .map(|c| {
            let mut out = Vec::new();
            for a in 0..3 {
                for s in [-1, 1] {
                    let mut n = *c;
                    n[a] += s;
                    if let Some(&j) = index.get(&n) {
                        out.push(j);
                    }
                }
            }
            out
        })
        .collect();
    fn go(mask: u64, full: u64, adj: &[Vec<usize>], memo: &mut HashMap<u64, u64>) -> u64 {
        if mask == full {
            return 1;
        }
        if let Some(&v) = memo.get(&mask) {
            return v;
        }
        let i = (!mask).trailing_zeros() as usize;
        let mut total = 0;
        for &j in &adj[i] {
            if mask & (1 << j) == 0 {
                total += go(mask | 1 << i | 1 << j, full, adj, memo);
            }
        }
        memo.insert(mask, total);
        total
    }
    let full = if cells.len() == 64 { u64::MAX } else { (1u64 << cells.len()) - 1 };
    go(0, full, &adj, &mut HashMap::new())
}

pub fn tiling_pairs(t: &tritile_core::Tiling) -> Vec<[Coord; 2]> {
    t.coord_pairs()
}

fn sub(a: Coord, b: Coord) -> Coord {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn det(a: Coord, b: Coord, c: Coord) -> i64 {
    (a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) + a[2] * (b[0] * c[1] - b[1] * c[0]))
        as i64
}

/// `4·Tw_u` by summing over all ordered dimer pairs of a box tiling: `d′`
/// counts when one of its cells lies strictly above a cell of `d` along `u`.
pub fn quarter_twist_oracle(t: &tritile_core::Tiling, u: usize) -> i64 {
    let pairs = t.coord_pairs();
    let mut e = [0; 3];
    e[u] = 1;
    let mut total = 0;
    for [w, b] in &pairs {
        let v = sub(*b, *w);
        for [w2, b2] in &pairs {
            let v2 = sub(*b2, *w2);
            let above = [w, b].iter().any(|p| {
                [w2, b2].iter().any(|q| (0..3).all(|a| if a == u { q[a] > p[a] } else { q[a] == p[a] }))
            });
            if above {
                total += det(v2, v, e);
            }
        }
    }
    total
}

/// Flip slabs of a box tiling found by scanning every unit square of cells.
pub fn flip_count_oracle(t: &tritile_core::Tiling) -> usize {
    let mate: HashMap<Coord, Coord> =
        t.coord_pairs().into_iter().flat_map(|[a, b]| [(a, b), (b, a)]).collect();
    let mut n = 0;
    for &c in mate.keys() {
        for (p, q) in [(0, 1), (1, 2), (0, 2)] {
            let mut cp = c;
            cp[p] += 1;
            let mut cq = c;
            cq[q] += 1;
            let mut cpq = cp;
            cpq[q] += 1;
            if !mate.contains_key(&cpq) || !mate.contains_key(&cp) || !mate.contains_key(&cq) {
                continue;
            }
            if (mate[&c] == cp && mate[&cq] == cpq) || (mate[&c] == cq && mate[&cp] == cpq) {
                n += 1;
            }
        }
    }
    n
}

/// Trit patterns of a box tiling: 2×2×2 cubes (possibly sticking out of the
/// box) holding three dimers on the six cells off an antipodal pair, with at
/// least one of that pair inside the region.
pub fn trit_count_oracle(t: &tritile_core::Tiling) -> usize {
    let mate: HashMap<Coord, Coord> =
        t.coord_pairs().into_iter().flat_map(|[a, b]| [(a, b), (b, a)]).collect();
    let dims = t.region().box_dims().unwrap().map(|d| d as i32);
    let mut n = 0;
    for ax in -1..dims[0] {
        for ay in -1..dims[1] {
            for az in -1..dims[2] {
                for low in 0..4 {
                    let corner = |bits: i32| [ax + (bits & 1), ay + (bits >> 1 & 1), az + (bits >> 2 & 1)];
                    let pair = [corner(low), corner(7 - low)];
                    let six: Vec<Coord> =
                        (0..8).filter(|&b| b != low && b != 7 - low).map(corner).collect();
                    if !pair.iter().any(|p| mate.contains_key(p)) {
                        continue;
                    }
                    if six.iter().all(|c| mate.get(c).is_some_and(|m| six.contains(m))) {
                        n += 1;
                    }
                }
            }
        }
    }
    n
}
