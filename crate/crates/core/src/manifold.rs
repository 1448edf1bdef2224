//! Local manifold checks for voxel regions.
//!
//! Only local patterns are inspected: the cells around every lattice edge and
//! the cells around every lattice vertex. A region passing both checks is a
//! 3-manifold with boundary near every edge and vertex, which is what the
//! tiling machinery relies on. Global topology is not classified.

use crate::geometry::{add, Axis, Coord};
use crate::region::RegionError;
use std::collections::HashSet;
use std::sync::OnceLock;

/// Octant `s` at lattice point `p` is the cell `p - s`, bit `a` of the index
/// being `s[a]`.
fn octant_offset(index: usize) -> [i32; 3] {
    [
        -((index & 1) as i32),
        -(((index >> 1) & 1) as i32),
        -(((index >> 2) & 1) as i32),
    ]
}

/// The four octants around an octahedron vertex `(axis, side)`, in cyclic order.
fn octants_around(axis: usize, side: usize) -> [usize; 4] {
    let b = (axis + 1) % 3;
    let c = (axis + 2) % 3;
    let at = |sb: usize, sc: usize| (side << axis) | (sb << b) | (sc << c);
    [at(0, 0), at(1, 0), at(1, 1), at(0, 1)]
}

/// True when the occupied octants around a vertex form a closed disk or the
/// whole sphere on the link octahedron.
pub(crate) fn vertex_pattern_is_manifold(mask: u8) -> bool {
    let occupied = |o: usize| mask & (1 << o) != 0;
    let faces = mask.count_ones() as i32;
    if faces == 8 {
        return true;
    }
    if faces == 0 {
        return false;
    }

    // No pinch at any octahedron vertex: occupied triangles around it must be
    // a single contiguous arc.
    let mut vertices = 0;
    for axis in 0..3 {
        for side in 0..2 {
            let ring = octants_around(axis, side);
            let filled: Vec<bool> = ring.iter().map(|&o| occupied(o)).collect();
            let count = filled.iter().filter(|&&f| f).count();
            if count == 0 {
                continue;
            }
            vertices += 1;
            if count < 4 {
                let runs = (0..4).filter(|&i| filled[i] && !filled[(i + 3) % 4]).count();
                if runs != 1 {
                    return false;
                }
            }
        }
    }

    // Octahedron edges touched by at least one occupied triangle.
    let mut edges = 0;
    for a in 0..3 {
        for b in (a + 1)..3 {
            let c = 3 - a - b;
            for sa in 0..2 {
                for sb in 0..2 {
                    let base = (sa << a) | (sb << b);
                    if occupied(base) || occupied(base | (1 << c)) {
                        edges += 1;
                    }
                }
            }
        }
    }

    // Connected through shared octahedron edges (octants differing in one bit).
    let first = (0..8).find(|&o| occupied(o)).unwrap();
    let mut seen = 1u8 << first;
    let mut stack = vec![first];
    while let Some(o) = stack.pop() {
        for bit in 0..3 {
            let n = o ^ (1 << bit);
            if occupied(n) && seen & (1 << n) == 0 {
                seen |= 1 << n;
                stack.push(n);
            }
        }
    }
    if seen != mask {
        return false;
    }

    vertices - edges + faces == 1
}

fn vertex_table() -> &'static [bool; 256] {
    static TABLE: OnceLock<[bool; 256]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = [false; 256];
        for (m, slot) in t.iter_mut().enumerate() {
            *slot = vertex_pattern_is_manifold(m as u8);
        }
        t
    })
}

/// Every lattice edge touched by the region must see its incident cells as a
/// contiguous fan: exactly two cells sitting diagonally is rejected.
pub(crate) fn check_edges(cells: &[Coord], present: &HashSet<Coord>) -> Result<(), RegionError> {
    let mut seen = HashSet::new();
    for &cell in cells {
        for axis in Axis::ALL {
            let (b, c) = axis.cyclic_others();
            for sb in 0..2 {
                for sc in 0..2 {
                    let mut origin = cell;
                    origin[b.index()] += sb;
                    origin[c.index()] += sc;
                    if !seen.insert((origin, axis)) {
                        continue;
                    }
                    // Cells around the edge in cyclic order.
                    let around = [(0, 0), (1, 0), (1, 1), (0, 1)].map(|(db, dc)| {
                        let mut q = origin;
                        q[b.index()] -= db;
                        q[c.index()] -= dc;
                        present.contains(&q)
                    });
                    let diagonal = around == [true, false, true, false] || around == [false, true, false, true];
                    if diagonal {
                        return Err(RegionError::NonManifoldEdge { at: origin, axis });
                    }
                }
            }
        }
    }
    Ok(())
}

pub(crate) fn check_vertices(cells: &[Coord], present: &HashSet<Coord>) -> Result<(), RegionError> {
    let table = vertex_table();
    let mut seen = HashSet::new();
    for &cell in cells {
        for corner in 0..8 {
            let point = add(cell, [(corner & 1) as i32, ((corner >> 1) & 1) as i32, ((corner >> 2) & 1) as i32]);
            if !seen.insert(point) {
                continue;
            }
            let mut mask = 0u8;
            for o in 0..8 {
                if present.contains(&add(point, octant_offset(o))) {
                    mask |= 1 << o;
                }
            }
            if !table[mask as usize] {
                return Err(RegionError::NonManifoldVertex { at: point, pattern: mask });
            }
        }
    }
    Ok(())
}
