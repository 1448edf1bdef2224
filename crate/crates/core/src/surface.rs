//! Embedded discrete surfaces made of unit squares of the dual complex.
//!
//! Dual vertices are cell centers and are addressed by cell coordinates. A
//! dual square normal to axis `n` with base `c` has corners `c`, `c+e_p`,
//! `c+e_q`, `c+e_p+e_q`, where `(n, p, q)` is a right-handed cyclic frame.
//! Each square carries a normal sign; its boundary is oriented
//! counterclockwise when seen from the side the normal points to.
//!
//! On tori all coordinates are reduced into the fundamental domain, so a
//! square or edge is identified by its reduced base and axis.

use crate::geometry::{add, Axis, CellId, Coord, Dir};
use crate::region::Region;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SurfaceError {
    #[error("square at {base:?} normal to {axis} is listed twice")]
    DuplicateSquare { base: Coord, axis: Axis },
    #[error("square at {base:?} normal to {axis} has a corner outside the region")]
    OutsideRegion { base: Coord, axis: Axis },
    #[error("dual edge at {base:?} along {axis} is shared by {count} squares")]
    NonManifoldEdge { base: Coord, axis: Axis, count: usize },
    #[error("squares meeting along the dual edge at {base:?} along {axis} have clashing orientations")]
    IncoherentEdge { base: Coord, axis: Axis },
    #[error("surface does not separate a neighborhood of vertex {0:?} into two coherent sides")]
    IncoherentVertex(Coord),
    #[error("vertex {0:?} is not an interior vertex of the surface")]
    NotInterior(Coord),
    #[error("dual box at {corner:?} with dims {dims:?} is not contained in the region")]
    BoxOutsideRegion { corner: Coord, dims: [u32; 3] },
    #[error("dual box dimensions must be positive, got {0:?}")]
    EmptyBox([u32; 3]),
    #[error("cutting surfaces exist only on tori")]
    RequiresTorus,
    #[error("malformed surface description: {0}")]
    Parse(String),
}

/// A unit square of the dual complex with an oriented normal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DualSquare {
    pub base: Coord,
    pub normal: Dir,
}

impl DualSquare {
    pub fn new(base: Coord, normal: Dir) -> DualSquare {
        DualSquare { base, normal }
    }

    /// In-plane axes `(p, q)` with `e_p × e_q = e_n`.
    pub fn plane(&self) -> (Axis, Axis) {
        self.normal.axis.cyclic_others()
    }

    pub fn corners(&self) -> [Coord; 4] {
        let (p, q) = self.plane();
        let c = self.base;
        [c, add(c, p.unit()), add(add(c, p.unit()), q.unit()), add(c, q.unit())]
    }

    /// Boundary edges as `(edge base, axis, ±1)`, counterclockwise around the normal.
    pub fn oriented_edges(&self) -> [(Coord, Axis, i32); 4] {
        let (p, q) = self.plane();
        let s = self.normal.sign();
        let c = self.base;
        [
            (c, p, s),
            (add(c, p.unit()), q, s),
            (add(c, q.unit()), p, -s),
            (c, q, -s),
        ]
    }

    /// Center in doubled geometric coordinates (cell centers sit at odd values).
    pub fn doubled_center(&self) -> Coord {
        let (p, q) = self.plane();
        let mut c = self.base.map(|x| 2 * x + 1);
        c[p.index()] += 1;
        c[q.index()] += 1;
        c
    }

    pub fn from_doubled_center(center: Coord, normal: Dir) -> Result<DualSquare, SurfaceError> {
        let (p, q) = normal.axis.cyclic_others();
        let mut base = [0; 3];
        for a in Axis::ALL {
            let offset = if a == p || a == q { 2 } else { 1 };
            let v = center[a.index()] - offset;
            if v.rem_euclid(2) != 0 {
                return Err(SurfaceError::Parse(format!(
                    "center {center:?} is not a square center for normal {normal}"
                )));
            }
            base[a.index()] = v.div_euclid(2);
        }
        Ok(DualSquare { base, normal })
    }
}

/// An oriented dual edge `from → to`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DualEdge {
    pub base: Coord,
    pub axis: Axis,
    /// +1 when oriented from `base` along `+axis`.
    pub orientation: i32,
}

/// JSON form of one square.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SquareRecord {
    pub center: Coord,
    pub normal: String,
}

#[derive(Clone, Debug)]
pub struct DiscreteSurface {
    region: Arc<Region>,
    squares: Vec<DualSquare>,
    /// Normal sign per `(reduced base, normal axis)`.
    square_index: BTreeMap<(Coord, Axis), i32>,
    /// Every dual edge of some square, by `(reduced base, axis)`.
    edges: BTreeSet<(Coord, Axis)>,
    boundary: Vec<DualEdge>,
    boundary_vertices: Vec<CellId>,
    interior_vertices: Vec<CellId>,
}

impl DiscreteSurface {
    pub fn new(region: &Arc<Region>, squares: Vec<DualSquare>) -> Result<DiscreteSurface, SurfaceError> {
        let mut square_index = BTreeMap::new();
        let mut vertices = BTreeSet::new();
        let mut edge_sum: BTreeMap<(Coord, Axis), (i32, usize)> = BTreeMap::new();
        let mut normalized = Vec::with_capacity(squares.len());
        for sq in squares {
            let base = region.wrap(sq.base);
            let axis = sq.normal.axis;
            let sq = DualSquare::new(base, sq.normal);
            for corner in sq.corners() {
                let id = region.find(corner).ok_or(SurfaceError::OutsideRegion { base, axis })?;
                vertices.insert(id);
            }
            if square_index.insert((base, axis), sq.normal.sign()).is_some() {
                return Err(SurfaceError::DuplicateSquare { base, axis });
            }
            for (e, ax, o) in sq.oriented_edges() {
                let entry = edge_sum.entry((region.wrap(e), ax)).or_default();
                entry.0 += o;
                entry.1 += 1;
            }
            normalized.push(sq);
        }

        let mut boundary = Vec::new();
        let mut boundary_set = BTreeSet::new();
        for (&(base, axis), &(sum, count)) in &edge_sum {
            if count > 2 {
                return Err(SurfaceError::NonManifoldEdge { base, axis, count });
            }
            if count == 2 && sum != 0 {
                return Err(SurfaceError::IncoherentEdge { base, axis });
            }
            if count == 1 {
                boundary.push(DualEdge { base, axis, orientation: sum });
                for end in [base, add(base, axis.unit())] {
                    boundary_set.insert(region.find(end).expect("edge ends are square corners"));
                }
            }
        }
        let interior_vertices = vertices.difference(&boundary_set).copied().collect();
        Ok(DiscreteSurface {
            region: region.clone(),
            squares: normalized,
            square_index,
            edges: edge_sum.into_keys().collect(),
            boundary,
            boundary_vertices: boundary_set.into_iter().collect(),
            interior_vertices,
        })
    }

    pub fn region(&self) -> &Arc<Region> {
        &self.region
    }

    pub fn squares(&self) -> &[DualSquare] {
        &self.squares
    }

    pub fn len(&self) -> usize {
        self.squares.len()
    }

    pub fn is_empty(&self) -> bool {
        self.squares.is_empty()
    }

    /// Oriented boundary edges, sorted by base and axis.
    pub fn boundary(&self) -> &[DualEdge] {
        &self.boundary
    }

    pub fn is_closed(&self) -> bool {
        self.boundary.is_empty()
    }

    pub fn boundary_vertices(&self) -> &[CellId] {
        &self.boundary_vertices
    }

    pub fn interior_vertices(&self) -> &[CellId] {
        &self.interior_vertices
    }

    /// All vertices of the surface.
    pub fn vertices(&self) -> Vec<CellId> {
        let mut all: Vec<CellId> = self.boundary_vertices.iter().chain(&self.interior_vertices).copied().collect();
        all.sort_unstable();
        all
    }

    /// Key of the dual edge leaving `cell` in direction `dir`.
    pub(crate) fn edge_key(&self, cell: CellId, dir: Dir) -> (Coord, Axis) {
        let c = self.region.coord(cell);
        let base = if dir.positive { c } else { add(c, dir.vector()) };
        (self.region.wrap(base), dir.axis)
    }

    pub fn contains_edge(&self, cell: CellId, dir: Dir) -> bool {
        self.edges.contains(&self.edge_key(cell, dir))
    }

    pub fn is_boundary_edge(&self, cell: CellId, dir: Dir) -> bool {
        let key = self.edge_key(cell, dir);
        self.boundary.binary_search_by(|e| (e.base, e.axis).cmp(&key)).is_ok()
    }

    fn square_sign(&self, base: Coord, axis: Axis) -> Option<i32> {
        self.square_index.get(&(self.region.wrap(base), axis)).copied()
    }

    /// Side of the surface reached by stepping from interior vertex `cell`
    /// along `dir`: `+1` toward the normal, `−1` away from it, `0` when the
    /// step runs inside the surface.
    pub fn side(&self, cell: CellId, dir: Dir) -> Result<i32, SurfaceError> {
        let v = self.region.coord(cell);
        if self.interior_vertices.binary_search(&cell).is_err() {
            return Err(SurfaceError::NotInterior(v));
        }
        if self.contains_edge(cell, dir) {
            return Ok(0);
        }
        // Octant bit a set means the negative side along axis a.
        let octant_sign = |o: usize, a: usize| if o >> a & 1 == 1 { -1 } else { 1 };
        // The quarter square at v normal to `a`, on the given side of the other axes.
        let wall = |o: usize, a: Axis| {
            let mut base = v;
            for b in Axis::ALL {
                if b != a && octant_sign(o, b.index()) < 0 {
                    base[b.index()] -= 1;
                }
            }
            self.square_sign(base, a)
        };

        let mut parent: [usize; 8] = std::array::from_fn(|i| i);
        fn root(parent: &mut [usize; 8], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for o in 0..8 {
            for a in Axis::ALL {
                let n = o ^ (1 << a.index());
                if n < o || wall(o, a).is_some() {
                    continue;
                }
                let (ro, rn) = (root(&mut parent, o), root(&mut parent, n));
                parent[ro] = rn;
            }
        }
        let mut label = [0i32; 8];
        for o in 0..8 {
            for a in Axis::ALL {
                if octant_sign(o, a.index()) < 0 {
                    continue;
                }
                if let Some(s) = wall(o, a) {
                    let n = o ^ (1 << a.index());
                    for (oct, value) in [(o, s), (n, -s)] {
                        let r = root(&mut parent, oct);
                        if label[r] == -value {
                            return Err(SurfaceError::IncoherentVertex(v));
                        }
                        label[r] = value;
                    }
                }
            }
        }
        // any octant on the far side of the step
        let probe = if dir.positive { 0 } else { 1 << dir.axis.index() };
        match label[root(&mut parent, probe)] {
            0 => Err(SurfaceError::IncoherentVertex(v)),
            s => Ok(s),
        }
    }

    pub fn to_records(&self) -> Vec<SquareRecord> {
        self.squares
            .iter()
            .map(|s| SquareRecord { center: s.doubled_center(), normal: s.normal.to_string() })
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_records()).expect("surface serializes")
    }

    pub fn from_records(region: &Arc<Region>, records: &[SquareRecord]) -> Result<DiscreteSurface, SurfaceError> {
        let squares = records
            .iter()
            .map(|r| {
                let normal: Dir = r.normal.parse().map_err(SurfaceError::Parse)?;
                DualSquare::from_doubled_center(r.center, normal)
            })
            .collect::<Result<Vec<_>, _>>()?;
        DiscreteSurface::new(region, squares)
    }

    pub fn from_json(region: &Arc<Region>, text: &str) -> Result<DiscreteSurface, SurfaceError> {
        let records: Vec<SquareRecord> = serde_json::from_str(text).map_err(|e| SurfaceError::Parse(e.to_string()))?;
        DiscreteSurface::from_records(region, &records)
    }
}

fn dual_box_vertices(corner: Coord, dims: [u32; 3]) -> impl Iterator<Item = Coord> {
    let [l, m, n] = dims.map(|d| d as i32);
    (0..=l).flat_map(move |i| {
        (0..=m).flat_map(move |j| (0..=n).map(move |k| [corner[0] + i, corner[1] + j, corner[2] + k]))
    })
}

/// Faces of the dual box `corner + [0,L]×[0,M]×[0,N]` with outward normals.
///
/// Every dual vertex of the closed box, enclosed ones included, must be a
/// cell of the region.
pub fn closed_box_surface(region: &Arc<Region>, corner: Coord, dims: [u32; 3]) -> Result<DiscreteSurface, SurfaceError> {
    if dims.contains(&0) {
        return Err(SurfaceError::EmptyBox(dims));
    }
    if region.is_torus() && (0..3).any(|a| dims[a] >= region.periods().unwrap()[a]) {
        return Err(SurfaceError::BoxOutsideRegion { corner, dims });
    }
    if dual_box_vertices(corner, dims).any(|v| region.find(v).is_none()) {
        return Err(SurfaceError::BoxOutsideRegion { corner, dims });
    }
    let mut squares = Vec::new();
    for n in Axis::ALL {
        let (p, q) = n.cyclic_others();
        for (level, positive) in [(0, false), (dims[n.index()] as i32, true)] {
            for i in 0..dims[p.index()] as i32 {
                for j in 0..dims[q.index()] as i32 {
                    let mut base = corner;
                    base[n.index()] += level;
                    base[p.index()] += i;
                    base[q.index()] += j;
                    squares.push(DualSquare::new(base, Dir::new(n, positive)));
                }
            }
        }
    }
    DiscreteSurface::new(region, squares)
}

/// Dual vertices strictly inside the dual box.
pub fn dual_box_interior(region: &Region, corner: Coord, dims: [u32; 3]) -> Vec<CellId> {
    let inside = add(corner, [1, 1, 1]);
    let inner = dims.map(|d| d.saturating_sub(2));
    if dims.iter().any(|&d| d < 2) {
        return Vec::new();
    }
    let mut cells: Vec<CellId> = dual_box_vertices(inside, inner).filter_map(|v| region.find(v)).collect();
    cells.sort_unstable();
    cells
}

/// The closed surface of all dual squares normal to `axis` through the
/// cell layer `level`, with normal `+axis`.
pub fn cutting_surface(region: &Arc<Region>, axis: Axis, level: i32) -> Result<DiscreteSurface, SurfaceError> {
    let periods = region.periods().ok_or(SurfaceError::RequiresTorus)?;
    let (p, q) = axis.cyclic_others();
    let mut squares = Vec::new();
    for i in 0..periods[p.index()] as i32 {
        for j in 0..periods[q.index()] as i32 {
            let mut base = [0; 3];
            base[axis.index()] = level;
            base[p.index()] = i;
            base[q.index()] = j;
            squares.push(DualSquare::new(base, Dir::plus(axis)));
        }
    }
    DiscreteSurface::new(region, squares)
}
