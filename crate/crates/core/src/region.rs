//! Cubiculated regions: boxes, rectangular tori and validated voxel sets.
//!
//! A [`Region`] is immutable once built. Cells are stored in lexicographic
//! order of their coordinates and addressed by [`CellId`]; the face-adjacency
//! table (the graph of the dual complex) is precomputed in the canonical
//! neighbor order `+x, −x, +y, −y, +z, −z`.
//!
//! Colors follow the parity convention `black ⇔ x+y+z even`, optionally
//! flipped for voxel regions.
//!
//! Tori with a period of 2 along some axis are *degenerate*: both wrap
//! directions join the same pair of cells. Such an axis keeps only the
//! non-wrapping step (from coordinate 0 to coordinate 1), so the dual graph
//! stays simple and every dimer has a single geometric position.

use crate::geometry::{step, Axis, CellId, Color, Coord, Dir, NO_CELL};
use crate::manifold;
use serde::{Deserialize, Serialize};
use std::collections::{HashSet, VecDeque};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RegionError {
    #[error("box dimensions must be positive, got {0:?}")]
    EmptyDimension([u32; 3]),
    #[error("region is unbalanced: {black} black cells vs {white} white cells")]
    Unbalanced { black: usize, white: usize },
    #[error("torus period along {axis} is {period}; periods must be even and at least 2")]
    OddPeriod { axis: Axis, period: u32 },
    #[error("voxel region has no cells")]
    Empty,
    #[error("cell {0:?} is listed more than once")]
    DuplicateCell(Coord),
    #[error("region is disconnected: cell {0:?} is not face-connected to the first cell")]
    Disconnected(Coord),
    #[error("non-manifold edge along {axis} at {at:?}: two cells meet only along this edge")]
    NonManifoldEdge { at: Coord, axis: Axis },
    #[error("non-manifold vertex at {at:?}: incident octants {pattern:08b} do not form a disk or sphere")]
    NonManifoldVertex { at: Coord, pattern: u8 },
    #[error("coordinates leave the signed 32-bit range")]
    CoordinateOverflow,
    #[error("region would have {0} cells, more than supported")]
    TooLarge(u64),
    #[error("voxel parity flag must be 0 or 1, got {0}")]
    BadParity(u8),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RegionKind {
    Box { dims: [u32; 3] },
    Torus { periods: [u32; 3] },
    Voxels,
}

/// A unit cube of the region together with its color.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Cell {
    pub coords: Coord,
    pub color: Color,
}

/// An exterior unit square: the face of `cell` in direction `dir`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoundaryFace {
    pub cell: CellId,
    pub dir: Dir,
}

/// JSON description of a region.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum RegionSpec {
    Box {
        dims: [u32; 3],
    },
    Torus {
        periods: [u32; 3],
    },
    Voxels {
        cells: Vec<Coord>,
        #[serde(default)]
        parity: u8,
    },
}

impl RegionSpec {
    pub fn build(&self) -> Result<Region, RegionError> {
        match self {
            RegionSpec::Box { dims } => Region::build_box(dims[0], dims[1], dims[2]),
            RegionSpec::Torus { periods } => Region::build_torus(periods[0], periods[1], periods[2]),
            RegionSpec::Voxels { cells, parity } => match parity {
                0 => Region::build_voxels(cells, false),
                1 => Region::build_voxels(cells, true),
                p => Err(RegionError::BadParity(*p)),
            },
        }
    }
}

#[derive(Clone, Debug)]
pub struct Region {
    kind: RegionKind,
    parity_flipped: bool,
    cells: Vec<Coord>,
    colors: Vec<Color>,
    neighbors: Vec<[CellId; 6]>,
    lookup: DenseLookup,
    boundary: Vec<BoundaryFace>,
}

/// Coordinate → cell table over the bounding box.
#[derive(Clone, Debug)]
struct DenseLookup {
    origin: Coord,
    extent: [i32; 3],
    slots: Vec<CellId>,
}

impl DenseLookup {
    fn new(cells: &[Coord]) -> DenseLookup {
        let mut lo = cells[0];
        let mut hi = cells[0];
        for c in cells {
            for a in 0..3 {
                lo[a] = lo[a].min(c[a]);
                hi[a] = hi[a].max(c[a]);
            }
        }
        let extent = [hi[0] - lo[0] + 1, hi[1] - lo[1] + 1, hi[2] - lo[2] + 1];
        let mut slots = vec![NO_CELL; extent.iter().map(|&e| e as usize).product()];
        let mut lookup = DenseLookup { origin: lo, extent, slots: Vec::new() };
        for (id, c) in cells.iter().enumerate() {
            let slot = lookup.slot(*c).expect("cell inside its own bounding box");
            slots[slot] = id as CellId;
        }
        lookup.slots = slots;
        lookup
    }

    fn slot(&self, c: Coord) -> Option<usize> {
        let mut idx = 0usize;
        for a in 0..3 {
            let off = c[a].checked_sub(self.origin[a])?;
            if off < 0 || off >= self.extent[a] {
                return None;
            }
            idx = idx * self.extent[a] as usize + off as usize;
        }
        Some(idx)
    }

    fn get(&self, c: Coord) -> Option<CellId> {
        let s = self.slot(c)?;
        let id = self.slots[s];
        (id != NO_CELL).then_some(id)
    }
}

fn color_of(c: Coord, flipped: bool) -> Color {
    let even = (c[0] as i64 + c[1] as i64 + c[2] as i64).rem_euclid(2) == 0;
    if even != flipped {
        Color::Black
    } else {
        Color::White
    }
}

const MAX_CELLS: u64 = (u32::MAX - 1) as u64;

impl Region {
    /// The box `[0,L]×[0,M]×[0,N]`.
    pub fn build_box(l: u32, m: u32, n: u32) -> Result<Region, RegionError> {
        let dims = [l, m, n];
        if dims.contains(&0) {
            return Err(RegionError::EmptyDimension(dims));
        }
        if dims.iter().any(|&d| d > i32::MAX as u32) {
            return Err(RegionError::CoordinateOverflow);
        }
        let total = dims.iter().map(|&d| d as u64).product::<u64>();
        if total > MAX_CELLS {
            return Err(RegionError::TooLarge(total));
        }
        if dims.iter().all(|d| d % 2 == 1) {
            let black = total.div_ceil(2) as usize;
            return Err(RegionError::Unbalanced { black, white: total as usize - black });
        }
        let cells = lattice_block(dims);
        Ok(Region::assemble(RegionKind::Box { dims }, false, cells))
    }

    /// The torus `ℤ³ / (aℤ × bℤ × cℤ)`; cells are reduced into `[0,a)×[0,b)×[0,c)`.
    pub fn build_torus(a: u32, b: u32, c: u32) -> Result<Region, RegionError> {
        let periods = [a, b, c];
        for axis in Axis::ALL {
            let p = periods[axis.index()];
            if p < 2 || p % 2 != 0 {
                return Err(RegionError::OddPeriod { axis, period: p });
            }
        }
        if periods.iter().any(|&d| d > i32::MAX as u32) {
            return Err(RegionError::CoordinateOverflow);
        }
        let total = periods.iter().map(|&d| d as u64).product::<u64>();
        if total > MAX_CELLS {
            return Err(RegionError::TooLarge(total));
        }
        let cells = lattice_block(periods);
        Ok(Region::assemble(RegionKind::Torus { periods }, false, cells))
    }

    /// Validate an arbitrary set of unit cubes.
    ///
    /// Checks run in this order and the first failure is reported: duplicate
    /// cells, non-manifold edges, non-manifold vertices, face connectivity,
    /// color balance.
    pub fn build_voxels(cells: &[Coord], parity_flipped: bool) -> Result<Region, RegionError> {
        if cells.is_empty() {
            return Err(RegionError::Empty);
        }
        if cells.len() as u64 > MAX_CELLS {
            return Err(RegionError::TooLarge(cells.len() as u64));
        }
        let mut present = HashSet::with_capacity(cells.len());
        for &c in cells {
            if !present.insert(c) {
                return Err(RegionError::DuplicateCell(c));
            }
        }
        let mut sorted = cells.to_vec();
        sorted.sort_unstable();
        manifold::check_edges(&sorted, &present)?;
        manifold::check_vertices(&sorted, &present)?;

        let region = Region::assemble(RegionKind::Voxels, parity_flipped, sorted);
        region.check_connected()?;
        let (black, white) = region.color_counts();
        if black != white {
            return Err(RegionError::Unbalanced { black, white });
        }
        Ok(region)
    }

    pub fn from_spec(spec: &RegionSpec) -> Result<Region, RegionError> {
        spec.build()
    }

    /// Canonical JSON description (voxel cells sorted lexicographically).
    pub fn to_spec(&self) -> RegionSpec {
        match &self.kind {
            RegionKind::Box { dims } => RegionSpec::Box { dims: *dims },
            RegionKind::Torus { periods } => RegionSpec::Torus { periods: *periods },
            RegionKind::Voxels => RegionSpec::Voxels {
                cells: self.cells.clone(),
                parity: u8::from(self.parity_flipped),
            },
        }
    }

    fn assemble(kind: RegionKind, parity_flipped: bool, cells: Vec<Coord>) -> Region {
        debug_assert!(cells.windows(2).all(|w| w[0] < w[1]));
        let colors = cells.iter().map(|&c| color_of(c, parity_flipped)).collect();
        let lookup = DenseLookup::new(&cells);
        let mut region = Region {
            kind,
            parity_flipped,
            cells,
            colors,
            neighbors: Vec::new(),
            lookup,
            boundary: Vec::new(),
        };
        let neighbors: Vec<[CellId; 6]> = region
            .cells
            .iter()
            .map(|&c| Dir::ALL.map(|d| region.geometric_step(c, d).unwrap_or(NO_CELL)))
            .collect();
        if !matches!(region.kind, RegionKind::Torus { .. }) {
            for (id, nbrs) in neighbors.iter().enumerate() {
                for d in Dir::ALL {
                    if nbrs[d.index()] == NO_CELL {
                        region.boundary.push(BoundaryFace { cell: id as CellId, dir: d });
                    }
                }
            }
        }
        region.neighbors = neighbors;
        region
    }

    /// The cell reached from `c` by a unit step, honoring wrap-around and the
    /// non-wrapping rule on degenerate torus axes.
    fn geometric_step(&self, c: Coord, d: Dir) -> Option<CellId> {
        let mut n = step(c, d);
        if let RegionKind::Torus { periods } = self.kind {
            let a = d.axis.index();
            let p = periods[a] as i32;
            if p == 2 && !(0..2).contains(&n[a]) {
                return None;
            }
            n[a] = n[a].rem_euclid(p);
        }
        self.lookup.get(n)
    }

    fn check_connected(&self) -> Result<(), RegionError> {
        let n = self.cells.len();
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0 as CellId]);
        seen[0] = true;
        while let Some(c) = queue.pop_front() {
            for nb in self.neighbors_of(c) {
                if !seen[nb as usize] {
                    seen[nb as usize] = true;
                    queue.push_back(nb);
                }
            }
        }
        match seen.iter().position(|s| !s) {
            Some(i) => Err(RegionError::Disconnected(self.cells[i])),
            None => Ok(()),
        }
    }

    /// Subdivide every cube into `5×5×5` cubes, `k` times.
    ///
    /// Corner and center subcubes keep the color of their parent.
    pub fn refine(&self, k: u32) -> Result<Region, RegionError> {
        if k == 0 {
            return Ok(self.clone());
        }
        let scale = 5i32.checked_pow(k).ok_or(RegionError::CoordinateOverflow)?;
        let total = (self.cells.len() as u64)
            .checked_mul((scale as u64).pow(3))
            .ok_or(RegionError::TooLarge(u64::MAX))?;
        if total > MAX_CELLS {
            return Err(RegionError::TooLarge(total));
        }
        let scale_dims = |d: [u32; 3]| -> Result<[u32; 3], RegionError> {
            let mut out = [0u32; 3];
            for a in 0..3 {
                let v = (d[a] as i64) * scale as i64;
                if v > i32::MAX as i64 {
                    return Err(RegionError::CoordinateOverflow);
                }
                out[a] = v as u32;
            }
            Ok(out)
        };
        match &self.kind {
            RegionKind::Box { dims } => {
                let d = scale_dims(*dims)?;
                Region::build_box(d[0], d[1], d[2])
            }
            RegionKind::Torus { periods } => {
                let p = scale_dims(*periods)?;
                Region::build_torus(p[0], p[1], p[2])
            }
            RegionKind::Voxels => {
                let mut cells = Vec::with_capacity(total as usize);
                for c in &self.cells {
                    let mut base = [0i32; 3];
                    for a in 0..3 {
                        base[a] = c[a].checked_mul(scale).ok_or(RegionError::CoordinateOverflow)?;
                        base[a].checked_add(scale - 1).ok_or(RegionError::CoordinateOverflow)?;
                    }
                    for i in 0..scale {
                        for j in 0..scale {
                            for l in 0..scale {
                                cells.push([base[0] + i, base[1] + j, base[2] + l]);
                            }
                        }
                    }
                }
                cells.sort_unstable();
                Ok(Region::assemble(RegionKind::Voxels, self.parity_flipped, cells))
            }
        }
    }

    pub fn kind(&self) -> &RegionKind {
        &self.kind
    }

    pub fn is_box(&self) -> bool {
        matches!(self.kind, RegionKind::Box { .. })
    }

    pub fn is_torus(&self) -> bool {
        matches!(self.kind, RegionKind::Torus { .. })
    }

    pub fn box_dims(&self) -> Option<[u32; 3]> {
        match self.kind {
            RegionKind::Box { dims } => Some(dims),
            _ => None,
        }
    }

    pub fn periods(&self) -> Option<[u32; 3]> {
        match self.kind {
            RegionKind::Torus { periods } => Some(periods),
            _ => None,
        }
    }

    /// Torus axes of period 2, where the wrap adjacency collapses onto the
    /// direct one.
    pub fn degenerate_axes(&self) -> [bool; 3] {
        match self.kind {
            RegionKind::Torus { periods } => periods.map(|p| p == 2),
            _ => [false; 3],
        }
    }

    pub fn has_degenerate_adjacency(&self) -> bool {
        self.degenerate_axes().contains(&true)
    }

    pub fn parity_flipped(&self) -> bool {
        self.parity_flipped
    }

    pub fn num_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn coords(&self) -> &[Coord] {
        &self.cells
    }

    pub fn coord(&self, id: CellId) -> Coord {
        self.cells[id as usize]
    }

    pub fn color(&self, id: CellId) -> Color {
        self.colors[id as usize]
    }

    pub fn cell(&self, id: CellId) -> Cell {
        Cell { coords: self.coord(id), color: self.color(id) }
    }

    pub fn color_at(&self, c: Coord) -> Color {
        color_of(c, self.parity_flipped)
    }

    /// Reduce coordinates into the fundamental domain (identity off tori).
    pub fn wrap(&self, mut c: Coord) -> Coord {
        if let RegionKind::Torus { periods } = self.kind {
            for a in 0..3 {
                c[a] = c[a].rem_euclid(periods[a] as i32);
            }
        }
        c
    }

    /// Look up a cell by coordinates, wrapping on tori.
    pub fn find(&self, c: Coord) -> Option<CellId> {
        self.lookup.get(self.wrap(c))
    }

    pub fn neighbor(&self, id: CellId, d: Dir) -> Option<CellId> {
        let n = self.neighbors[id as usize][d.index()];
        (n != NO_CELL).then_some(n)
    }

    /// Raw neighbor row in canonical direction order (`CellId::MAX` = none).
    pub(crate) fn neighbor_row(&self, id: CellId) -> &[CellId; 6] {
        &self.neighbors[id as usize]
    }

    pub fn neighbors_of(&self, id: CellId) -> impl Iterator<Item = CellId> + '_ {
        self.neighbors[id as usize].iter().copied().filter(|&n| n != NO_CELL)
    }

    pub fn degree(&self, id: CellId) -> usize {
        self.neighbors_of(id).count()
    }

    /// The unit step taking `from` to `to`, if they are adjacent.
    pub fn direction(&self, from: CellId, to: CellId) -> Option<Dir> {
        self.neighbors[from as usize]
            .iter()
            .position(|&n| n == to)
            .map(Dir::from_index)
    }

    pub fn are_adjacent(&self, a: CellId, b: CellId) -> bool {
        self.direction(a, b).is_some()
    }

    pub fn boundary_faces(&self) -> &[BoundaryFace] {
        &self.boundary
    }

    pub fn color_counts(&self) -> (usize, usize) {
        let black = self.colors.iter().filter(|&&c| c == Color::Black).count();
        (black, self.colors.len() - black)
    }

    /// Same cells, colors and adjacency, regardless of how the region was built.
    pub fn same_complex(&self, other: &Region) -> bool {
        self.cells == other.cells && self.colors == other.colors && self.neighbors == other.neighbors
    }

    /// Extent of the region along `axis` for boxes and tori.
    pub fn extent(&self, axis: Axis) -> Option<u32> {
        match self.kind {
            RegionKind::Box { dims } => Some(dims[axis.index()]),
            RegionKind::Torus { periods } => Some(periods[axis.index()]),
            RegionKind::Voxels => None,
        }
    }
}

impl PartialEq for Region {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind && self.parity_flipped == other.parity_flipped && self.cells == other.cells
    }
}

impl Eq for Region {}

fn lattice_block(dims: [u32; 3]) -> Vec<Coord> {
    let mut cells = Vec::with_capacity(dims.iter().map(|&d| d as usize).product());
    for x in 0..dims[0] as i32 {
        for y in 0..dims[1] as i32 {
            for z in 0..dims[2] as i32 {
                cells.push([x, y, z]);
            }
        }
    }
    cells
}
