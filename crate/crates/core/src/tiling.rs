//! Tilings as perfect matchings of the dual graph.

use crate::geometry::{Axis, CellId, Color, Coord, Dir, NO_CELL};
use crate::region::{Region, RegionError, RegionKind, RegionSpec};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TilingError {
    #[error("cell covered twice: {0:?}")]
    CoveredTwice(Coord),
    #[error("cell uncovered: {0:?}")]
    Uncovered(Coord),
    #[error("cells {0:?} and {1:?} are not face-adjacent")]
    NotAdjacent(Coord, Coord),
    #[error("dimer {white:?} -> {black:?} must start at a white cell and end at a black cell")]
    WrongOrientation { white: Coord, black: Coord },
    #[error("no cell at {0:?}")]
    UnknownCell(Coord),
    #[error("tiling belongs to a different region")]
    RegionMismatch,
    #[error("region extent along {axis} is {extent}, which is odd")]
    OddExtent { axis: Axis, extent: u32 },
    #[error("cell {0:?} has no partner along the requested axis")]
    NotBrickable(Coord),
    #[error(transparent)]
    Region(#[from] RegionError),
    #[error("malformed tiling file: {0}")]
    Parse(String),
}

/// A domino seen as an oriented dual edge from its white cell to its black cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Dimer {
    pub white: CellId,
    pub black: CellId,
}

/// A perfect matching of a region's dual graph.
///
/// Stored as the mate of every cell, with a 64-bit hash that depends only on
/// the set of dimers.
#[derive(Clone)]
pub struct Tiling {
    region: Arc<Region>,
    mate: Vec<CellId>,
    hash: u64,
}

impl fmt::Debug for Tiling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Tiling")
            .field("cells", &self.mate.len())
            .field("hash", &format_args!("{:016x}", self.hash))
            .finish()
    }
}

impl PartialEq for Tiling {
    fn eq(&self, other: &Self) -> bool {
        self.hash == other.hash
            && self.mate == other.mate
            && (Arc::ptr_eq(&self.region, &other.region) || self.region == other.region)
    }
}

impl Eq for Tiling {}

fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Hash of a matching: fold of `(white, direction)` codes taken in white-cell order.
pub(crate) fn matching_hash(region: &Region, mate: &[CellId]) -> u64 {
    let mut h = 0x9e37_79b9_7f4a_7c15u64;
    for (cell, &m) in mate.iter().enumerate() {
        let cell = cell as CellId;
        if region.color(cell) != Color::White {
            continue;
        }
        let dir = region.direction(cell, m).map_or(7, |d| d.index() as u64);
        h = mix(h ^ ((cell as u64) << 3 | dir));
    }
    h
}

impl Tiling {
    /// Build from a complete mate table. The caller guarantees it is a perfect matching.
    pub(crate) fn from_mates_unchecked(region: Arc<Region>, mate: Vec<CellId>) -> Tiling {
        debug_assert!(check_mates(&region, &mate).is_ok());
        let hash = matching_hash(&region, &mate);
        Tiling { region, mate, hash }
    }

    /// Build from a mate table, validating it.
    pub fn from_mates(region: Arc<Region>, mate: Vec<CellId>) -> Result<Tiling, TilingError> {
        if mate.len() != region.num_cells() {
            return Err(TilingError::RegionMismatch);
        }
        check_mates(&region, &mate)?;
        Ok(Tiling::from_mates_unchecked(region, mate))
    }

    /// Build from `(white, black)` cell pairs.
    pub fn from_dimers(region: Arc<Region>, dimers: &[(CellId, CellId)]) -> Result<Tiling, TilingError> {
        let mut mate = vec![NO_CELL; region.num_cells()];
        for &(w, b) in dimers {
            for c in [w, b] {
                if c as usize >= mate.len() {
                    return Err(TilingError::Parse(format!("cell id {c} out of range")));
                }
            }
            let (wc, bc) = (region.coord(w), region.coord(b));
            if region.color(w) != Color::White || region.color(b) != Color::Black {
                return Err(TilingError::WrongOrientation { white: wc, black: bc });
            }
            if !region.are_adjacent(w, b) {
                return Err(TilingError::NotAdjacent(wc, bc));
            }
            for c in [w, b] {
                if mate[c as usize] != NO_CELL {
                    return Err(TilingError::CoveredTwice(region.coord(c)));
                }
            }
            mate[w as usize] = b;
            mate[b as usize] = w;
        }
        if let Some(c) = mate.iter().position(|&m| m == NO_CELL) {
            return Err(TilingError::Uncovered(region.coord(c as CellId)));
        }
        Ok(Tiling::from_mates_unchecked(region, mate))
    }

    /// Build from `(white, black)` coordinate pairs (wrapped on tori).
    pub fn from_coord_pairs(region: Arc<Region>, pairs: &[[Coord; 2]]) -> Result<Tiling, TilingError> {
        let mut ids = Vec::with_capacity(pairs.len());
        for [w, b] in pairs {
            let wi = region.find(*w).ok_or(TilingError::UnknownCell(*w))?;
            let bi = region.find(*b).ok_or(TilingError::UnknownCell(*b))?;
            ids.push((wi, bi));
        }
        Tiling::from_dimers(region, &ids)
    }

    pub fn region(&self) -> &Arc<Region> {
        &self.region
    }

    pub fn hash(&self) -> u64 {
        self.hash
    }

    pub fn mate(&self, cell: CellId) -> CellId {
        self.mate[cell as usize]
    }

    pub fn mates(&self) -> &[CellId] {
        &self.mate
    }

    pub fn num_dimers(&self) -> usize {
        self.mate.len() / 2
    }

    /// The dimer covering `cell`.
    pub fn dimer_at(&self, cell: CellId) -> Dimer {
        let m = self.mate(cell);
        match self.region.color(cell) {
            Color::White => Dimer { white: cell, black: m },
            Color::Black => Dimer { white: m, black: cell },
        }
    }

    pub fn contains(&self, d: Dimer) -> bool {
        self.mate.get(d.white as usize) == Some(&d.black)
    }

    /// Dimers in increasing order of their white cell.
    pub fn dimers(&self) -> impl Iterator<Item = Dimer> + '_ {
        (0..self.mate.len() as CellId)
            .filter(|&c| self.region.color(c) == Color::White)
            .map(|w| Dimer { white: w, black: self.mate[w as usize] })
    }

    /// The unit step `v(d) = black − white` of a dimer.
    pub fn direction(&self, d: Dimer) -> Dir {
        self.region
            .direction(d.white, d.black)
            .expect("dimer cells are adjacent")
    }

    /// Check the matching against its region.
    pub fn validate(&self) -> Result<(), TilingError> {
        check_mates(&self.region, &self.mate)
    }

    /// Replace dimers, checking that exactly the removed cells are re-covered.
    pub(crate) fn with_exchange(&self, removed: &[Dimer], inserted: &[Dimer]) -> Tiling {
        let mut mate = self.mate.clone();
        for d in removed {
            mate[d.white as usize] = NO_CELL;
            mate[d.black as usize] = NO_CELL;
        }
        for d in inserted {
            debug_assert_eq!(mate[d.white as usize], NO_CELL);
            debug_assert_eq!(mate[d.black as usize], NO_CELL);
            mate[d.white as usize] = d.black;
            mate[d.black as usize] = d.white;
        }
        Tiling::from_mates_unchecked(self.region.clone(), mate)
    }

    /// `(white, black)` coordinate pairs sorted by white coordinates.
    pub fn coord_pairs(&self) -> Vec<[Coord; 2]> {
        // cells are stored in lexicographic order, so white-id order is coordinate order
        self.dimers()
            .map(|d| [self.region.coord(d.white), self.region.coord(d.black)])
            .collect()
    }

    pub fn to_file(&self) -> TilingFile {
        TilingFile { region: self.region.to_spec(), dimers: self.coord_pairs() }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("tiling serializes")
    }

    /// Parse a tiling file, building its region from the embedded description.
    pub fn from_json(text: &str) -> Result<Tiling, TilingError> {
        let file: TilingFile = serde_json::from_str(text).map_err(|e| TilingError::Parse(e.to_string()))?;
        let region = Arc::new(file.region.build()?);
        Tiling::from_coord_pairs(region, &file.dimers)
    }

    /// Parse a tiling file against an existing region.
    pub fn from_json_in(text: &str, region: &Arc<Region>) -> Result<Tiling, TilingError> {
        let file: TilingFile = serde_json::from_str(text).map_err(|e| TilingError::Parse(e.to_string()))?;
        if file.region != region.to_spec() {
            return Err(TilingError::RegionMismatch);
        }
        Tiling::from_coord_pairs(region.clone(), &file.dimers)
    }
}

/// On-disk form of a tiling.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TilingFile {
    pub region: RegionSpec,
    pub dimers: Vec<[Coord; 2]>,
}

fn check_mates(region: &Region, mate: &[CellId]) -> Result<(), TilingError> {
    for (c, &m) in mate.iter().enumerate() {
        let c = c as CellId;
        if m == NO_CELL || m as usize >= mate.len() {
            return Err(TilingError::Uncovered(region.coord(c)));
        }
        if mate[m as usize] != c {
            return Err(TilingError::CoveredTwice(region.coord(m)));
        }
        if !region.are_adjacent(c, m) {
            return Err(TilingError::NotAdjacent(region.coord(c), region.coord(m)));
        }
    }
    Ok(())
}

/// The brick tiling pairing cells at offsets `(2i, 2i+1)` along `axis`.
pub fn base_tiling(region: &Arc<Region>, axis: Axis) -> Result<Tiling, TilingError> {
    if let Some(extent) = region.extent(axis) {
        if extent % 2 == 1 {
            return Err(TilingError::OddExtent { axis, extent });
        }
    }
    let a = axis.index();
    let mut mate = vec![NO_CELL; region.num_cells()];
    for cell in 0..region.num_cells() as CellId {
        let c = region.coord(cell);
        if c[a].rem_euclid(2) != 0 {
            continue;
        }
        let mut up = c;
        up[a] += 1;
        let partner = region.find(up).ok_or(TilingError::NotBrickable(c))?;
        if region.direction(cell, partner).is_none() {
            return Err(TilingError::NotBrickable(c));
        }
        mate[cell as usize] = partner;
        mate[partner as usize] = cell;
    }
    if let Some(c) = mate.iter().position(|&m| m == NO_CELL) {
        return Err(TilingError::NotBrickable(region.coord(c as CellId)));
    }
    Ok(Tiling::from_mates_unchecked(region.clone(), mate))
}

/// Refine the region `k` times and split every dimer into `125^k` parallel dimers.
pub fn refine_tiling(t: &Tiling, k: u32) -> Result<Tiling, TilingError> {
    if k == 0 {
        return Ok(t.clone());
    }
    let region = t.region();
    let fine = Arc::new(region.refine(k)?);
    let scale = 5i32.pow(k);
    let mut mate = vec![NO_CELL; fine.num_cells()];
    for d in t.dimers() {
        let dir = t.direction(d);
        let axis = dir.axis.index();
        let lower = if dir.positive { d.white } else { d.black };
        let base = region.coord(lower).map(|x| x * scale);
        let (b, c) = dir.axis.cyclic_others();
        for i in 0..scale {
            for j in 0..scale {
                for step in (0..2 * scale).step_by(2) {
                    let mut p = base;
                    p[b.index()] += i;
                    p[c.index()] += j;
                    p[axis] += step;
                    let mut q = p;
                    q[axis] += 1;
                    let (pi, qi) = (
                        fine.find(p).expect("refined cell exists"),
                        fine.find(q).expect("refined cell exists"),
                    );
                    mate[pi as usize] = qi;
                    mate[qi as usize] = pi;
                }
            }
        }
    }
    if matches!(fine.kind(), RegionKind::Voxels) || cfg!(debug_assertions) {
        check_mates(&fine, &mate)?;
    }
    Ok(Tiling::from_mates_unchecked(fine, mate))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn boxed(l: u32, m: u32, n: u32) -> Arc<Region> {
        Arc::new(Region::build_box(l, m, n).unwrap())
    }

    #[test]
    fn base_tiling_of_box_is_parallel() {
        let r = boxed(3, 3, 2);
        let t = base_tiling(&r, Axis::Z).unwrap();
        assert_eq!(t.num_dimers(), 9);
        assert!(t.dimers().all(|d| t.direction(d).axis == Axis::Z));
        assert_eq!(
            base_tiling(&r, Axis::X).unwrap_err(),
            TilingError::OddExtent { axis: Axis::X, extent: 3 }
        );
    }

    #[test]
    fn base_tiling_of_torus_pairs_columns() {
        let r = Arc::new(Region::build_torus(4, 4, 4).unwrap());
        let t = base_tiling(&r, Axis::X).unwrap();
        assert_eq!(t.num_dimers(), 32);
        for d in t.dimers() {
            let (w, b) = (r.coord(d.white), r.coord(d.black));
            assert_eq!(w[0] / 2, b[0] / 2);
            assert_eq!((w[1], w[2]), (b[1], b[2]));
        }
    }

    #[test]
    fn json_roundtrip_and_diagnostics() {
        let r = boxed(3, 3, 2);
        let t = base_tiling(&r, Axis::Z).unwrap();
        let text = t.to_json();
        let back = Tiling::from_json_in(&text, &r).unwrap();
        assert_eq!(back.hash(), t.hash());
        assert_eq!(Tiling::from_json(&text).unwrap(), t);

        let mut pairs = t.coord_pairs();
        pairs.pop();
        let err = Tiling::from_coord_pairs(r.clone(), &pairs).unwrap_err();
        assert!(err.to_string().starts_with("cell uncovered"), "{err}");

        let mut pairs = t.coord_pairs();
        let first = pairs[0];
        pairs.push(first);
        let err = Tiling::from_coord_pairs(r.clone(), &pairs).unwrap_err();
        assert!(err.to_string().starts_with("cell covered twice"), "{err}");

        let swapped = vec![[pairs[0][1], pairs[0][0]]];
        assert!(matches!(
            Tiling::from_coord_pairs(r, &swapped),
            Err(TilingError::WrongOrientation { .. })
        ));
    }

    #[test]
    fn refinement_splits_dimers() {
        let r = boxed(3, 3, 2);
        let t = base_tiling(&r, Axis::Z).unwrap();
        let fine = refine_tiling(&t, 1).unwrap();
        assert_eq!(fine.num_dimers(), 1125);
        assert_eq!(fine.region().box_dims(), Some([15, 15, 10]));
        assert!(fine.dimers().all(|d| fine.direction(d).axis == Axis::Z));
        fine.validate().unwrap();
        assert_eq!(refine_tiling(&t, 0).unwrap(), t);
    }
}
