//! Flips and trits.
//!
//! A flip exchanges two parallel dimers filling a `2×2×1` slab. A trit
//! exchanges three mutually orthogonal dimers inside a `2×2×2` cube whose
//! two remaining cells are antipodal; it rotates the six cells around the
//! long diagonal of the cube.
//!
//! Trit signs: let `p` be the black one of the two antipodal corners and
//! `f_a = ±e_a` the steps from `p` into the cube. The six other cells are
//! `h_a = p + f_a` (white) and `h_ab = p + f_a + f_b` (black). The two
//! matchings of this hexagon are
//! `A = {h₁h₁₂, h₂h₂₃, h₃h₃₁}` and `B = {h₂h₁₂, h₃h₂₃, h₁h₃₁}`,
//! and the move `A → B` has sign `−det[f₁, f₂, f₃]`. With this convention a
//! trit changes the combinatorial twist by exactly its sign.

use crate::geometry::{add, Axis, CellId, Color, Coord, Dir};
use crate::region::Region;
use crate::tiling::{Dimer, Tiling};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MoveError {
    #[error("stale move: dimer {0:?} -> {1:?} is not in the tiling")]
    Stale(Coord, Coord),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FlipMove {
    pub removed: [Dimer; 2],
    pub inserted: [Dimer; 2],
    /// Corner cell of the slab from which the other three are reached by `+` steps.
    pub base: CellId,
    /// Axis normal to the slab.
    pub normal: Axis,
}

impl FlipMove {
    pub fn reverse(&self) -> FlipMove {
        FlipMove { removed: self.inserted, inserted: self.removed, ..self.clone() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TritMove {
    pub removed: [Dimer; 3],
    pub inserted: [Dimer; 3],
    /// Minimum corner of the `2×2×2` cube (reduced on tori).
    pub anchor: Coord,
    /// The black antipodal corner, which may lie outside the region.
    pub pivot: Coord,
    pub sign: i8,
}

impl TritMove {
    pub fn reverse(&self) -> TritMove {
        TritMove { removed: self.inserted, inserted: self.removed, sign: -self.sign, ..self.clone() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Move {
    Flip(FlipMove),
    Trit(TritMove),
}

impl Move {
    pub fn reverse(&self) -> Move {
        match self {
            Move::Flip(m) => Move::Flip(m.reverse()),
            Move::Trit(m) => Move::Trit(m.reverse()),
        }
    }

    /// 0 for flips, the sign for trits.
    pub fn twist_change(&self) -> i64 {
        match self {
            Move::Flip(_) => 0,
            Move::Trit(m) => m.sign as i64,
        }
    }
}

/// Which moves a move graph or walk uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MoveSet {
    Flips,
    FlipsAndTrits,
}

impl MoveSet {
    pub fn includes_trits(self) -> bool {
        self == MoveSet::FlipsAndTrits
    }

    pub fn label(self) -> &'static str {
        match self {
            MoveSet::Flips => "flip",
            MoveSet::FlipsAndTrits => "flip+trit",
        }
    }
}

#[derive(Clone, Debug)]
struct FlipSite {
    base: CellId,
    normal: Axis,
    /// `c, c+p, c+q, c+p+q` for the two in-plane axes `p, q`.
    cells: [CellId; 4],
}

#[derive(Clone, Debug)]
struct TritSite {
    anchor: Coord,
    pivot: Coord,
    /// `h₁, h₁₂, h₂, h₂₃, h₃, h₃₁`.
    hexagon: [CellId; 6],
    /// Sign of the move `A → B`.
    forward_sign: i8,
}

/// Precomputed flip slabs and trit cubes of a region.
#[derive(Clone, Debug)]
pub struct MoveFinder {
    flips: Vec<FlipSite>,
    trits: Vec<TritSite>,
}

/// Cube offsets indexed by bit pattern `(bit a) = offset along axis a`.
fn corner(bits: usize) -> [i32; 3] {
    [(bits & 1) as i32, ((bits >> 1) & 1) as i32, ((bits >> 2) & 1) as i32]
}

impl MoveFinder {
    pub fn new(region: &Region) -> MoveFinder {
        MoveFinder { flips: flip_sites(region), trits: trit_sites(region) }
    }

    pub fn find_flips(&self, t: &Tiling) -> Vec<FlipMove> {
        let mut out = Vec::new();
        for site in &self.flips {
            let [a, b, c, d] = site.cells;
            let horizontal = t.mate(a) == b && t.mate(c) == d;
            let vertical = t.mate(a) == c && t.mate(b) == d;
            if !(horizontal || vertical) {
                continue;
            }
            let dimer = |x: CellId, y: CellId| oriented(t, x, y);
            let (removed, inserted) = if horizontal {
                ([dimer(a, b), dimer(c, d)], [dimer(a, c), dimer(b, d)])
            } else {
                ([dimer(a, c), dimer(b, d)], [dimer(a, b), dimer(c, d)])
            };
            out.push(FlipMove { removed, inserted, base: site.base, normal: site.normal });
        }
        out
    }

    pub fn find_trits(&self, t: &Tiling) -> Vec<TritMove> {
        let mut out = Vec::new();
        for site in &self.trits {
            let [h1, h12, h2, h23, h3, h31] = site.hexagon;
            let a = [(h1, h12), (h2, h23), (h3, h31)];
            let b = [(h2, h12), (h3, h23), (h1, h31)];
            let has = |m: &[(CellId, CellId); 3]| m.iter().all(|&(w, bl)| t.mate(w) == bl);
            let to_dimers = |m: [(CellId, CellId); 3]| m.map(|(w, bl)| Dimer { white: w, black: bl });
            let (removed, inserted, sign) = if has(&a) {
                (to_dimers(a), to_dimers(b), site.forward_sign)
            } else if has(&b) {
                (to_dimers(b), to_dimers(a), -site.forward_sign)
            } else {
                continue;
            };
            out.push(TritMove { removed, inserted, anchor: site.anchor, pivot: site.pivot, sign });
        }
        out
    }

    pub fn find_moves(&self, t: &Tiling, set: MoveSet) -> Vec<Move> {
        let mut moves: Vec<Move> = self.find_flips(t).into_iter().map(Move::Flip).collect();
        if set.includes_trits() {
            moves.extend(self.find_trits(t).into_iter().map(Move::Trit));
        }
        moves
    }

    pub fn num_flip_sites(&self) -> usize {
        self.flips.len()
    }

    pub fn num_trit_sites(&self) -> usize {
        self.trits.len()
    }
}

fn oriented(t: &Tiling, x: CellId, y: CellId) -> Dimer {
    if t.region().color(x) == Color::White {
        Dimer { white: x, black: y }
    } else {
        Dimer { white: y, black: x }
    }
}

fn flip_sites(region: &Region) -> Vec<FlipSite> {
    let mut sites = Vec::new();
    for base in 0..region.num_cells() as CellId {
        for normal in Axis::ALL {
            let (p, q) = normal.cyclic_others();
            let (p, q) = if p < q { (p, q) } else { (q, p) };
            let Some(bp) = region.neighbor(base, Dir::plus(p)) else { continue };
            let Some(bq) = region.neighbor(base, Dir::plus(q)) else { continue };
            let Some(bpq) = region.neighbor(bp, Dir::plus(q)) else { continue };
            if region.neighbor(bq, Dir::plus(p)) != Some(bpq) {
                continue;
            }
            sites.push(FlipSite { base, normal, cells: [base, bp, bq, bpq] });
        }
    }
    sites
}

fn trit_sites(region: &Region) -> Vec<TritSite> {
    let degenerate = region.degenerate_axes();
    let mut anchors = BTreeSet::new();
    for &c in region.coords() {
        for bits in 0..8 {
            let mut k = region.wrap(add(c, corner(bits).map(|x| -x)));
            if (0..3).any(|a| degenerate[a] && k[a] != 0) {
                continue;
            }
            k = region.wrap(k);
            anchors.insert(k);
        }
    }

    let mut sites = Vec::new();
    for anchor in anchors {
        let cube: [Option<CellId>; 8] = std::array::from_fn(|bits| region.find(add(anchor, corner(bits))));
        for low in 0..4usize {
            let high = 7 - low;
            let (p_bits, q_bits) = if region.color_at(add(anchor, corner(low))) == Color::Black {
                (low, high)
            } else {
                (high, low)
            };
            if cube[p_bits].is_none() && cube[q_bits].is_none() {
                continue;
            }
            // h_a flips bit a of the pivot; h_ab flips bits a and b.
            let cell = |mask: usize| cube[p_bits ^ mask];
            let hex = [cell(1), cell(3), cell(2), cell(6), cell(4), cell(5)];
            if hex.iter().any(Option::is_none) {
                continue;
            }
            // det of the frame f_a = ±e_a: one factor −1 per set bit of the pivot
            let frame_det = if (p_bits as u32).count_ones() % 2 == 0 { 1 } else { -1 };
            sites.push(TritSite {
                anchor,
                pivot: add(anchor, corner(p_bits)),
                hexagon: hex.map(Option::unwrap),
                forward_sign: -frame_det,
            });
        }
    }
    sites
}

pub fn find_flips(t: &Tiling) -> Vec<FlipMove> {
    MoveFinder::new(t.region()).find_flips(t)
}

pub fn find_trits(t: &Tiling) -> Vec<TritMove> {
    MoveFinder::new(t.region()).find_trits(t)
}

fn check_present(t: &Tiling, dimers: &[Dimer]) -> Result<(), MoveError> {
    for &d in dimers {
        if !t.contains(d) {
            let r = t.region();
            let coord = |c: CellId| if (c as usize) < r.num_cells() { r.coord(c) } else { [i32::MIN; 3] };
            return Err(MoveError::Stale(coord(d.white), coord(d.black)));
        }
    }
    Ok(())
}

pub fn apply_flip(t: &Tiling, m: &FlipMove) -> Result<Tiling, MoveError> {
    check_present(t, &m.removed)?;
    Ok(t.with_exchange(&m.removed, &m.inserted))
}

pub fn apply_trit(t: &Tiling, m: &TritMove) -> Result<Tiling, MoveError> {
    check_present(t, &m.removed)?;
    Ok(t.with_exchange(&m.removed, &m.inserted))
}

pub fn apply_move(t: &Tiling, m: &Move) -> Result<Tiling, MoveError> {
    match m {
        Move::Flip(f) => apply_flip(t, f),
        Move::Trit(r) => apply_trit(t, r),
    }
}
