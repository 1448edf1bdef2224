//! Exhaustive enumeration of tilings by backtracking.
//!
//! The search always extends the matching at the lowest-indexed uncovered
//! cell, trying its neighbors in a fixed direction order. The default order
//! `+x, −x, +y, −y, +z, −z` defines the canonical output order.

use crate::geometry::{CellId, Dir, NO_CELL};
use crate::region::Region;
use crate::tiling::Tiling;
use rayon::prelude::*;
use std::sync::Arc;

#[derive(Clone, Debug)]
struct Frame {
    cell: CellId,
    next: u8,
    partner: CellId,
}

/// Depth-first matching search; iterates over complete tilings.
///
/// The enumerator is `Clone`, so a partially consumed stream can be saved
/// and resumed.
#[derive(Clone, Debug)]
pub struct Enumerator {
    region: Arc<Region>,
    order: [usize; 6],
    mate: Vec<CellId>,
    frames: Vec<Frame>,
    /// Frames below this depth are fixed (used by prefix-split workers).
    floor: usize,
    backtrack: bool,
    done: bool,
}

impl Enumerator {
    pub fn new(region: Arc<Region>) -> Enumerator {
        Enumerator::with_order(region, Dir::ALL)
    }

    /// Enumerate with a custom neighbor order. The set of tilings is the same;
    /// only the output order changes.
    pub fn with_order(region: Arc<Region>, order: [Dir; 6]) -> Enumerator {
        let n = region.num_cells();
        Enumerator {
            region,
            order: order.map(|d| d.index()),
            mate: vec![NO_CELL; n],
            frames: Vec::new(),
            floor: 0,
            backtrack: false,
            done: false,
        }
    }

    /// Re-pair the top frame's cell with its next free neighbor.
    fn advance_top(&mut self) -> bool {
        let region = &self.region;
        let frame = self.frames.last_mut().expect("frame present");
        if frame.partner != NO_CELL {
            self.mate[frame.cell as usize] = NO_CELL;
            self.mate[frame.partner as usize] = NO_CELL;
            frame.partner = NO_CELL;
        }
        let row = region.neighbor_row(frame.cell);
        while (frame.next as usize) < 6 {
            let n = row[self.order[frame.next as usize]];
            frame.next += 1;
            if n != NO_CELL && self.mate[n as usize] == NO_CELL {
                self.mate[frame.cell as usize] = n;
                self.mate[n as usize] = frame.cell;
                frame.partner = n;
                return true;
            }
        }
        false
    }

    /// Run the search until the matching is complete or `depth` frames are placed.
    /// Returns false once the search space is exhausted.
    fn step_to(&mut self, depth: Option<usize>) -> bool {
        if self.done {
            return false;
        }
        loop {
            if self.backtrack {
                if self.frames.len() <= self.floor {
                    self.done = true;
                    return false;
                }
                if self.advance_top() {
                    self.backtrack = false;
                } else {
                    self.frames.pop();
                }
                continue;
            }
            if depth == Some(self.frames.len()) {
                self.backtrack = true;
                return true;
            }
            let start = self.frames.last().map_or(0, |f| f.cell as usize + 1);
            match self.mate[start..].iter().position(|&m| m == NO_CELL) {
                None => {
                    self.backtrack = true;
                    return true;
                }
                Some(offset) => {
                    self.frames.push(Frame { cell: (start + offset) as CellId, next: 0, partner: NO_CELL });
                    self.backtrack = true;
                }
            }
        }
    }

    /// Partial searches fixing the first `depth` choices, in canonical order.
    fn split(&self, depth: usize) -> Vec<Enumerator> {
        let mut root = self.clone();
        let mut parts = Vec::new();
        while root.step_to(Some(depth)) {
            let mut part = root.clone();
            part.floor = part.frames.len();
            part.backtrack = false;
            parts.push(part);
        }
        parts
    }

    /// Count remaining tilings without materializing them.
    pub fn count(mut self) -> u64 {
        let mut n = 0;
        while self.step_to(None) {
            n += 1;
        }
        n
    }
}

impl Iterator for Enumerator {
    type Item = Tiling;

    fn next(&mut self) -> Option<Tiling> {
        self.step_to(None)
            .then(|| Tiling::from_mates_unchecked(self.region.clone(), self.mate.clone()))
    }
}

/// Every tiling of the region, in canonical order.
pub fn enumerate_tilings(region: &Arc<Region>) -> Enumerator {
    Enumerator::new(region.clone())
}

/// Prefix depth giving enough independent branches to keep a thread pool busy.
const SPLIT_DEPTH: usize = 6;

/// Parallel enumeration; the result is in canonical order.
pub fn enumerate_tilings_parallel(region: &Arc<Region>) -> Vec<Tiling> {
    let parts = Enumerator::new(region.clone()).split(SPLIT_DEPTH);
    let chunks: Vec<Vec<Tiling>> = parts.into_par_iter().map(|p| p.collect()).collect();
    chunks.into_iter().flatten().collect()
}

pub fn count_tilings(region: &Arc<Region>) -> u64 {
    Enumerator::new(region.clone()).count()
}

pub fn count_tilings_parallel(region: &Arc<Region>) -> u64 {
    let parts = Enumerator::new(region.clone()).split(SPLIT_DEPTH);
    parts.into_par_iter().map(Enumerator::count).sum()
}
