//! Difference cycles `t₁ − t₀`.
//!
//! Superposing two perfect matchings splits the cells into disjoint even
//! cycles. A cycle is walked from its lowest white cell: white cells follow
//! their `t₁` dimer (white → black) and black cells follow their `t₀` dimer
//! backwards (black → white). Cells covered by the same dimer in both
//! tilings form trivial cycles of length 2.

use crate::geometry::{CellId, Color, Dir};
use crate::tiling::Tiling;

/// A closed walk `cells[0] → cells[1] → … → cells[0]` in the dual graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cycle {
    pub cells: Vec<CellId>,
}

/// One oriented edge of a cycle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CycleStep {
    pub from: CellId,
    pub to: CellId,
    pub dir: Dir,
    /// True for a forward `t₁` dimer, false for a reversed `t₀` dimer.
    pub forward: bool,
}

impl Cycle {
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn is_trivial(&self) -> bool {
        self.cells.len() == 2
    }

    /// The same cycle walked in the opposite direction, still starting at
    /// its first cell.
    pub fn reversed(&self) -> Cycle {
        let mut cells = Vec::with_capacity(self.cells.len());
        cells.push(self.cells[0]);
        cells.extend(self.cells[1..].iter().rev());
        Cycle { cells }
    }
}

/// Decomposition of `t₁ − t₀` into disjoint cycles, ordered by starting cell.
#[derive(Clone, Debug)]
pub struct CycleSystem {
    pub t1: Tiling,
    pub t0: Tiling,
    pub cycles: Vec<Cycle>,
}

impl CycleSystem {
    pub fn nontrivial(&self) -> impl Iterator<Item = &Cycle> {
        self.cycles.iter().filter(|c| !c.is_trivial())
    }

    pub fn num_nontrivial(&self) -> usize {
        self.nontrivial().count()
    }

    pub fn num_trivial(&self) -> usize {
        self.cycles.len() - self.num_nontrivial()
    }

    /// Oriented edges of a cycle. Unit steps are read from the region's
    /// adjacency, so wrap-around steps on tori carry their true direction.
    pub fn steps<'a>(&'a self, cycle: &'a Cycle) -> impl Iterator<Item = CycleStep> + 'a {
        let region = self.t1.region();
        let n = cycle.cells.len();
        (0..n).map(move |i| {
            let from = cycle.cells[i];
            let to = cycle.cells[(i + 1) % n];
            let dir = region.direction(from, to).expect("cycle edges are adjacencies");
            CycleStep { from, to, dir, forward: region.color(from) == Color::White }
        })
    }
}

/// Decompose `t1 − t0`; both tilings must share a region.
pub fn diff_cycles(t1: &Tiling, t0: &Tiling) -> CycleSystem {
    assert!(
        std::sync::Arc::ptr_eq(t1.region(), t0.region()) || t1.region() == t0.region(),
        "difference cycles need tilings of the same region"
    );
    let region = t1.region();
    let n = region.num_cells();
    let mut seen = vec![false; n];
    let mut cycles = Vec::new();
    for start in 0..n as CellId {
        if seen[start as usize] || region.color(start) != Color::White {
            continue;
        }
        let mut cells = Vec::new();
        let mut c = start;
        loop {
            seen[c as usize] = true;
            cells.push(c);
            let next = match region.color(c) {
                Color::White => t1.mate(c),
                Color::Black => t0.mate(c),
            };
            if next == start {
                break;
            }
            c = next;
        }
        cycles.push(Cycle { cells });
    }
    CycleSystem { t1: t1.clone(), t0: t0.clone(), cycles }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::enumerate_tilings;
    use crate::geometry::Axis;
    use crate::region::Region;
    use crate::tiling::base_tiling;
    use std::sync::Arc;

    #[test]
    fn self_difference_is_trivial() {
        let r = Arc::new(Region::build_box(3, 3, 2).unwrap());
        let t = base_tiling(&r, Axis::Z).unwrap();
        let cs = diff_cycles(&t, &t);
        assert_eq!(cs.num_nontrivial(), 0);
        assert_eq!(cs.cycles.len(), 9);
    }

    #[test]
    fn slab_flip_gives_one_square() {
        let r = Arc::new(Region::build_box(2, 2, 1).unwrap());
        let ts: Vec<_> = enumerate_tilings(&r).collect();
        let cs = diff_cycles(&ts[0], &ts[1]);
        assert_eq!(cs.cycles.len(), 1);
        assert_eq!(cs.cycles[0].len(), 4);
        let steps: Vec<_> = cs.steps(&cs.cycles[0]).collect();
        assert!(steps.iter().step_by(2).all(|s| s.forward));
        assert!(steps.iter().skip(1).step_by(2).all(|s| !s.forward));
    }

    #[test]
    fn swapping_arguments_reverses_cycles() {
        let r = Arc::new(Region::build_box(2, 2, 2).unwrap());
        let ts: Vec<_> = enumerate_tilings(&r).collect();
        for a in &ts {
            for b in &ts {
                let ab = diff_cycles(a, b);
                let ba = diff_cycles(b, a);
                let rev: Vec<Cycle> = ab.cycles.iter().map(Cycle::reversed).collect();
                assert_eq!(rev, ba.cycles);
            }
        }
    }
}
