//! Seeded random walks on the move graph.
//!
//! At every step one of the currently available moves is chosen uniformly.
//! Walks are reproducible: the same start, move set and seed give the same
//! trajectory.

use crate::moves::{apply_move, Move, MoveFinder, MoveSet};
use crate::tiling::Tiling;
use crate::twist::{twist, TwistError};
use crate::geometry::Axis;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashSet};

pub struct RandomWalk {
    finder: MoveFinder,
    moves: MoveSet,
    rng: ChaCha8Rng,
    current: Tiling,
}

impl RandomWalk {
    pub fn new(start: Tiling, moves: MoveSet, seed: u64) -> RandomWalk {
        RandomWalk {
            finder: MoveFinder::new(start.region()),
            moves,
            rng: ChaCha8Rng::seed_from_u64(seed),
            current: start,
        }
    }

    pub fn current(&self) -> &Tiling {
        &self.current
    }

    /// Take one step; `None` when no move is available.
    pub fn step(&mut self) -> Option<Move> {
        let mut available = self.finder.find_moves(&self.current, self.moves);
        if available.is_empty() {
            return None;
        }
        let m = available.swap_remove(self.rng.gen_range(0..available.len()));
        self.current = apply_move(&self.current, &m).expect("available moves apply");
        Some(m)
    }

    /// Walk `steps` steps, or until frozen; returns the number of steps taken.
    pub fn advance(&mut self, steps: u64) -> u64 {
        for taken in 0..steps {
            if self.step().is_none() {
                return taken;
            }
        }
        steps
    }
}

/// Summary of a walk.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WalkSummary {
    pub steps_requested: u64,
    pub steps_taken: u64,
    /// True when the walk stopped at a tiling with no available move.
    pub frozen: bool,
    pub distinct_tilings: usize,
    /// Twist of each visited state, start included; boxes only.
    pub twist_histogram: Option<BTreeMap<i64, u64>>,
    pub final_hash: String,
}

/// Run a walk and tally visited tilings and twists. The twist is tracked
/// incrementally through the signs of the trits taken.
pub fn sample_walk(start: &Tiling, moves: MoveSet, steps: u64, seed: u64) -> Result<WalkSummary, TwistError> {
    let mut twist_now = if start.region().is_box() { Some(twist(start, Axis::Z)?) } else { None };
    let mut histogram = twist_now.map(|tw| BTreeMap::from([(tw, 1u64)]));
    let mut seen = HashSet::from([start.hash()]);
    let mut walk = RandomWalk::new(start.clone(), moves, seed);
    let mut taken = 0;
    let mut frozen = false;
    while taken < steps {
        let Some(m) = walk.step() else {
            frozen = true;
            break;
        };
        taken += 1;
        seen.insert(walk.current().hash());
        if let (Some(tw), Some(h)) = (twist_now.as_mut(), histogram.as_mut()) {
            *tw += m.twist_change();
            *h.entry(*tw).or_default() += 1;
        }
    }
    Ok(WalkSummary {
        steps_requested: steps,
        steps_taken: taken,
        frozen,
        distinct_tilings: seen.len(),
        twist_histogram: histogram,
        final_hash: format!("{:016x}", walk.current().hash()),
    })
}

/// `count` tilings taken every `spacing` steps along one walk.
pub fn walk_samples(start: &Tiling, moves: MoveSet, count: usize, spacing: u64, seed: u64) -> Vec<Tiling> {
    let mut walk = RandomWalk::new(start.clone(), moves, seed);
    (0..count)
        .map(|_| {
            walk.advance(spacing);
            walk.current().clone()
        })
        .collect()
}
