//! Combinatorial twist of box tilings.
//!
//! For a dimer `d` let `v(d)` be its unit step. Looking along an axis `u`,
//! every ordered pair `(d, d′)` where `d′` sits above `d` (their projections
//! onto the plane normal to `u` share a unit square) contributes
//! `¼·det[v(d′), v(d), e_u]`. Only pairs of orthogonal dimers both normal to
//! `u` contribute, and such a pair shares exactly one column, so the sum can
//! be taken column by column with a running total of the steps seen below.

use crate::geometry::{det3, Axis, CellId, Coord};
use crate::tiling::{Dimer, Tiling};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TwistError {
    #[error("combinatorial twist requires box")]
    RequiresBox,
    #[error("twist along {axis} is {quarters}/4, not an integer; contributing pairs: {pairs:?}")]
    NonIntegral {
        axis: Axis,
        quarters: i64,
        pairs: Vec<([Coord; 2], [Coord; 2])>,
    },
}

/// `4·Tw_axis(t)`, always an integer.
pub fn quarter_twist(t: &Tiling, axis: Axis) -> Result<i64, TwistError> {
    let region = t.region();
    let dims = region.box_dims().ok_or(TwistError::RequiresBox)?;
    let u = axis.index();
    let e_u = axis.unit();
    let (b, c) = axis.cyclic_others();
    let mut total = 0i64;
    for i in 0..dims[b.index()] as i32 {
        for j in 0..dims[c.index()] as i32 {
            let mut below = [0i32; 3];
            for h in 0..dims[u] as i32 {
                let mut p = [0i32; 3];
                p[u] = h;
                p[b.index()] = i;
                p[c.index()] = j;
                let cell = region.find(p).expect("box cell");
                let d = t.dimer_at(cell);
                let v = t.direction(d).vector();
                if v[u] == 0 {
                    total += det3(v, below, e_u) as i64;
                    below = [below[0] + v[0], below[1] + v[1], below[2] + v[2]];
                }
            }
        }
    }
    Ok(total)
}

/// The integer twist `Tw_axis(t)` of a box tiling.
pub fn twist(t: &Tiling, axis: Axis) -> Result<i64, TwistError> {
    let q = quarter_twist(t, axis)?;
    if q % 4 != 0 {
        return Err(TwistError::NonIntegral { axis, quarters: q, pairs: contributing_pairs(t, axis) });
    }
    Ok(q / 4)
}

/// Twist along all three axes.
pub fn twist_all_axes(t: &Tiling) -> Result<[i64; 3], TwistError> {
    Ok([twist(t, Axis::X)?, twist(t, Axis::Y)?, twist(t, Axis::Z)?])
}

/// Ordered pairs `(d, d′)` with nonzero contribution, as coordinate pairs.
fn contributing_pairs(t: &Tiling, axis: Axis) -> Vec<([Coord; 2], [Coord; 2])> {
    let region = t.region();
    let u = axis.index();
    let coords = |d: Dimer| [region.coord(d.white), region.coord(d.black)];
    let dimers: Vec<Dimer> = t.dimers().collect();
    let mut out = Vec::new();
    for &d in &dimers {
        for &e in &dimers {
            if det3(t.direction(e).vector(), t.direction(d).vector(), axis.unit()) == 0 {
                continue;
            }
            let stacked = [d.white, d.black].iter().any(|&x: &CellId| {
                [e.white, e.black].iter().any(|&y| {
                    let (px, py) = (region.coord(x), region.coord(y));
                    (0..3).all(|a| a == u || px[a] == py[a]) && py[u] > px[u]
                })
            });
            if stacked {
                out.push((coords(d), coords(e)));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::enumerate_tilings;
    use crate::region::Region;
    use crate::tiling::base_tiling;
    use std::sync::Arc;

    #[test]
    fn base_tilings_have_zero_twist() {
        let r = Arc::new(Region::build_box(4, 2, 2).unwrap());
        for axis in Axis::ALL {
            let t = base_tiling(&r, axis).unwrap();
            assert_eq!(twist_all_axes(&t).unwrap(), [0, 0, 0]);
        }
    }

    #[test]
    fn torus_is_rejected() {
        let r = Arc::new(Region::build_torus(2, 2, 2).unwrap());
        let t = enumerate_tilings(&r).next().unwrap();
        assert_eq!(twist(&t, Axis::Z).unwrap_err(), TwistError::RequiresBox);
        assert_eq!(TwistError::RequiresBox.to_string(), "combinatorial twist requires box");
    }
}
