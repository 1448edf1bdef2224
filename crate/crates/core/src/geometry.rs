//! Axes, unit steps and cell colors shared by every module.

use serde::{Deserialize, Serialize};
use std::fmt;

/// Integer lattice coordinates of a unit cube (its minimum corner).
pub type Coord = [i32; 3];

/// Index of a cell inside its [`Region`](crate::Region).
pub type CellId = u32;

/// Sentinel used in dense tables for "no cell".
pub(crate) const NO_CELL: CellId = CellId::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Axis {
        Axis::ALL[i]
    }

    /// The other two axes in cyclic order, so that `(self, a, b)` is right-handed.
    pub fn cyclic_others(self) -> (Axis, Axis) {
        match self {
            Axis::X => (Axis::Y, Axis::Z),
            Axis::Y => (Axis::Z, Axis::X),
            Axis::Z => (Axis::X, Axis::Y),
        }
    }

    pub fn unit(self) -> [i32; 3] {
        let mut v = [0; 3];
        v[self.index()] = 1;
        v
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        })
    }
}

impl std::str::FromStr for Axis {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "x" | "X" => Ok(Axis::X),
            "y" | "Y" => Ok(Axis::Y),
            "z" | "Z" => Ok(Axis::Z),
            other => Err(format!("unknown axis `{other}` (expected x, y or z)")),
        }
    }
}

/// One of the six unit steps `±e_axis`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Dir {
    pub axis: Axis,
    pub positive: bool,
}

impl Dir {
    /// Canonical neighbor order: +x, −x, +y, −y, +z, −z.
    pub const ALL: [Dir; 6] = [
        Dir::new(Axis::X, true),
        Dir::new(Axis::X, false),
        Dir::new(Axis::Y, true),
        Dir::new(Axis::Y, false),
        Dir::new(Axis::Z, true),
        Dir::new(Axis::Z, false),
    ];

    pub const fn new(axis: Axis, positive: bool) -> Dir {
        Dir { axis, positive }
    }

    pub fn plus(axis: Axis) -> Dir {
        Dir::new(axis, true)
    }

    pub fn minus(axis: Axis) -> Dir {
        Dir::new(axis, false)
    }

    /// Position in [`Dir::ALL`].
    pub fn index(self) -> usize {
        2 * self.axis.index() + usize::from(!self.positive)
    }

    pub fn from_index(i: usize) -> Dir {
        Dir::ALL[i]
    }

    pub fn opposite(self) -> Dir {
        Dir::new(self.axis, !self.positive)
    }

    pub fn sign(self) -> i32 {
        if self.positive {
            1
        } else {
            -1
        }
    }

    pub fn vector(self) -> [i32; 3] {
        let mut v = [0; 3];
        v[self.axis.index()] = self.sign();
        v
    }

    pub fn from_vector(v: [i32; 3]) -> Option<Dir> {
        match v {
            [1, 0, 0] => Some(Dir::plus(Axis::X)),
            [-1, 0, 0] => Some(Dir::minus(Axis::X)),
            [0, 1, 0] => Some(Dir::plus(Axis::Y)),
            [0, -1, 0] => Some(Dir::minus(Axis::Y)),
            [0, 0, 1] => Some(Dir::plus(Axis::Z)),
            [0, 0, -1] => Some(Dir::minus(Axis::Z)),
            _ => None,
        }
    }
}

impl fmt::Display for Dir {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", if self.positive { '+' } else { '-' }, self.axis)
    }
}

impl std::str::FromStr for Dir {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (sign, axis) = s.split_at(s.len().min(1));
        let positive = match sign {
            "+" => true,
            "-" => false,
            _ => return Err(format!("direction `{s}` must start with + or -")),
        };
        Ok(Dir::new(axis.parse()?, positive))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Black,
    White,
}

impl Color {
    /// `+1` for black, `−1` for white.
    pub fn sign(self) -> i32 {
        match self {
            Color::Black => 1,
            Color::White => -1,
        }
    }

    pub fn opposite(self) -> Color {
        match self {
            Color::Black => Color::White,
            Color::White => Color::Black,
        }
    }
}

pub(crate) fn add(a: Coord, b: [i32; 3]) -> Coord {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

pub(crate) fn step(c: Coord, d: Dir) -> Coord {
    add(c, d.vector())
}

pub(crate) fn cross(a: [i32; 3], b: [i32; 3]) -> [i32; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub(crate) fn dot(a: [i32; 3], b: [i32; 3]) -> i32 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// `det[a, b, c]` for integer column vectors.
pub fn det3(a: [i32; 3], b: [i32; 3], c: [i32; 3]) -> i32 {
    dot(cross(a, b), c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dir_index_roundtrip() {
        for (i, d) in Dir::ALL.iter().enumerate() {
            assert_eq!(d.index(), i);
            assert_eq!(Dir::from_vector(d.vector()), Some(*d));
            assert_eq!(d.to_string().parse::<Dir>().unwrap(), *d);
        }
    }

    #[test]
    fn cyclic_frame_is_right_handed() {
        for a in Axis::ALL {
            let (b, c) = a.cyclic_others();
            assert_eq!(det3(a.unit(), b.unit(), c.unit()), 1);
        }
    }
}
