//! Domino tilings of three-dimensional cubiculated regions.
//!
//! Regions are boxes, rectangular tori or validated voxel sets. A tiling is
//! a perfect matching of the region's dual graph. On top of that the crate
//! provides exhaustive enumeration, flip and trit moves with their move
//! graphs, the flux and twist invariants, discrete surfaces with the flux
//! through them, and height functions on quadriculated planar surfaces.

pub mod cycles;
pub mod enumerate;
pub mod flux;
pub mod geometry;
pub mod graph;
pub mod height;
mod manifold;
pub mod moves;
pub mod region;
pub mod surface;
pub mod tiling;
pub mod twist;
pub mod walk;

pub use cycles::{diff_cycles, Cycle, CycleStep, CycleSystem};
pub use enumerate::{count_tilings, count_tilings_parallel, enumerate_tilings, enumerate_tilings_parallel, Enumerator};
pub use geometry::{det3, Axis, CellId, Color, Coord, Dir};
pub use region::{BoundaryFace, Cell, Region, RegionError, RegionKind, RegionSpec};
pub use tiling::{base_tiling, refine_tiling, Dimer, Tiling, TilingError, TilingFile};
pub use moves::{apply_flip, apply_move, apply_trit, find_flips, find_trits, FlipMove, Move, MoveError, MoveFinder, MoveSet, TritMove};
pub use twist::{quarter_twist, twist, twist_all_axes, TwistError};
pub use graph::{bfs_trit_labeling, ComponentReport, ComponentSummary, EdgeKind, GraphError, MoveEdge, MoveGraph, TritLabeling};
pub use flux::{check_tangent_at_boundary, flux, flux_base, flux_through_surface, generator_surfaces, is_tangent, modulus, relative_twist, relative_twist_in, surface_predicates, vertex_flow, EulerCounts, FluxError, FluxVector, SurfacePredicates, TwistValue};
pub use surface::{closed_box_surface, cutting_surface, dual_box_interior, DiscreteSurface, DualEdge, DualSquare, SquareRecord, SurfaceError};
pub use height::{flip_connect, height_function, reconstruct, replay, CoquadEdge, CoquadSurface, FaceId, HeightConditions, HeightError, HeightField, SurfaceDescription, SurfaceTiling, TilingClass};
pub use walk::{sample_walk, walk_samples, RandomWalk, WalkSummary};
