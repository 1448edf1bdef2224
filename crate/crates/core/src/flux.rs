//! Flux of tilings: through explicit surfaces and as a homology class.

use crate::cycles::diff_cycles;
use crate::geometry::{Axis, CellId, Coord};
use crate::graph::{bfs_trit_labeling, GraphError, MoveGraph};
use crate::region::{Region, RegionKind};
use crate::surface::{cutting_surface, DiscreteSurface, DualEdge, SurfaceError};
use crate::tiling::{base_tiling, Tiling, TilingError};
use crate::twist::{twist, TwistError};
use num_integer::Integer;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FluxError {
    #[error("flux unsupported for this region kind")]
    Unsupported,
    #[error("tiling is not tangent to the surface at boundary vertex {0:?}")]
    NotTangent(Coord),
    #[error("tilings have different flux: {0:?} vs {1:?}")]
    DifferentFlux(FluxVector, FluxVector),
    #[error("tiling and surface belong to different regions")]
    RegionMismatch,
    #[error("surface boundary differs from the nontrivial difference cycles; missing {missing:?}, extra {extra:?}")]
    BoundaryMismatch { missing: Vec<(Coord, Axis)>, extra: Vec<(Coord, Axis)> },
    #[error("tilings are in different components of the move graph")]
    Disconnected,
    #[error("trit labeling is inconsistent modulo {0}")]
    InconsistentLabels(u64),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    Twist(#[from] TwistError),
    #[error(transparent)]
    Tiling(#[from] TilingError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Flux as integer coordinates in first homology: empty for boxes, one
/// winding number per axis for tori.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FluxVector(pub Vec<i64>);

impl FluxVector {
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }
}

impl fmt::Display for FluxVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

fn same_region(t: &Tiling, s: &DiscreteSurface) -> Result<(), FluxError> {
    if std::sync::Arc::ptr_eq(t.region(), s.region()) || t.region() == s.region() {
        Ok(())
    } else {
        Err(FluxError::RegionMismatch)
    }
}

/// `color(v)·side` of the dimer at an interior vertex `v`.
pub fn vertex_flow(v: CellId, t: &Tiling, s: &DiscreteSurface) -> Result<i32, FluxError> {
    same_region(t, s)?;
    let dir = t.region().direction(v, t.mate(v)).expect("dimer cells are adjacent");
    Ok(t.region().color(v).sign() * s.side(v, dir)?)
}

/// Check that every boundary vertex is covered by a dimer along the boundary.
pub fn check_tangent_at_boundary(t: &Tiling, s: &DiscreteSurface) -> Result<(), FluxError> {
    same_region(t, s)?;
    let region = t.region();
    for &v in s.boundary_vertices() {
        let m = t.mate(v);
        let dir = region.direction(v, m).expect("dimer cells are adjacent");
        if !s.is_boundary_edge(v, dir) {
            return Err(FluxError::NotTangent(region.coord(v)));
        }
    }
    Ok(())
}

/// Every vertex of the surface is covered by a dimer lying in the surface
/// (and boundary vertices by dimers along the boundary).
pub fn is_tangent(t: &Tiling, s: &DiscreteSurface) -> bool {
    if check_tangent_at_boundary(t, s).is_err() {
        return false;
    }
    let region = t.region();
    s.interior_vertices().iter().all(|&v| {
        let dir = region.direction(v, t.mate(v)).expect("dimer cells are adjacent");
        s.contains_edge(v, dir)
    })
}

/// `φ(t;S)`, the color-weighted count of dimers leaving interior vertices
/// toward the normal side.
pub fn flux_through_surface(t: &Tiling, s: &DiscreteSurface) -> Result<i64, FluxError> {
    check_tangent_at_boundary(t, s)?;
    let mut total = 0i64;
    for &v in s.interior_vertices() {
        total += vertex_flow(v, t, s)? as i64;
    }
    Ok(total)
}

/// Per-color vertex counts of a closed surface and the region it bounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EulerCounts {
    pub black_inside: usize,
    pub white_inside: usize,
    pub black_on_surface: usize,
    pub white_on_surface: usize,
}

impl EulerCounts {
    pub fn new(region: &Region, surface: &DiscreteSurface, enclosed: &[CellId]) -> EulerCounts {
        let count = |cells: &[CellId], black: bool| {
            cells.iter().filter(|&&c| (region.color(c) == crate::geometry::Color::Black) == black).count()
        };
        let on = surface.vertices();
        EulerCounts {
            black_inside: count(enclosed, true),
            white_inside: count(enclosed, false),
            black_on_surface: count(&on, true),
            white_on_surface: count(&on, false),
        }
    }

    /// `2·b_int + b_∂ = 2·w_int + w_∂`.
    pub fn identity_holds(&self) -> bool {
        2 * self.black_inside + self.black_on_surface == 2 * self.white_inside + self.white_on_surface
    }
}

/// The fixed reference tiling for flux: bricks along x.
pub fn flux_base(region: &std::sync::Arc<Region>) -> Result<Tiling, FluxError> {
    Ok(base_tiling(region, Axis::X)?)
}

/// Homology class of `t − t_base`.
///
/// Tori report, per axis, the signed number of times the difference cycles
/// cross the plane between cell layers 0 and 1 (positive along `+axis`).
pub fn flux(t: &Tiling) -> Result<FluxVector, FluxError> {
    let region = t.region();
    match region.kind() {
        RegionKind::Box { .. } => Ok(FluxVector(Vec::new())),
        RegionKind::Voxels => Err(FluxError::Unsupported),
        RegionKind::Torus { .. } => {
            let base = flux_base(region)?;
            let cycles = diff_cycles(t, &base);
            let mut crossings = [0i64; 3];
            for cycle in cycles.nontrivial() {
                for step in cycles.steps(cycle) {
                    let a = step.dir.axis.index();
                    let (from, to) = (region.coord(step.from)[a], region.coord(step.to)[a]);
                    if from == 0 && to == 1 {
                        crossings[a] += 1;
                    } else if from == 1 && to == 0 {
                        crossings[a] -= 1;
                    }
                }
            }
            Ok(FluxVector(crossings.to_vec()))
        }
    }
}

/// The closed generator surfaces of the region: three cutting tori for tori,
/// none for boxes.
pub fn generator_surfaces(region: &std::sync::Arc<Region>) -> Result<Vec<DiscreteSurface>, FluxError> {
    match region.kind() {
        RegionKind::Box { .. } => Ok(Vec::new()),
        RegionKind::Voxels => Err(FluxError::Unsupported),
        RegionKind::Torus { .. } => Axis::ALL
            .iter()
            .map(|&a| Ok(cutting_surface(region, a, 0)?))
            .collect(),
    }
}

/// `gcd |φ(t;S_a)|` over the generator surfaces; 0 means the twist is an integer.
pub fn modulus(t: &Tiling) -> Result<u64, FluxError> {
    let mut m = 0u64;
    for s in generator_surfaces(t.region())? {
        m = m.gcd(&flux_through_surface(t, &s)?.unsigned_abs());
    }
    Ok(m)
}

/// A twist difference: an integer, or a residue when the modulus is positive.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TwistValue {
    Integer(i64),
    Residue { value: u64, modulus: u64 },
}

impl TwistValue {
    fn reduce(value: i64, modulus: u64) -> TwistValue {
        if modulus == 0 {
            TwistValue::Integer(value)
        } else {
            TwistValue::Residue { value: value.rem_euclid(modulus as i64) as u64, modulus }
        }
    }
}

/// `TW(t1; t0)` on boxes, from the combinatorial twist.
pub fn relative_twist(t1: &Tiling, t0: &Tiling) -> Result<TwistValue, FluxError> {
    let (f1, f0) = (flux(t1)?, flux(t0)?);
    if f1 != f0 {
        return Err(FluxError::DifferentFlux(f1, f0));
    }
    Ok(TwistValue::Integer(twist(t1, Axis::Z)? - twist(t0, Axis::Z)?))
}

/// `TW(t1; t0)` read off signed trit counts in an enumerated move graph,
/// reduced modulo the common modulus.
pub fn relative_twist_in(graph: &MoveGraph, t1: &Tiling, t0: &Tiling) -> Result<TwistValue, FluxError> {
    let (f1, f0) = (flux(t1)?, flux(t0)?);
    if f1 != f0 {
        return Err(FluxError::DifferentFlux(f1, f0));
    }
    let m = modulus(t0)?;
    let labels = bfs_trit_labeling(graph, t0)?;
    let bad = labels.violations.iter().any(|e| {
        let la = labels.labels[e.a].unwrap();
        let lb = labels.labels[e.b].unwrap();
        let off = lb - la - e.twist_change_from(e.a);
        m == 0 || off.rem_euclid(m as i64) != 0
    });
    if bad {
        return Err(FluxError::InconsistentLabels(m));
    }
    let node = graph.node_of(t1).ok_or(GraphError::UnknownTiling)?;
    let label = labels.labels[node].ok_or(FluxError::Disconnected)?;
    Ok(TwistValue::reduce(label, m))
}

/// The three surface predicates for a Seifert surface candidate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfacePredicates {
    pub balanced: bool,
    pub zero_flux: bool,
    pub tangent: bool,
}

/// Dual edges of the nontrivial cycles of `t1 − t0`.
fn difference_edges(t1: &Tiling, t0: &Tiling) -> BTreeSet<(Coord, Axis)> {
    let region = t1.region();
    let cycles = diff_cycles(t1, t0);
    let mut edges = BTreeSet::new();
    for cycle in cycles.nontrivial() {
        for step in cycles.steps(cycle) {
            let base = if step.dir.positive { region.coord(step.from) } else { region.coord(step.to) };
            edges.insert((region.wrap(base), step.dir.axis));
        }
    }
    edges
}

pub fn surface_predicates(t0: &Tiling, t1: &Tiling, s: &DiscreteSurface) -> Result<SurfacePredicates, FluxError> {
    same_region(t0, s)?;
    same_region(t1, s)?;
    let expected = difference_edges(t1, t0);
    let actual: BTreeSet<(Coord, Axis)> = s.boundary().iter().map(|e: &DualEdge| (e.base, e.axis)).collect();
    if expected != actual {
        return Err(FluxError::BoundaryMismatch {
            missing: expected.difference(&actual).copied().collect(),
            extra: actual.difference(&expected).copied().collect(),
        });
    }
    let region = s.region();
    let black = s
        .interior_vertices()
        .iter()
        .filter(|&&v| region.color(v) == crate::geometry::Color::Black)
        .count();
    let balanced = 2 * black == s.interior_vertices().len();
    let zero_flux = flux_through_surface(t0, s)? == 0 && flux_through_surface(t1, s)? == 0;
    let tangent = is_tangent(t0, s) && is_tangent(t1, s);
    debug_assert!(!tangent || (balanced && zero_flux));
    Ok(SurfacePredicates { balanced, zero_flux, tangent })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Dir;
    use crate::moves::find_flips;
    use crate::moves::apply_flip;
    use crate::surface::{closed_box_surface, DualSquare};
    use std::sync::Arc;

    #[test]
    fn base_tiling_has_zero_flux() {
        let r = Arc::new(Region::build_torus(4, 4, 4).unwrap());
        let t = flux_base(&r).unwrap();
        assert_eq!(flux(&t).unwrap(), FluxVector(vec![0, 0, 0]));
        assert_eq!(modulus(&t).unwrap(), 0);
        let b = Arc::new(Region::build_box(2, 2, 2).unwrap());
        assert_eq!(flux(&base_tiling(&b, Axis::Z).unwrap()).unwrap(), FluxVector(vec![]));
        assert_eq!(modulus(&base_tiling(&b, Axis::Z).unwrap()).unwrap(), 0);
    }

    #[test]
    fn voxel_flux_is_unsupported() {
        let r = Arc::new(Region::build_voxels(&[[0, 0, 0], [1, 0, 0]], false).unwrap());
        let t = base_tiling(&r, Axis::X).unwrap();
        assert_eq!(flux(&t).unwrap_err(), FluxError::Unsupported);
        assert_eq!(FluxError::Unsupported.to_string(), "flux unsupported for this region kind");
    }

    #[test]
    fn vertex_flow_cases() {
        let r = Arc::new(Region::build_box(4, 4, 4).unwrap());
        let s = closed_box_surface(&r, [1, 1, 1], [2, 2, 2]).unwrap();
        let t = base_tiling(&r, Axis::Z).unwrap();
        let v = r.find([2, 2, 1]).unwrap(); // white, bottom face, matched down and out
        assert_eq!(vertex_flow(v, &t, &s).unwrap(), -1);
        let v = r.find([2, 1, 2]).unwrap(); // white, front face, matched up: in the face
        assert_eq!(vertex_flow(v, &t, &s).unwrap(), 0);
        let v = r.find([2, 1, 3]).unwrap(); // black, matched down along the face
        assert_eq!(vertex_flow(v, &t, &s).unwrap(), 0);
        let v = r.find([1, 1, 1]).unwrap(); // white corner matched to (1,1,0), outside
        assert_eq!(vertex_flow(v, &t, &s).unwrap(), -1);
        let v = r.find([1, 2, 1]).unwrap(); // black edge vertex matched to (1,2,0), outside
        assert_eq!(vertex_flow(v, &t, &s).unwrap(), 1);
    }

    #[test]
    fn flip_with_unit_square_surface() {
        let r = Arc::new(Region::build_box(2, 2, 1).unwrap());
        let t0 = base_tiling(&r, Axis::X).unwrap();
        let t1 = apply_flip(&t0, &find_flips(&t0)[0]).unwrap();
        let s = DiscreteSurface::new(&r, vec![DualSquare::new([0, 0, 0], Dir::plus(Axis::Z))]).unwrap();
        let p = surface_predicates(&t0, &t1, &s).unwrap();
        assert_eq!(p, SurfacePredicates { balanced: true, zero_flux: true, tangent: true });
        assert_eq!(relative_twist(&t1, &t0).unwrap(), TwistValue::Integer(0));
    }
}
