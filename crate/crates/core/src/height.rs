//! Height functions on coquadriculated surfaces.
//!
//! A coquadriculated surface is a bipartite graph embedded in an oriented
//! surface so that every complementary face is a square, together with one
//! extra face `∞` standing for the boundary. Edges are oriented from black
//! to white and know the face on their left and on their right.
//!
//! For two tilings (perfect matchings) `t`, `t̃` with the same flux, the
//! winding `w = wind(t − t̃)` is the unique integer field on faces with
//! `w(∞) = 0` and `w(left) − w(right) = [e ∈ t] − [e ∈ t̃]` on every edge.
//! The height function of `t` is the average of its windings against every
//! tiling of its class; values are kept as exact fractions over the class
//! size.

use crate::geometry::Color;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use std::collections::{HashMap, VecDeque};
use thiserror::Error;

pub type FaceId = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HeightError {
    #[error("planar region is unbalanced: {black} black vs {white} white cells")]
    Unbalanced { black: usize, white: usize },
    #[error("planar region is empty or disconnected")]
    Disconnected,
    #[error("cell {0:?} is listed twice")]
    DuplicateCell([i32; 2]),
    #[error("edge {0} must join a black vertex to a white vertex")]
    EdgeColors(usize),
    #[error("edge {edge} refers to face {face}, but there are only {faces} faces")]
    UnknownFace { edge: usize, face: FaceId, faces: usize },
    #[error("face {0} is not bounded by a 4-cycle")]
    NotSquare(FaceId),
    #[error("exactly one face must be marked as infinity")]
    Infinity,
    #[error("different flux: the two tilings are not related by a winding")]
    DifferentFlux,
    #[error("field does not describe a tiling: edge {0} gets a non-0/1 coefficient")]
    NotATiling(usize),
    #[error("no flip at face {0} in this tiling")]
    NoFlip(FaceId),
    #[error("tiling class is not stable")]
    Unstable,
    #[error("tiling does not belong to the class")]
    NotInClass,
}

/// A black-to-white edge with the faces on either side.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoquadEdge {
    pub black: usize,
    pub white: usize,
    pub left: FaceId,
    pub right: FaceId,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexRecord {
    pub color: Color,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceRecord {
    pub infinity: bool,
}

/// On-disk form of a coquadriculated surface.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceDescription {
    pub vertices: Vec<VertexRecord>,
    pub edges: Vec<CoquadEdge>,
    pub faces: Vec<FaceRecord>,
}

#[derive(Clone, Debug)]
pub struct CoquadSurface {
    colors: Vec<Color>,
    edges: Vec<CoquadEdge>,
    num_faces: usize,
    infinity: FaceId,
    incident: Vec<Vec<usize>>,
    /// Edges around each face; empty for `∞`.
    face_edges: Vec<Vec<usize>>,
    /// Lattice positions of vertices for planar surfaces.
    positions: Option<Vec<[i32; 2]>>,
}

/// A perfect matching of the surface graph, as sorted edge ids.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SurfaceTiling {
    edges: Vec<usize>,
}

impl SurfaceTiling {
    pub fn new(mut edges: Vec<usize>) -> SurfaceTiling {
        edges.sort_unstable();
        SurfaceTiling { edges }
    }

    pub fn edges(&self) -> &[usize] {
        &self.edges
    }

    pub fn contains(&self, e: usize) -> bool {
        self.edges.binary_search(&e).is_ok()
    }
}

impl CoquadSurface {
    pub fn new(
        colors: Vec<Color>,
        edges: Vec<CoquadEdge>,
        num_faces: usize,
        infinity: FaceId,
    ) -> Result<CoquadSurface, HeightError> {
        if infinity >= num_faces {
            return Err(HeightError::Infinity);
        }
        let mut incident = vec![Vec::new(); colors.len()];
        let mut face_edges = vec![Vec::new(); num_faces];
        for (k, e) in edges.iter().enumerate() {
            let colors_ok = colors.get(e.black) == Some(&Color::Black) && colors.get(e.white) == Some(&Color::White);
            if !colors_ok {
                return Err(HeightError::EdgeColors(k));
            }
            for f in [e.left, e.right] {
                if f >= num_faces {
                    return Err(HeightError::UnknownFace { edge: k, face: f, faces: num_faces });
                }
                if f != infinity {
                    face_edges[f].push(k);
                }
            }
            incident[e.black].push(k);
            incident[e.white].push(k);
        }
        for (f, around) in face_edges.iter().enumerate() {
            if f == infinity {
                continue;
            }
            if around.len() != 4 {
                return Err(HeightError::NotSquare(f));
            }
            // a 4-cycle: four distinct vertices, each on exactly two of the edges
            let mut degree: HashMap<usize, usize> = HashMap::new();
            for &k in around {
                *degree.entry(edges[k].black).or_default() += 1;
                *degree.entry(edges[k].white).or_default() += 1;
            }
            if degree.len() != 4 || degree.values().any(|&d| d != 2) {
                return Err(HeightError::NotSquare(f));
            }
        }
        Ok(CoquadSurface { colors, edges, num_faces, infinity, incident, face_edges, positions: None })
    }

    /// The dual grid graph of a set of unit squares in the plane; faces are
    /// the complete `2×2` blocks of cells. Cells are black when `x + y` is even.
    pub fn planar(cells: &[[i32; 2]]) -> Result<CoquadSurface, HeightError> {
        let mut index: HashMap<[i32; 2], usize> = HashMap::new();
        let mut sorted = cells.to_vec();
        sorted.sort_unstable();
        for (i, &c) in sorted.iter().enumerate() {
            if index.insert(c, i).is_some() {
                return Err(HeightError::DuplicateCell(c));
            }
        }
        if sorted.is_empty() {
            return Err(HeightError::Disconnected);
        }
        let color = |c: [i32; 2]| if (c[0] + c[1]).rem_euclid(2) == 0 { Color::Black } else { Color::White };
        let colors: Vec<Color> = sorted.iter().map(|&c| color(c)).collect();
        let black = colors.iter().filter(|&&c| c == Color::Black).count();
        if 2 * black != colors.len() {
            return Err(HeightError::Unbalanced { black, white: colors.len() - black });
        }

        // faces: 0 = ∞, then one per full 2×2 block, keyed by its lower-left cell
        let mut blocks: HashMap<[i32; 2], FaceId> = HashMap::new();
        for &[x, y] in &sorted {
            let full = [[x, y], [x + 1, y], [x, y + 1], [x + 1, y + 1]].iter().all(|c| index.contains_key(c));
            if full {
                let id = blocks.len() + 1;
                blocks.insert([x, y], id);
            }
        }
        let block = |x: i32, y: i32| blocks.get(&[x, y]).copied().unwrap_or(0);

        let mut edges = Vec::new();
        for &[x, y] in &sorted {
            // step +x: the block above is on the left, the one below on the right
            if let Some(&j) = index.get(&[x + 1, y]) {
                let i = index[&[x, y]];
                let (left, right) = (block(x, y), block(x, y - 1));
                edges.push(oriented_edge(&colors, i, j, left, right));
            }
            // step +y: the block to the right is on the right
            if let Some(&j) = index.get(&[x, y + 1]) {
                let i = index[&[x, y]];
                let (left, right) = (block(x - 1, y), block(x, y));
                edges.push(oriented_edge(&colors, i, j, left, right));
            }
        }
        let mut s = CoquadSurface::new(colors, edges, blocks.len() + 1, 0)?;
        if !s.is_connected() {
            return Err(HeightError::Disconnected);
        }
        s.positions = Some(sorted);
        Ok(s)
    }

    pub fn from_description(d: &SurfaceDescription) -> Result<CoquadSurface, HeightError> {
        let marked: Vec<usize> = (0..d.faces.len()).filter(|&f| d.faces[f].infinity).collect();
        if marked.len() != 1 {
            return Err(HeightError::Infinity);
        }
        let colors = d.vertices.iter().map(|v| v.color).collect();
        CoquadSurface::new(colors, d.edges.clone(), d.faces.len(), marked[0])
    }

    pub fn description(&self) -> SurfaceDescription {
        SurfaceDescription {
            vertices: self.colors.iter().map(|&color| VertexRecord { color }).collect(),
            edges: self.edges.clone(),
            faces: (0..self.num_faces).map(|f| FaceRecord { infinity: f == self.infinity }).collect(),
        }
    }

    fn is_connected(&self) -> bool {
        let n = self.colors.len();
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &k in &self.incident[v] {
                let e = self.edges[k];
                let w = if e.black == v { e.white } else { e.black };
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.iter().all(|&s| s)
    }

    pub fn num_vertices(&self) -> usize {
        self.colors.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Number of faces including `∞`.
    pub fn num_faces(&self) -> usize {
        self.num_faces
    }

    pub fn infinity(&self) -> FaceId {
        self.infinity
    }

    pub fn edges(&self) -> &[CoquadEdge] {
        &self.edges
    }

    pub fn face_edges(&self, f: FaceId) -> &[usize] {
        &self.face_edges[f]
    }

    pub fn positions(&self) -> Option<&[[i32; 2]]> {
        self.positions.as_deref()
    }

    /// Pairs of neighboring faces `(left, right)` over all edges.
    pub fn neighbor_pairs(&self) -> impl Iterator<Item = (FaceId, FaceId)> + '_ {
        self.edges.iter().map(|e| (e.left, e.right))
    }

    /// Check that a set of edges is a perfect matching.
    pub fn tiling(&self, edges: Vec<usize>) -> Option<SurfaceTiling> {
        let mut covered = vec![false; self.colors.len()];
        for &k in &edges {
            let e = self.edges.get(k)?;
            for v in [e.black, e.white] {
                if std::mem::replace(&mut covered[v], true) {
                    return None;
                }
            }
        }
        covered.iter().all(|&c| c).then(|| SurfaceTiling::new(edges))
    }

    /// All tilings, in the order of a backtracking search on the lowest
    /// unmatched vertex.
    pub fn enumerate_tilings(&self) -> Vec<SurfaceTiling> {
        let n = self.colors.len();
        let mut matched = vec![false; n];
        let mut chosen = Vec::new();
        let mut out = Vec::new();
        self.search(&mut matched, &mut chosen, &mut out);
        out
    }

    fn search(&self, matched: &mut [bool], chosen: &mut Vec<usize>, out: &mut Vec<SurfaceTiling>) {
        let Some(v) = matched.iter().position(|&m| !m) else {
            out.push(SurfaceTiling::new(chosen.clone()));
            return;
        };
        for &k in &self.incident[v] {
            let e = self.edges[k];
            let w = if e.black == v { e.white } else { e.black };
            if matched[w] {
                continue;
            }
            matched[v] = true;
            matched[w] = true;
            chosen.push(k);
            self.search(matched, chosen, out);
            chosen.pop();
            matched[v] = false;
            matched[w] = false;
        }
    }

    /// `wind(t1 − t0)`, or `DifferentFlux` when the difference is not a boundary.
    pub fn winding(&self, t1: &SurfaceTiling, t0: &SurfaceTiling) -> Result<Vec<i64>, HeightError> {
        let g = |k: usize| i64::from(t1.contains(k)) - i64::from(t0.contains(k));
        let mut face_adj: Vec<Vec<usize>> = vec![Vec::new(); self.num_faces];
        for (k, e) in self.edges.iter().enumerate() {
            face_adj[e.left].push(k);
            face_adj[e.right].push(k);
        }
        let mut w: Vec<Option<i64>> = vec![None; self.num_faces];
        w[self.infinity] = Some(0);
        let mut queue = VecDeque::from([self.infinity]);
        while let Some(f) = queue.pop_front() {
            let wf = w[f].unwrap();
            for &k in &face_adj[f] {
                let e = self.edges[k];
                // w(left) − w(right) = g(e)
                let (other, value) = if e.left == f { (e.right, wf - g(k)) } else { (e.left, wf + g(k)) };
                if w[other].is_none() {
                    w[other] = Some(value);
                    queue.push_back(other);
                }
            }
        }
        let w: Vec<i64> = w.into_iter().map(|x| x.ok_or(HeightError::DifferentFlux)).collect::<Result<_, _>>()?;
        let consistent = self.edges.iter().enumerate().all(|(k, e)| w[e.left] - w[e.right] == g(k));
        if consistent {
            Ok(w)
        } else {
            Err(HeightError::DifferentFlux)
        }
    }

    /// Exchange the two tiling edges around face `f` for the other two.
    pub fn flip(&self, t: &SurfaceTiling, f: FaceId) -> Result<SurfaceTiling, HeightError> {
        if f == self.infinity || f >= self.num_faces {
            return Err(HeightError::NoFlip(f));
        }
        let around = &self.face_edges[f];
        let (inside, outside): (Vec<usize>, Vec<usize>) = around.iter().partition(|&&k| t.contains(k));
        if inside.len() != 2 {
            return Err(HeightError::NoFlip(f));
        }
        let mut edges: Vec<usize> = t.edges.iter().copied().filter(|k| !inside.contains(k)).collect();
        edges.extend(outside);
        self.tiling(edges).ok_or(HeightError::NoFlip(f))
    }

    /// Faces at which `t` admits a flip.
    pub fn available_flips(&self, t: &SurfaceTiling) -> Vec<FaceId> {
        (0..self.num_faces)
            .filter(|&f| f != self.infinity && self.flip(t, f).is_ok())
            .collect()
    }
}

fn oriented_edge(colors: &[Color], i: usize, j: usize, left: FaceId, right: FaceId) -> CoquadEdge {
    // stored geometrically from i to j; reversing the edge swaps its sides
    if colors[i] == Color::Black {
        CoquadEdge { black: i, white: j, left, right }
    } else {
        CoquadEdge { black: j, white: i, left: right, right: left }
    }
}

/// A flux class of surface tilings.
#[derive(Clone, Debug)]
pub struct TilingClass {
    members: Vec<SurfaceTiling>,
    /// How many members use each edge.
    edge_counts: Vec<i64>,
    stable: bool,
}

impl TilingClass {
    /// All tilings with the same flux as `t`.
    pub fn of(s: &CoquadSurface, t: &SurfaceTiling) -> TilingClass {
        let members: Vec<SurfaceTiling> =
            s.enumerate_tilings().into_iter().filter(|m| s.winding(m, t).is_ok()).collect();
        let mut edge_counts = vec![0i64; s.num_edges()];
        for m in &members {
            for &k in m.edges() {
                edge_counts[k] += 1;
            }
        }
        let stable = edge_counts.iter().all(|&c| c > 0);
        TilingClass { members, edge_counts, stable }
    }

    pub fn members(&self) -> &[SurfaceTiling] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, t: &SurfaceTiling) -> bool {
        self.members.contains(t)
    }

    /// Every edge of the graph lies in some member.
    pub fn is_stable(&self) -> bool {
        self.stable
    }
}

/// Exact rational values on faces, stored as numerators over one denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HeightField {
    numerators: Vec<i64>,
    denominator: i64,
}

/// Outcome of checking conditions (a), (b) and (c) on a height field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeightConditions {
    /// Value 0 at `∞`.
    pub vanishes_at_infinity: bool,
    /// Differs from the reference height function by integers.
    pub integral_offsets: bool,
    /// Neighboring faces differ by strictly less than 1.
    pub strict_neighbor_bound: bool,
}

impl HeightConditions {
    pub fn all(&self) -> bool {
        self.vanishes_at_infinity && self.integral_offsets && self.strict_neighbor_bound
    }
}

impl HeightField {
    pub fn new(numerators: Vec<i64>, denominator: i64) -> HeightField {
        assert!(denominator > 0, "height denominators are positive");
        HeightField { numerators, denominator }
    }

    pub fn len(&self) -> usize {
        self.numerators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.numerators.is_empty()
    }

    pub fn value(&self, f: FaceId) -> Ratio<i64> {
        Ratio::new(self.numerators[f], self.denominator)
    }

    pub fn values(&self) -> Vec<Ratio<i64>> {
        (0..self.numerators.len()).map(|f| self.value(f)).collect()
    }

    pub fn numerators(&self) -> &[i64] {
        &self.numerators
    }

    pub fn denominator(&self) -> i64 {
        self.denominator
    }

    pub fn is_integral(&self) -> bool {
        self.numerators.iter().all(|n| n % self.denominator == 0)
    }

    fn combine(&self, other: &HeightField, pick: impl Fn(i64, i64) -> i64) -> HeightField {
        assert_eq!(self.denominator, other.denominator, "fields of one class share a denominator");
        let numerators = self.numerators.iter().zip(&other.numerators).map(|(&a, &b)| pick(a, b)).collect();
        HeightField::new(numerators, self.denominator)
    }

    /// Pointwise maximum.
    pub fn join(&self, other: &HeightField) -> HeightField {
        self.combine(other, i64::max)
    }

    /// Pointwise minimum.
    pub fn meet(&self, other: &HeightField) -> HeightField {
        self.combine(other, i64::min)
    }

    /// Check (a), (b), (c) against a reference height function of the class.
    pub fn conditions(&self, s: &CoquadSurface, reference: &HeightField) -> HeightConditions {
        let d = self.denominator;
        HeightConditions {
            vanishes_at_infinity: self.numerators[s.infinity()] == 0,
            integral_offsets: d == reference.denominator
                && self.numerators.iter().zip(&reference.numerators).all(|(a, b)| (a - b) % d == 0),
            strict_neighbor_bound: s
                .neighbor_pairs()
                .all(|(l, r)| (self.numerators[l] - self.numerators[r]).abs() < d),
        }
    }

    /// True when face `f` is a local maximum or minimum among its neighbors.
    pub fn is_local_extremum(&self, s: &CoquadSurface, f: FaceId) -> bool {
        let here = self.numerators[f];
        let around: Vec<i64> = s
            .neighbor_pairs()
            .filter_map(|(l, r)| match (l == f, r == f) {
                (true, false) => Some(self.numerators[r]),
                (false, true) => Some(self.numerators[l]),
                _ => None,
            })
            .collect();
        !around.is_empty() && (around.iter().all(|&v| v < here) || around.iter().all(|&v| v > here))
    }
}

/// `h_t`, the average of `wind(t − t̃)` over the class.
pub fn height_function(s: &CoquadSurface, t: &SurfaceTiling, cls: &TilingClass) -> Result<HeightField, HeightError> {
    if !cls.contains(t) {
        return Err(HeightError::NotInClass);
    }
    let mut sum = vec![0i64; s.num_faces()];
    for other in cls.members() {
        let w = s.winding(t, other)?;
        for (acc, x) in sum.iter_mut().zip(w) {
            *acc += x;
        }
    }
    Ok(HeightField::new(sum, cls.len() as i64))
}

/// The tiling whose height function is `h`: edge `e` is used exactly when
/// `h(left) − h(right) + freq(e) = 1`, with `freq` the fraction of the class using `e`.
pub fn reconstruct(s: &CoquadSurface, cls: &TilingClass, h: &HeightField) -> Result<SurfaceTiling, HeightError> {
    let d = h.denominator;
    if d != cls.len() as i64 {
        return Err(HeightError::NotInClass);
    }
    let mut edges = Vec::new();
    for (k, e) in s.edges().iter().enumerate() {
        let v = h.numerators[e.left] - h.numerators[e.right] + cls.edge_counts[k];
        if v == d {
            edges.push(k);
        } else if v != 0 {
            return Err(HeightError::NotATiling(k));
        }
    }
    s.tiling(edges).ok_or(HeightError::NotATiling(usize::MAX))
}

/// Lower `current` one face at a time until it reaches `target`, which must
/// lie pointwise below it. Returns the faces flipped.
fn descend(
    s: &CoquadSurface,
    cls: &TilingClass,
    mut current: HeightField,
    target: &HeightField,
) -> Result<Vec<FaceId>, HeightError> {
    let d = current.denominator;
    let mut faces = Vec::new();
    loop {
        let gap: Vec<i64> = current.numerators.iter().zip(&target.numerators).map(|(a, b)| a - b).collect();
        let widest = *gap.iter().max().expect("nonempty field");
        if widest == 0 {
            return Ok(faces);
        }
        // among faces where the gap is widest, pick the highest point of `current`
        let v2 = (0..gap.len())
            .filter(|&f| gap[f] == widest)
            .max_by_key(|&f| (current.numerators[f], std::cmp::Reverse(f)))
            .expect("some face attains the maximum");
        current.numerators[v2] -= d;
        reconstruct(s, cls, &current)?;
        faces.push(v2);
    }
}

/// A flip sequence from `t0` to `t1` through the pointwise meet of their
/// height functions. Its length is `Σ |wind(t1 − t0)|`.
pub fn flip_connect(
    s: &CoquadSurface,
    cls: &TilingClass,
    t0: &SurfaceTiling,
    t1: &SurfaceTiling,
) -> Result<Vec<FaceId>, HeightError> {
    s.winding(t1, t0)?;
    if !cls.is_stable() {
        return Err(HeightError::Unstable);
    }
    let h0 = height_function(s, t0, cls)?;
    let h1 = height_function(s, t1, cls)?;
    let bottom = h0.meet(&h1);
    let mut path = descend(s, cls, h0, &bottom)?;
    let mut back = descend(s, cls, h1, &bottom)?;
    back.reverse();
    path.extend(back);
    Ok(path)
}

/// Replay a face-flip sequence.
pub fn replay(s: &CoquadSurface, t: &SurfaceTiling, faces: &[FaceId]) -> Result<SurfaceTiling, HeightError> {
    faces.iter().try_fold(t.clone(), |cur, &f| s.flip(&cur, f))
}
