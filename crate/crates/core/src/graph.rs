//! Move graphs over fully enumerated tiling spaces.

use crate::moves::{apply_move, Move, MoveFinder, MoveSet};
use crate::region::RegionSpec;
use crate::tiling::Tiling;
use crate::twist::{twist, TwistError};
use crate::geometry::Axis;
use petgraph::unionfind::UnionFind;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::{HashMap, VecDeque};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("a move from tiling #{0} leads outside the supplied tiling set; the enumeration is incomplete")]
    MissingTiling(usize),
    #[error("tiling #{0} appears twice in the supplied set")]
    DuplicateTiling(usize),
    #[error("tiling is not a node of this move graph")]
    UnknownTiling,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EdgeKind {
    Flip,
    /// A trit; the sign is for the move from the lower to the higher node.
    Trit(i8),
}

/// An undirected edge `a < b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct MoveEdge {
    pub a: usize,
    pub b: usize,
    pub kind: EdgeKind,
}

impl MoveEdge {
    /// Signed twist change when walking the edge from `from`.
    pub fn twist_change_from(&self, from: usize) -> i64 {
        let forward = match self.kind {
            EdgeKind::Flip => 0,
            EdgeKind::Trit(s) => s as i64,
        };
        if from == self.a {
            forward
        } else {
            -forward
        }
    }

    pub fn other(&self, node: usize) -> usize {
        if node == self.a {
            self.b
        } else {
            self.a
        }
    }
}

/// Tilings as nodes, flips (and optionally trits) as edges.
#[derive(Clone, Debug)]
pub struct MoveGraph {
    moves: MoveSet,
    tilings: Vec<Tiling>,
    by_hash: HashMap<u64, Vec<usize>>,
    edges: Vec<MoveEdge>,
    component: Vec<usize>,
    /// Node lists per component, largest first.
    components: Vec<Vec<usize>>,
}

impl MoveGraph {
    /// Build the graph over a complete set of tilings of one region.
    pub fn build(tilings: Vec<Tiling>, moves: MoveSet) -> Result<MoveGraph, GraphError> {
        let mut by_hash: HashMap<u64, Vec<usize>> = HashMap::with_capacity(tilings.len());
        for (i, t) in tilings.iter().enumerate() {
            let bucket = by_hash.entry(t.hash()).or_default();
            if bucket.iter().any(|&j| tilings[j].mates() == t.mates()) {
                return Err(GraphError::DuplicateTiling(i));
            }
            bucket.push(i);
        }
        let mut graph = MoveGraph {
            moves,
            tilings,
            by_hash,
            edges: Vec::new(),
            component: Vec::new(),
            components: Vec::new(),
        };
        let Some(first) = graph.tilings.first() else {
            return Ok(graph);
        };
        let finder = MoveFinder::new(first.region());

        let per_node: Vec<Result<Vec<MoveEdge>, GraphError>> = (0..graph.tilings.len())
            .into_par_iter()
            .map(|i| {
                let t = &graph.tilings[i];
                let mut out = Vec::new();
                for m in finder.find_moves(t, moves) {
                    let next = apply_move(t, &m).expect("found moves apply");
                    let j = graph.node_of(&next).ok_or(GraphError::MissingTiling(i))?;
                    if i < j {
                        let kind = match &m {
                            Move::Flip(_) => EdgeKind::Flip,
                            Move::Trit(tm) => EdgeKind::Trit(tm.sign),
                        };
                        out.push(MoveEdge { a: i, b: j, kind });
                    }
                }
                Ok(out)
            })
            .collect();
        for edges in per_node {
            graph.edges.extend(edges?);
        }

        let n = graph.tilings.len();
        let mut uf = UnionFind::<usize>::new(n);
        for e in &graph.edges {
            uf.union(e.a, e.b);
        }
        let labels = uf.into_labeling();
        let mut groups: HashMap<usize, Vec<usize>> = HashMap::new();
        for (node, root) in labels.iter().enumerate() {
            groups.entry(*root).or_default().push(node);
        }
        let mut components: Vec<Vec<usize>> = groups.into_values().collect();
        components.sort_by(|x, y| y.len().cmp(&x.len()).then(x[0].cmp(&y[0])));
        let mut component = vec![0; n];
        for (id, nodes) in components.iter().enumerate() {
            for &v in nodes {
                component[v] = id;
            }
        }
        graph.component = component;
        graph.components = components;
        Ok(graph)
    }

    pub fn move_set(&self) -> MoveSet {
        self.moves
    }

    pub fn num_nodes(&self) -> usize {
        self.tilings.len()
    }

    pub fn tilings(&self) -> &[Tiling] {
        &self.tilings
    }

    pub fn tiling(&self, node: usize) -> &Tiling {
        &self.tilings[node]
    }

    pub fn edges(&self) -> &[MoveEdge] {
        &self.edges
    }

    pub fn node_of(&self, t: &Tiling) -> Option<usize> {
        self.by_hash
            .get(&t.hash())?
            .iter()
            .copied()
            .find(|&j| self.tilings[j].mates() == t.mates())
    }

    pub fn num_components(&self) -> usize {
        self.components.len()
    }

    /// Component sizes in decreasing order.
    pub fn component_sizes(&self) -> Vec<usize> {
        self.components.iter().map(Vec::len).collect()
    }

    pub fn components(&self) -> &[Vec<usize>] {
        &self.components
    }

    pub fn component_of(&self, node: usize) -> usize {
        self.component[node]
    }

    /// Adjacency lists holding edge indices.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.tilings.len()];
        for (k, e) in self.edges.iter().enumerate() {
            adj[e.a].push(k);
            adj[e.b].push(k);
        }
        adj
    }

    /// Summary for reports; twist ranges are filled in for boxes only.
    pub fn report(&self) -> Result<ComponentReport, TwistError> {
        let region = self.tilings.first().map(|t| t.region().to_spec());
        let is_box = self.tilings.first().is_some_and(|t| t.region().is_box());
        let twists: Option<Vec<i64>> = if is_box {
            Some(self.tilings.iter().map(|t| twist(t, Axis::Z)).collect::<Result<_, _>>()?)
        } else {
            None
        };
        let components = self
            .components
            .iter()
            .map(|nodes| {
                let range = twists.as_ref().map(|tw| {
                    let vals = nodes.iter().map(|&v| tw[v]);
                    (vals.clone().min().unwrap(), vals.max().unwrap())
                });
                ComponentSummary {
                    size: nodes.len(),
                    min_twist: range.map(|r| r.0),
                    max_twist: range.map(|r| r.1),
                }
            })
            .collect();
        Ok(ComponentReport {
            region,
            moves: self.moves.label().to_string(),
            num_tilings: self.tilings.len(),
            components,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentSummary {
    pub size: usize,
    pub min_twist: Option<i64>,
    pub max_twist: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentReport {
    pub region: Option<RegionSpec>,
    pub moves: String,
    pub num_tilings: usize,
    pub components: Vec<ComponentSummary>,
}

/// Signed trit counts along a BFS tree from a base tiling.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TritLabeling {
    /// `None` for nodes outside the base tiling's component.
    pub labels: Vec<Option<i64>>,
    /// True when every edge, tree or not, agrees with the labels.
    pub consistent: bool,
    /// Edges whose endpoints' labels differ by something other than the edge's twist change.
    pub violations: Vec<MoveEdge>,
}

pub fn bfs_trit_labeling(g: &MoveGraph, base: &Tiling) -> Result<TritLabeling, GraphError> {
    let root = g.node_of(base).ok_or(GraphError::UnknownTiling)?;
    let adj = g.adjacency();
    let mut labels = vec![None; g.num_nodes()];
    labels[root] = Some(0i64);
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        let lv = labels[v].expect("queued nodes are labeled");
        for &k in &adj[v] {
            let e = &g.edges[k];
            let w = e.other(v);
            if labels[w].is_none() {
                labels[w] = Some(lv + e.twist_change_from(v));
                queue.push_back(w);
            }
        }
    }
    let violations: Vec<MoveEdge> = g
        .edges
        .iter()
        .filter(|e| match (labels[e.a], labels[e.b]) {
            (Some(la), Some(lb)) => lb - la != e.twist_change_from(e.a),
            _ => false,
        })
        .copied()
        .collect();
    Ok(TritLabeling { labels, consistent: violations.is_empty(), violations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::enumerate_tilings;
    use crate::region::Region;
    use crate::tiling::base_tiling;
    use std::sync::Arc;

    #[test]
    fn slab_graph_is_one_edge() {
        let r = Arc::new(Region::build_box(2, 2, 1).unwrap());
        let g = MoveGraph::build(enumerate_tilings(&r).collect(), MoveSet::Flips).unwrap();
        assert_eq!(g.component_sizes(), vec![2]);
        assert_eq!(g.edges().len(), 1);
    }

    #[test]
    fn incomplete_set_is_reported() {
        let r = Arc::new(Region::build_box(2, 2, 1).unwrap());
        let mut ts: Vec<_> = enumerate_tilings(&r).collect();
        ts.pop();
        assert_eq!(MoveGraph::build(ts, MoveSet::Flips).unwrap_err(), GraphError::MissingTiling(0));
    }

    #[test]
    fn flip_only_labels_vanish() {
        let r = Arc::new(Region::build_box(2, 2, 2).unwrap());
        let g = MoveGraph::build(enumerate_tilings(&r).collect(), MoveSet::Flips).unwrap();
        let base = base_tiling(&r, Axis::Z).unwrap();
        let lab = bfs_trit_labeling(&g, &base).unwrap();
        assert!(lab.consistent);
        assert!(lab.labels.iter().all(|l| *l == Some(0)));
    }
}
