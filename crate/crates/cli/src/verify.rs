//! Verification suites. Each check aggregates many individual comparisons
//! and records the first violation it saw.

use crate::args::default_base;
use crate::error::CliError;
use crate::report::Table;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::VecDeque;
use std::sync::Arc;
use tritile_core::{
    base_tiling, bfs_trit_labeling, closed_box_surface, dual_box_interior, enumerate_tilings_parallel, flip_connect,
    flux, flux_through_surface, height_function, refine_tiling, replay, twist, twist_all_axes, walk_samples, Axis,
    CoquadSurface, Coord, EdgeKind, EulerCounts, MoveGraph, MoveSet, Region, Tiling, TilingClass,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Euler,
    Twist,
    Refine,
    Heightfn,
    All,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub id: String,
    pub passed: bool,
    pub checked: u64,
    pub violations: u64,
    pub detail: String,
}

impl Check {
    fn new(id: &str, outcomes: impl IntoIterator<Item = Result<(), String>>) -> Check {
        let mut checked = 0;
        let mut violations = 0;
        let mut first = None;
        for o in outcomes {
            checked += 1;
            if let Err(msg) = o {
                violations += 1;
                first.get_or_insert(msg);
            }
        }
        let detail = match first {
            Some(msg) => format!("first violation: {msg}"),
            None if checked == 0 => "nothing to check in this region".to_string(),
            None => format!("{checked} checked"),
        };
        Check { id: id.to_string(), passed: violations == 0, checked, violations, detail }
    }
}

#[derive(Debug, Serialize)]
pub struct VerifyResult {
    pub suite: String,
    pub passed: bool,
    pub checks: Vec<Check>,
}

/// Options shared by the suites.
#[derive(Clone, Debug)]
pub struct VerifyOptions {
    /// Overrides the default region of the euler, twist and refine suites.
    pub region: Option<Arc<Region>>,
    pub seed: u64,
    /// Random tilings for the euler suite.
    pub tilings: usize,
    /// Torus samples for the refine suite.
    pub samples: usize,
}

pub fn verify(suite: Suite, opts: &VerifyOptions) -> Result<(VerifyResult, Table), CliError> {
    let suites = match suite {
        Suite::All => vec![Suite::Euler, Suite::Twist, Suite::Refine, Suite::Heightfn],
        s => vec![s],
    };
    let mut checks = Vec::new();
    for s in suites {
        checks.extend(match s {
            Suite::Euler => euler(opts)?,
            Suite::Twist => twist_suite(opts)?,
            Suite::Refine => refine_suite(opts)?,
            Suite::Heightfn => heightfn()?,
            Suite::All => unreachable!(),
        });
    }
    let mut table = Table::new(&["id", "passed", "checked", "violations", "detail"]);
    for c in &checks {
        table.push(vec![
            c.id.clone(),
            c.passed.to_string(),
            c.checked.to_string(),
            c.violations.to_string(),
            c.detail.clone(),
        ]);
    }
    let passed = checks.iter().all(|c| c.passed);
    let name = format!("{suite:?}").to_lowercase();
    Ok((VerifyResult { suite: name, passed, checks }, table))
}

fn region_or(opts: &VerifyOptions, dims: [u32; 3]) -> Result<Arc<Region>, CliError> {
    match &opts.region {
        Some(r) => Ok(r.clone()),
        None => Ok(Arc::new(Region::build_box(dims[0], dims[1], dims[2])?)),
    }
}

/// Every dual sub-box whose vertices are all cells of the box.
pub fn dual_boxes(dims: [u32; 3]) -> Vec<(Coord, [u32; 3])> {
    let d = dims.map(|x| x as i32);
    let mut out = Vec::new();
    for cx in 0..d[0] {
        for cy in 0..d[1] {
            for cz in 0..d[2] {
                for lx in 1..d[0] - cx {
                    for ly in 1..d[1] - cy {
                        for lz in 1..d[2] - cz {
                            out.push(([cx, cy, cz], [lx as u32, ly as u32, lz as u32]));
                        }
                    }
                }
            }
        }
    }
    out
}

fn euler(opts: &VerifyOptions) -> Result<Vec<Check>, CliError> {
    let region = region_or(opts, [4, 4, 4])?;
    let dims = region
        .box_dims()
        .ok_or_else(|| CliError::WrongRegion("the euler suite needs a box region".into()))?;
    let boxes = dual_boxes(dims);
    if boxes.is_empty() {
        return Err(CliError::WrongRegion("the box is too thin to hold a closed dual surface".into()));
    }
    let start = default_base(&region)?;
    let tilings = walk_samples(&start, MoveSet::FlipsAndTrits, opts.tilings, 50, opts.seed);
    // three surfaces per tiling, spread over the list of sub-boxes
    let n = boxes.len();
    let jobs: Vec<(usize, usize)> =
        (0..tilings.len()).flat_map(|i| (0..3).map(move |j| (i, ((3 * i + j) * 7919) % n))).collect();
    let phi: Vec<Result<(), String>> = jobs
        .par_iter()
        .map(|&(i, b)| {
            let (corner, d) = boxes[b];
            let s = closed_box_surface(&region, corner, d).map_err(|e| e.to_string())?;
            let counts = EulerCounts::new(&region, &s, &dual_box_interior(&region, corner, d));
            if !counts.identity_holds() {
                return Err(format!("counting identity fails on sub-box {corner:?} {d:?}: {counts:?}"));
            }
            match flux_through_surface(&tilings[i], &s) {
                Ok(0) => Ok(()),
                Ok(v) => Err(format!("tiling #{i}, sub-box {corner:?} {d:?}: phi = {v}")),
                Err(e) => Err(e.to_string()),
            }
        })
        .collect();
    Ok(vec![Check::new("euler/closed-surface-flux", phi)])
}

fn twist_suite(opts: &VerifyOptions) -> Result<Vec<Check>, CliError> {
    let region = region_or(opts, [3, 3, 2])?;
    let g = MoveGraph::build(enumerate_tilings_parallel(&region), MoveSet::FlipsAndTrits)?;
    let tws: Vec<[i64; 3]> = g.tilings().par_iter().map(twist_all_axes).collect::<Result<_, _>>()?;
    let edge = |want_trit: bool| {
        g.edges()
            .iter()
            .filter(move |e| matches!(e.kind, EdgeKind::Trit(_)) == want_trit)
            .map(|e| {
                let d = tws[e.b][2] - tws[e.a][2];
                let expected = e.twist_change_from(e.a);
                if d == expected {
                    Ok(())
                } else {
                    Err(format!("edge {}-{} ({:?}) changes twist by {d}", e.a, e.b, e.kind))
                }
            })
            .collect::<Vec<_>>()
    };
    let axes = tws.iter().enumerate().map(|(i, [x, y, z])| {
        if x == y && y == z {
            Ok(())
        } else {
            Err(format!("tiling #{i}: twists along x, y, z are {x}, {y}, {z}"))
        }
    });
    let base = default_base(&region)?;
    let labels = bfs_trit_labeling(&g, &base)?;
    let tw0 = twist(&base, Axis::Z)?;
    let mut label_checks: Vec<Result<(), String>> = labels
        .violations
        .iter()
        .map(|e| Err(format!("edge {}-{} disagrees with the BFS labels", e.a, e.b)))
        .collect();
    label_checks.extend(labels.labels.iter().enumerate().map(|(i, l)| match l {
        Some(v) if *v == tws[i][2] - tw0 => Ok(()),
        other => Err(format!("tiling #{i}: label {other:?}, twist difference {}", tws[i][2] - tw0)),
    }));
    Ok(vec![
        Check::new("twist/flip-edges", edge(false)),
        Check::new("twist/trit-edges", edge(true)),
        Check::new("twist/axis-independence", axes),
        Check::new("twist/trit-labeling", label_checks),
    ])
}

/// Columns along x whose first cell is black keep the pairs `{0,1},{2,3},…`;
/// the others are shifted by one. On `torus(4,4,4)` this tiling has flux `(±8,0,0)`.
pub fn shifted_columns(region: &Arc<Region>) -> Result<Tiling, CliError> {
    let periods = region.periods().ok_or_else(|| CliError::WrongRegion("shifted columns need a torus".into()))?;
    let a = periods[0] as i32;
    let mut pairs = Vec::new();
    for &c in region.coords() {
        if c[0] != 0 {
            continue;
        }
        let shift = i32::from(region.color_at(c) == tritile_core::Color::White);
        for k in (0..a).step_by(2) {
            let p = [(k + shift).rem_euclid(a), c[1], c[2]];
            let q = [(k + shift + 1).rem_euclid(a), c[1], c[2]];
            let (w, b) = if region.color_at(p) == tritile_core::Color::White { (p, q) } else { (q, p) };
            pairs.push([w, b]);
        }
    }
    Ok(Tiling::from_coord_pairs(region.clone(), &pairs)?)
}

fn refine_suite(opts: &VerifyOptions) -> Result<Vec<Check>, CliError> {
    let region = region_or(opts, [3, 3, 2])?;
    let all = enumerate_tilings_parallel(&region);
    let tw: Vec<Result<(), String>> = all
        .par_iter()
        .enumerate()
        .map(|(i, t)| {
            let fine = refine_tiling(t, 1).map_err(|e| e.to_string())?;
            let (a, b) = (twist(t, Axis::Z).map_err(|e| e.to_string())?, twist(&fine, Axis::Z).map_err(|e| e.to_string())?);
            if a == b {
                Ok(())
            } else {
                Err(format!("tiling #{i}: twist {a} becomes {b}"))
            }
        })
        .collect();

    let torus = Arc::new(Region::build_torus(4, 4, 4)?);
    let starts = [base_tiling(&torus, Axis::X)?, shifted_columns(&torus)?];
    let half = opts.samples.div_ceil(2);
    let samples: Vec<Tiling> = starts
        .iter()
        .enumerate()
        .flat_map(|(k, s)| walk_samples(s, MoveSet::FlipsAndTrits, half, 40, opts.seed.wrapping_add(k as u64)))
        .take(opts.samples)
        .collect();
    let fx: Vec<Result<(), String>> = samples
        .par_iter()
        .enumerate()
        .map(|(i, t)| {
            let fine = refine_tiling(t, 1).map_err(|e| e.to_string())?;
            let (a, b) = (flux(t).map_err(|e| e.to_string())?, flux(&fine).map_err(|e| e.to_string())?);
            if a == b {
                Ok(())
            } else {
                Err(format!("sample #{i}: flux {a} becomes {b}"))
            }
        })
        .collect();
    Ok(vec![Check::new("refine/twist", tw), Check::new("refine/torus-flux", fx)])
}

/// All-pairs flip distances on the flip graph of the surface tilings.
fn flip_distances(s: &CoquadSurface, ts: &[tritile_core::SurfaceTiling]) -> Vec<Vec<usize>> {
    let index = |t: &tritile_core::SurfaceTiling| ts.iter().position(|u| u == t).expect("closed under flips");
    let adj: Vec<Vec<usize>> = ts
        .iter()
        .map(|t| s.available_flips(t).into_iter().map(|f| index(&s.flip(t, f).expect("available"))).collect())
        .collect();
    (0..ts.len())
        .map(|src| {
            let mut d = vec![usize::MAX; ts.len()];
            d[src] = 0;
            let mut q = VecDeque::from([src]);
            while let Some(v) = q.pop_front() {
                for &w in &adj[v] {
                    if d[w] == usize::MAX {
                        d[w] = d[v] + 1;
                        q.push_back(w);
                    }
                }
            }
            d
        })
        .collect()
}

fn heightfn() -> Result<Vec<Check>, CliError> {
    let cells: Vec<[i32; 2]> = (0..4).flat_map(|x| (0..4).map(move |y| [x, y])).collect();
    let s = CoquadSurface::planar(&cells)?;
    let ts = s.enumerate_tilings();
    let cls = TilingClass::of(&s, &ts[0]);
    let hs = ts.iter().map(|t| height_function(&s, t, &cls)).collect::<Result<Vec<_>, _>>()?;
    let conditions = hs.iter().enumerate().map(|(i, h)| {
        let c = h.conditions(&s, &hs[0]);
        if c.all() {
            Ok(())
        } else {
            Err(format!("tiling #{i}: {c:?}"))
        }
    });
    let mut extrema = Vec::new();
    for (i, (t, h)) in ts.iter().zip(&hs).enumerate() {
        let flips = s.available_flips(t);
        for f in (0..s.num_faces()).filter(|&f| f != s.infinity()) {
            extrema.push(if h.is_local_extremum(&s, f) == flips.contains(&f) {
                Ok(())
            } else {
                Err(format!("tiling #{i}, face {f}: extremum and flip availability disagree"))
            });
        }
    }
    let dist = flip_distances(&s, &ts);
    let pairs: Vec<(usize, usize)> = (0..ts.len()).flat_map(|i| (i + 1..ts.len()).map(move |j| (i, j))).collect();
    let connect: Vec<Result<(), String>> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let path = flip_connect(&s, &cls, &ts[i], &ts[j]).map_err(|e| e.to_string())?;
            if replay(&s, &ts[i], &path).map_err(|e| e.to_string())? != ts[j] {
                return Err(format!("pair {i}-{j}: replay does not reach the target"));
            }
            let wind: i64 = s.winding(&ts[j], &ts[i]).map_err(|e| e.to_string())?.iter().map(|w| w.abs()).sum();
            if path.len() as i64 != wind || path.len() != dist[i][j] {
                return Err(format!(
                    "pair {i}-{j}: path length {}, sum of |winding| {wind}, flip distance {}",
                    path.len(),
                    dist[i][j]
                ));
            }
            Ok(())
        })
        .collect();
    Ok(vec![
        Check::new("heightfn/conditions", conditions),
        Check::new("heightfn/extrema-are-flips", extrema),
        Check::new("heightfn/flip-connect", connect),
    ])
}
