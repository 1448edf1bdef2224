//! The `enumerate`, `components`, `invariants`, `refine` and `sample` commands.

use crate::args::{default_base, write};
use crate::error::CliError;
use crate::report::Table;
use serde::Serialize;
use std::collections::BTreeMap;
use std::sync::Arc;
use tritile_core::{
    count_tilings_parallel, enumerate_tilings_parallel, flux, modulus, refine_tiling, sample_walk, twist, Axis,
    ComponentReport, Coord, FluxError, FluxVector, MoveGraph, MoveSet, Region, RegionSpec, Tiling, WalkSummary,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Moves {
    Flip,
    Fliptrit,
}

impl From<Moves> for MoveSet {
    fn from(m: Moves) -> MoveSet {
        match m {
            Moves::Flip => MoveSet::Flips,
            Moves::Fliptrit => MoveSet::FlipsAndTrits,
        }
    }
}

fn hex(h: u64) -> String {
    format!("{h:016x}")
}

fn coord_cells(c: Coord) -> [String; 3] {
    c.map(|x| x.to_string())
}

#[derive(Debug, Serialize)]
pub struct EnumerateResult {
    pub region: RegionSpec,
    pub count: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tilings: Option<Vec<Vec<[Coord; 2]>>>,
}

pub fn enumerate(region: &Arc<Region>, count_only: bool) -> (EnumerateResult, Table) {
    if count_only {
        let count = count_tilings_parallel(region);
        let mut table = Table::new(&["count"]);
        table.push(vec![count.to_string()]);
        return (EnumerateResult { region: region.to_spec(), count, tilings: None }, table);
    }
    let all = enumerate_tilings_parallel(region);
    let mut table = Table::new(&["tiling", "white_x", "white_y", "white_z", "black_x", "black_y", "black_z"]);
    let dumped: Vec<Vec<[Coord; 2]>> = all.iter().map(Tiling::coord_pairs).collect();
    for (i, pairs) in dumped.iter().enumerate() {
        for [w, b] in pairs {
            let mut row = vec![i.to_string()];
            row.extend(coord_cells(*w));
            row.extend(coord_cells(*b));
            table.push(row);
        }
    }
    (EnumerateResult { region: region.to_spec(), count: all.len() as u64, tilings: Some(dumped) }, table)
}

pub fn components(region: &Arc<Region>, moves: Moves) -> Result<(ComponentReport, Table), CliError> {
    let g = MoveGraph::build(enumerate_tilings_parallel(region), moves.into())?;
    let report = g.report()?;
    let mut table = Table::new(&["component", "size", "min_twist", "max_twist"]);
    let opt = |v: Option<i64>| v.map(|x| x.to_string()).unwrap_or_default();
    for (i, c) in report.components.iter().enumerate() {
        table.push(vec![i.to_string(), c.size.to_string(), opt(c.min_twist), opt(c.max_twist)]);
    }
    Ok((report, table))
}

/// Flux, modulus and twist of one tiling.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Invariants {
    pub flux: Vec<i64>,
    pub modulus: u64,
    /// Boxes only.
    pub twist: Option<i64>,
    pub tiling_hash: String,
}

pub fn invariants_of(t: &Tiling) -> Result<Invariants, CliError> {
    let FluxVector(f) = flux(t)?;
    let twist = if t.region().is_box() { Some(twist(t, Axis::Z)?) } else { None };
    Ok(Invariants { flux: f, modulus: modulus(t)?, twist, tiling_hash: hex(t.hash()) })
}

fn invariant_rows(table: &mut Table, label: &str, inv: &Invariants) {
    let flux = inv.flux.iter().map(i64::to_string).collect::<Vec<_>>().join(" ");
    table.push(vec![
        label.to_string(),
        flux,
        inv.modulus.to_string(),
        inv.twist.map(|x| x.to_string()).unwrap_or_default(),
        inv.tiling_hash.clone(),
    ]);
}

pub fn invariants(t: &Tiling) -> Result<(Invariants, Table), CliError> {
    let inv = invariants_of(t)?;
    let mut table = Table::new(&["tiling", "flux", "modulus", "twist", "hash"]);
    invariant_rows(&mut table, "input", &inv);
    Ok((inv, table))
}

#[derive(Debug, Serialize)]
pub struct RefineResult {
    pub k: u32,
    pub region: RegionSpec,
    pub num_dimers: usize,
    pub before: Invariants,
    pub after: Invariants,
    /// Flux and twist agree before and after.
    pub preserved: bool,
}

pub fn refine(t: &Tiling, k: u32, tiling_out: Option<&str>) -> Result<(RefineResult, Table), CliError> {
    let fine = refine_tiling(t, k)?;
    if let Some(path) = tiling_out {
        write(path, &(fine.to_json() + "\n"))?;
    }
    let before = invariants_of(t)?;
    let after = invariants_of(&fine)?;
    let preserved = before.flux == after.flux && before.twist == after.twist;
    let mut table = Table::new(&["tiling", "flux", "modulus", "twist", "hash"]);
    invariant_rows(&mut table, "input", &before);
    invariant_rows(&mut table, "refined", &after);
    let result =
        RefineResult { k, region: fine.region().to_spec(), num_dimers: fine.num_dimers(), before, after, preserved };
    Ok((result, table))
}

#[derive(Debug, Serialize)]
pub struct SampleConfig {
    pub region: RegionSpec,
    pub moves: String,
    pub steps: u64,
    pub seed: u64,
    pub start_hash: String,
}

#[derive(Debug, Serialize)]
pub struct SampleResult {
    pub config: SampleConfig,
    pub summary: WalkSummary,
    /// Flux of the walk's class; tori only.
    pub flux: Option<Vec<i64>>,
}

pub fn sample(
    region: &Arc<Region>,
    start: Option<Tiling>,
    moves: Moves,
    steps: u64,
    seed: u64,
) -> Result<(SampleResult, Table), CliError> {
    let start = match start {
        Some(t) => t,
        None => default_base(region)?,
    };
    let set: MoveSet = moves.into();
    let summary = sample_walk(&start, set, steps, seed)?;
    let flux = match flux(&start) {
        Ok(f) if region.is_torus() => Some(f.0),
        Ok(_) | Err(FluxError::Unsupported) => None,
        Err(e) => return Err(e.into()),
    };
    let mut table = Table::new(&["twist", "visits"]);
    for (tw, n) in summary.twist_histogram.clone().unwrap_or_else(BTreeMap::new) {
        table.push(vec![tw.to_string(), n.to_string()]);
    }
    let config = SampleConfig {
        region: region.to_spec(),
        moves: set.label().to_string(),
        steps,
        seed,
        start_hash: hex(start.hash()),
    };
    Ok((SampleResult { config, summary, flux }, table))
}
