//! Region tokens and tiling sources on the command line.

use crate::error::CliError;
use std::path::Path;
use std::sync::Arc;
use tritile_core::{base_tiling, Axis, Region, RegionSpec, Tiling};

/// Parse `box L M N`, `torus a b c` or a region file path. `first` is the
/// command-line position of the first token.
pub fn parse_region(tokens: &[String], first: usize) -> Result<Arc<Region>, CliError> {
    let Some(kind) = tokens.first() else {
        return Err(CliError::MissingArgument("expected a region: box L M N, torus a b c, or a region file".into()));
    };
    let usage = |k: usize, message: &str| CliError::Usage {
        position: first + k,
        token: tokens.get(k).cloned().unwrap_or_default(),
        message: message.to_string(),
    };
    match kind.as_str() {
        "box" | "torus" => {
            if tokens.len() < 4 {
                return Err(usage(tokens.len().min(3), "expected three dimensions"));
            }
            if tokens.len() > 4 {
                return Err(usage(4, "unexpected extra argument after the region"));
            }
            let mut dims = [0u32; 3];
            for k in 0..3 {
                dims[k] = tokens[k + 1].parse().map_err(|_| usage(k + 1, "expected a positive integer"))?;
            }
            let spec = if kind == "box" { RegionSpec::Box { dims } } else { RegionSpec::Torus { periods: dims } };
            Ok(Arc::new(spec.build()?))
        }
        path => {
            if tokens.len() > 1 {
                return Err(usage(1, "unexpected extra argument after the region file"));
            }
            let text = read(path)?;
            let spec: RegionSpec =
                serde_json::from_str(&text).map_err(|source| CliError::RegionFile { path: path.into(), source })?;
            Ok(Arc::new(spec.build()?))
        }
    }
}

pub fn read(path: impl AsRef<Path>) -> Result<String, CliError> {
    let path = path.as_ref();
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

pub fn write(path: impl AsRef<Path>, text: &str) -> Result<(), CliError> {
    let path = path.as_ref();
    std::fs::write(path, text).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

/// The tiling a command works on: a tiling file, the base tiling along an
/// axis, or the base tiling along the first axis of even extent.
pub fn load_tiling(region: Option<&Arc<Region>>, file: Option<&str>, base: Option<Axis>) -> Result<Tiling, CliError> {
    if let Some(path) = file {
        let text = read(path)?;
        return Ok(match region {
            Some(r) => Tiling::from_json_in(&text, r)?,
            None => Tiling::from_json(&text)?,
        });
    }
    let region = region.ok_or_else(|| CliError::MissingArgument("expected a region or --tiling FILE".into()))?;
    match base {
        Some(axis) => Ok(base_tiling(region, axis)?),
        None => default_base(region),
    }
}

pub fn default_base(region: &Arc<Region>) -> Result<Tiling, CliError> {
    let mut last = None;
    for axis in Axis::ALL {
        match base_tiling(region, axis) {
            Ok(t) => return Ok(t),
            Err(e) => last = Some(e),
        }
    }
    Err(last.expect("three axes tried").into())
}
