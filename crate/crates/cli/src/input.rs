use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use hypflow_core::harness::SpaceSource;
use hypflow_core::spaces::schema::{PointDescriptor, SpaceFile, FORMAT_VERSION};
use hypflow_core::spaces::{build_half_plane, build_perturbed_tree, build_random_tree};
use hypflow_core::{ObjectiveDescriptor, Point, Space};
use serde::de::DeserializeOwned;
use serde_json::Value;

/// Inline JSON when the argument starts with `{`, otherwise a file path.
fn read_json(arg: &str) -> Result<Value> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        fs::read_to_string(arg).with_context(|| format!("reading {arg}"))?
    };
    serde_json::from_str(&text).with_context(|| format!("parsing JSON from {arg}"))
}

/// Parses a descriptor, accepting and checking an optional top-level
/// `"format"` field.
fn versioned<T: DeserializeOwned>(arg: &str, what: &str) -> Result<T> {
    let mut value = read_json(arg)?;
    if let Some(obj) = value.as_object_mut() {
        if let Some(format) = obj.remove("format") {
            if format.as_u64() != Some(FORMAT_VERSION as u64) {
                bail!("unsupported {what} format {format}, expected {FORMAT_VERSION}");
            }
        }
    }
    serde_json::from_value(value).with_context(|| format!("invalid {what} descriptor in {arg}"))
}

/// Settings for the generated spaces behind the `tree` and `perturbed` keywords.
#[derive(Debug, Clone, Copy)]
pub struct Generated {
    pub vertices: usize,
    pub delta_build: f64,
    pub detours: usize,
    pub seed: u64,
}

/// A space together with the hyperbolicity constant it is declared to have.
pub fn load_space(arg: &str, gen: Generated) -> Result<(Space, f64)> {
    match arg {
        "halfplane" => Ok((build_half_plane(), hypflow_core::spaces::HALF_PLANE_DELTA)),
        "tree" => {
            let t = build_random_tree(gen.vertices, (0.5, 3.0), gen.seed)?;
            Ok((t.into_space(), 0.0))
        }
        "perturbed" => {
            let t = build_random_tree(gen.vertices, (0.5, 3.0), gen.seed)?;
            let pt = build_perturbed_tree(&t, gen.delta_build, gen.detours, gen.seed)?;
            Ok((pt.space().clone(), pt.declared_delta()))
        }
        path => {
            let text =
                fs::read_to_string(path).with_context(|| format!("reading space file {path}"))?;
            let file = SpaceFile::from_json(&text)
                .with_context(|| format!("invalid space file {path}"))?;
            let space = file.build()?;
            let declared = match SpaceSource::fixed(space.clone())? {
                SpaceSource::Fixed { declared_delta, .. } => declared_delta,
                _ => unreachable!(),
            };
            Ok((space, declared))
        }
    }
}

pub fn space_source(arg: &str, delta_build: Option<f64>) -> Result<SpaceSource> {
    Ok(match arg {
        "tree" => SpaceSource::Tree,
        "perturbed" => SpaceSource::Perturbed { delta_build },
        "halfplane" => SpaceSource::HalfPlane,
        path if Path::new(path).exists() => {
            let text =
                fs::read_to_string(path).with_context(|| format!("reading space file {path}"))?;
            let file = SpaceFile::from_json(&text)
                .with_context(|| format!("invalid space file {path}"))?;
            SpaceSource::fixed(file.build()?)?
        }
        other => {
            bail!("unknown space {other:?}: expected tree, perturbed, halfplane or a file path")
        }
    })
}

pub fn objective(arg: &str) -> Result<ObjectiveDescriptor> {
    versioned(arg, "objective")
}

pub fn point(space: &Space, arg: &str) -> Result<Point> {
    let d: PointDescriptor = versioned(arg, "point")?;
    Ok(space.resolve(&d)?)
}

pub fn parse_box(arg: &str) -> Result<[f64; 4]> {
    let parts: Vec<f64> = arg
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .with_context(|| format!("box {arg:?} must be four comma-separated numbers"))?;
    let Ok(b) = <[f64; 4]>::try_from(parts) else {
        bail!("box {arg:?} must have exactly four numbers");
    };
    if !(b[0] < b[1] && 0.0 < b[2] && b[2] < b[3]) {
        bail!("box {arg:?} must satisfy u0 < u1 and 0 < v0 < v1");
    }
    Ok(b)
}
