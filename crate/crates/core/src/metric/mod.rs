//! Gromov products, four-point hyperbolicity estimates and the geometric
//! lemmas about geodesics in δ-hyperbolic spaces.

mod delta;
pub(crate) mod geodesic;
mod lemmas;
mod point;

pub use delta::{four_point_delta, DeltaEstimate, DeltaMode};
pub use geodesic::GeodesicPath;
pub use lemmas::{check_gromov_sandwich, check_projection_lemma, check_tripod_lemma};
pub use point::Point;

use crate::error::{Error, Result};
use crate::search::golden_section;
use crate::spaces::Space;

/// `(x|y)_base = ½ (d(base,x) + d(base,y) − d(x,y))`.
pub fn gromov_product(space: &Space, base: &Point, x: &Point, y: &Point) -> Result<f64> {
    let bx = space.distance(base, x)?;
    let by = space.distance(base, y)?;
    let xy = space.distance(x, y)?;
    Ok(gromov_from_distances(bx, by, xy))
}

pub(crate) fn gromov_from_distances(bx: f64, by: f64, xy: f64) -> f64 {
    (0.5 * (bx + by - xy)).max(0.0)
}

/// `min_t d(x, path(t))`: the best of a uniform `grid` followed by a
/// golden-section refinement around the best grid cell.
pub fn distance_to_geodesic(
    space: &Space,
    x: &Point,
    path: &GeodesicPath,
    grid: usize,
) -> Result<f64> {
    if grid < 2 {
        return Err(Error::InvalidArgument(format!(
            "grid must be >= 2, got {grid}"
        )));
    }
    space.check_point(x)?;
    space.check_point(&path.start())?;
    let at = |t: f64| space.dist(x, &path.sample(t));
    let step = 1.0 / (grid - 1) as f64;
    let (mut best_i, mut best) = (0, f64::INFINITY);
    for i in 0..grid {
        let d = at(i as f64 * step);
        if d < best {
            best = d;
            best_i = i;
        }
    }
    let lo = (best_i as f64 - 1.0).max(0.0) * step;
    let hi = ((best_i + 1) as f64 * step).min(1.0);
    let (_, refined) = golden_section(at, lo, hi, 1e-12);
    Ok(best.min(refined))
}
