use std::f64::consts::TAU;

use crate::metric::Point;
use crate::objective::{refine_in_plane, Objective};
use crate::search::golden_section;
use crate::spaces::{HalfPlane, Space};

use super::moreau;

const RADIAL: usize = 24;
const ANGULAR: usize = 48;
const MAX_RADIAL: usize = 400;

/// Polar grid on `B(x, radius)`, line searches toward each anchor, then a
/// compass search from the best point found.
pub(super) fn candidates(
    h: &HalfPlane,
    space: &Space,
    f: &Objective,
    x: &Point,
    tau: f64,
    radius: f64,
    grid_step: Option<f64>,
) -> Vec<(Point, f64)> {
    if radius <= 0.0 {
        return Vec::new();
    }
    let m = |y: &Point| moreau(space, f, x, tau, y);
    let radial = grid_step
        .map(|s| ((radius / s).ceil() as usize).clamp(RADIAL, MAX_RADIAL))
        .unwrap_or(RADIAL);
    let mut out = Vec::with_capacity(radial * ANGULAR + 8);
    for i in 1..=radial {
        let rho = radius * i as f64 / radial as f64;
        for j in 0..ANGULAR {
            let y = h.polar(x, rho, TAU * j as f64 / ANGULAR as f64);
            out.push((y, m(&y)));
        }
    }
    for a in f.anchors() {
        out.push((a, m(&a)));
        if let Ok(path) = space.geodesic(x, &a) {
            let (t, _) = golden_section(|t| m(&path.sample(t)), 0.0, 1.0, 1e-13);
            let y = path.sample(t);
            out.push((y, m(&y)));
        }
    }

    let start = out.iter().fold(
        (*x, m(x)),
        |best, &(p, v)| if v < best.1 { (p, v) } else { best },
    );
    let (y, v) = refine_in_plane(h, &start.0, radius / radial as f64, &m);
    out.push((y, v));
    out
}
