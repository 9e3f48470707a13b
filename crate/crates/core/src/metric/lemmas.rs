use serde_json::json;

use super::{distance_to_geodesic, gromov_product, Point};
use crate::error::{Error, Result};
use crate::report::{CheckContext, Theorem, TheoremReport};
use crate::spaces::Space;
use crate::tol;

/// Points at distance `r ≤ (y|z)_x` from `x` on the geodesics `x→y` and
/// `x→z` are at most `4δ` apart.
pub fn check_tripod_lemma(
    space: &Space,
    x: &Point,
    y: &Point,
    z: &Point,
    r: f64,
    ctx: &CheckContext,
) -> Result<TheoremReport> {
    let g = gromov_product(space, x, y, z)?;
    if !(r >= 0.0 && r <= g + tol::GEO_NUMERIC * (1.0 + g)) {
        return Err(Error::OutOfRange {
            what: "tripod radius",
            value: r,
            lo: 0.0,
            hi: g,
        });
    }
    let to_y = space.geodesic(x, y)?;
    let to_z = space.geodesic(x, z)?;
    let y1 = to_y.at_distance(r);
    let z1 = to_z.at_distance(r);
    let lhs = space.distance(&y1, &z1)?;
    let inputs = json!({
        "x": space.describe(x),
        "y": space.describe(y),
        "z": space.describe(z),
        "r": r,
        "gromov_yz_x": g,
    });
    Ok(ctx.report(Theorem::Tripod, inputs, lhs, 4.0 * ctx.delta))
}

/// `|(x₁|x₂)_p − (y₁|y₂)_p| ≤ 6δ + σ` for `y_i` on the geodesic `p→x_i`
/// with `d(p,y₁) ∧ d(p,y₂) ≥ (x₁|x₂)_p − σ`.
///
/// `y_i` is given by its parameter `t_i ∈ [0, 1]` along the canonical
/// geodesic. A violated hypothesis yields a skipped report.
#[allow(clippy::too_many_arguments)]
pub fn check_projection_lemma(
    space: &Space,
    p: &Point,
    x1: &Point,
    x2: &Point,
    t1: f64,
    t2: f64,
    sigma: f64,
    ctx: &CheckContext,
) -> Result<TheoremReport> {
    if !(sigma >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "sigma must be >= 0, got {sigma}"
        )));
    }
    for t in [t1, t2] {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::OutOfRange {
                what: "geodesic parameter",
                value: t,
                lo: 0.0,
                hi: 1.0,
            });
        }
    }
    let y1 = space.geodesic(p, x1)?.sample(t1);
    let y2 = space.geodesic(p, x2)?.sample(t2);
    let gx = gromov_product(space, p, x1, x2)?;
    let reach = space.distance(p, &y1)?.min(space.distance(p, &y2)?);
    let inputs = json!({
        "p": space.describe(p),
        "x1": space.describe(x1),
        "x2": space.describe(x2),
        "t1": t1,
        "t2": t2,
        "sigma": sigma,
    });
    if reach < gx - sigma - tol::GEO_NUMERIC * (1.0 + gx) {
        return Ok(ctx.skipped(
            Theorem::Projection,
            inputs,
            format!(
                "hypothesis fails: min d(p,y_i) = {reach} < (x1|x2)_p - sigma = {}",
                gx - sigma
            ),
        ));
    }
    let gy = gromov_product(space, p, &y1, &y2)?;
    Ok(ctx.report(
        Theorem::Projection,
        inputs,
        (gx - gy).abs(),
        6.0 * ctx.delta + sigma,
    ))
}

/// Both sides of `d(x,γ) − 2δ ≤ (y|z)_x ≤ d(x,γ)` for the canonical geodesic
/// `γ` from `y` to `z`.
pub fn check_gromov_sandwich(
    space: &Space,
    x: &Point,
    y: &Point,
    z: &Point,
    grid: usize,
    ctx: &CheckContext,
) -> Result<[TheoremReport; 2]> {
    let path = space.geodesic(y, z)?;
    let dist = distance_to_geodesic(space, x, &path, grid)?;
    let g = gromov_product(space, x, y, z)?;
    let inputs = json!({
        "x": space.describe(x),
        "y": space.describe(y),
        "z": space.describe(z),
        "grid": grid,
        "distance_to_geodesic": dist,
    });
    Ok([
        ctx.report(
            Theorem::GromovLower,
            inputs.clone(),
            dist - 2.0 * ctx.delta,
            g,
        ),
        ctx.report(Theorem::GromovUpper, inputs, g, dist),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::{build_perturbed_tree, build_tripod};

    #[test]
    fn tripod_lemma_on_a_tree_is_tight() {
        let t = build_tripod([2.0, 3.0, 4.0]).unwrap();
        let s = t.space();
        let ctx = CheckContext::with_delta(0.0);
        for r in [0.0, 0.5, 1.0, 2.0] {
            let rep = check_tripod_lemma(
                s,
                &Point::Vertex(1),
                &Point::Vertex(2),
                &Point::Vertex(3),
                r,
                &ctx,
            )
            .unwrap();
            assert!(rep.pass);
            assert!(rep.lhs.abs() < 1e-12);
        }
        assert!(check_tripod_lemma(
            s,
            &Point::Vertex(1),
            &Point::Vertex(2),
            &Point::Vertex(3),
            2.5,
            &ctx
        )
        .is_err());
    }

    #[test]
    fn projection_lemma_cases() {
        let t = build_tripod([2.0, 3.0, 4.0]).unwrap();
        let s = t.space();
        let ctx = CheckContext::with_delta(0.0);
        // p = leaf 1; both y past the branch point (which is 2 away from p)
        let rep = check_projection_lemma(
            s,
            &Point::Vertex(1),
            &Point::Vertex(2),
            &Point::Vertex(3),
            0.8,
            0.6,
            0.0,
            &ctx,
        )
        .unwrap();
        assert!(rep.pass && rep.lhs.abs() < 1e-12, "{rep:?}");
        let rep = check_projection_lemma(
            s,
            &Point::Vertex(1),
            &Point::Vertex(2),
            &Point::Vertex(3),
            1.0,
            1.0,
            0.0,
            &ctx,
        )
        .unwrap();
        assert!(rep.pass && rep.lhs == 0.0);
        let rep = check_projection_lemma(
            s,
            &Point::Vertex(1),
            &Point::Vertex(2),
            &Point::Vertex(3),
            0.1,
            1.0,
            0.0,
            &ctx,
        )
        .unwrap();
        assert!(rep.is_skipped());
        assert!(check_projection_lemma(
            s,
            &Point::Vertex(1),
            &Point::Vertex(2),
            &Point::Vertex(3),
            0.1,
            1.0,
            -1.0,
            &ctx
        )
        .is_err());
    }

    #[test]
    fn sandwich_on_tree_has_zero_slack() {
        let t = build_tripod([2.0, 3.0, 4.0]).unwrap();
        let ctx = CheckContext::with_delta(0.0);
        let [lo, hi] = check_gromov_sandwich(
            t.space(),
            &Point::Vertex(1),
            &Point::Vertex(2),
            &Point::Vertex(3),
            16,
            &ctx,
        )
        .unwrap();
        assert!(lo.pass && hi.pass);
        assert!(lo.slack.abs() < 1e-9 && hi.slack.abs() < 1e-9);
    }

    #[test]
    fn tripod_lemma_on_perturbed_tree() {
        let base = build_tripod([2.0, 3.0, 4.0]).unwrap();
        let pt = build_perturbed_tree(&base, 0.1, 2, 1).unwrap();
        let ctx = CheckContext::with_delta(pt.declared_delta());
        let s = pt.space();
        let (x, y, z) = (Point::Vertex(1), Point::Vertex(2), Point::Vertex(3));
        let g = gromov_product(s, &x, &y, &z).unwrap();
        for k in 0..=10 {
            let rep = check_tripod_lemma(s, &x, &y, &z, g * k as f64 / 10.0, &ctx).unwrap();
            assert!(rep.pass, "{rep:?}");
        }
    }
}
