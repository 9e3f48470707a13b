use crate::metric::Point;
use crate::objective::Objective;
use crate::search::quadratic_piece_min;
use crate::spaces::Space;
use crate::tol;

use super::moreau;

/// Per-piece minima of the Moreau objective on every edge meeting `B(x, radius)`.
///
/// Each edge is cut where the distance to `x` or to one of the objective's
/// anchors changes slope; on every piece the Moreau objective is a convex
/// quadratic in the offset, minimized in closed form.
pub(super) fn candidates(
    space: &Space,
    f: &Objective,
    x: &Point,
    tau: f64,
    radius: f64,
) -> Vec<(Point, f64)> {
    let g = space.as_graph().expect("graph space");
    let mut kinks_from = f.anchors();
    kinks_from.push(*x);
    let reach = radius + tol::noise(radius);
    let mut out = Vec::new();
    for (i, e) in g.edges().iter().enumerate() {
        let near = g
            .distance_along(x, i, 0.0)
            .min(g.distance_along(x, i, e.weight));
        let on_edge = matches!(x, Point::Edge { edge, .. } if *edge == i);
        if !on_edge && near > reach {
            continue;
        }
        let mut cuts = vec![0.0, e.weight];
        cuts.extend(kinks_from.iter().filter_map(|q| g.kink_on_edge(q, i)));
        cuts.sort_by(|a, b| a.total_cmp(b));
        cuts.dedup_by(|a, b| (*a - *b).abs() <= 1e-14 * e.weight.max(1.0));
        for piece in cuts.windows(2) {
            let m = |s: f64| moreau(space, f, x, tau, &g.locate(i, s));
            let (s, _) = quadratic_piece_min(m, piece[0], piece[1], 1e-13 * e.weight.max(1.0));
            let y = g.locate(i, s);
            out.push((y, moreau(space, f, x, tau, &y)));
        }
    }
    out
}
