//! The proximal operator `J_τ^f(x) = argmin_y f(y) + d²(x,y)/(2τ)`, the
//! one-dimensional resolvent on convex tables, and the discrete flow.

mod flow;
mod graph;
mod one_dim;
mod plane;

pub use flow::{flow, FlowParams, FlowStep, FlowTrace, StopReason};
pub use one_dim::{prox_1d, ConvexTable};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::metric::Point;
use crate::objective::Objective;
use crate::spaces::{Region, Space};

/// Parameters of a single prox solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProxConfig {
    pub tau: f64,
    /// Radial spacing of the half-plane search grid; must not exceed `τL`.
    pub grid_step: Option<f64>,
    /// Accepted certificate; defaults to `1e-8·(1 + |f(x)|)`.
    pub refine_tol: Option<f64>,
    pub certificate_samples: usize,
    pub seed: u64,
}

impl ProxConfig {
    pub fn new(tau: f64) -> Self {
        Self {
            tau,
            grid_step: None,
            refine_tol: None,
            certificate_samples: 500,
            seed: 0,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    fn validate(&self, f: &Objective) -> Result<()> {
        if !(self.tau.is_finite() && self.tau > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "tau must be positive, got {}",
                self.tau
            )));
        }
        if let Some(h) = self.grid_step {
            if !(h > 0.0 && h <= self.tau * f.l()) {
                return Err(Error::InvalidArgument(format!(
                    "grid_step must lie in (0, tau*L = {}], got {h}",
                    self.tau * f.l()
                )));
            }
        }
        if let Some(t) = self.refine_tol {
            if !(t > 0.0) {
                return Err(Error::InvalidArgument(format!(
                    "refine_tol must be positive, got {t}"
                )));
            }
        }
        Ok(())
    }
}

/// One accepted proximal step from `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProxResult {
    pub x: Point,
    pub y: Point,
    /// `f(y) + d²(x,y)/(2τ)`
    pub moreau_value: f64,
    /// `d(x, y)`
    pub displacement: f64,
    /// How far the best probe undercut `moreau_value`, clamped at 0.
    pub certificate: f64,
    /// Other candidates whose Moreau value is within the refine tolerance.
    pub alternatives: Vec<Point>,
}

pub(crate) fn moreau(space: &Space, f: &Objective, x: &Point, tau: f64, y: &Point) -> f64 {
    let d = space.dist(x, y);
    f.eval(space, y) + d * d / (2.0 * tau)
}

/// Radius of a ball around `x` guaranteed to contain every minimizer.
///
/// `d²(x,y)/(2τ) ≤ f(x) − f(y) ≤ L d(x,y)` bounds it by `2τL` whenever `L`
/// holds between `x` and `y`; comparing with the candidate `p` bounds it by
/// `d(x,p)` unconditionally.
pub(crate) fn search_radius(space: &Space, f: &Objective, x: &Point, tau: f64) -> f64 {
    let to_p = space.dist(x, &f.minimizer());
    let lipschitz_holds = f.valid_radius().is_none_or(|r| to_p <= r);
    if lipschitz_holds {
        to_p.min(2.0 * tau * f.l())
    } else {
        to_p
    }
}

/// Minimizes the Moreau objective at `x` and certifies the answer against
/// random probes in the search ball and in the whole space.
pub fn prox(space: &Space, f: &Objective, x: &Point, config: &ProxConfig) -> Result<ProxResult> {
    space.check_point(x)?;
    config.validate(f)?;
    let tau = config.tau;
    let radius = search_radius(space, f, x, tau);
    let candidates = match space {
        Space::Graph(_) => graph::candidates(space, f, x, tau, radius),
        Space::HalfPlane(h) => plane::candidates(h, space, f, x, tau, radius, config.grid_step),
    };

    let mut best = (*x, moreau(space, f, x, tau, x));
    for &(p, v) in &candidates {
        if v < best.1 || (v == best.1 && p.encoding_cmp(&best.0).is_lt()) {
            best = (p, v);
        }
    }
    let (y, value) = best;
    let refine_tol = config
        .refine_tol
        .unwrap_or(1e-8 * (1.0 + f.eval(space, x).abs()));

    let mut alternatives: Vec<Point> = Vec::new();
    for &(p, v) in &candidates {
        if p != y && v <= value + refine_tol && !alternatives.contains(&p) {
            alternatives.push(p);
        }
    }
    alternatives.sort_by(|a, b| a.encoding_cmp(b));

    let certificate = certify(space, f, x, tau, radius, value, config);
    let displacement = space.dist(x, &y);
    let result = ProxResult {
        x: *x,
        y,
        moreau_value: value,
        displacement,
        certificate,
        alternatives,
    };
    if certificate > refine_tol {
        return Err(Error::Solver {
            certificate,
            tolerance: refine_tol,
            best: Box::new(result),
        });
    }
    Ok(result)
}

fn certify(
    space: &Space,
    f: &Objective,
    x: &Point,
    tau: f64,
    radius: f64,
    value: f64,
    config: &ProxConfig,
) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut probes = vec![*x, f.minimizer()];
    probes.extend(f.anchors());
    if let Space::Graph(g) = space {
        probes.extend((0..g.vertex_count()).map(Point::Vertex));
    }
    let near = Region::Ball { center: *x, radius };
    for i in 0..config.certificate_samples {
        let region = if i % 10 == 9 { Region::Whole } else { near };
        probes.push(space.random_point(&mut rng, region));
    }
    probes
        .iter()
        .map(|z| value - moreau(space, f, x, tau, z))
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::gromov_product;
    use crate::spaces::{build_half_plane, build_path, build_random_tree, build_tripod};

    fn offset(p: Point) -> f64 {
        match p {
            Point::Vertex(0) => 0.0,
            Point::Vertex(1) => 10.0,
            Point::Edge { offset, .. } => offset,
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn distance_prox_moves_tau_toward_p() {
        let path = build_path(&[10.0]).unwrap();
        let s = path.space();
        let f = Objective::distance(s, Point::Vertex(0), 1.0).unwrap();
        let x = path.graph().locate(0, 3.0);
        let r = prox(s, &f, &x, &ProxConfig::new(1.0)).unwrap();
        assert!((offset(r.y) - 2.0).abs() < 1e-9);
        assert!((r.displacement - 1.0).abs() < 1e-9);
        for tau in [3.0, 5.0, 100.0] {
            let r = prox(s, &f, &x, &ProxConfig::new(tau)).unwrap();
            assert_eq!(r.y, Point::Vertex(0));
        }
    }

    #[test]
    fn squared_distance_prox_matches_closed_form() {
        let path = build_path(&[10.0]).unwrap();
        let s = path.space();
        let f = Objective::squared_distance(s, Point::Vertex(0), 1.0, 10.0).unwrap();
        for (t, tau) in [(3.0, 2.0), (7.5, 0.3), (9.0, 4.0)] {
            let x = path.graph().locate(0, t);
            let r = prox(s, &f, &x, &ProxConfig::new(tau)).unwrap();
            assert!((offset(r.y) - t / (1.0 + tau)).abs() < 1e-6, "{t} {tau}");
            assert!(r.moreau_value <= f.value(s, &x).unwrap());
        }
    }

    #[test]
    fn tree_prox_lies_on_the_geodesic_to_p() {
        let tree = build_random_tree(12, (0.5, 3.0), 4).unwrap();
        let s = tree.space();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for i in 0..20 {
            let p = s.random_point(&mut rng, Region::Whole);
            let x = s.random_point(&mut rng, Region::Whole);
            let f = Objective::distance(s, p, 1.0).unwrap();
            let r = prox(s, &f, &x, &ProxConfig::new(0.3 + i as f64 * 0.2)).unwrap();
            assert!(gromov_product(s, &r.y, &x, &p).unwrap() <= 1e-9);
        }
    }

    #[test]
    fn tripod_prox_crosses_the_branch() {
        let t = build_tripod([2.0, 3.0, 4.0]).unwrap();
        let s = t.space();
        let p = t.graph().point_on(0, 1, 1.5).unwrap();
        let f = Objective::distance(s, p, 1.0).unwrap();
        let x = Point::Vertex(3);
        let r = prox(s, &f, &x, &ProxConfig::new(4.5)).unwrap();
        // 4 to the center, then 0.5 further along arm 1
        let want = t.graph().point_on(0, 1, 0.5).unwrap();
        assert!(s.distance(&r.y, &want).unwrap() < 1e-9, "{:?}", r.y);
    }

    #[test]
    fn half_plane_distance_prox_moves_along_the_geodesic() {
        let h = build_half_plane();
        let p = Point::plane(0.0, 1.0);
        let f = Objective::distance(&h, p, 1.0).unwrap();
        let x = Point::plane(2.0, 1.5);
        let r = prox(&h, &f, &x, &ProxConfig::new(0.5)).unwrap();
        let d = h.distance(&x, &p).unwrap();
        assert!((r.displacement - 0.5).abs() < 1e-5, "{}", r.displacement);
        assert!((h.distance(&r.y, &p).unwrap() - (d - 0.5)).abs() < 1e-5);
    }

    #[test]
    fn half_plane_sqdist_prox_contracts_by_one_plus_k_tau() {
        // along a geodesic through p the prox of (K/2)d² is exact in 1D
        let h = build_half_plane();
        let p = Point::plane(0.0, 1.0);
        let f = Objective::squared_distance(&h, p, 1.0, 5.0).unwrap();
        let x = Point::plane(0.0, 3f64.exp());
        let r = prox(&h, &f, &x, &ProxConfig::new(2.0)).unwrap();
        assert!((h.distance(&r.y, &p).unwrap() - 1.0).abs() < 1e-5);
    }

    #[test]
    fn rejects_bad_configs() {
        let path = build_path(&[10.0]).unwrap();
        let s = path.space();
        let f = Objective::distance(s, Point::Vertex(0), 1.0).unwrap();
        assert!(prox(s, &f, &Point::Vertex(1), &ProxConfig::new(0.0)).is_err());
        let mut c = ProxConfig::new(1.0);
        c.grid_step = Some(2.0);
        assert!(prox(s, &f, &Point::Vertex(1), &c).is_err());
        assert!(prox(s, &f, &Point::plane(0.0, 1.0), &ProxConfig::new(1.0)).is_err());
    }
}
