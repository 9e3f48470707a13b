//! Concrete proper geodesic spaces: metric graphs (trees, perturbed trees,
//! general weighted graphs) and the hyperbolic half-plane.

mod graph;
mod halfplane;
mod perturbed;
pub mod schema;
mod tree;

use rand::{Rng, SeedableRng};

pub use graph::{Edge, GraphSpace};
pub use halfplane::{HalfPlane, HALF_PLANE_DELTA};
pub use perturbed::{build_perturbed_tree, Detour, PerturbedTreeSpace};
pub use tree::{build_path, build_random_tree, build_tripod, TreeSpace};

use crate::error::Result;
use crate::metric::{GeodesicPath, Point};

/// Default sampling box `[u0, u1, v0, v1]` for the half-plane.
pub const DEFAULT_BOX: [f64; 4] = [-5.0, 5.0, 0.1, 5.0];

/// A proper geodesic metric space.
#[derive(Debug, Clone)]
pub enum Space {
    Graph(GraphSpace),
    HalfPlane(HalfPlane),
}

/// Where random points are drawn from.
#[derive(Debug, Clone, Copy)]
pub enum Region {
    /// The whole graph, or [`DEFAULT_BOX`] for the half-plane.
    Whole,
    /// Half-plane coordinate box `[u0, u1, v0, v1]`; whole space for graphs.
    Box([f64; 4]),
    Ball {
        center: Point,
        radius: f64,
    },
}

pub fn build_half_plane() -> Space {
    Space::HalfPlane(HalfPlane::new())
}

impl From<GraphSpace> for Space {
    fn from(g: GraphSpace) -> Self {
        Space::Graph(g)
    }
}

impl Space {
    pub fn distance(&self, a: &Point, b: &Point) -> Result<f64> {
        match self {
            Space::Graph(g) => g.distance(a, b),
            Space::HalfPlane(h) => h.distance(a, b),
        }
    }

    /// Distance for points already known to belong to the space.
    pub(crate) fn dist(&self, a: &Point, b: &Point) -> f64 {
        match self {
            Space::Graph(g) => g.distance_unchecked(a, b),
            Space::HalfPlane(h) => h.distance_unchecked(a, b),
        }
    }

    pub fn geodesic(&self, a: &Point, b: &Point) -> Result<GeodesicPath> {
        match self {
            Space::Graph(g) => g.geodesic(a, b),
            Space::HalfPlane(h) => h.geodesic(a, b),
        }
    }

    pub fn check_point(&self, p: &Point) -> Result<()> {
        match self {
            Space::Graph(g) => g.check_point(p),
            Space::HalfPlane(h) => h.check_point(p),
        }
    }

    pub fn as_graph(&self) -> Option<&GraphSpace> {
        match self {
            Space::Graph(g) => Some(g),
            Space::HalfPlane(_) => None,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Space::Graph(_) => "graph",
            Space::HalfPlane(_) => "halfplane",
        }
    }

    /// `n` points drawn from `region` with a ChaCha8 generator seeded by `seed`.
    pub fn sample_points(&self, n: usize, region: Region, seed: u64) -> Vec<Point> {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|_| self.random_point(&mut rng, region))
            .collect()
    }

    pub fn random_point<R: Rng + ?Sized>(&self, rng: &mut R, region: Region) -> Point {
        match (self, region) {
            (Space::Graph(g), Region::Ball { center, radius }) => {
                let z = g.random_point(rng);
                let d = g.distance_unchecked(&center, &z);
                if d <= radius {
                    z
                } else {
                    // pull the sample back inside along the geodesic to it
                    let r = radius * rng.gen::<f64>();
                    g.geodesic(&center, &z)
                        .map(|path| path.at_distance(r))
                        .unwrap_or(center)
                }
            }
            (Space::Graph(g), _) => g.random_point(rng),
            (Space::HalfPlane(h), Region::Whole) => h.random_in_box(rng, DEFAULT_BOX),
            (Space::HalfPlane(h), Region::Box(bx)) => h.random_in_box(rng, bx),
            (Space::HalfPlane(h), Region::Ball { center, radius }) => {
                h.random_in_ball(rng, &center, radius)
            }
        }
    }
}
