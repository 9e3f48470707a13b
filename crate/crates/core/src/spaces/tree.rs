use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{GraphSpace, Space};
use crate::error::{Error, Result};

/// A metric tree: a [`GraphSpace`] whose graph is acyclic.
#[derive(Debug, Clone)]
pub struct TreeSpace {
    space: Space,
}

impl TreeSpace {
    pub fn new(graph: GraphSpace) -> Result<Self> {
        if !graph.is_acyclic() {
            return Err(Error::InvalidSpace(format!(
                "{} vertices and {} edges do not form a tree",
                graph.vertex_count(),
                graph.edges().len()
            )));
        }
        Ok(Self {
            space: Space::Graph(graph),
        })
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn graph(&self) -> &GraphSpace {
        match &self.space {
            Space::Graph(g) => g,
            Space::HalfPlane(_) => unreachable!("trees are graph spaces"),
        }
    }

    pub fn into_space(self) -> Space {
        self.space
    }
}

/// Star with center `0` and leaves `1, 2, 3` at the given arm lengths.
pub fn build_tripod(arms: [f64; 3]) -> Result<TreeSpace> {
    if let Some(bad) = arms.iter().find(|&&a| !(a.is_finite() && a > 0.0)) {
        return Err(Error::InvalidArgument(format!(
            "arm length {bad} must be positive"
        )));
    }
    let edges = [(0, 1, arms[0]), (0, 2, arms[1]), (0, 3, arms[2])];
    TreeSpace::new(GraphSpace::new(4, &edges)?)
}

/// Path `0 - 1 - ... - k` with the given consecutive edge lengths.
pub fn build_path(lengths: &[f64]) -> Result<TreeSpace> {
    if lengths.is_empty() {
        return Err(Error::InvalidArgument(
            "path needs at least one edge".into(),
        ));
    }
    let edges: Vec<_> = lengths
        .iter()
        .enumerate()
        .map(|(i, &w)| (i, i + 1, w))
        .collect();
    TreeSpace::new(GraphSpace::new(lengths.len() + 1, &edges)?)
}

/// Uniform random recursive tree: vertex `i ≥ 1` hangs off a uniformly chosen
/// earlier vertex, with a weight uniform in `[lo, hi]`.
pub fn build_random_tree(n: usize, weight_range: (f64, f64), seed: u64) -> Result<TreeSpace> {
    let (lo, hi) = weight_range;
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "tree needs n >= 2, got {n}"
        )));
    }
    if !(lo > 0.0 && lo <= hi && hi.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "weight range [{lo}, {hi}] must satisfy 0 < lo <= hi"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges: Vec<_> = (1..n)
        .map(|i| {
            let parent = rng.gen_range(0..i);
            let w = if lo == hi { lo } else { rng.gen_range(lo..=hi) };
            (parent, i, w)
        })
        .collect();
    TreeSpace::new(GraphSpace::new(n, &edges)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::Point;

    #[test]
    fn tripod_shape() {
        let t = build_tripod([2.0, 3.0, 4.0]).unwrap();
        let g = t.graph();
        assert_eq!(g.vertex_count(), 4);
        assert_eq!(g.edges().len(), 3);
        assert_eq!(g.vertex_diameter(), 7.0);
        let d = t
            .space()
            .distance(&Point::Vertex(2), &Point::Vertex(3))
            .unwrap();
        assert_eq!(d, 7.0);
        assert!(build_tripod([1.0, 0.0, 1.0]).is_err());
    }

    #[test]
    fn unit_tripod_leaves_are_two_apart() {
        let t = build_tripod([1.0, 1.0, 1.0]).unwrap();
        for (a, b) in [(1, 2), (1, 3), (2, 3)] {
            assert_eq!(t.graph().vertex_distance(a, b), 2.0);
        }
    }

    #[test]
    fn random_tree_is_deterministic() {
        let a = build_random_tree(50, (0.5, 2.0), 7).unwrap();
        let b = build_random_tree(50, (0.5, 2.0), 7).unwrap();
        assert_eq!(a.graph().edges(), b.graph().edges());
        let c = build_random_tree(50, (0.5, 2.0), 8).unwrap();
        assert_ne!(a.graph().edges(), c.graph().edges());
    }

    #[test]
    fn two_vertex_tree_is_one_edge() {
        let t = build_random_tree(2, (1.0, 1.0), 0).unwrap();
        assert_eq!(t.graph().edges().len(), 1);
    }

    #[test]
    fn random_tree_rejects_bad_ranges() {
        assert!(build_random_tree(1, (1.0, 2.0), 0).is_err());
        assert!(build_random_tree(5, (0.0, 2.0), 0).is_err());
        assert!(build_random_tree(5, (3.0, 2.0), 0).is_err());
    }

    #[test]
    fn non_tree_rejected() {
        let g = GraphSpace::new(3, &[(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)]).unwrap();
        assert!(TreeSpace::new(g).is_err());
    }
}
