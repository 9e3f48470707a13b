use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{GraphSpace, Space, TreeSpace};
use crate::error::{Error, Result};

/// One detour: the tree segment `[a, b]` (of length `delta_build`, cut out of
/// a base edge) gets a parallel path `a - mid - b` of length `2 · delta_build`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Detour {
    /// The base-tree edge the segment was cut from, as `(u, v)` with `u < v`.
    pub base_edge: (usize, usize),
    /// Offset of `a` from `u` along the base edge.
    pub start: f64,
    pub a: usize,
    pub b: usize,
    pub mid: usize,
}

/// A tree with short parallel detours. Every point lies within
/// `delta_build` of the embedded tree, and tree distances are unchanged.
#[derive(Debug, Clone)]
pub struct PerturbedTreeSpace {
    tree: TreeSpace,
    space: Space,
    delta_build: f64,
    detours: Vec<Detour>,
}

impl PerturbedTreeSpace {
    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn graph(&self) -> &GraphSpace {
        self.space.as_graph().expect("graph space")
    }

    /// The embedded tree. It is the base tree with detour endpoints inserted
    /// as degree-2 vertices, so it is isometric to the base tree. Its vertex
    /// and edge indices are valid in [`Self::space`] as well.
    pub fn tree(&self) -> &TreeSpace {
        &self.tree
    }

    pub fn delta_build(&self) -> f64 {
        self.delta_build
    }

    pub fn declared_delta(&self) -> f64 {
        6.0 * self.delta_build
    }

    pub fn detours(&self) -> &[Detour] {
        &self.detours
    }
}

pub fn build_perturbed_tree(
    base: &TreeSpace,
    delta_build: f64,
    detour_count: usize,
    seed: u64,
) -> Result<PerturbedTreeSpace> {
    if !(delta_build.is_finite() && delta_build > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "delta_build must be positive, got {delta_build}"
        )));
    }
    if detour_count == 0 {
        return Err(Error::InvalidArgument(
            "detour_count must be at least 1".into(),
        ));
    }
    let g = base.graph();
    let mut eligible: Vec<usize> = (0..g.edges().len())
        .filter(|&i| g.edge(i).weight >= delta_build)
        .collect();
    if eligible.len() < detour_count {
        return Err(Error::InvalidArgument(format!(
            "only {} edges are at least {delta_build} long; {detour_count} detours requested",
            eligible.len()
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    eligible.shuffle(&mut rng);
    let mut chosen = eligible[..detour_count].to_vec();
    chosen.sort_unstable();

    let mut next_vertex = g.vertex_count();
    let mut tree_edges = Vec::new();
    let mut detours = Vec::new();
    let mut pieces_for = |i: usize, rng: &mut ChaCha8Rng| {
        let e = *g.edge(i);
        let start = rng.gen::<f64>() * (e.weight - delta_build);
        let end = start + delta_build;
        let eps = 1e-9 * e.weight;
        let mut pieces = Vec::new();
        let a = if start > eps {
            let a = next_vertex;
            next_vertex += 1;
            pieces.push((e.u, a, start));
            a
        } else {
            e.u
        };
        let b = if end < e.weight - eps {
            let b = next_vertex;
            next_vertex += 1;
            pieces.push((a, b, delta_build));
            pieces.push((b, e.v, e.weight - end));
            b
        } else {
            pieces.push((a, e.v, e.weight - start));
            e.v
        };
        (pieces, (e.u, e.v, start, a, b))
    };

    let mut pending = Vec::new();
    for (i, e) in g.edges().iter().enumerate() {
        if chosen.binary_search(&i).is_ok() {
            let (pieces, info) = pieces_for(i, &mut rng);
            tree_edges.extend(pieces);
            pending.push(info);
        } else {
            tree_edges.push((e.u, e.v, e.weight));
        }
    }
    let tree_vertices = next_vertex;
    let mut all_edges = tree_edges.clone();
    for (k, &(u, v, start, a, b)) in pending.iter().enumerate() {
        let mid = tree_vertices + k;
        all_edges.push((a, mid, delta_build));
        all_edges.push((mid, b, delta_build));
        detours.push(Detour {
            base_edge: (u, v),
            start,
            a,
            b,
            mid,
        });
    }

    let tree = TreeSpace::new(GraphSpace::new(tree_vertices, &tree_edges)?)?;
    let graph = GraphSpace::new(tree_vertices + pending.len(), &all_edges)
        .map_err(|e| Error::InvalidSpace(format!("perturbed construction failed: {e}")))?;
    Ok(PerturbedTreeSpace {
        tree,
        space: Space::Graph(graph),
        delta_build,
        detours,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::Point;
    use crate::spaces::build_tripod;

    #[test]
    fn tree_vertex_distances_are_preserved() {
        let base = build_tripod([2.0, 3.0, 4.0]).unwrap();
        let pt = build_perturbed_tree(&base, 0.1, 2, 3).unwrap();
        for a in 0..4 {
            for b in 0..4 {
                let want = base.graph().vertex_distance(a, b);
                let got = pt.graph().vertex_distance(a, b);
                assert!((want - got).abs() < 1e-12, "{a} {b}: {want} vs {got}");
            }
        }
        assert_eq!(pt.declared_delta(), 6.0 * 0.1);
    }

    #[test]
    fn midpoints_are_within_delta_build_of_the_tree() {
        let base = build_tripod([2.0, 3.0, 4.0]).unwrap();
        let pt = build_perturbed_tree(&base, 0.05, 3, 11).unwrap();
        for d in pt.detours() {
            let to_a = pt.graph().vertex_distance(d.mid, d.a);
            assert!((to_a - 0.05).abs() < 1e-12);
        }
    }

    #[test]
    fn same_seed_same_detours() {
        let base = build_tripod([2.0, 3.0, 4.0]).unwrap();
        let a = build_perturbed_tree(&base, 0.1, 1, 5).unwrap();
        let b = build_perturbed_tree(&base, 0.1, 1, 5).unwrap();
        assert_eq!(a.detours(), b.detours());
        assert_eq!(a.graph().edges(), b.graph().edges());
    }

    #[test]
    fn rejects_short_edges_and_bad_parameters() {
        let base = build_tripod([0.05, 3.0, 4.0]).unwrap();
        assert!(build_perturbed_tree(&base, 0.1, 3, 0).is_err());
        assert!(build_perturbed_tree(&base, 0.0, 1, 0).is_err());
        assert!(build_perturbed_tree(&base, 0.1, 0, 0).is_err());
    }

    #[test]
    fn embedded_tree_points_are_valid_in_the_perturbed_space() {
        let base = build_tripod([2.0, 3.0, 4.0]).unwrap();
        let pt = build_perturbed_tree(&base, 0.1, 1, 9).unwrap();
        let p = pt.tree().graph().locate(0, 0.7);
        let q = Point::Vertex(3);
        let dt = pt.tree().space().distance(&p, &q).unwrap();
        let dp = pt.space().distance(&p, &q).unwrap();
        assert!((dt - dp).abs() < 1e-12);
    }
}
