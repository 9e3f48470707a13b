use std::collections::HashMap;

use rand::Rng;

use crate::error::{Error, Result};
use crate::metric::geodesic::{edge_point, Leg};
use crate::metric::{GeodesicPath, Point};
use crate::tol;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub weight: f64,
}

/// A finite connected weighted graph viewed as a metric graph: every edge is
/// an isometric copy of a segment, and points may sit anywhere on an edge.
#[derive(Debug, Clone)]
pub struct GraphSpace {
    n: usize,
    edges: Vec<Edge>,
    /// `(neighbor, edge index)`, sorted by neighbor.
    adjacency: Vec<Vec<(usize, usize)>>,
    index: HashMap<(usize, usize), usize>,
    dist: Vec<f64>,
}

impl GraphSpace {
    /// Builds the metric graph on vertices `0..n`.
    ///
    /// Edges are undirected; `(v, u, w)` is stored as `(u, v, w)` with `u < v`.
    /// Rejects self-loops, parallel edges, non-positive weights, disconnected
    /// graphs and edges that are longer than the shortest path between their
    /// endpoints.
    pub fn new(n: usize, edges: &[(usize, usize, f64)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSpace("graph has no vertices".into()));
        }
        let mut stored = Vec::with_capacity(edges.len());
        let mut index = HashMap::new();
        for &(a, b, w) in edges {
            if a >= n || b >= n {
                return Err(Error::InvalidSpace(format!(
                    "edge ({a}, {b}) references a vertex outside 0..{n}"
                )));
            }
            if a == b {
                return Err(Error::InvalidSpace(format!("self-loop at vertex {a}")));
            }
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::InvalidSpace(format!(
                    "edge ({a}, {b}) has non-positive weight {w}"
                )));
            }
            let (u, v) = if a < b { (a, b) } else { (b, a) };
            if index.insert((u, v), stored.len()).is_some() {
                return Err(Error::InvalidSpace(format!("parallel edge ({u}, {v})")));
            }
            stored.push(Edge { u, v, weight: w });
        }

        let mut adjacency = vec![Vec::new(); n];
        for (i, e) in stored.iter().enumerate() {
            adjacency[e.u].push((e.v, i));
            adjacency[e.v].push((e.u, i));
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }

        let dist = all_pairs(n, &stored);
        if dist.iter().any(|d| d.is_infinite()) {
            return Err(Error::InvalidSpace("graph is disconnected".into()));
        }
        for e in &stored {
            let d = dist[e.u * n + e.v];
            if d < e.weight - tol::noise(e.weight) {
                return Err(Error::InvalidSpace(format!(
                    "edge ({}, {}) of length {} is shortcut by a path of length {}",
                    e.u, e.v, e.weight, d
                )));
            }
        }

        Ok(Self {
            n,
            edges: stored,
            adjacency,
            index,
            dist,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, i: usize) -> &Edge {
        &self.edges[i]
    }

    pub fn edge_between(&self, a: usize, b: usize) -> Option<usize> {
        let key = if a < b { (a, b) } else { (b, a) };
        self.index.get(&key).copied()
    }

    pub fn neighbors(&self, v: usize) -> &[(usize, usize)] {
        &self.adjacency[v]
    }

    pub fn vertex_distance(&self, a: usize, b: usize) -> f64 {
        self.dist[a * self.n + b]
    }

    pub fn is_acyclic(&self) -> bool {
        self.edges.len() + 1 == self.n
    }

    /// Largest vertex-to-vertex distance.
    pub fn vertex_diameter(&self) -> f64 {
        self.dist.iter().copied().fold(0.0, f64::max)
    }

    /// An upper bound on the diameter of the metric graph, edge points included.
    pub fn diameter_bound(&self) -> f64 {
        let w = self.edges.iter().map(|e| e.weight).fold(0.0, f64::max);
        self.vertex_diameter() + w
    }

    /// The point on edge `(a, b)` at distance `offset` from `a`.
    pub fn point_on(&self, a: usize, b: usize, offset: f64) -> Result<Point> {
        let i = self
            .edge_between(a, b)
            .ok_or_else(|| Error::InvalidPoint(format!("no edge between {a} and {b}")))?;
        let e = self.edges[i];
        let slack = tol::noise(e.weight);
        if !(offset >= -slack && offset <= e.weight + slack) {
            return Err(Error::OutOfRange {
                what: "edge offset",
                value: offset,
                lo: 0.0,
                hi: e.weight,
            });
        }
        let from_u = if a == e.u { offset } else { e.weight - offset };
        Ok(self.locate(i, from_u))
    }

    /// Canonical point on edge `i` at `offset` from its lower endpoint.
    pub fn locate(&self, i: usize, offset: f64) -> Point {
        let e = self.edges[i];
        edge_point(i, e.u, e.v, e.weight, offset.clamp(0.0, e.weight))
    }

    pub fn check_point(&self, p: &Point) -> Result<()> {
        match *p {
            Point::Vertex(i) if i < self.n => Ok(()),
            Point::Vertex(i) => Err(Error::InvalidPoint(format!(
                "vertex {i} outside 0..{}",
                self.n
            ))),
            Point::Edge { edge, offset } => {
                let e = self.edges.get(edge).ok_or_else(|| {
                    Error::InvalidPoint(format!("edge index {edge} out of range"))
                })?;
                if offset >= 0.0 && offset <= e.weight {
                    Ok(())
                } else {
                    Err(Error::OutOfRange {
                        what: "edge offset",
                        value: offset,
                        lo: 0.0,
                        hi: e.weight,
                    })
                }
            }
            Point::Plane { .. } => Err(Error::ForeignPoint(format!(
                "half-plane point {p} used in a graph space"
            ))),
        }
    }

    /// The (at most two) vertices a point can leave through, with the cost of
    /// reaching each. Vertices repeat their single anchor.
    pub(crate) fn anchors(&self, p: &Point) -> [(usize, f64); 2] {
        match *p {
            Point::Vertex(i) => [(i, 0.0), (i, 0.0)],
            Point::Edge { edge, offset } => {
                let e = self.edges[edge];
                [(e.u, offset), (e.v, e.weight - offset)]
            }
            Point::Plane { .. } => unreachable!("checked by caller"),
        }
    }

    pub fn distance(&self, a: &Point, b: &Point) -> Result<f64> {
        self.check_point(a)?;
        self.check_point(b)?;
        Ok(self.distance_unchecked(a, b))
    }

    pub(crate) fn distance_unchecked(&self, a: &Point, b: &Point) -> f64 {
        let mut best = f64::INFINITY;
        if let (
            Point::Edge {
                edge: e1,
                offset: s1,
            },
            Point::Edge {
                edge: e2,
                offset: s2,
            },
        ) = (a, b)
        {
            if e1 == e2 {
                best = (s1 - s2).abs();
            }
        }
        for (x, cx) in self.anchors(a) {
            for (y, cy) in self.anchors(b) {
                best = best.min(cx + self.dist[x * self.n + y] + cy);
            }
        }
        best
    }

    /// Distance from `q` to the point at `offset` on edge `i`, as the minimum
    /// of the affine pieces. Used by the per-edge solvers.
    pub(crate) fn distance_along(&self, q: &Point, i: usize, offset: f64) -> f64 {
        let e = self.edges[i];
        if let Point::Edge { edge, offset: sq } = *q {
            if edge == i {
                return (offset - sq).abs();
            }
        }
        let [(a0, c0), (a1, c1)] = self.anchors(q);
        let to_u = (c0 + self.dist[a0 * self.n + e.u]).min(c1 + self.dist[a1 * self.n + e.u]);
        let to_v = (c0 + self.dist[a0 * self.n + e.v]).min(c1 + self.dist[a1 * self.n + e.v]);
        (to_u + offset).min(to_v + e.weight - offset)
    }

    /// Offsets on edge `i` where the distance to `q` changes slope.
    pub(crate) fn kink_on_edge(&self, q: &Point, i: usize) -> Option<f64> {
        let e = self.edges[i];
        if let Point::Edge { edge, offset } = *q {
            if edge == i {
                return Some(offset);
            }
        }
        let to_u = self.distance_along(q, i, 0.0);
        let to_v = self.distance_along(q, i, e.weight);
        let s = (to_v + e.weight - to_u) / 2.0;
        (s > 0.0 && s < e.weight).then_some(s)
    }

    /// Lexicographically smallest shortest vertex path from `a` to `b`.
    pub fn vertex_path(&self, a: usize, b: usize) -> Vec<usize> {
        let mut path = vec![a];
        let mut cur = a;
        while cur != b {
            let target = self.dist[cur * self.n + b];
            let slack = tol::noise(target);
            let next = self.adjacency[cur]
                .iter()
                .find(|&&(w, e)| self.edges[e].weight + self.dist[w * self.n + b] <= target + slack)
                .map(|&(w, _)| w)
                .expect("shortest-path table is consistent with adjacency");
            path.push(next);
            cur = next;
        }
        path
    }

    pub fn geodesic(&self, a: &Point, b: &Point) -> Result<GeodesicPath> {
        self.check_point(a)?;
        self.check_point(b)?;
        if a == b {
            return Ok(GeodesicPath::constant(*a));
        }

        // (length, vertex sequence, legs)
        let mut best: Option<(f64, Vec<usize>, Vec<Leg>)> = None;
        let mut consider = |len: f64, seq: Vec<usize>, legs: Vec<Leg>| {
            let better = match &best {
                None => true,
                Some((bl, bseq, _)) => {
                    let eps = tol::noise(*bl);
                    len < bl - eps || (len <= bl + eps && seq < *bseq)
                }
            };
            if better {
                best = Some((len, seq, legs));
            }
        };

        if let (
            Point::Edge {
                edge: e1,
                offset: s1,
            },
            Point::Edge {
                edge: e2,
                offset: s2,
            },
        ) = (*a, *b)
        {
            if e1 == e2 {
                let e = self.edges[e1];
                let leg = Leg {
                    edge: e1,
                    u: e.u,
                    v: e.v,
                    weight: e.weight,
                    from: s1,
                    to: s2,
                };
                consider((s1 - s2).abs(), Vec::new(), vec![leg]);
            }
        }

        let anchors_a = self.anchors(a);
        let anchors_b = self.anchors(b);
        for (ia, &(x, cx)) in anchors_a.iter().enumerate() {
            if ia == 1 && matches!(a, Point::Vertex(_)) {
                continue;
            }
            for (ib, &(y, cy)) in anchors_b.iter().enumerate() {
                if ib == 1 && matches!(b, Point::Vertex(_)) {
                    continue;
                }
                let len = cx + self.dist[x * self.n + y] + cy;
                let seq = self.vertex_path(x, y);
                let mut legs = Vec::with_capacity(seq.len() + 1);
                if let Point::Edge { edge, offset } = *a {
                    legs.push(self.partial_leg(edge, offset, x));
                }
                for w in seq.windows(2) {
                    legs.push(self.full_leg(w[0], w[1]));
                }
                if let Point::Edge { edge, offset } = *b {
                    let mut leg = self.partial_leg(edge, offset, y);
                    std::mem::swap(&mut leg.from, &mut leg.to);
                    legs.push(leg);
                }
                consider(len, seq, legs);
            }
        }

        let (_, _, legs) = best.expect("at least one route exists");
        Ok(GeodesicPath::graph(*a, *b, legs))
    }

    fn partial_leg(&self, edge: usize, offset: f64, toward: usize) -> Leg {
        let e = self.edges[edge];
        let to = if toward == e.u { 0.0 } else { e.weight };
        Leg {
            edge,
            u: e.u,
            v: e.v,
            weight: e.weight,
            from: offset,
            to,
        }
    }

    fn full_leg(&self, from: usize, to: usize) -> Leg {
        let i = self
            .edge_between(from, to)
            .expect("consecutive path vertices");
        let e = self.edges[i];
        let (s, t) = if from == e.u {
            (0.0, e.weight)
        } else {
            (e.weight, 0.0)
        };
        Leg {
            edge: i,
            u: e.u,
            v: e.v,
            weight: e.weight,
            from: s,
            to: t,
        }
    }

    /// Largest distance from `p` to any point of the metric graph.
    pub fn eccentricity(&self, p: &Point) -> f64 {
        let mut best: f64 = 0.0;
        for (i, e) in self.edges.iter().enumerate() {
            best = best.max(self.distance_along(p, i, 0.0));
            best = best.max(self.distance_along(p, i, e.weight));
            let to_u = self.distance_along(p, i, 0.0);
            let to_v = self.distance_along(p, i, e.weight);
            let mut candidates = vec![(to_v + e.weight - to_u) / 2.0];
            if let Point::Edge { edge, offset } = *p {
                if edge == i {
                    // far side of p on its own edge: only the endpoints matter
                    candidates.clear();
                    candidates.push(offset);
                }
            }
            for s in candidates {
                if s > 0.0 && s < e.weight {
                    best = best.max(self.distance_along(p, i, s));
                }
            }
        }
        best
    }

    /// A point drawn with probability proportional to edge length.
    pub fn random_point<R: Rng + ?Sized>(&self, rng: &mut R) -> Point {
        if self.edges.is_empty() {
            return Point::Vertex(0);
        }
        let total: f64 = self.edges.iter().map(|e| e.weight).sum();
        let mut pick = rng.gen::<f64>() * total;
        for (i, e) in self.edges.iter().enumerate() {
            if pick < e.weight {
                return self.locate(i, rng.gen::<f64>() * e.weight);
            }
            pick -= e.weight;
        }
        let last = self.edges.len() - 1;
        self.locate(last, rng.gen::<f64>() * self.edges[last].weight)
    }
}

fn all_pairs(n: usize, edges: &[Edge]) -> Vec<f64> {
    let mut d = vec![f64::INFINITY; n * n];
    for i in 0..n {
        d[i * n + i] = 0.0;
    }
    for e in edges {
        let w = d[e.u * n + e.v].min(e.weight);
        d[e.u * n + e.v] = w;
        d[e.v * n + e.u] = w;
    }
    for k in 0..n {
        for i in 0..n {
            let dik = d[i * n + k];
            if dik.is_infinite() {
                continue;
            }
            for j in 0..n {
                let via = dik + d[k * n + j];
                if via < d[i * n + j] {
                    d[i * n + j] = via;
                }
            }
        }
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle4() -> GraphSpace {
        GraphSpace::new(4, &[(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (3, 0, 1.0)]).unwrap()
    }

    #[test]
    fn rejects_bad_graphs() {
        assert!(GraphSpace::new(2, &[(0, 0, 1.0)]).is_err());
        assert!(GraphSpace::new(2, &[(0, 1, 0.0)]).is_err());
        assert!(GraphSpace::new(3, &[(0, 1, 1.0)]).is_err());
        assert!(GraphSpace::new(2, &[(0, 1, 1.0), (1, 0, 2.0)]).is_err());
        // edge (0,2) of length 5 is shortcut by 0-1-2 of length 2
        assert!(GraphSpace::new(3, &[(0, 1, 1.0), (1, 2, 1.0), (0, 2, 5.0)]).is_err());
    }

    #[test]
    fn edge_points_canonicalize_to_vertices() {
        let g = cycle4();
        assert_eq!(g.point_on(0, 1, 0.0).unwrap(), Point::Vertex(0));
        assert_eq!(g.point_on(0, 1, 1.0).unwrap(), Point::Vertex(1));
        assert_eq!(
            g.point_on(1, 0, 0.25).unwrap(),
            g.point_on(0, 1, 0.75).unwrap()
        );
        assert!(g.point_on(0, 1, 1.5).is_err());
        assert!(g.point_on(0, 2, 0.5).is_err());
    }

    #[test]
    fn cycle_distances_go_the_short_way() {
        let g = cycle4();
        let a = g.point_on(0, 1, 0.5).unwrap();
        let b = g.point_on(2, 3, 0.5).unwrap();
        assert!((g.distance(&a, &b).unwrap() - 2.0).abs() < 1e-12);
        let c = g.point_on(1, 2, 0.25).unwrap();
        assert!((g.distance(&a, &c).unwrap() - 0.75).abs() < 1e-12);
    }

    #[test]
    fn vertex_path_prefers_smaller_labels() {
        let g = cycle4();
        // both 0-1-2 and 0-3-2 are shortest
        assert_eq!(g.vertex_path(0, 2), vec![0, 1, 2]);
        assert_eq!(g.vertex_path(2, 0), vec![2, 1, 0]);
    }

    #[test]
    fn eccentricity_includes_edge_interiors() {
        let g = cycle4();
        // antipode of vertex 0 is vertex 2; the cycle has circumference 4
        assert!((g.eccentricity(&Point::Vertex(0)) - 2.0).abs() < 1e-12);
        let tri = GraphSpace::new(3, &[(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)]).unwrap();
        // midpoint of the opposite edge is 1.5 away
        assert!((tri.eccentricity(&Point::Vertex(0)) - 1.5).abs() < 1e-12);
    }
}
