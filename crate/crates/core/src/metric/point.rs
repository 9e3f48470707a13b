use std::cmp::Ordering;

/// A location in a host space.
///
/// Graph points are either a vertex or an interior point of an edge, given by
/// the edge index and the offset from the edge's lower-numbered endpoint.
/// Edge points with offset 0 or the full edge length never occur: graph
/// spaces canonicalize them to the corresponding vertex.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Point {
    Vertex(usize),
    Edge { edge: usize, offset: f64 },
    Plane { u: f64, v: f64 },
}

impl Point {
    pub fn plane(u: f64, v: f64) -> Self {
        Point::Plane { u, v }
    }

    pub fn is_plane(&self) -> bool {
        matches!(self, Point::Plane { .. })
    }

    /// Total order used for deterministic tie-breaking.
    pub fn encoding_cmp(&self, other: &Point) -> Ordering {
        self.encoding()
            .partial_cmp(&other.encoding())
            .unwrap_or(Ordering::Equal)
    }

    fn encoding(&self) -> (u8, f64, f64) {
        match *self {
            Point::Vertex(i) => (0, i as f64, 0.0),
            Point::Edge { edge, offset } => (1, edge as f64, offset),
            Point::Plane { u, v } => (2, u, v),
        }
    }
}

impl std::fmt::Display for Point {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Point::Vertex(i) => write!(f, "v{i}"),
            Point::Edge { edge, offset } => write!(f, "e{edge}@{offset}"),
            Point::Plane { u, v } => write!(f, "({u}, {v})"),
        }
    }
}
