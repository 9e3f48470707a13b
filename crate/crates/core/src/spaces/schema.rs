//! JSON descriptors for spaces and points.
//!
//! ```json
//! {"format": 1, "type": "graph", "vertices": [0, 1, 2], "edges": [[0, 1, 2.0], [1, 2, 0.5]]}
//! {"format": 1, "type": "halfplane"}
//! ```
//!
//! Points are `{"vertex": 3}`, `{"edge": [u, v], "offset": x}` (offset measured
//! from `u`) or `{"u": 0.0, "v": 1.0}`.

use serde::{Deserialize, Serialize};

use super::{GraphSpace, HalfPlane, Space};
use crate::error::{Error, Result};
use crate::metric::Point;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpaceFile {
    #[serde(default = "default_format")]
    pub format: u32,
    #[serde(flatten)]
    pub space: SpaceDescriptor,
}

fn default_format() -> u32 {
    FORMAT_VERSION
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum SpaceDescriptor {
    Graph {
        vertices: Vec<usize>,
        edges: Vec<(usize, usize, f64)>,
    },
    Halfplane {},
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PointDescriptor {
    Vertex { vertex: usize },
    Edge { edge: (usize, usize), offset: f64 },
    Plane { u: f64, v: f64 },
}

impl SpaceFile {
    pub fn from_json(text: &str) -> Result<Self> {
        let file: SpaceFile =
            serde_json::from_str(text).map_err(|e| Error::Descriptor(e.to_string()))?;
        if file.format != FORMAT_VERSION {
            return Err(Error::Descriptor(format!(
                "unsupported format version {}",
                file.format
            )));
        }
        Ok(file)
    }

    pub fn build(&self) -> Result<Space> {
        self.space.build()
    }
}

impl SpaceDescriptor {
    pub fn build(&self) -> Result<Space> {
        match self {
            SpaceDescriptor::Halfplane {} => Ok(Space::HalfPlane(HalfPlane::new())),
            SpaceDescriptor::Graph { vertices, edges } => {
                let n = vertices.len();
                let mut seen = vec![false; n];
                for &v in vertices {
                    if v >= n || std::mem::replace(&mut seen[v], true) {
                        return Err(Error::Descriptor(format!(
                            "vertex ids must be exactly 0..{n}; found {v}"
                        )));
                    }
                }
                Ok(Space::Graph(GraphSpace::new(n, edges)?))
            }
        }
    }

    pub fn describe(space: &Space) -> Self {
        match space {
            Space::HalfPlane(_) => SpaceDescriptor::Halfplane {},
            Space::Graph(g) => SpaceDescriptor::Graph {
                vertices: (0..g.vertex_count()).collect(),
                edges: g.edges().iter().map(|e| (e.u, e.v, e.weight)).collect(),
            },
        }
    }
}

impl Space {
    /// Resolves a descriptor into a canonical point of this space.
    pub fn resolve(&self, d: &PointDescriptor) -> Result<Point> {
        let p = match (self, *d) {
            (Space::Graph(_), PointDescriptor::Vertex { vertex }) => Point::Vertex(vertex),
            (
                Space::Graph(g),
                PointDescriptor::Edge {
                    edge: (a, b),
                    offset,
                },
            ) => g.point_on(a, b, offset)?,
            (Space::HalfPlane(_), PointDescriptor::Plane { u, v }) => Point::Plane { u, v },
            (space, d) => {
                return Err(Error::ForeignPoint(format!(
                    "{d:?} does not describe a point of a {} space",
                    space.kind()
                )))
            }
        };
        self.check_point(&p)?;
        Ok(p)
    }

    pub fn describe(&self, p: &Point) -> PointDescriptor {
        match (self, *p) {
            (_, Point::Vertex(vertex)) => PointDescriptor::Vertex { vertex },
            (Space::Graph(g), Point::Edge { edge, offset }) => {
                let e = g.edge(edge);
                PointDescriptor::Edge {
                    edge: (e.u, e.v),
                    offset,
                }
            }
            (_, Point::Plane { u, v }) => PointDescriptor::Plane { u, v },
            (Space::HalfPlane(_), Point::Edge { .. }) => {
                unreachable!("edge points never belong to the half-plane")
            }
        }
    }
}
