use super::Point;

/// A constant-speed minimal geodesic, parametrized over `[0, 1]`.
#[derive(Debug, Clone)]
pub struct GeodesicPath {
    start: Point,
    end: Point,
    length: f64,
    shape: Shape,
}

/// Portion of a graph geodesic that runs along a single edge.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Leg {
    pub edge: usize,
    pub u: usize,
    pub v: usize,
    pub weight: f64,
    /// Offsets from `u` where the leg starts and ends.
    pub from: f64,
    pub to: f64,
}

impl Leg {
    fn len(&self) -> f64 {
        (self.to - self.from).abs()
    }

    fn at(&self, s: f64) -> Point {
        let offset = if self.to >= self.from {
            self.from + s
        } else {
            self.from - s
        };
        edge_point(self.edge, self.u, self.v, self.weight, offset)
    }
}

pub(crate) fn edge_point(edge: usize, u: usize, v: usize, weight: f64, offset: f64) -> Point {
    let eps = 1e-12 * weight.max(1.0);
    if offset <= eps {
        Point::Vertex(u)
    } else if offset >= weight - eps {
        Point::Vertex(v)
    } else {
        Point::Edge { edge, offset }
    }
}

#[derive(Debug, Clone)]
enum Shape {
    Constant,
    Graph {
        legs: Vec<Leg>,
    },
    /// Vertical half-plane line `u = const`, with `log_ratio = ln(v_end / v_start)`.
    Vertical {
        u: f64,
        v0: f64,
        log_ratio: f64,
    },
    /// Arc of the circle centred at `(center, 0)`; `g0`, `g1` are `ln tan(θ/2)`
    /// at the endpoints, which is an arclength coordinate on the arc.
    Arc {
        center: f64,
        radius: f64,
        g0: f64,
        g1: f64,
    },
}

impl GeodesicPath {
    pub(crate) fn constant(p: Point) -> Self {
        Self {
            start: p,
            end: p,
            length: 0.0,
            shape: Shape::Constant,
        }
    }

    pub(crate) fn graph(start: Point, end: Point, legs: Vec<Leg>) -> Self {
        let legs: Vec<Leg> = legs.into_iter().filter(|l| l.len() > 0.0).collect();
        let length = legs.iter().map(Leg::len).sum();
        if legs.is_empty() {
            return Self::constant(start);
        }
        Self {
            start,
            end,
            length,
            shape: Shape::Graph { legs },
        }
    }

    pub(crate) fn vertical(start: Point, end: Point, u: f64, v0: f64, v1: f64) -> Self {
        let log_ratio = (v1 / v0).ln();
        Self {
            start,
            end,
            length: log_ratio.abs(),
            shape: Shape::Vertical { u, v0, log_ratio },
        }
    }

    pub(crate) fn arc(
        start: Point,
        end: Point,
        center: f64,
        radius: f64,
        g0: f64,
        g1: f64,
    ) -> Self {
        Self {
            start,
            end,
            length: (g1 - g0).abs(),
            shape: Shape::Arc {
                center,
                radius,
                g0,
                g1,
            },
        }
    }

    pub fn start(&self) -> Point {
        self.start
    }

    pub fn end(&self) -> Point {
        self.end
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    /// Point at parameter `t ∈ [0, 1]`, at distance `t · length` from the start.
    pub fn sample(&self, t: f64) -> Point {
        if t <= 0.0 {
            return self.start;
        }
        if t >= 1.0 {
            return self.end;
        }
        match &self.shape {
            Shape::Constant => self.start,
            Shape::Graph { legs } => {
                let mut remaining = t * self.length;
                for leg in legs {
                    let l = leg.len();
                    if remaining <= l {
                        return leg.at(remaining);
                    }
                    remaining -= l;
                }
                self.end
            }
            Shape::Vertical { u, v0, log_ratio } => Point::Plane {
                u: *u,
                v: v0 * (t * log_ratio).exp(),
            },
            Shape::Arc {
                center,
                radius,
                g0,
                g1,
            } => {
                let g = g0 + t * (g1 - g0);
                let theta = 2.0 * g.exp().atan();
                Point::Plane {
                    u: center + radius * theta.cos(),
                    v: radius * theta.sin(),
                }
            }
        }
    }

    /// Point at distance `r` from the start, clamped to the path.
    pub fn at_distance(&self, r: f64) -> Point {
        if self.length <= 0.0 {
            return self.start;
        }
        self.sample(r / self.length)
    }
}
