//! K-convex, L-Lipschitz objectives with a known minimizer, and empirical
//! audits of the declared constants.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};
use crate::metric::Point;
use crate::report::{CheckContext, Theorem, TheoremReport};
use crate::search::{golden_section, pattern_search, quadratic_piece_min};
use crate::spaces::schema::PointDescriptor;
use crate::spaces::{Region, Space};
use crate::tol;

/// Audit radius around the minimizer used on the half-plane when the
/// objective does not certify a ball of its own.
const DEFAULT_AUDIT_RADIUS: f64 = 5.0;

#[derive(Debug, Clone, PartialEq)]
enum Form {
    Constant(f64),
    Distance { p: Point, a: f64 },
    SqDistance { p: Point, k: f64 },
    Sum(Vec<Objective>),
}

/// A real function on a space together with its declared convexity modulus
/// `k`, Lipschitz constant `l` and minimizer.
#[derive(Debug, Clone, PartialEq)]
pub struct Objective {
    form: Form,
    k: f64,
    l: f64,
    minimizer: Point,
    min_value: f64,
    valid_radius: Option<f64>,
}

impl Objective {
    /// `a · d(p, ·)`: convex, `a`-Lipschitz, minimized at `p`.
    pub fn distance(space: &Space, p: Point, a: f64) -> Result<Self> {
        space.check_point(&p)?;
        positive("a", a)?;
        Ok(Self {
            form: Form::Distance { p, a },
            k: 0.0,
            l: a,
            minimizer: p,
            min_value: 0.0,
            valid_radius: None,
        })
    }

    /// `(k/2) · d²(p, ·)`, with Lipschitz constant `k·r` certified on `B(p, r)`.
    pub fn squared_distance(space: &Space, p: Point, k: f64, r: f64) -> Result<Self> {
        space.check_point(&p)?;
        positive("K", k)?;
        positive("R", r)?;
        Ok(Self {
            form: Form::SqDistance { p, k },
            k,
            l: k * r,
            minimizer: p,
            min_value: 0.0,
            valid_radius: Some(r),
        })
    }

    /// The constant `value`, reported as minimized at `at`, with Lipschitz
    /// constant `l > 0`.
    pub fn constant(space: &Space, value: f64, at: Point, l: f64) -> Result<Self> {
        space.check_point(&at)?;
        positive("L", l)?;
        Ok(Self {
            form: Form::Constant(value),
            k: 0.0,
            l,
            minimizer: at,
            min_value: value,
            valid_radius: None,
        })
    }

    /// Pointwise sum. The minimizer is located numerically and then audited
    /// against random samples.
    pub fn sum(space: &Space, f1: &Objective, f2: &Objective) -> Result<Self> {
        let form = Form::Sum(vec![f1.clone(), f2.clone()]);
        let mut out = Self {
            form,
            k: f1.k + f2.k,
            l: f1.l + f2.l,
            minimizer: f1.minimizer,
            min_value: 0.0,
            valid_radius: None,
        };
        let (p, v) = out.locate_minimizer(space)?;
        out.minimizer = p;
        out.min_value = v;

        let mut radius: Option<f64> = None;
        for term in [f1, f2] {
            if let Some(r) = term.valid_radius {
                let left = r - space.distance(&term.minimizer, &p)?;
                radius = Some(radius.map_or(left, |cur| cur.min(left)));
            }
        }
        if let Some(r) = radius {
            if r <= 0.0 {
                return Err(Error::Objective(
                    "minimizer of the sum lies outside a term's certified ball".into(),
                ));
            }
        }
        out.valid_radius = radius;

        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        let region = out.audit_region(space);
        let tol = tol::check(v);
        for _ in 0..200 {
            let z = space.random_point(&mut rng, region);
            let fz = out.eval(space, &z);
            if fz < v - tol {
                return Err(Error::Objective(format!(
                    "sum minimizer not located: f({z}) = {fz} < {v}"
                )));
            }
        }
        Ok(out)
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn l(&self) -> f64 {
        self.l
    }

    pub fn minimizer(&self) -> Point {
        self.minimizer
    }

    pub fn min_value(&self) -> f64 {
        self.min_value
    }

    pub fn valid_radius(&self) -> Option<f64> {
        self.valid_radius
    }

    /// Replaces the declared constants, e.g. to audit a wrong declaration.
    pub fn with_constants(mut self, k: f64, l: f64) -> Self {
        self.k = k;
        self.l = l;
        self
    }

    pub fn value(&self, space: &Space, x: &Point) -> Result<f64> {
        space.check_point(x)?;
        Ok(self.eval(space, x))
    }

    pub(crate) fn eval(&self, space: &Space, x: &Point) -> f64 {
        match &self.form {
            Form::Constant(c) => *c,
            Form::Distance { p, a } => a * space.dist(p, x),
            Form::SqDistance { p, k } => {
                let d = space.dist(p, x);
                0.5 * k * d * d
            }
            Form::Sum(terms) => terms.iter().map(|t| t.eval(space, x)).sum(),
        }
    }

    /// Points whose distance functions make up the objective.
    pub fn anchors(&self) -> Vec<Point> {
        let mut out = Vec::new();
        self.collect_anchors(&mut out);
        out
    }

    fn collect_anchors(&self, out: &mut Vec<Point>) {
        match &self.form {
            Form::Constant(_) => {}
            Form::Distance { p, .. } | Form::SqDistance { p, .. } => {
                if !out.contains(p) {
                    out.push(*p)
                }
            }
            Form::Sum(terms) => terms.iter().for_each(|t| t.collect_anchors(out)),
        }
    }

    /// Where audits draw their samples.
    pub fn audit_region(&self, space: &Space) -> Region {
        match (self.valid_radius, space) {
            (Some(radius), _) => Region::Ball {
                center: self.minimizer,
                radius,
            },
            (None, Space::Graph(_)) => Region::Whole,
            (None, Space::HalfPlane(_)) => Region::Ball {
                center: self.minimizer,
                radius: DEFAULT_AUDIT_RADIUS,
            },
        }
    }

    fn locate_minimizer(&self, space: &Space) -> Result<(Point, f64)> {
        let anchors = self.anchors();
        let f = |x: &Point| self.eval(space, x);
        let mut best = (self.minimizer, f(&self.minimizer));
        let offer = |p: Point, v: f64, best: &mut (Point, f64)| {
            if v < best.1 || (v == best.1 && p.encoding_cmp(&best.0).is_lt()) {
                *best = (p, v);
            }
        };
        for a in &anchors {
            offer(*a, f(a), &mut best);
        }
        match space {
            Space::Graph(g) => {
                for v in 0..g.vertex_count() {
                    let p = Point::Vertex(v);
                    offer(p, f(&p), &mut best);
                }
                for i in 0..g.edges().len() {
                    for (p, v) in minimize_on_edge(space, i, &anchors, &f) {
                        offer(p, v, &mut best);
                    }
                }
            }
            Space::HalfPlane(h) => {
                for (i, a) in anchors.iter().enumerate() {
                    for b in &anchors[i + 1..] {
                        let path = space.geodesic(a, b)?;
                        let (t, _) = golden_section(|t| f(&path.sample(t)), 0.0, 1.0, 1e-12);
                        let p = path.sample(t);
                        offer(p, f(&p), &mut best);
                    }
                }
                let (p, v) = refine_in_plane(h, &best.0, 0.5, &f);
                offer(p, v, &mut best);
            }
        }
        Ok(best)
    }

    pub fn descriptor(&self, space: &Space) -> ObjectiveDescriptor {
        match &self.form {
            Form::Constant(c) => ObjectiveDescriptor::Constant {
                value: *c,
                at: space.describe(&self.minimizer),
                l: self.l,
            },
            Form::Distance { p, a } => ObjectiveDescriptor::Distance {
                p: space.describe(p),
                a: *a,
            },
            Form::SqDistance { p, k } => ObjectiveDescriptor::Sqdist {
                p: space.describe(p),
                k: *k,
                r: self.valid_radius.unwrap_or(f64::INFINITY),
            },
            Form::Sum(terms) => ObjectiveDescriptor::Sum {
                terms: terms.iter().map(|t| t.descriptor(space)).collect(),
            },
        }
    }
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "{name} must be positive, got {v}"
        )))
    }
}

/// Per-piece minima of `f` on edge `i`. Pieces are cut at the kinks of the
/// distance functions to `anchors`, so each piece sees smooth distances.
pub(crate) fn minimize_on_edge<F: Fn(&Point) -> f64>(
    space: &Space,
    i: usize,
    anchors: &[Point],
    f: &F,
) -> Vec<(Point, f64)> {
    let g = space.as_graph().expect("graph space");
    let w = g.edge(i).weight;
    let mut cuts = vec![0.0, w];
    cuts.extend(anchors.iter().filter_map(|q| g.kink_on_edge(q, i)));
    cuts.sort_by(|a, b| a.total_cmp(b));
    cuts.dedup_by(|a, b| (*a - *b).abs() <= 1e-14 * w.max(1.0));
    cuts.windows(2)
        .map(|piece| {
            let (s, _) = quadratic_piece_min(
                |s| f(&g.locate(i, s)),
                piece[0],
                piece[1],
                1e-13 * w.max(1.0),
            );
            let p = g.locate(i, s);
            (p, f(&p))
        })
        .collect()
}

/// Compass search in `(u, ln v)` coordinates starting from `start`.
pub(crate) fn refine_in_plane<F: Fn(&Point) -> f64>(
    _h: &crate::spaces::HalfPlane,
    start: &Point,
    step: f64,
    f: &F,
) -> (Point, f64) {
    let Point::Plane { u, v } = *start else {
        unreachable!("half-plane point")
    };
    let to_point = |c: [f64; 2]| Point::Plane {
        u: c[0],
        v: c[1].exp(),
    };
    let (c, val) = pattern_search(
        |c| f(&to_point(c)),
        |c| [c[1].exp(), 1.0],
        [u, v.ln()],
        step,
        1e-13,
    );
    (to_point(c), val)
}

/// JSON form of an objective.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum ObjectiveDescriptor {
    Distance {
        p: PointDescriptor,
        #[serde(default = "unit")]
        a: f64,
    },
    Sqdist {
        p: PointDescriptor,
        #[serde(rename = "K")]
        k: f64,
        #[serde(rename = "R")]
        r: f64,
    },
    Sum {
        terms: Vec<ObjectiveDescriptor>,
    },
    Constant {
        value: f64,
        at: PointDescriptor,
        #[serde(rename = "L", default = "unit")]
        l: f64,
    },
}

fn unit() -> f64 {
    1.0
}

impl ObjectiveDescriptor {
    pub fn build(&self, space: &Space) -> Result<Objective> {
        match self {
            ObjectiveDescriptor::Distance { p, a } => {
                Objective::distance(space, space.resolve(p)?, *a)
            }
            ObjectiveDescriptor::Sqdist { p, k, r } => {
                Objective::squared_distance(space, space.resolve(p)?, *k, *r)
            }
            ObjectiveDescriptor::Constant { value, at, l } => {
                Objective::constant(space, *value, space.resolve(at)?, *l)
            }
            ObjectiveDescriptor::Sum { terms } => {
                let mut built = terms.iter().map(|t| t.build(space));
                let first = built
                    .next()
                    .ok_or_else(|| Error::Descriptor("sum needs at least one term".into()))??;
                built.try_fold(first, |acc, t| Objective::sum(space, &acc, &t?))
            }
        }
    }
}

/// Largest violation of `f(γ(t)) ≤ (1−t)f(x) + t f(y) − (K/2)(1−t)t d²(x,y)`
/// over random pairs and the interior of a `t_grid`-point grid, on the
/// canonical geodesic of each pair. Non-positive means the audit passed.
pub fn audit_convexity(
    space: &Space,
    f: &Objective,
    k: f64,
    sample_count: usize,
    seed: u64,
    t_grid: usize,
) -> Result<f64> {
    if t_grid < 3 {
        return Err(Error::InvalidArgument(format!(
            "t_grid must be >= 3, got {t_grid}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let region = f.audit_region(space);
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..sample_count {
        let x = space.random_point(&mut rng, region);
        let y = space.random_point(&mut rng, region);
        let path = space.geodesic(&x, &y)?;
        let (fx, fy) = (f.eval(space, &x), f.eval(space, &y));
        let d2 = path.length() * path.length();
        for i in 1..t_grid - 1 {
            let t = i as f64 / (t_grid - 1) as f64;
            let lhs = f.eval(space, &path.sample(t));
            let rhs = (1.0 - t) * fx + t * fy - 0.5 * k * (1.0 - t) * t * d2;
            worst = worst.max(lhs - rhs);
        }
    }
    Ok(worst)
}

/// Largest violation of `|f(x) − f(y)| ≤ L d(x,y)` over random pairs drawn
/// from the objective's certified ball (or the whole space).
pub fn audit_lipschitz(
    space: &Space,
    f: &Objective,
    l: f64,
    sample_count: usize,
    seed: u64,
) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let region = f.audit_region(space);
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..sample_count {
        let x = space.random_point(&mut rng, region);
        let y = space.random_point(&mut rng, region);
        let gap = (f.eval(space, &x) - f.eval(space, &y)).abs();
        worst = worst.max(gap - l * space.dist(&x, &y));
    }
    Ok(worst)
}

/// The a priori estimates for `K > 0`, evaluated at sampled points:
/// `f(p) + (K/2)d²(p,x) ≤ f(x) ≤ f(p) + L d(p,x)`, `d(p,x) ≤ 2L/K` and
/// `f(x) − f(p) ≤ 2L²/K`. Reports the instance with the smallest slack.
pub fn a_priori_check(
    space: &Space,
    f: &Objective,
    samples: usize,
    seed: u64,
    ctx: &CheckContext,
) -> Result<TheoremReport> {
    let inputs = json!({
        "objective": f.descriptor(space),
        "samples": samples,
        "sample_seed": seed,
    });
    if f.k <= 0.0 {
        return Ok(ctx.skipped(Theorem::APriori, inputs, "requires K>0"));
    }
    let (k, l, p, fp) = (f.k, f.l, f.minimizer, f.min_value);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let region = f.audit_region(space);
    let mut worst: Option<(f64, f64, f64, Point, &str)> = None;
    let allowance = ctx.convexity_allowance(0.0, l);
    for i in 0..=samples {
        let x = if i == 0 {
            p
        } else {
            space.random_point(&mut rng, region)
        };
        let d = space.dist(&p, &x);
        let fx = f.eval(space, &x);
        let cases = [
            (fp + 0.5 * k * d * d, fx + allowance, "quadratic growth"),
            (fx, fp + l * d, "lipschitz growth"),
            (d, 2.0 * l / k, "distance bound"),
            (fx - fp, 2.0 * l * l / k, "value bound"),
        ];
        for (lhs, rhs, name) in cases {
            let slack = rhs - lhs;
            if worst.is_none_or(|w| {
                slack - ctx.tolerance(lhs.abs().max(rhs.abs()))
                    < w.2 - ctx.tolerance(w.0.abs().max(w.1.abs()))
            }) {
                worst = Some((lhs, rhs, slack, x, name));
            }
        }
    }
    let (lhs, rhs, _, x, name) = worst.expect("at least the minimizer is sampled");
    let mut inputs = inputs;
    inputs["worst_point"] = json!(space.describe(&x));
    inputs["worst_inequality"] = json!(name);
    let mut report = ctx.report(Theorem::APriori, inputs, lhs, rhs);
    if allowance > 0.0 {
        report.flags.push("approximate-convexity".into());
    }
    Ok(report)
}
