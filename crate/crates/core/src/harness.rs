//! Randomized theorem suites: seeded instances of spaces, objectives and
//! points, evaluated in parallel and returned in trial order.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;

use crate::bounds::{
    check_contraction, check_conv, check_conv_d, check_iteration, check_step_bounds,
};
use crate::error::{Error, Result};
use crate::metric::{
    check_gromov_sandwich, check_projection_lemma, check_tripod_lemma, four_point_delta,
    gromov_product, DeltaMode, Point,
};
use crate::objective::{a_priori_check, audit_convexity, Objective};
use crate::proximal::{flow, prox, FlowParams, ProxConfig, ProxResult};
use crate::report::{CheckContext, TheoremReport};
use crate::spaces::{
    build_half_plane, build_perturbed_tree, build_random_tree, Region, Space, HALF_PLANE_DELTA,
};
use crate::tol;

const DELTA_BUILDS: [f64; 3] = [0.01, 0.05, 0.1];
const HALF_PLANE_RADIUS: f64 = 3.0;
const DELTA_SAMPLES: usize = 2000;
const MAX_FLOW_STEPS: f64 = 5000.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    Conv,
    ConvD,
    Step,
    Iteration,
    Contraction,
    Lemmas,
    All,
}

impl Suite {
    pub const SINGLE: [Suite; 6] = [
        Suite::Conv,
        Suite::ConvD,
        Suite::Step,
        Suite::Iteration,
        Suite::Contraction,
        Suite::Lemmas,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Conv => "conv",
            Suite::ConvD => "conv_d",
            Suite::Step => "step",
            Suite::Iteration => "iteration",
            Suite::Contraction => "contraction",
            Suite::Lemmas => "lemmas",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::SINGLE
            .into_iter()
            .chain([Suite::All])
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown suite {s:?}")))
    }
}

/// Which spaces the trials run on.
#[derive(Debug, Clone)]
pub enum SpaceSource {
    /// Random trees, 6 to 24 vertices, weights in `[0.5, 3]`.
    Tree,
    /// Random trees with up to three detours; `delta_build` is fixed when
    /// given and drawn from `{0.01, 0.05, 0.1}` otherwise.
    Perturbed {
        delta_build: Option<f64>,
    },
    HalfPlane,
    /// A fixed space with its declared hyperbolicity constant.
    Fixed {
        space: Space,
        declared_delta: f64,
    },
}

impl SpaceSource {
    /// Wraps a loaded space, declaring `δ` as follows: 0 for trees, the exact
    /// vertex four-point constant plus three times the longest edge for other
    /// graphs (every point is within half an edge of a vertex), and `ln 2`
    /// for the half-plane.
    pub fn fixed(space: Space) -> Result<Self> {
        let declared_delta = match &space {
            Space::HalfPlane(_) => HALF_PLANE_DELTA,
            Space::Graph(g) if g.is_acyclic() => 0.0,
            Space::Graph(g) => {
                let vertices: Vec<Point> = (0..g.vertex_count()).map(Point::Vertex).collect();
                let mode = if vertices.len() <= 40 {
                    DeltaMode::Exact
                } else {
                    DeltaMode::Sampled {
                        seed: 0,
                        count: 1_000_000,
                    }
                };
                let longest = g.edges().iter().map(|e| e.weight).fold(0.0, f64::max);
                let vertex_delta = if vertices.len() >= 4 {
                    four_point_delta(&space, &vertices, mode)?.delta_hat
                } else {
                    0.0
                };
                vertex_delta + 3.0 * longest
            }
        };
        Ok(SpaceSource::Fixed {
            space,
            declared_delta,
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            SpaceSource::Tree => "tree",
            SpaceSource::Perturbed { .. } => "perturbed",
            SpaceSource::HalfPlane => "halfplane",
            SpaceSource::Fixed { .. } => "file",
        }
    }
}

#[derive(Debug, Clone)]
pub struct HarnessConfig {
    pub suite: Suite,
    pub source: SpaceSource,
    pub trials: usize,
    pub seed: u64,
    pub tol_rel: f64,
}

impl HarnessConfig {
    pub fn new(suite: Suite, source: SpaceSource, trials: usize, seed: u64) -> Self {
        Self {
            suite,
            source,
            trials,
            seed,
            tol_rel: tol::CHECK_REL,
        }
    }
}

/// Pass/fail/skip counts of a batch.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
}

impl Summary {
    pub fn of(reports: &[TheoremReport]) -> Self {
        let mut s = Summary {
            total: reports.len(),
            ..Self::default()
        };
        for r in reports {
            match r.status() {
                "skipped" => s.skipped += 1,
                "pass" => s.passed += 1,
                _ => s.failed += 1,
            }
        }
        s
    }
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of trial `i` of `suite` in a run seeded with `seed`.
pub fn trial_seed(seed: u64, suite: Suite, i: usize) -> u64 {
    let tag = Suite::SINGLE.iter().position(|s| *s == suite).unwrap_or(7) as u64;
    splitmix(splitmix(seed ^ (tag << 56)).wrapping_add(i as u64))
}

/// Runs the configured suite (or every suite for [`Suite::All`]) and returns
/// all reports, ordered by suite and trial.
pub fn run(config: &HarnessConfig) -> Result<Vec<TheoremReport>> {
    let suites: Vec<Suite> = match config.suite {
        Suite::All => Suite::SINGLE.to_vec(),
        one => vec![one],
    };
    let mut out = Vec::new();
    for suite in suites {
        let batches: Vec<Result<Vec<TheoremReport>>> = (0..config.trials)
            .into_par_iter()
            .map(|i| run_trial(config, suite, i))
            .collect();
        for batch in batches {
            out.extend(batch?);
        }
    }
    Ok(out)
}

/// One seeded trial of one suite.
pub fn run_trial(config: &HarnessConfig, suite: Suite, i: usize) -> Result<Vec<TheoremReport>> {
    let seed = trial_seed(config.seed, suite, i);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let instance = Instance::draw(&config.source, &mut rng)?;
    let mut trial = Trial {
        instance,
        rng,
        seed,
        tol_rel: config.tol_rel,
        index: i,
    };
    let mut reports = match suite {
        Suite::Conv => trial.conv()?,
        Suite::ConvD => trial.conv_d()?,
        Suite::Step => trial.step()?,
        Suite::Iteration => trial.iteration()?,
        Suite::Contraction => trial.contraction()?,
        Suite::Lemmas => trial.lemmas()?,
        Suite::All => unreachable!("expanded by run"),
    };
    for r in &mut reports {
        r.inputs["trial"] = json!(i);
        r.inputs["suite"] = json!(suite.name());
        r.inputs["space_source"] = json!(config.source.name());
        if let Some(db) = trial.instance.delta_build {
            r.inputs["delta_build"] = json!(db);
        }
    }
    Ok(reports)
}

struct Instance {
    space: Space,
    declared_delta: f64,
    delta_build: Option<f64>,
    diameter: f64,
}

impl Instance {
    fn draw(source: &SpaceSource, rng: &mut ChaCha8Rng) -> Result<Self> {
        let space_seed = rng.gen::<u64>();
        Ok(match source {
            SpaceSource::Tree => {
                let t = build_random_tree(rng.gen_range(6..=24), (0.5, 3.0), space_seed)?;
                let diameter = t.graph().diameter_bound();
                Instance {
                    space: t.into_space(),
                    declared_delta: 0.0,
                    delta_build: None,
                    diameter,
                }
            }
            SpaceSource::Perturbed { delta_build } => {
                let base = build_random_tree(rng.gen_range(6..=16), (0.5, 3.0), space_seed)?;
                let db = delta_build
                    .unwrap_or_else(|| DELTA_BUILDS[rng.gen_range(0..DELTA_BUILDS.len())]);
                let detours = rng.gen_range(1..=3);
                let pt = build_perturbed_tree(&base, db, detours, rng.gen())?;
                Instance {
                    declared_delta: pt.declared_delta(),
                    delta_build: Some(db),
                    diameter: pt.graph().diameter_bound(),
                    space: pt.space().clone(),
                }
            }
            SpaceSource::HalfPlane => Instance {
                space: build_half_plane(),
                declared_delta: HALF_PLANE_DELTA,
                delta_build: None,
                diameter: 4.0 * HALF_PLANE_RADIUS,
            },
            SpaceSource::Fixed {
                space,
                declared_delta,
            } => Instance {
                diameter: match space {
                    Space::Graph(g) => g.diameter_bound(),
                    Space::HalfPlane(_) => 4.0 * HALF_PLANE_RADIUS,
                },
                space: space.clone(),
                declared_delta: *declared_delta,
                delta_build: None,
            },
        })
    }
}

#[derive(Clone, Copy, PartialEq)]
enum ObjectiveKind {
    Distance,
    SqDistance,
}

struct Trial {
    instance: Instance,
    rng: ChaCha8Rng,
    seed: u64,
    tol_rel: f64,
    index: usize,
}

impl Trial {
    fn space(&self) -> &Space {
        &self.instance.space
    }

    fn point(&mut self, region: Region) -> Point {
        self.instance.space.random_point(&mut self.rng, region)
    }

    fn objective(&mut self, kind: ObjectiveKind) -> Result<Objective> {
        let p = self.point(Region::Whole);
        match kind {
            ObjectiveKind::Distance => {
                let a = self.rng.gen_range(0.5..=2.0);
                Objective::distance(self.space(), p, a)
            }
            ObjectiveKind::SqDistance => {
                let k = self.rng.gen_range(0.5..=2.0);
                let r = match self.space() {
                    Space::Graph(g) => g.eccentricity(&p),
                    Space::HalfPlane(_) => HALF_PLANE_RADIUS,
                };
                Objective::squared_distance(self.space(), p, k, r)
            }
        }
    }

    /// Where starting points are drawn: inside the certified ball when the
    /// objective has one.
    fn start_region(&self, f: &Objective) -> Region {
        match (f.valid_radius(), self.space()) {
            (Some(radius), _) => Region::Ball {
                center: f.minimizer(),
                radius,
            },
            (None, _) => Region::Whole,
        }
    }

    fn refined_tau(&mut self, f: &Objective) -> f64 {
        // (1/K, 4/K], away from the singular end
        (1.0 + self.rng.gen_range(0.05..=3.0)) / f.k()
    }

    fn free_tau(&mut self) -> f64 {
        (self.rng.gen_range(0.1f64.ln()..=5f64.ln())).exp()
    }

    fn prox(&mut self, f: &Objective, x: &Point, tau: f64) -> Result<ProxResult> {
        let config = ProxConfig::new(tau).with_seed(self.rng.gen());
        prox(self.space(), f, x, &config)
    }

    /// Audited convexity violation, snapped to 0 below float noise.
    fn epsilon_cvx(&self, f: &Objective) -> Result<f64> {
        let v = audit_convexity(self.space(), f, f.k(), 100, self.seed ^ 0xc0ffee, 9)?;
        let scale = f.l() * self.instance.diameter.max(1.0);
        Ok(if v > tol::GEO_EXACT * (1.0 + scale) {
            v
        } else {
            0.0
        })
    }

    /// `max(declared, empirical)` on the trial's points and the vertices.
    fn context(&self, f: Option<&Objective>, points: &[Point]) -> Result<CheckContext> {
        let mut pts = points.to_vec();
        if let Space::Graph(g) = self.space() {
            pts.extend((0..g.vertex_count()).map(Point::Vertex));
        }
        let mode = DeltaMode::Sampled {
            seed: self.seed ^ 0xde17a,
            count: DELTA_SAMPLES,
        };
        let empirical = four_point_delta(self.space(), &pts, mode)?.delta_hat;
        Ok(CheckContext {
            delta: self.instance.declared_delta.max(empirical),
            epsilon_cvx: match f {
                Some(f) => self.epsilon_cvx(f)?,
                None => 0.0,
            },
            diameter: self.instance.diameter,
            seed: self.seed,
            tol_rel: self.tol_rel,
        })
    }

    fn conv(&mut self) -> Result<Vec<TheoremReport>> {
        let kind = if self.index.is_multiple_of(2) {
            ObjectiveKind::Distance
        } else {
            ObjectiveKind::SqDistance
        };
        let f = self.objective(kind)?;
        let x = self.point(self.start_region(&f));
        let tau = if kind == ObjectiveKind::SqDistance && self.rng.gen_bool(0.5) {
            self.refined_tau(&f)
        } else {
            self.free_tau()
        };
        let step = self.prox(&f, &x, tau)?;
        let ctx = self.context(Some(&f), &[f.minimizer(), x, step.y])?;
        let mut out = vec![check_conv(self.space(), &f, &step, tau, &ctx)];
        if f.k() > 0.0 && f.k() * tau > 1.0 {
            out.push(check_conv_d(self.space(), &f, &step, tau, &ctx));
        }
        Ok(out)
    }

    fn conv_d(&mut self) -> Result<Vec<TheoremReport>> {
        let f = self.objective(ObjectiveKind::SqDistance)?;
        let x = self.point(self.start_region(&f));
        let tau = self.refined_tau(&f);
        let step = self.prox(&f, &x, tau)?;
        let ctx = self.context(Some(&f), &[f.minimizer(), x, step.y])?;
        Ok(vec![check_conv_d(self.space(), &f, &step, tau, &ctx)])
    }

    fn step(&mut self) -> Result<Vec<TheoremReport>> {
        let f = self.objective(ObjectiveKind::SqDistance)?;
        let x = self.point(self.start_region(&f));
        let tau = self.refined_tau(&f);
        let step = self.prox(&f, &x, tau)?;
        let ctx = self.context(Some(&f), &[f.minimizer(), x, step.y])?;
        let mut out = check_step_bounds(self.space(), &f, &step, tau, &ctx).to_vec();
        out.push(a_priori_check(self.space(), &f, 200, self.seed, &ctx)?);
        Ok(out)
    }

    fn iteration(&mut self) -> Result<Vec<TheoremReport>> {
        let f = self.objective(ObjectiveKind::SqDistance)?;
        let x0 = self.point(self.start_region(&f));
        let tau = self.refined_tau(&f);
        let d0 = self.space().dist(&f.minimizer(), &x0);
        let excess = f.eval(self.space(), &x0) - f.min_value();
        // ε sized so that one of the two count bounds is 10 to 60 steps;
        // tying it to the larger one makes the distance ball trivially large
        let budget = self.rng.gen_range(10.0..=60.0);
        let scale = if self.index.is_multiple_of(2) {
            d0
        } else {
            excess
        };
        let epsilon = (scale / budget).sqrt().max(1e-3);
        let max_iter = (d0.max(excess) / (epsilon * epsilon))
            .ceil()
            .min(MAX_FLOW_STEPS) as usize
            + 1;
        let mut params = FlowParams::new(epsilon, max_iter);
        params.stop_on_stall = false;
        let config = ProxConfig::new(tau).with_seed(self.rng.gen());
        let trace = flow(self.space(), &f, &x0, &params, &config)?;
        let mut pts: Vec<Point> = trace.iterates.iter().map(|s| s.x).collect();
        pts.push(f.minimizer());
        let ctx = self.context(Some(&f), &pts)?;
        Ok(check_iteration(self.space(), &f, &trace, epsilon, &ctx))
    }

    fn contraction(&mut self) -> Result<Vec<TheoremReport>> {
        let kind = if self.index.is_multiple_of(2) {
            ObjectiveKind::Distance
        } else {
            ObjectiveKind::SqDistance
        };
        let f = self.objective(kind)?;
        let region = self.start_region(&f);
        let x2 = self.point(region);
        // half the pairs share a geodesic from p, which favours case (ii)
        let x1 = if self.rng.gen_bool(0.5) {
            let t = self.rng.gen::<f64>();
            self.space().geodesic(&f.minimizer(), &x2)?.sample(t)
        } else {
            self.point(region)
        };
        let tau = self.free_tau();
        let s1 = self.prox(&f, &x1, tau)?;
        let s2 = self.prox(&f, &x2, tau)?;
        let ctx = self.context(Some(&f), &[f.minimizer(), x1, x2, s1.y, s2.y])?;
        check_contraction(self.space(), &f, &s1, &s2, tau, &ctx)
    }

    fn lemmas(&mut self) -> Result<Vec<TheoremReport>> {
        let [x, y, z, w] = std::array::from_fn(|_| self.point(Region::Whole));
        let ctx = self.context(None, &[x, y, z, w])?;
        let space = &self.instance.space;
        let mut out = Vec::new();

        let g = gromov_product(space, &x, &y, &z)?;
        let r = g * self.rng.gen::<f64>();
        out.push(check_tripod_lemma(space, &x, &y, &z, r, &ctx)?);

        // y_i placed at or beyond (x1|x2)_p − σ along p → x_i
        let (p, x1, x2) = (w, x, y);
        let gp = gromov_product(space, &p, &x1, &x2)?;
        let sigma = self.rng.gen_range(0.0..=0.5);
        let mut param = |target: &Point| {
            let len = space.dist(&p, target);
            let lo = if len > 0.0 {
                ((gp - sigma) / len).clamp(0.0, 1.0)
            } else {
                0.0
            };
            self.rng.gen_range(lo..=1.0)
        };
        let (t1, t2) = (param(&x1), param(&x2));
        out.push(check_projection_lemma(
            space, &p, &x1, &x2, t1, t2, sigma, &ctx,
        )?);

        out.extend(check_gromov_sandwich(space, &x, &y, &z, 33, &ctx)?);
        Ok(out)
    }
}
