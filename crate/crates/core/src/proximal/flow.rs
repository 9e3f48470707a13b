use serde::{Deserialize, Serialize};

use crate::bounds::iteration_ball;
use crate::error::{Error, Result};
use crate::metric::Point;
use crate::objective::Objective;
use crate::spaces::Space;

use super::{prox, ProxConfig};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowParams {
    /// A step is productive when it decreases `d(p,·)` by at least `ε²`.
    pub epsilon: f64,
    pub max_iter: usize,
    /// Hyperbolicity constant used for the distance-ball stopping test.
    pub delta: f64,
    /// Stop as soon as the iterate enters the distance ball (only when
    /// `K > 0` and `τ > 1/K`).
    pub stop_at_ball: bool,
    /// Stop after the first unproductive step.
    pub stop_on_stall: bool,
}

impl FlowParams {
    pub fn new(epsilon: f64, max_iter: usize) -> Self {
        Self {
            epsilon,
            max_iter,
            delta: 0.0,
            stop_at_ball: false,
            stop_on_stall: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StopReason {
    /// The iterate is the minimizer.
    Minimizer,
    /// The iterate entered the distance ball.
    Ball,
    /// The last step decreased `d(p,·)` by less than `ε²`.
    Stalled,
    /// `max_iter` steps were taken.
    Budget,
}

impl StopReason {
    pub fn as_str(&self) -> &'static str {
        match self {
            StopReason::Minimizer => "minimizer",
            StopReason::Ball => "ball",
            StopReason::Stalled => "stalled",
            StopReason::Budget => "budget",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlowStep {
    pub x: Point,
    pub f_value: f64,
    pub dist_to_p: f64,
    /// Distance from the previous iterate; 0 for the initial point.
    pub displacement: f64,
    /// Moreau value of the step producing this iterate; `f(x₀)` initially.
    pub moreau_value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlowTrace {
    pub iterates: Vec<FlowStep>,
    pub tau: f64,
    pub stop_reason: StopReason,
}

/// Iterates `x_{i+1} = J_τ^f(x_i)` from `x0`.
pub fn flow(
    space: &Space,
    f: &Objective,
    x0: &Point,
    params: &FlowParams,
    config: &ProxConfig,
) -> Result<FlowTrace> {
    space.check_point(x0)?;
    if !(params.epsilon.is_finite() && params.epsilon > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "epsilon must be positive, got {}",
            params.epsilon
        )));
    }
    let p = f.minimizer();
    let ball = iteration_ball(f.k(), f.l(), config.tau, params.delta, params.epsilon);
    let f0 = f.eval(space, x0);
    let mut iterates = vec![FlowStep {
        x: *x0,
        f_value: f0,
        dist_to_p: space.dist(&p, x0),
        displacement: 0.0,
        moreau_value: f0,
    }];
    let stop_reason = loop {
        let cur = iterates.last().expect("non-empty");
        if cur.dist_to_p <= 1e-12 {
            break StopReason::Minimizer;
        }
        if params.stop_at_ball && ball.is_some_and(|r2| cur.dist_to_p * cur.dist_to_p <= r2) {
            break StopReason::Ball;
        }
        if iterates.len() > params.max_iter {
            break StopReason::Budget;
        }
        let step_config = ProxConfig {
            seed: config.seed.wrapping_add(iterates.len() as u64),
            ..*config
        };
        let r = prox(space, f, &cur.x, &step_config)?;
        let before = cur.dist_to_p;
        let next = FlowStep {
            x: r.y,
            f_value: f.eval(space, &r.y),
            dist_to_p: space.dist(&p, &r.y),
            displacement: r.displacement,
            moreau_value: r.moreau_value,
        };
        let decrease = before - next.dist_to_p;
        iterates.push(next);
        if params.stop_on_stall && decrease < params.epsilon * params.epsilon {
            break StopReason::Stalled;
        }
    };
    Ok(FlowTrace {
        iterates,
        tau: config.tau,
        stop_reason,
    })
}
