//! `hypflow`: δ estimation, prox steps, flows and theorem suites from the
//! command line.
//!
//! Exit codes: 0 on success, 1 when a report fails or a prox solve is
//! rejected, 2 on invalid input.

// `!(a > b)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod input;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use hypflow_core::harness::{self, HarnessConfig, Suite, Summary};
use hypflow_core::metric::{four_point_delta, DeltaMode};
use hypflow_core::proximal::{flow, prox, FlowParams, ProxConfig};
use hypflow_core::spaces::{Region, DEFAULT_BOX};
use hypflow_core::{Error, Point, Space};
use serde_json::json;

use input::Generated;

#[derive(Parser)]
#[command(
    name = "hypflow",
    version,
    about = "Proximal point flows on Gromov hyperbolic spaces"
)]
struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output file.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Relative tolerance of inequality checks.
    #[arg(long, global = true, default_value_t = hypflow_core::tol::CHECK_REL)]
    tol: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Estimate the four-point hyperbolicity constant.
    Delta(DeltaArgs),
    /// One proximal step.
    Prox(ProxArgs),
    /// Iterated proximal steps, written as CSV.
    Flow(FlowArgs),
    /// Run a randomized theorem suite.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct SpaceArgs {
    /// Space file, or one of `halfplane`, `tree`, `perturbed`.
    #[arg(long)]
    space: String,
    /// Vertices of a generated tree.
    #[arg(long, default_value_t = 12)]
    vertices: usize,
    /// Detour size of a generated perturbed tree.
    #[arg(long, default_value_t = 0.1)]
    delta_build: f64,
    /// Detours of a generated perturbed tree.
    #[arg(long, default_value_t = 2)]
    detours: usize,
}

impl SpaceArgs {
    fn load(&self, seed: u64) -> Result<(Space, f64)> {
        input::load_space(
            &self.space,
            Generated {
                vertices: self.vertices,
                delta_build: self.delta_build,
                detours: self.detours,
                seed,
            },
        )
    }
}

#[derive(Args)]
struct DeltaArgs {
    #[command(flatten)]
    space: SpaceArgs,
    /// Enumerate every ordered quadruple instead of sampling.
    #[arg(long)]
    exact: bool,
    /// Random points added to the vertices (graphs) or drawn from the box
    /// (half-plane).
    #[arg(long, default_value_t = 200)]
    samples: usize,
    /// Quadruples drawn in sampled mode.
    #[arg(long, default_value_t = 200_000)]
    quadruples: usize,
    /// Half-plane sampling box `u0,u1,v0,v1`.
    #[arg(long = "box", value_parser = input::parse_box, allow_hyphen_values = true)]
    bx: Option<[f64; 4]>,
}

#[derive(Args)]
struct ProxArgs {
    #[command(flatten)]
    space: SpaceArgs,
    /// Objective descriptor: inline JSON or a file.
    #[arg(long)]
    objective: String,
    /// Point descriptor: inline JSON or a file.
    #[arg(long)]
    x: String,
    #[arg(long)]
    tau: f64,
    #[arg(long, default_value_t = 500)]
    certificate_samples: usize,
}

#[derive(Args)]
struct FlowArgs {
    #[command(flatten)]
    space: SpaceArgs,
    #[arg(long)]
    objective: String,
    #[arg(long)]
    x0: String,
    #[arg(long)]
    tau: f64,
    /// Steps decreasing the distance to the minimizer by less than ε² stop the flow.
    #[arg(long, default_value_t = 1e-3)]
    epsilon: f64,
    #[arg(long, default_value_t = 1000)]
    max_iter: usize,
    /// δ used by the distance-ball test.
    #[arg(long)]
    delta: Option<f64>,
    /// Stop once the iterate is inside the distance ball.
    #[arg(long)]
    stop_at_ball: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// conv, conv_d, step, iteration, contraction, lemmas or all.
    #[arg(long, value_parser = parse_suite)]
    suite: Suite,
    /// `tree`, `perturbed`, `halfplane` or a space file.
    #[arg(long)]
    space: String,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    /// Fixed detour size for `perturbed`; drawn per trial when absent.
    #[arg(long)]
    delta_build: Option<f64>,
}

fn parse_suite(s: &str) -> std::result::Result<Suite, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Distinguishes bad input (exit 2) from rejected results (exit 1).
enum Failure {
    Input(anyhow::Error),
    Rejected(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        let rejected = matches!(e.downcast_ref::<Error>(), Some(Error::Solver { .. }));
        if rejected {
            Failure::Rejected(e)
        } else {
            Failure::Input(e)
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        anyhow::Error::from(e).into()
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Delta(a) => cmd_delta(&cli, a),
        Command::Prox(a) => cmd_prox(&cli, a),
        Command::Flow(a) => cmd_flow(&cli, a),
        Command::Verify(a) => cmd_verify(&cli, a),
    };
    match result {
        Ok(code) => code,
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Rejected(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn cmd_delta(cli: &Cli, a: &DeltaArgs) -> Result<ExitCode, Failure> {
    let (space, _) = a.space.load(cli.seed)?;
    let points: Vec<Point> = match &space {
        Space::Graph(g) => {
            let mut pts: Vec<Point> = (0..g.vertex_count()).map(Point::Vertex).collect();
            if !a.exact {
                pts.extend(space.sample_points(a.samples, Region::Whole, cli.seed));
            }
            pts
        }
        Space::HalfPlane(_) => {
            let bx = a.bx.unwrap_or(DEFAULT_BOX);
            space.sample_points(a.samples, Region::Box(bx), cli.seed)
        }
    };
    let mode = if a.exact {
        DeltaMode::Exact
    } else {
        DeltaMode::Sampled {
            seed: cli.seed,
            count: a.quadruples,
        }
    };
    let est = four_point_delta(&space, &points, mode)?;
    let doc = json!({
        "format": 1,
        "space": space.kind(),
        "mode": if a.exact { "exact" } else { "sampled" },
        "points": points.len(),
        "delta_hat": est.delta_hat,
        "witness": est.witness.map(|w| w.map(|p| space.describe(&p))),
        "sample_count": est.sample_count,
        "seed": cli.seed,
    });
    output::emit_json(cli.out.as_deref(), &doc)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_prox(cli: &Cli, a: &ProxArgs) -> Result<ExitCode, Failure> {
    let (space, _) = a.space.load(cli.seed)?;
    let f = input::objective(&a.objective)?.build(&space)?;
    let x = input::point(&space, &a.x)?;
    let mut config = ProxConfig::new(a.tau).with_seed(cli.seed);
    config.certificate_samples = a.certificate_samples;
    let r = match prox(&space, &f, &x, &config) {
        Ok(r) => r,
        Err(Error::Solver {
            certificate,
            tolerance,
            best,
        }) => {
            output::emit_json(
                cli.out.as_deref(),
                &output::prox_json(&space, &best, "rejected"),
            )?;
            return Err(Failure::Rejected(anyhow::anyhow!(
                "prox certificate {certificate:e} exceeds tolerance {tolerance:e}"
            )));
        }
        Err(e) => return Err(e.into()),
    };
    output::emit_json(
        cli.out.as_deref(),
        &output::prox_json(&space, &r, "accepted"),
    )?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_flow(cli: &Cli, a: &FlowArgs) -> Result<ExitCode, Failure> {
    let (space, declared) = a.space.load(cli.seed)?;
    let f = input::objective(&a.objective)?.build(&space)?;
    let x0 = input::point(&space, &a.x0)?;
    let params = FlowParams {
        epsilon: a.epsilon,
        max_iter: a.max_iter,
        delta: a.delta.unwrap_or(declared),
        stop_at_ball: a.stop_at_ball,
        stop_on_stall: true,
    };
    let config = ProxConfig::new(a.tau).with_seed(cli.seed);
    let trace = flow(&space, &f, &x0, &params, &config)?;
    output::emit_trace(cli.out.as_deref(), &trace)?;
    eprintln!(
        "stop_reason: {} after {} steps",
        trace.stop_reason.as_str(),
        trace.iterates.len() - 1
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(cli: &Cli, a: &VerifyArgs) -> Result<ExitCode, Failure> {
    if !(cli.tol > 0.0) {
        return Err(Failure::Input(anyhow::anyhow!("--tol must be positive")));
    }
    let source = input::space_source(&a.space, a.delta_build)?;
    let mut config = HarnessConfig::new(a.suite, source, a.trials, cli.seed);
    config.tol_rel = cli.tol;
    let reports = harness::run(&config).context("running suite")?;
    let summary = Summary::of(&reports);
    let out = cli
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from("hypflow-verify.json"));
    output::write_bundle(&out, &config, a, &reports, &summary)?;
    println!(
        "suite {} on {}: {} reports, {} passed, {} failed, {} skipped",
        a.suite,
        config.source.name(),
        summary.total,
        summary.passed,
        summary.failed,
        summary.skipped
    );
    Ok(if summary.failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
