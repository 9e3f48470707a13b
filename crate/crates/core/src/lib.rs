//! Proximal point iterations on Gromov hyperbolic spaces.
//!
//! Spaces are finite metric graphs (trees, perturbed trees, general weighted
//! graphs) and the hyperbolic half-plane. Objectives are `K`-convex and
//! `L`-Lipschitz with a known minimizer; the [`bounds`] module evaluates the
//! tendency, iteration and contraction estimates on concrete prox steps and
//! returns a [`TheoremReport`] per inequality.

// `!(a > b)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod error;
pub mod harness;
pub mod metric;
pub mod objective;
pub mod proximal;
pub mod report;
pub mod search;
pub mod spaces;
pub mod tol;

pub use error::{Error, Result};
pub use metric::{four_point_delta, gromov_product, DeltaEstimate, DeltaMode, GeodesicPath, Point};
pub use objective::{Objective, ObjectiveDescriptor};
pub use proximal::{flow, prox, FlowParams, FlowTrace, ProxConfig, ProxResult, StopReason};
pub use report::{CheckContext, Theorem, TheoremReport};
pub use spaces::{Region, Space};
