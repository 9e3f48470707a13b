//! Fixtures shared by the benchmarks.

use hypflow_core::spaces::{build_perturbed_tree, build_random_tree, PerturbedTreeSpace};

/// A random tree on `n` vertices with three detours of size 0.05.
pub fn perturbed(n: usize, seed: u64) -> PerturbedTreeSpace {
    let base = build_random_tree(n, (0.5, 3.0), seed).expect("valid tree");
    build_perturbed_tree(&base, 0.05, 3, seed).expect("valid detours")
}
