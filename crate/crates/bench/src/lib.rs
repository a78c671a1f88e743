//! Shared fixtures for the benchmarks.

use shotgun_core::reads::sample_reads;
use shotgun_core::sequence::generate_iid;
use shotgun_core::theory::ncov_estimate;
use shotgun_core::{Distribution, ReadSet};

/// Uniform genome of length `g` with `factor * N_cov` reads of length `l`.
pub fn covered_reads(g: usize, l: usize, factor: f64, seed: u64) -> ReadSet {
    let genome = generate_iid(g, &Distribution::uniform(4), seed).expect("valid genome");
    let n = (factor * ncov_estimate(0.1, g, l).expect("valid lengths") as f64).ceil() as usize;
    sample_reads(&genome, n, l, seed ^ 0x5eed).expect("valid reads")
}
