//! Monte Carlo experiments: single trials, `N_min` search, and sweeps that
//! compare empirical thresholds with the theory.
//!
//! Every result is a pure function of the config and its master seed. Trial
//! `t` at read length `L` draws from `derive_seed(seed, [L, t])`, so the same
//! genomes are reused across read counts, and trials run in parallel with
//! results reduced in trial order.

mod config;
mod manifest;
mod nmin;
mod presets;
mod sweep;
mod trial;

pub use config::{read_len_for, Algorithm, ExperimentConfig, RepeatSpec, SweepKind};
pub use manifest::RunManifest;
pub use nmin::{required_successes, NminEstimate, PointEval, NMIN_CAP_FACTOR};
pub use presets::{preset, PRESET_NAMES};
pub use sweep::{
    run_sweep, sweep_capacity, sweep_noise, sweep_repeats, NoiseRow, RepeatsRow, SweepOutput, SweepRow,
    CAPACITY_CSV_HEADER, NOISE_CSV_HEADER, REPEATS_CSV_HEADER,
};
pub use trial::{run_trial, TrialRunner};

/// Free-function form of [`TrialRunner::estimate_nmin`].
pub fn estimate_nmin(cfg: &ExperimentConfig, l: usize) -> crate::Result<NminEstimate> {
    TrialRunner::new(cfg)?.estimate_nmin(l)
}
