use crate::error::{Error, Result};
use crate::sequence::{MarkovModel, SourceModel};

use super::config::{Algorithm, ExperimentConfig, RepeatSpec};

pub const PRESET_NAMES: &[&str] = &[
    "capacity-uniform-small",
    "capacity-uniform",
    "capacity-markov-small",
    "capacity-sequential-small",
    "capacity-debruijn-small",
    "noise-small",
    "noise-uniform",
    "repeats-small",
    "repeats-bridging",
];

fn capacity(g: usize, grid: &[f64], algorithm: Algorithm, trials: usize, seed: u64) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::new(g, algorithm, seed);
    cfg.lbar_grid = grid.to_vec();
    cfg.trials_per_point = trials;
    cfg
}

/// Named sweep configurations.
pub fn preset(name: &str) -> Result<ExperimentConfig> {
    let cfg = match name {
        "capacity-uniform-small" => capacity(2000, &[0.8, 1.5, 2.0, 3.0], Algorithm::Greedy, 20, 1),
        "capacity-uniform" => capacity(10_000, &[0.6, 0.8, 1.5, 2.0, 3.0, 4.0], Algorithm::Greedy, 100, 2),
        "capacity-markov-small" => {
            let mut cfg = capacity(2000, &[1.5, 2.0, 3.0], Algorithm::Greedy, 20, 3);
            let q = [[0.4, 0.2, 0.2, 0.2], [0.2, 0.4, 0.2, 0.2], [0.2, 0.2, 0.4, 0.2], [0.2, 0.2, 0.2, 0.4]];
            cfg.source = SourceModel::Markov(MarkovModel::new(q)?);
            cfg
        }
        "capacity-sequential-small" => capacity(2000, &[1.5, 2.0, 3.0], Algorithm::Sequential, 20, 4),
        "capacity-debruijn-small" => capacity(2000, &[1.5, 2.0, 3.0], Algorithm::Debruijn, 20, 5),
        "noise-small" => {
            let mut cfg = ExperimentConfig::new(2000, Algorithm::NoisyGreedy, 6);
            cfg.noise_eps_grid = vec![0.0, 0.01, 0.05];
            cfg.trials_per_point = 20;
            cfg
        }
        "noise-uniform" => {
            let mut cfg = ExperimentConfig::new(10_000, Algorithm::NoisyGreedy, 7);
            cfg.noise_eps_grid = vec![0.0, 0.01, 0.05, 0.1];
            cfg.trials_per_point = 20;
            cfg
        }
        "repeats-small" => {
            let mut cfg = ExperimentConfig::new(20_000, Algorithm::Repeats, 8);
            cfg.repeats = Some(RepeatSpec { read_len: 30, repeat_len: 60, copies: 10, separation: 24, d: Some(4) });
            cfg.rate_factor_grid = vec![0.7, 1.0, 1.5];
            cfg.trials_per_point = 20;
            cfg
        }
        "repeats-bridging" => {
            let mut cfg = ExperimentConfig::new(100_000, Algorithm::Repeats, 9);
            cfg.repeats = Some(RepeatSpec { read_len: 30, repeat_len: 60, copies: 10, separation: 100, d: Some(4) });
            cfg.rate_factor_grid = vec![1.0 / 1.3, 1.0, 1.5];
            cfg.trials_per_point = 100;
            cfg
        }
        other => return Err(Error::UnknownPreset(other.to_string())),
    };
    cfg.validate()?;
    Ok(cfg)
}
