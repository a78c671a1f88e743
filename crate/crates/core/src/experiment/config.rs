use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sequence::SourceModel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    Greedy,
    Sequential,
    Debruijn,
    NoisyGreedy,
    Repeats,
}

impl std::str::FromStr for Algorithm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "greedy" => Ok(Algorithm::Greedy),
            "sequential" => Ok(Algorithm::Sequential),
            "debruijn" => Ok(Algorithm::Debruijn),
            "noisy-greedy" => Ok(Algorithm::NoisyGreedy),
            "repeats" => Ok(Algorithm::Repeats),
            other => Err(Error::Parse(format!("unknown algorithm {other:?}"))),
        }
    }
}

/// A planted repeat read with mate pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepeatSpec {
    /// Read length `L`, fixed for repeat-rate sweeps.
    pub read_len: usize,
    /// Repeat length `K`.
    pub repeat_len: usize,
    /// Number of copies `M`.
    pub copies: usize,
    /// Gap `J` between mates.
    pub separation: usize,
    /// Unique flank required on each side; derived from `M` when absent.
    #[serde(default)]
    pub d: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepKind {
    Capacity,
    Noise,
    Repeats,
}

fn default_target() -> f64 {
    0.9
}

fn default_resolution() -> f64 {
    0.02
}

/// Everything that determines a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    /// Genome length `G`; for planted repeats, the length before planting.
    pub genome_len: usize,
    /// Normalized read lengths `L / log2 G`.
    pub lbar_grid: Vec<f64>,
    pub source: SourceModel,
    /// Symmetric per-symbol error rate.
    #[serde(default)]
    pub noise_eps: Option<f64>,
    pub algorithm: Algorithm,
    pub trials_per_point: usize,
    /// Success fraction defining `N_min`; coverage counts use `1 - target`.
    #[serde(default = "default_target")]
    pub target_success: f64,
    pub seed: u64,
    #[serde(default)]
    pub kmer_size: Option<usize>,
    #[serde(default)]
    pub repeats: Option<RepeatSpec>,
    /// Error rates for noise sweeps.
    #[serde(default)]
    pub noise_eps_grid: Vec<f64>,
    /// Multiples of the bridging rate bound for repeat sweeps.
    #[serde(default)]
    pub rate_factor_grid: Vec<f64>,
    /// `N_min` bisection stops at this fraction of `N_cov`.
    #[serde(default = "default_resolution")]
    pub nmin_resolution: f64,
}

impl ExperimentConfig {
    pub fn new(genome_len: usize, algorithm: Algorithm, seed: u64) -> Self {
        Self {
            genome_len,
            lbar_grid: Vec::new(),
            source: SourceModel::uniform(),
            noise_eps: None,
            algorithm,
            trials_per_point: 100,
            target_success: default_target(),
            seed,
            kmer_size: None,
            repeats: None,
            noise_eps_grid: Vec::new(),
            rate_factor_grid: Vec::new(),
            nmin_resolution: default_resolution(),
        }
    }

    /// Which sweep the config describes.
    pub fn sweep_kind(&self) -> SweepKind {
        if self.algorithm == Algorithm::Repeats && !self.rate_factor_grid.is_empty() {
            SweepKind::Repeats
        } else if !self.noise_eps_grid.is_empty() {
            SweepKind::Noise
        } else {
            SweepKind::Capacity
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.genome_len == 0 {
            return Err(Error::InvalidParameter("genome length must be positive".into()));
        }
        if self.trials_per_point == 0 {
            return Err(Error::InvalidParameter("need at least one trial per point".into()));
        }
        if !(self.target_success > 0.0 && self.target_success < 1.0) {
            return Err(Error::InvalidParameter(format!("target success {} outside (0, 1)", self.target_success)));
        }
        if let Some(eps) = self.noise_eps {
            if !(0.0..0.75).contains(&eps) {
                return Err(Error::InvalidParameter(format!("noise rate {eps} outside [0, 3/4)")));
            }
        }
        if self.algorithm == Algorithm::Repeats && self.repeats.is_none() {
            return Err(Error::InvalidParameter("repeat sweeps need a repeat spec".into()));
        }
        if self.noise_eps_grid.iter().any(|e| !(0.0..=0.2).contains(e)) {
            return Err(Error::InvalidParameter("noise sweep rates must lie in [0, 0.2]".into()));
        }
        if self.rate_factor_grid.iter().any(|f| !(*f > 0.0)) {
            return Err(Error::InvalidParameter("rate factors must be positive".into()));
        }
        if self.lbar_grid.iter().any(|l| !(*l > 0.0)) {
            return Err(Error::InvalidParameter("normalized read lengths must be positive".into()));
        }
        Ok(())
    }

    /// Length of the sequenced genome, including planted copies.
    pub fn effective_genome_len(&self) -> usize {
        match &self.repeats {
            Some(r) => self.genome_len + r.copies * r.repeat_len,
            None => self.genome_len,
        }
    }

    /// Coverage failure target `1 - target_success`.
    pub fn coverage_eps(&self) -> f64 {
        1.0 - self.target_success
    }

    /// `L = round(lbar log2 G)`, at least 1.
    pub fn read_len_for(&self, lbar: f64) -> usize {
        read_len_for(lbar, self.effective_genome_len())
    }
}

pub fn read_len_for(lbar: f64, g: usize) -> usize {
    ((lbar * (g as f64).log2()).round() as usize).max(1)
}
