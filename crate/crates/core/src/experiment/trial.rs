use crate::assembly::{
    debruijn_assemble, default_kmer_size, greedy_assemble, noisy_greedy_assemble, repeats_assemble, sequential_assemble,
    OverlapScorer,
};
use crate::diagnostics::verify_layout;
use crate::dist::Distribution;
use crate::error::{Error, Result};
use crate::overlap::MapScorerConfig;
use crate::reads::{apply_noise, sample_mate_pairs, sample_reads, DmcChannel};
use crate::rng::{derive_seed, rng_from_seed, stream};
use crate::sequence::plant_repeats;
use crate::theory::d_parameter;

use super::config::{Algorithm, ExperimentConfig};

/// Per-configuration state shared by all trials of a sweep.
#[derive(Debug, Clone)]
pub struct TrialRunner {
    cfg: ExperimentConfig,
    marginal: Distribution,
    channel: Option<DmcChannel>,
    scorer: Option<OverlapScorer>,
    d: usize,
}

impl TrialRunner {
    pub fn new(cfg: &ExperimentConfig) -> Result<Self> {
        cfg.validate()?;
        let marginal = cfg.source.marginal()?;
        let channel = match cfg.noise_eps {
            Some(eps) if eps > 0.0 => Some(DmcChannel::symmetric(eps)?),
            _ => None,
        };
        let scorer = match cfg.algorithm {
            Algorithm::NoisyGreedy => {
                let ch = channel.clone().unwrap_or_else(DmcChannel::identity);
                Some(OverlapScorer::Map(MapScorerConfig::new(&marginal, &ch, None)?))
            }
            _ => None,
        };
        let d = match &cfg.repeats {
            Some(r) => match r.d {
                Some(d) => d,
                None => d_parameter(r.copies, 0.0, &marginal)?,
            },
            None => 0,
        };
        Ok(Self { cfg: cfg.clone(), marginal, channel, scorer, d })
    }

    pub fn config(&self) -> &ExperimentConfig {
        &self.cfg
    }

    /// Unique flank length used by the repeat pipeline.
    pub fn d(&self) -> usize {
        self.d
    }

    /// Seed of trial `t` at read length `l`. It does not depend on `N`, so
    /// read sets for increasing `N` extend one another.
    pub fn trial_seed(&self, l: usize, t: usize) -> u64 {
        derive_seed(self.cfg.seed, &[l as u64, t as u64])
    }

    /// One generate, sample, assemble, compare cycle with `n` reads.
    pub fn run(&self, l: usize, n: usize, trial_seed: u64) -> Result<bool> {
        if n == 0 {
            return Ok(false);
        }
        let cfg = &self.cfg;
        let genome_seed = derive_seed(trial_seed, &[stream::GENOME]);
        let read_seed = derive_seed(trial_seed, &[stream::READS]);
        let noise_seed = derive_seed(trial_seed, &[stream::NOISE]);

        if cfg.algorithm == Algorithm::Repeats {
            let spec = cfg.repeats.as_ref().ok_or_else(|| Error::InvalidParameter("missing repeat spec".into()))?;
            let base = cfg.source.generate_with(cfg.genome_len, &mut rng_from_seed(genome_seed))?;
            let repeat = cfg
                .source
                .generate_with(spec.repeat_len, &mut rng_from_seed(derive_seed(trial_seed, &[stream::REPEAT])))?;
            let planted = plant_repeats(&base, &repeat, spec.copies, derive_seed(trial_seed, &[stream::PLANT]))?;
            let genome = planted.sequence;
            let pairs = sample_mate_pairs(&genome, n.div_ceil(2), l, spec.separation, read_seed)?;
            let outcome = repeats_assemble(&pairs.blind(), spec.repeat_len, self.d)?;
            return Ok(outcome.reconstructs(&genome));
        }

        let genome = cfg.source.generate_with(cfg.genome_len, &mut rng_from_seed(genome_seed))?;
        let mut reads = sample_reads(&genome, n, l, read_seed)?;
        if let Some(ch) = &self.channel {
            reads = apply_noise(&reads, ch, noise_seed)?;
        }
        let blind = reads.blind();
        let outcome = match cfg.algorithm {
            Algorithm::Greedy => greedy_assemble(blind),
            Algorithm::Sequential => sequential_assemble(blind),
            Algorithm::Debruijn => {
                let k = cfg.kmer_size.unwrap_or_else(|| default_kmer_size(genome.len(), l, &self.marginal));
                debruijn_assemble(blind, k.min(l))?
            }
            Algorithm::NoisyGreedy => {
                let scorer = self.scorer.as_ref().expect("scorer built for noisy runs");
                let outcome = noisy_greedy_assemble(blind, scorer)?;
                return match verify_layout(&outcome, &reads) {
                    Ok(ok) => Ok(ok),
                    Err(Error::LayoutAbsent) => Ok(false),
                    Err(e) => Err(e),
                };
            }
            Algorithm::Repeats => unreachable!(),
        };
        Ok(outcome.reconstructs(&genome))
    }
}

/// Run a single trial; see [`TrialRunner::run`].
pub fn run_trial(cfg: &ExperimentConfig, l: usize, n: usize, trial_seed: u64) -> Result<bool> {
    TrialRunner::new(cfg)?.run(l, n, trial_seed)
}
