//! MAP overlap detection for noisy reads.

use serde::{Deserialize, Serialize};

use crate::dist::Distribution;
use crate::error::{Error, Result};
use crate::reads::DmcChannel;
use crate::sequence::code_to_char;
use crate::theory::{istar_general, JointModel};

/// Stand-in for `log2(0)` so a single impossible pair vetoes an overlap.
pub const LOG_ZERO: f64 = -1e6;

/// Decision of the per-pair overlap test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Hypothesis {
    /// The two strings are noisy copies of the same genome window.
    Overlap,
    Unrelated,
}

/// Per-symbol log-likelihood ratios and the threshold `theta` (bits/symbol).
#[derive(Debug, Clone, PartialEq)]
pub struct MapScorerConfig {
    ratio: [f64; 16],
    possible: [bool; 16],
    theta: f64,
}

impl MapScorerConfig {
    /// Build from the source law and read channel. Without an explicit
    /// `theta`, the threshold optimizing `I*` is used; for the noiseless
    /// channel it sits just below the smallest matching-symbol ratio, so the
    /// test accepts exactly the equal strings.
    pub fn new(source: &Distribution, channel: &DmcChannel, theta: Option<f64>) -> Result<Self> {
        let joint = JointModel::new(source, channel)?;
        let mut ratio = [LOG_ZERO; 16];
        let mut possible = [false; 16];
        for x in 0..4 {
            for y in 0..4 {
                let k = 4 * x + y;
                let prod = joint.px[x] * joint.py[y];
                if prod > 0.0 {
                    possible[k] = true;
                    if joint.pxy[k] > 0.0 {
                        ratio[k] = (joint.pxy[k] / prod).log2();
                    }
                }
            }
        }
        let theta = match theta {
            Some(t) => t,
            None if channel.is_identity() => {
                let min_match = (0..4)
                    .filter(|&x| possible[5 * x])
                    .map(|x| ratio[5 * x])
                    .fold(f64::INFINITY, f64::min);
                min_match - 1e-9
            }
            None => istar_general(source, channel)?.theta.expect("noisy channel has a threshold"),
        };
        Ok(Self { ratio, possible, theta })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn with_theta(mut self, theta: f64) -> Self {
        self.theta = theta;
        self
    }

    fn check(&self, x: &[u8], y: &[u8]) -> Result<()> {
        for (&a, &b) in x.iter().zip(y) {
            if !self.possible[4 * a as usize + b as usize] {
                return Err(Error::ZeroProbabilityPair(code_to_char(a), code_to_char(b)));
            }
        }
        Ok(())
    }

    /// Log-likelihood ratio of aligned strings, without validity checks.
    #[inline]
    pub(crate) fn llr(&self, x: &[u8], y: &[u8]) -> f64 {
        x.iter().zip(y).map(|(&a, &b)| self.ratio[4 * a as usize + b as usize]).sum()
    }
}

/// Accept the overlap hypothesis when the log-likelihood ratio reaches
/// `len * theta`.
pub fn map_overlap_test(x: &[u8], y: &[u8], cfg: &MapScorerConfig) -> Result<Hypothesis> {
    if x.len() != y.len() {
        return Err(Error::InvalidParameter(format!("strings of length {} and {}", x.len(), y.len())));
    }
    cfg.check(x, y)?;
    Ok(if cfg.llr(x, y) >= x.len() as f64 * cfg.theta {
        Hypothesis::Overlap
    } else {
        Hypothesis::Unrelated
    })
}

/// Largest `l` for which the length-`l` suffix of `ri` and prefix of `rj`
/// pass the MAP test; 0 if none does.
pub fn map_overlap_score(ri: &[u8], rj: &[u8], cfg: &MapScorerConfig) -> Result<usize> {
    let len = ri.len().min(rj.len());
    cfg.check(&ri[ri.len() - len..], &rj[..len])?;
    Ok(map_score_unchecked(ri, rj, cfg, len))
}

/// Same as [`map_overlap_score`] but only tries lengths up to `max_len`.
pub(crate) fn map_score_unchecked(ri: &[u8], rj: &[u8], cfg: &MapScorerConfig, max_len: usize) -> usize {
    (1..=max_len.min(ri.len()).min(rj.len()))
        .rev()
        .find(|&l| cfg.llr(&ri[ri.len() - l..], &rj[..l]) >= l as f64 * cfg.theta)
        .unwrap_or(0)
}
