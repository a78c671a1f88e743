//! Closed-form coverage counts, repeat statistics and rate bounds.
//!
//! Normalized read length is `lbar = L / log2 G` unless a name ends in `_ln`,
//! in which case it is `L / ln G`. Rates are in units of genome length per
//! read-base, i.e. `R = G / (N L)`.

use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use super::entropy::{renyi2, renyi2_rate_markov};
use super::noisy::{istar_general, istar_symmetric};
use crate::dist::Distribution;
use crate::error::{Error, Result};
use crate::reads::DmcChannel;
use crate::sequence::{stationary_distribution, SourceModel};

/// Reads needed so that all `G` positions are covered with probability
/// about `1 - eps`: `ceil((G / L) ln(G / (L eps)))`.
pub fn ncov_estimate(eps: f64, g: usize, l: usize) -> Result<usize> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidParameter(format!("coverage failure target {eps} outside (0, 1)")));
    }
    if l == 0 || g == 0 {
        return Err(Error::InvalidParameter("genome and read length must be positive".into()));
    }
    let (g, l) = (g as f64, l as f64);
    let n = (g / l) * (g / (l * eps)).ln();
    Ok(n.ceil().max(1.0) as usize)
}

/// Expected number of pairs of equal length-`l` windows in a random circular
/// sequence: `(G^2 / 2) 2^(-L H2)`.
pub fn expected_repeats(g: usize, l: usize, p: &Distribution) -> f64 {
    let g = g as f64;
    g * g / 2.0 * (-(l as f64) * renyi2(p)).exp2()
}

/// Expected number of false merge candidates at greedy stage `ell`:
/// `[N e^(-lambda (L - ell))]^2 2^(-ell H2)` with `lambda = N / G`.
pub fn greedy_stage_expectation(n: usize, g: usize, l: usize, ell: usize, p: &Distribution) -> f64 {
    let lambda = n as f64 / g as f64;
    let open_ends = n as f64 * (-lambda * (l as f64 - ell as f64)).exp();
    open_ends * open_ends * (-(ell as f64) * renyi2(p)).exp2()
}

/// Achievable rate of the greedy algorithm: 1 above the threshold, else none.
pub fn greedy_rate(lbar: f64, p: &Distribution) -> f64 {
    if lbar * renyi2(p) > 2.0 {
        1.0
    } else {
        f64::INFINITY
    }
}

/// Rate of the sequential algorithm, `lbar H2 ln2 / (lbar H2 - 1)`.
///
/// This mixes logarithm bases; see [`RateBounds::sequential_caveat`]. Below
/// the pole the value is reported as infinite.
pub fn seq_rate(lbar: f64, p: &Distribution) -> f64 {
    let x = lbar * renyi2(p);
    if x <= 1.0 {
        f64::INFINITY
    } else {
        x * LN_2 / (x - 1.0)
    }
}

/// Rate of the K-mer (de Bruijn) algorithm, `lbar H2 / (lbar H2 - 2)`.
pub fn kmer_rate(lbar: f64, p: &Distribution) -> f64 {
    let x = lbar * renyi2(p);
    if x <= 2.0 {
        f64::INFINITY
    } else {
        x / (x - 2.0)
    }
}

/// Upper bound on the repeat-aware algorithm's rate with `M = G^alpha`
/// copies of a repeat of length `K`, mate separation `J`, all normalized by
/// `ln G`: `(lbar + (jbar - 4 alpha / H2 - kbar) / 2) / alpha`, `H2` in nats.
pub fn repeats_rate_bound(lbar_ln: f64, jbar_ln: f64, kbar_ln: f64, alpha: f64, p: &Distribution) -> Result<f64> {
    if !(alpha > 0.0) {
        return Err(Error::InvalidParameter(format!("alpha = {alpha} must be positive")));
    }
    let h2_nats = renyi2(p) * LN_2;
    let v = (lbar_ln + 0.5 * (jbar_ln - 4.0 * alpha / h2_nats - kbar_ln)) / alpha;
    if v <= 0.0 {
        return Err(Error::NonPositiveBound(v));
    }
    Ok(v)
}

/// Rate at which every repeat copy is bridged with high probability:
/// `(J + 2L - (2d + K)) / (2 ln M)`. An empty bridging window gives 0.
pub fn bridging_rate_bound(j: usize, l: usize, k: usize, d: usize, m: usize) -> Result<f64> {
    if m < 2 {
        return Err(Error::InvalidParameter(format!("bridging bound needs M >= 2, got {m}")));
    }
    let span = bridging_span(j, l, k, d);
    if span < 0 {
        return Err(Error::EmptyBridgingInterval(span));
    }
    Ok(span as f64 / (2.0 * (m as f64).ln()))
}

/// `J + 2L - (2d + K)`, the length of the window a left mate must start in.
pub fn bridging_span(j: usize, l: usize, k: usize, d: usize) -> i64 {
    j as i64 + 2 * l as i64 - (2 * d as i64 + k as i64)
}

/// Unique flank length `d = ceil((1 + slack) 2 ln M / H2)`, `H2` in nats.
pub fn d_parameter(m: usize, slack: f64, p: &Distribution) -> Result<usize> {
    if m == 0 {
        return Err(Error::InvalidParameter("M must be positive".into()));
    }
    if slack < 0.0 {
        return Err(Error::InvalidParameter(format!("slack {slack} is negative")));
    }
    let h2_nats = renyi2(p) * LN_2;
    let d = (1.0 + slack) * 2.0 * (m as f64).ln() / h2_nats;
    Ok((d - 1e-9).ceil().max(0.0) as usize)
}

/// Rates of the three single-copy algorithms at one read length.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateBounds {
    pub greedy: f64,
    pub sequential: f64,
    pub kmer: f64,
    /// The sequential formula multiplies a base-2 entropy by `ln 2`; treat
    /// comparisons against it with care.
    pub sequential_caveat: bool,
}

pub fn rate_bounds(lbar: f64, p: &Distribution) -> RateBounds {
    RateBounds {
        greedy: greedy_rate(lbar, p),
        sequential: seq_rate(lbar, p),
        kmer: kmer_rate(lbar, p),
        sequential_caveat: true,
    }
}

/// Thresholds printed by `shotgun thresholds`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdReport {
    pub h2_bits: f64,
    pub lbar_threshold_log2: f64,
    pub lbar_threshold_ln: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub istar_bits: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub two_over_istar: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub markov_rate_bits: Option<f64>,
}

/// Noiseless threshold `2 / H2` (and the Markov rate when relevant), plus the
/// noisy threshold `2 / I*` when a symmetric error rate is given.
pub fn threshold_report(source: &SourceModel, noise_eps: Option<f64>) -> Result<ThresholdReport> {
    let (h2, markov_rate_bits) = match source {
        SourceModel::Iid(p) => (renyi2(p), None),
        SourceModel::Markov(m) => {
            let r = renyi2_rate_markov(m)?;
            (r, Some(r))
        }
    };
    let (istar_bits, two_over_istar) = match noise_eps {
        None => (None, None),
        Some(eps) => {
            let istar = match source {
                SourceModel::Iid(p) if *p == Distribution::uniform(4) => istar_symmetric(eps)?,
                SourceModel::Iid(p) => istar_general(p, &DmcChannel::symmetric(eps)?)?.bits,
                SourceModel::Markov(m) => {
                    if eps == 0.0 {
                        h2
                    } else {
                        let pi = Distribution::new(stationary_distribution(m)?.to_vec())?;
                        log::warn!("noisy threshold for a Markov source uses its stationary law");
                        istar_general(&pi, &DmcChannel::symmetric(eps)?)?.bits
                    }
                }
            };
            (Some(istar), Some(2.0 / istar))
        }
    };
    let lbar_threshold_log2 = 2.0 / h2;
    Ok(ThresholdReport {
        h2_bits: h2,
        lbar_threshold_log2,
        lbar_threshold_ln: lbar_threshold_log2 / LN_2,
        istar_bits,
        two_over_istar,
        markov_rate_bits,
    })
}
