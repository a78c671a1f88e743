use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::reads::DmcChannel;
use crate::theory::{bridging_rate_bound, istar_general, istar_symmetric, ncov_estimate, repeats_rate_bound};

use super::config::{Algorithm, ExperimentConfig, SweepKind};
use super::nmin::NminEstimate;
use super::trial::TrialRunner;

pub const CAPACITY_CSV_HEADER: &str = "lbar,L,ncov,nmin,ratio,success_rate,trials";
pub const NOISE_CSV_HEADER: &str = "eps,two_over_istar,L_theory,N,L_empirical,lbar_empirical,success_rate,trials";
pub const REPEATS_CSV_HEADER: &str =
    "factor,rate,n_reads,bridging_bound,coverage_bound,repeats_bound,success_rate,trials";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub lbar: f64,
    pub l: usize,
    pub ncov: usize,
    /// `None` is the infinite sentinel.
    pub nmin: Option<usize>,
    pub ratio: Option<f64>,
    pub success_rate: f64,
    pub trials: usize,
}

impl SweepRow {
    fn from_estimate(lbar: f64, e: &NminEstimate) -> Self {
        Self {
            lbar,
            l: e.l,
            ncov: e.ncov,
            nmin: e.nmin,
            ratio: e.ratio(),
            success_rate: e.success_rate,
            trials: e.trials,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseRow {
    pub eps: f64,
    pub two_over_istar: f64,
    pub l_theory: usize,
    /// Reads per trial, fixed across the read-length search.
    pub n: usize,
    /// Shortest passing read length; `None` if even the longest tried failed.
    pub l_empirical: Option<usize>,
    pub lbar_empirical: Option<f64>,
    pub success_rate: f64,
    pub trials: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepeatsRow {
    pub factor: f64,
    /// `G / N` at this point.
    pub rate: f64,
    pub n_reads: usize,
    pub bridging_bound: f64,
    /// `G / N_cov` at the configured coverage target.
    pub coverage_bound: f64,
    /// `None` when the bound is not positive.
    pub repeats_bound: Option<f64>,
    pub success_rate: f64,
    pub trials: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "sweep", content = "rows", rename_all = "kebab-case")]
pub enum SweepOutput {
    Capacity(Vec<SweepRow>),
    Noise(Vec<NoiseRow>),
    Repeats(Vec<RepeatsRow>),
}

fn opt<T: ToString>(v: Option<T>, none: &str) -> String {
    v.map_or_else(|| none.to_string(), |x| x.to_string())
}

impl SweepOutput {
    pub fn write_csv<W: Write + ?Sized>(&self, w: &mut W) -> Result<()> {
        match self {
            SweepOutput::Capacity(rows) => {
                writeln!(w, "{CAPACITY_CSV_HEADER}")?;
                for r in rows {
                    writeln!(
                        w,
                        "{},{},{},{},{},{},{}",
                        r.lbar,
                        r.l,
                        r.ncov,
                        opt(r.nmin, "inf"),
                        opt(r.ratio, "inf"),
                        r.success_rate,
                        r.trials
                    )?;
                }
            }
            SweepOutput::Noise(rows) => {
                writeln!(w, "{NOISE_CSV_HEADER}")?;
                for r in rows {
                    writeln!(
                        w,
                        "{},{},{},{},{},{},{},{}",
                        r.eps,
                        r.two_over_istar,
                        r.l_theory,
                        r.n,
                        opt(r.l_empirical, "inf"),
                        opt(r.lbar_empirical, "inf"),
                        r.success_rate,
                        r.trials
                    )?;
                }
            }
            SweepOutput::Repeats(rows) => {
                writeln!(w, "{REPEATS_CSV_HEADER}")?;
                for r in rows {
                    writeln!(
                        w,
                        "{},{},{},{},{},{},{},{}",
                        r.factor,
                        r.rate,
                        r.n_reads,
                        r.bridging_bound,
                        r.coverage_bound,
                        opt(r.repeats_bound, "none"),
                        r.success_rate,
                        r.trials
                    )?;
                }
            }
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("ascii csv")
    }
}

/// Estimate `N_min` at every grid point.
pub fn sweep_capacity(cfg: &ExperimentConfig) -> Result<Vec<SweepRow>> {
    if cfg.lbar_grid.is_empty() {
        return Err(Error::InvalidParameter("capacity sweep needs a read-length grid".into()));
    }
    let runner = TrialRunner::new(cfg)?;
    cfg.lbar_grid
        .iter()
        .map(|&lbar| {
            let l = cfg.read_len_for(lbar);
            log::info!("capacity sweep: lbar={lbar} L={l}");
            Ok(SweepRow::from_estimate(lbar, &runner.estimate_nmin(l)?))
        })
        .collect()
}

/// Theoretical `2 / I*` and the shortest read length at which noisy greedy
/// reaches the target, at a read count twice the coverage requirement of the
/// theoretical length.
pub fn sweep_noise(cfg: &ExperimentConfig) -> Result<Vec<NoiseRow>> {
    if cfg.noise_eps_grid.is_empty() {
        return Err(Error::InvalidParameter("noise sweep needs an error-rate grid".into()));
    }
    let g = cfg.genome_len;
    let log_g = (g as f64).log2();
    let marginal = cfg.source.marginal()?;
    let uniform = marginal.masses().iter().all(|&p| (p - 0.25).abs() < 1e-12);
    let mut rows = Vec::with_capacity(cfg.noise_eps_grid.len());
    for &eps in &cfg.noise_eps_grid {
        let istar = if uniform {
            istar_symmetric(eps)?
        } else {
            istar_general(&marginal, &DmcChannel::symmetric(eps)?)?.bits
        };
        let two_over = 2.0 / istar;
        let l_theory = ((two_over * log_g).round() as usize).clamp(2, g);
        let n = 2 * ncov_estimate(cfg.coverage_eps(), g, l_theory)?;
        let mut point = cfg.clone();
        point.algorithm = Algorithm::NoisyGreedy;
        point.noise_eps = Some(eps);
        let runner = TrialRunner::new(&point)?;
        log::info!("noise sweep: eps={eps} L_theory={l_theory} N={n}");

        let mut lo = (l_theory / 2).max(1);
        let mut hi = (2 * l_theory + 4).min(g);
        let top = runner.evaluate(hi, n, true)?;
        let (l_emp, rate, trials) = if !top.passed {
            (None, top.success_rate(), top.trials)
        } else {
            if runner.evaluate(lo, n, true)?.passed {
                hi = lo;
            } else {
                while hi - lo > 1 {
                    let mid = lo + (hi - lo) / 2;
                    if runner.evaluate(mid, n, true)?.passed {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
            }
            let full = runner.evaluate(hi, n, false)?;
            (Some(hi), full.success_rate(), full.trials)
        };
        rows.push(NoiseRow {
            eps,
            two_over_istar: two_over,
            l_theory,
            n,
            l_empirical: l_emp,
            lbar_empirical: l_emp.map(|l| l as f64 / log_g),
            success_rate: rate,
            trials,
        });
    }
    Ok(rows)
}

/// Success rate of the repeat pipeline at multiples of the binding rate,
/// the smaller of the bridging bound and the coverage rate `G / N_cov`
/// (rates are `G / N`).
pub fn sweep_repeats(cfg: &ExperimentConfig) -> Result<Vec<RepeatsRow>> {
    let spec = cfg
        .repeats
        .as_ref()
        .ok_or_else(|| Error::InvalidParameter("repeat sweep needs a repeat spec".into()))?;
    if cfg.rate_factor_grid.is_empty() {
        return Err(Error::InvalidParameter("repeat sweep needs a rate grid".into()));
    }
    if spec.repeat_len < spec.read_len {
        return Err(Error::InvalidParameter("repeat sweeps need K >= L".into()));
    }
    let mut point = cfg.clone();
    point.algorithm = Algorithm::Repeats;
    let runner = TrialRunner::new(&point)?;
    let g = cfg.effective_genome_len();
    let l = spec.read_len;
    let bridging = bridging_rate_bound(spec.separation, l, spec.repeat_len, runner.d(), spec.copies)?;
    if bridging <= 0.0 {
        return Err(Error::NonPositiveBound(bridging));
    }
    let coverage = g as f64 / ncov_estimate(cfg.coverage_eps(), g, l)? as f64;
    let binding = bridging.min(coverage);
    let ln_g = (g as f64).ln();
    let alpha = (spec.copies as f64).ln() / ln_g;
    let repeats_bound = repeats_rate_bound(
        l as f64 / ln_g,
        spec.separation as f64 / ln_g,
        spec.repeat_len as f64 / ln_g,
        alpha,
        &cfg.source.marginal()?,
    )
    .ok();
    cfg.rate_factor_grid
        .iter()
        .map(|&factor| {
            let rate = factor * binding;
            let n = (g as f64 / rate).ceil() as usize;
            log::info!("repeat sweep: factor={factor} N={n}");
            let e = runner.evaluate(l, n, false)?;
            Ok(RepeatsRow {
                factor,
                rate,
                n_reads: n,
                bridging_bound: bridging,
                coverage_bound: coverage,
                repeats_bound,
                success_rate: e.success_rate(),
                trials: e.trials,
            })
        })
        .collect()
}

/// Run whichever sweep the config describes.
pub fn run_sweep(cfg: &ExperimentConfig) -> Result<SweepOutput> {
    Ok(match cfg.sweep_kind() {
        SweepKind::Capacity => SweepOutput::Capacity(sweep_capacity(cfg)?),
        SweepKind::Noise => SweepOutput::Noise(sweep_noise(cfg)?),
        SweepKind::Repeats => SweepOutput::Repeats(sweep_repeats(cfg)?),
    })
}
