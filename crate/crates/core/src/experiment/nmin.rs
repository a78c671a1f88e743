use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::theory::ncov_estimate;

use super::trial::TrialRunner;

/// Trials are evaluated in fixed chunks; a point stops early once the
/// verdict is settled. The verdict never depends on the thread count.
const CHUNK: usize = 8;
/// Upward search gives up beyond this multiple of `N_cov`.
pub const NMIN_CAP_FACTOR: usize = 64;

/// Success count of one `(L, N)` point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointEval {
    pub n: usize,
    pub successes: usize,
    pub trials: usize,
    pub passed: bool,
}

impl PointEval {
    pub fn success_rate(&self) -> f64 {
        if self.trials == 0 {
            0.0
        } else {
            self.successes as f64 / self.trials as f64
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NminEstimate {
    pub l: usize,
    pub ncov: usize,
    /// `None` when the cap was reached: reconstruction is repeat-limited.
    pub nmin: Option<usize>,
    /// Success rate at `nmin`, or at the last point tried when infinite.
    pub success_rate: f64,
    pub trials: usize,
    /// Every point evaluated, in search order.
    pub evaluations: Vec<PointEval>,
    /// Some smaller `N` passed while a larger one failed.
    pub non_monotone: bool,
}

impl NminEstimate {
    pub fn ratio(&self) -> Option<f64> {
        self.nmin.map(|n| n as f64 / self.ncov as f64)
    }
}

/// Successes needed out of `trials` to reach `target`.
pub fn required_successes(target: f64, trials: usize) -> usize {
    ((target * trials as f64) - 1e-9).ceil().max(0.0) as usize
}

impl TrialRunner {
    /// Run the trials of one `(L, N)` point, in trial order. With
    /// `early_stop` the run ends as soon as the target is met or missed.
    pub fn evaluate(&self, l: usize, n: usize, early_stop: bool) -> Result<PointEval> {
        let total = self.config().trials_per_point;
        let need = required_successes(self.config().target_success, total);
        let (mut successes, mut run) = (0usize, 0usize);
        for lo in (0..total).step_by(CHUNK) {
            let hi = (lo + CHUNK).min(total);
            let results: Vec<Result<bool>> =
                (lo..hi).into_par_iter().map(|t| self.run(l, n, self.trial_seed(l, t))).collect();
            for r in results {
                successes += r? as usize;
                run += 1;
            }
            if early_stop && (successes >= need || successes + (total - run) < need) {
                break;
            }
        }
        Ok(PointEval { n, successes, trials: run, passed: successes >= need })
    }

    /// Smallest `N` whose success rate reaches the target, by doubling from
    /// `N_cov` and then bisecting. The search assumes success is monotone in
    /// `N`; violations seen along the way are flagged and logged.
    pub fn estimate_nmin(&self, l: usize) -> Result<NminEstimate> {
        let cfg = self.config();
        let ncov = ncov_estimate(cfg.coverage_eps(), cfg.effective_genome_len(), l)?;
        let floor = (ncov / 2).max(1);
        let cap = NMIN_CAP_FACTOR * ncov;
        let mut evals = Vec::new();
        let check = |n: usize, evals: &mut Vec<PointEval>| -> Result<bool> {
            let e = self.evaluate(l, n, true)?;
            evals.push(e);
            Ok(e.passed)
        };

        let (mut fail, mut pass): (usize, Option<usize>);
        if check(ncov, &mut evals)? {
            pass = Some(ncov);
            fail = 0;
            let mut n = ncov;
            while n > floor {
                let m = (n / 2).max(floor);
                if check(m, &mut evals)? {
                    n = m;
                    pass = Some(m);
                } else {
                    fail = m;
                    break;
                }
            }
            if fail == 0 {
                log::warn!("L={l}: target met at the sanity floor N={floor}");
            }
        } else {
            fail = ncov;
            pass = None;
            let mut n = ncov;
            while n < cap {
                n = (2 * n).min(cap);
                if check(n, &mut evals)? {
                    pass = Some(n);
                    break;
                }
                fail = n;
            }
        }

        let Some(mut hi) = pass else {
            let last = *evals.last().expect("at least one evaluation");
            return Ok(NminEstimate {
                l,
                ncov,
                nmin: None,
                success_rate: last.success_rate(),
                trials: last.trials,
                non_monotone: non_monotone(&evals),
                evaluations: evals,
            });
        };
        let step = ((cfg.nmin_resolution * ncov as f64) as usize).max(1);
        if fail > 0 {
            while hi - fail > step {
                let mid = fail + (hi - fail) / 2;
                if check(mid, &mut evals)? {
                    hi = mid;
                } else {
                    fail = mid;
                }
            }
        }
        let full = self.evaluate(l, hi, false)?;
        let flagged = non_monotone(&evals);
        if flagged {
            log::warn!("L={l}: success rate not monotone in N along the search");
        }
        Ok(NminEstimate {
            l,
            ncov,
            nmin: Some(hi),
            success_rate: full.success_rate(),
            trials: full.trials,
            evaluations: evals,
            non_monotone: flagged,
        })
    }
}

fn non_monotone(evals: &[PointEval]) -> bool {
    evals.iter().any(|a| a.passed && evals.iter().any(|b| b.n > a.n && !b.passed))
}
