//! Overlap detection limits for reads passed through a noisy channel.
//!
//! Two reads overlapping on `l` symbols are an i.i.d. sample of `l` pairs from
//! the joint law `P_XY`; two unrelated reads are a sample from `P_X P_Y`. The
//! detectable rate `I*` balances the false-alarm exponent (which is paid for
//! roughly `G^2` candidate pairs) against the miss exponent.

use serde::{Deserialize, Serialize};

use super::entropy::{bernoulli_divergence, kl_divergence, renyi2};
use crate::dist::Distribution;
use crate::error::{Error, Result};
use crate::reads::DmcChannel;

const GOLDEN_TOL: f64 = 1e-8;
const GOLDEN_ITERS: usize = 200;
const MU_TOL: f64 = 1e-12;

/// Joint law of the symbols two reads report for the same genome position.
#[derive(Debug, Clone, PartialEq)]
pub struct JointModel {
    /// `pxy[4 * x + y]`.
    pub pxy: [f64; 16],
    pub px: [f64; 4],
    pub py: [f64; 4],
}

impl JointModel {
    pub fn new(source: &Distribution, channel: &DmcChannel) -> Result<Self> {
        let p = source.as_array4()?;
        let mut pxy = [0.0; 16];
        for x in 0..4u8 {
            for y in 0..4u8 {
                pxy[4 * x as usize + y as usize] =
                    (0..4u8).map(|s| p[s as usize] * channel.prob(x, s) * channel.prob(y, s)).sum();
            }
        }
        let mut px = [0.0; 4];
        let mut py = [0.0; 4];
        for x in 0..4 {
            for y in 0..4 {
                px[x] += pxy[4 * x + y];
                py[y] += pxy[4 * x + y];
            }
        }
        Ok(Self { pxy, px, py })
    }

    pub fn product(&self) -> [f64; 16] {
        let mut prod = [0.0; 16];
        for x in 0..4 {
            for y in 0..4 {
                prod[4 * x + y] = self.px[x] * self.py[y];
            }
        }
        prod
    }

    /// Mutual information `I(X;Y)` in bits.
    pub fn mutual_information(&self) -> f64 {
        kl_divergence(&self.pxy, &self.product()).unwrap_or(f64::INFINITY)
    }
}

/// `P_mu` proportional to `P_XY^mu (P_X P_Y)^(1 - mu)`.
pub fn tilted_distribution(joint: &JointModel, mu: f64) -> Result<[f64; 16]> {
    tilt(&joint.pxy, &joint.product(), mu)
}

fn tilt(pxy: &[f64; 16], prod: &[f64; 16], mu: f64) -> Result<[f64; 16]> {
    if !(0.0..=1.0).contains(&mu) {
        return Err(Error::InvalidParameter(format!("mu = {mu} outside [0, 1]")));
    }
    let mut w = [0.0; 16];
    for k in 0..16 {
        if pxy[k] == 0.0 && prod[k] == 0.0 {
            continue;
        }
        w[k] = pxy[k].powf(mu) * prod[k].powf(1.0 - mu);
    }
    let z: f64 = w.iter().sum();
    if !(z > 0.0) {
        return Err(Error::DegenerateChannel(format!("tilted distribution vanishes at mu = {mu}")));
    }
    w.iter_mut().for_each(|v| *v /= z);
    Ok(w)
}

/// The one-parameter family `P_mu` with the map `mu -> theta(mu)`, where
/// `theta(mu) = D(P_mu || P_X P_Y) - D(P_mu || P_XY)`.
#[derive(Debug, Clone)]
pub struct TiltFamily {
    pxy: [f64; 16],
    prod: [f64; 16],
    theta_lo: f64,
    theta_hi: f64,
}

impl TiltFamily {
    /// Fails when some pair has positive product mass but zero joint mass
    /// (the lower end of the range is then unbounded), or when the reads are
    /// independent of each other.
    pub fn new(joint: &JointModel) -> Result<Self> {
        let prod = joint.product();
        for k in 0..16 {
            if prod[k] > 0.0 && joint.pxy[k] == 0.0 {
                return Err(Error::DegenerateChannel(format!(
                    "pair ({}, {}) has zero joint probability",
                    crate::sequence::ALPHABET[k / 4],
                    crate::sequence::ALPHABET[k % 4]
                )));
            }
        }
        let mut fam = Self { pxy: joint.pxy, prod, theta_lo: 0.0, theta_hi: 0.0 };
        fam.theta_lo = fam.theta(0.0)?;
        fam.theta_hi = fam.theta(1.0)?;
        if fam.theta_hi - fam.theta_lo < 1e-12 {
            return Err(Error::DegenerateChannel("reads carry no information about each other (I* = 0)".into()));
        }
        // Monotonicity is what makes the inversion well posed; check it on a grid.
        let mut prev = fam.theta_lo;
        for i in 1..=64 {
            let t = fam.theta(i as f64 / 64.0)?;
            if t < prev - 1e-12 {
                return Err(Error::InvalidParameter(format!("theta(mu) not monotone near mu = {}", i as f64 / 64.0)));
            }
            prev = t;
        }
        Ok(fam)
    }

    /// Achievable threshold range `[-D(P_X P_Y || P_XY), I(X;Y)]`.
    pub fn theta_range(&self) -> (f64, f64) {
        (self.theta_lo, self.theta_hi)
    }

    pub fn tilted(&self, mu: f64) -> Result<[f64; 16]> {
        tilt(&self.pxy, &self.prod, mu)
    }

    /// Expected per-symbol log-likelihood ratio under `P_mu`.
    pub fn theta(&self, mu: f64) -> Result<f64> {
        let p = self.tilted(mu)?;
        Ok((0..16)
            .filter(|&k| p[k] > 0.0)
            .map(|k| p[k] * (self.pxy[k] / self.prod[k]).log2())
            .sum())
    }

    /// Invert `theta(mu)` by bisection.
    pub fn solve_mu(&self, theta: f64) -> Result<f64> {
        let (lo_t, hi_t) = (self.theta_lo, self.theta_hi);
        let slack = 1e-12 * (1.0 + hi_t.abs().max(lo_t.abs()));
        if theta > hi_t + slack || theta < lo_t - slack {
            return Err(Error::ThetaOutOfRange { theta, lo: lo_t, hi: hi_t });
        }
        if theta >= hi_t - slack {
            return Ok(1.0);
        }
        if theta <= lo_t + slack {
            return Ok(0.0);
        }
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            let t = self.theta(mid)?;
            if (t - theta).abs() <= 1e-14 {
                return Ok(mid);
            }
            if t < theta {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= MU_TOL * 1e-3 {
                break;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// `D(P_mu || P_XY)` and `D(P_mu || P_X P_Y)`, the miss and false-alarm
    /// exponents at threshold `theta(mu)`.
    pub fn exponents(&self, mu: f64) -> Result<(f64, f64)> {
        let p = self.tilted(mu)?;
        Ok((kl_divergence(&p, &self.pxy)?, kl_divergence(&p, &self.prod)?))
    }
}

/// Invert `theta(mu)` for the joint law induced by `source` and `channel`.
pub fn solve_mu(joint: &JointModel, theta: f64) -> Result<f64> {
    TiltFamily::new(joint)?.solve_mu(theta)
}

/// Result of the `I*` optimization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IStar {
    pub bits: f64,
    /// Optimal per-symbol MAP threshold; absent for the noiseless channel.
    pub theta: Option<f64>,
    pub mu: Option<f64>,
}

/// `I* = max over theta of min(2 D(P_mu || P_XY), D(P_mu || P_X P_Y))`, by
/// golden-section search over the achievable threshold range.
///
/// The identity channel is handled separately: there `I*` is the order-2
/// Renyi entropy of the source.
pub fn istar_general(source: &Distribution, channel: &DmcChannel) -> Result<IStar> {
    if channel.is_identity() {
        return Ok(IStar { bits: renyi2(source), theta: None, mu: None });
    }
    let fam = TiltFamily::new(&JointModel::new(source, channel)?)?;
    let objective = |theta: f64| -> Result<f64> {
        let mu = fam.solve_mu(theta)?;
        let (miss, fa) = fam.exponents(mu)?;
        Ok((2.0 * miss).min(fa))
    };
    let (mut a, mut b) = fam.theta_range();
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = objective(c)?;
    let mut fd = objective(d)?;
    let mut iters = 0;
    while (b - a).abs() > GOLDEN_TOL {
        iters += 1;
        if iters > GOLDEN_ITERS {
            return Err(Error::NoConvergence { what: "I* golden-section search", iterations: GOLDEN_ITERS });
        }
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = objective(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = objective(d)?;
        }
    }
    let theta = 0.5 * (a + b);
    let mu = fam.solve_mu(theta)?;
    Ok(IStar { bits: objective(theta)?, theta: Some(theta), mu: Some(mu) })
}

/// Probability that two independent noisy copies of one symbol disagree
/// under the symmetric channel.
pub fn eta(eps: f64) -> f64 {
    2.0 * eps - 4.0 * eps * eps / 3.0
}

/// Closed form of `I*` for a uniform source and a symmetric channel:
/// `D(a || 3/4)` at the crossing `D(a || 3/4) = 2 D(a || eta)`.
pub fn istar_symmetric(eps: f64) -> Result<f64> {
    if !(0.0..0.75).contains(&eps) {
        return Err(Error::DegenerateChannel(format!("symmetric error rate {eps} outside [0, 3/4)")));
    }
    if eps == 0.0 {
        return Ok(2.0);
    }
    let e = eta(eps);
    let h = |a: f64| -> Result<f64> { Ok(bernoulli_divergence(a, 0.75)? - 2.0 * bernoulli_divergence(a, e)?) };
    let (mut lo, mut hi) = (e, 0.75);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if h(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    bernoulli_divergence(0.5 * (lo + hi), 0.75)
}
