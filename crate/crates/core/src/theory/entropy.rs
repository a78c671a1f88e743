//! Entropies, divergences and the Perron root used by the Markov rate.

use crate::dist::Distribution;
use crate::error::{Error, Result};
use crate::sequence::{MarkovModel, Matrix4};

/// Order-2 Renyi entropy in bits: `-log2 sum p^2`.
pub fn renyi2(p: &Distribution) -> f64 {
    renyi2_masses(p.masses())
}

pub(crate) fn renyi2_masses(p: &[f64]) -> f64 {
    let collision: f64 = p.iter().map(|m| m * m).sum();
    -collision.log2()
}

/// Kullback-Leibler divergence `D(p || q)` in bits.
pub fn kl_divergence(p: &[f64], q: &[f64]) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::InvalidParameter(format!("length mismatch {} vs {}", p.len(), q.len())));
    }
    let mut d = 0.0;
    for (i, (&a, &b)) in p.iter().zip(q).enumerate() {
        if a <= 0.0 {
            continue;
        }
        if b <= 0.0 {
            return Err(Error::AbsoluteContinuity(format!("p[{i}] = {a} but q[{i}] = 0")));
        }
        d += a * (a / b).log2();
    }
    Ok(d.max(0.0))
}

/// Binary divergence `D(a || b)` in bits.
pub fn bernoulli_divergence(a: f64, b: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&a) || !(0.0..=1.0).contains(&b) {
        return Err(Error::InvalidParameter(format!("bernoulli parameters {a}, {b}")));
    }
    kl_divergence(&[a, 1.0 - a], &[b, 1.0 - b])
}

/// Perron root of a non-negative 4x4 matrix.
///
/// Power iteration runs on `M + I`, which has the same Perron vector but is
/// aperiodic, so periodic chains converge too.
pub fn spectral_radius(m: &Matrix4) -> Result<f64> {
    const MAX_ITERS: usize = 100_000;
    if m.iter().flatten().any(|v| !v.is_finite() || *v < 0.0) {
        return Err(Error::InvalidParameter("spectral radius needs a non-negative matrix".into()));
    }
    let mut v = [1.0; 4];
    let mut rho = 0.0;
    for _ in 0..MAX_ITERS {
        let mut w = [0.0; 4];
        for (i, wi) in w.iter_mut().enumerate() {
            *wi = v[i] + (0..4).map(|j| m[i][j] * v[j]).sum::<f64>();
        }
        let norm: f64 = w.iter().sum();
        if norm == 0.0 {
            return Ok(0.0);
        }
        rho = norm / v.iter().sum::<f64>() - 1.0;
        w.iter_mut().for_each(|x| *x /= norm);
        // Residual of the unshifted eigen-equation.
        let resid: f64 = (0..4)
            .map(|i| ((0..4).map(|j| m[i][j] * w[j]).sum::<f64>() - rho * w[i]).abs())
            .sum();
        v = w;
        if resid <= 1e-13 * rho.max(1e-300) || resid <= 1e-15 {
            return Ok(rho.max(0.0));
        }
    }
    log::warn!("spectral radius stalled near {rho}");
    Err(Error::NoConvergence { what: "spectral radius", iterations: MAX_ITERS })
}

/// Collision-entropy rate of a Markov source in bits per symbol:
/// `log2(1 / rho([q_ij^2]))`.
pub fn renyi2_rate_markov(model: &MarkovModel) -> Result<f64> {
    let q = model.matrix();
    let mut sq = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            sq[i][j] = q[i][j] * q[i][j];
        }
    }
    let rho = spectral_radius(&sq)?;
    Ok(-rho.log2())
}
