use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on the total mass of a probability vector.
pub const MASS_TOL: f64 = 1e-9;

/// A finite probability distribution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Distribution {
    masses: Vec<f64>,
}

impl Distribution {
    pub fn new(masses: Vec<f64>) -> Result<Self> {
        if masses.is_empty() {
            return Err(Error::InvalidDistribution("empty".into()));
        }
        if let Some(m) = masses.iter().find(|m| !m.is_finite() || **m < 0.0) {
            return Err(Error::InvalidDistribution(format!("mass {m} is not a probability")));
        }
        let total: f64 = masses.iter().sum();
        if (total - 1.0).abs() > MASS_TOL {
            return Err(Error::InvalidDistribution(format!("masses sum to {total}")));
        }
        Ok(Self { masses })
    }

    pub fn uniform(n: usize) -> Self {
        Self { masses: vec![1.0 / n as f64; n] }
    }

    /// Normalize non-negative weights.
    pub fn from_weights(weights: Vec<f64>) -> Result<Self> {
        let total: f64 = weights.iter().sum();
        if !(total > 0.0) || !total.is_finite() {
            return Err(Error::InvalidDistribution(format!("weights sum to {total}")));
        }
        Self::new(weights.into_iter().map(|w| w / total).collect())
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn len(&self) -> usize {
        self.masses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masses.is_empty()
    }

    /// Four masses, for nucleotide distributions.
    pub fn as_array4(&self) -> Result<[f64; 4]> {
        <[f64; 4]>::try_from(self.masses.as_slice())
            .map_err(|_| Error::InvalidDistribution(format!("expected 4 masses, got {}", self.len())))
    }

    /// Parse `uniform` or a comma-separated list of masses.
    pub fn parse_nucleotide(s: &str) -> Result<Self> {
        if s.trim().eq_ignore_ascii_case("uniform") {
            return Ok(Self::uniform(4));
        }
        let masses = s
            .split(',')
            .map(|t| t.trim().parse::<f64>().map_err(|e| Error::Parse(format!("{t:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        if masses.len() != 4 {
            return Err(Error::InvalidDistribution(format!("expected 4 masses, got {}", masses.len())));
        }
        Self::new(masses)
    }
}

impl TryFrom<Vec<f64>> for Distribution {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<Distribution> for Vec<f64> {
    fn from(d: Distribution) -> Self {
        d.masses
    }
}
