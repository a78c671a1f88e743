use serde::{Deserialize, Serialize};

use super::config::{ExperimentConfig, SweepKind};

/// Record of a sweep run: the resolved config, its seed and the tool version.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub version: String,
    pub seed: u64,
    #[serde(default)]
    pub preset: Option<String>,
    pub sweep: SweepKind,
    pub config: ExperimentConfig,
}

impl RunManifest {
    pub fn new(config: &ExperimentConfig, preset: Option<&str>) -> Self {
        Self {
            version: concat!("v", env!("CARGO_PKG_VERSION")).to_string(),
            seed: config.seed,
            preset: preset.map(str::to_string),
            sweep: config.sweep_kind(),
            config: config.clone(),
        }
    }
}
