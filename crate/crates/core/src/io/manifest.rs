use std::path::PathBuf;

use serde::Serialize;

use crate::spectral::{GuardReport, SimConfig};

/// Record written next to every run. `config` parses back to the exact
/// configuration, so replaying it reproduces the CSV output bit for bit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunManifest {
    pub config: String,
    pub code_version: String,
    pub seed: u64,
    pub rng: String,
    pub steps: usize,
    pub wall_seconds: f64,
    pub guards: GuardReport,
    pub files: Vec<String>,
}

impl RunManifest {
    pub fn new(
        config: &SimConfig,
        guards: GuardReport,
        steps: usize,
        wall_seconds: f64,
        files: &[PathBuf],
    ) -> Self {
        Self {
            config: config.to_config_text(),
            code_version: env!("CARGO_PKG_VERSION").to_string(),
            seed: config.seed,
            rng: "ChaCha8 (rand_chacha), seed_from_u64".to_string(),
            steps,
            wall_seconds,
            guards,
            files: files.iter().map(|p| p.display().to_string()).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serializes")
    }
}
