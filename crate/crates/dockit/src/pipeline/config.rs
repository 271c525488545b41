//! Run configuration, loaded from TOML. Service endpoints and the API key
//! can be overridden through the environment, so manifests and config
//! files stay free of credentials.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::pipeline::client::RetryPolicy;

pub const ENV_ANNOTATION_URL: &str = "DOCKIT_ANNOTATION_URL";
pub const ENV_CODEGEN_URL: &str = "DOCKIT_CODEGEN_URL";
pub const ENV_IMAGEGEN_URL: &str = "DOCKIT_IMAGEGEN_URL";
pub const ENV_API_KEY: &str = "DOCKIT_API_KEY";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    /// Root directory for record subdirectories and the manifest index.
    pub dataset_dir: PathBuf,
    pub seed: u64,
    /// Worker thread budget; 0 means one per logical CPU.
    pub parallelism: usize,
    pub max_attempts: u32,
    pub base_delay_ms: u64,
    pub max_delay_ms: u64,
    pub gamma: f64,
    pub alpha: f64,
    /// Overflow tolerance in px granted beyond the declared size.
    pub tau: f64,
    /// Treat dialect warnings as exclusions.
    pub strict_dialect: bool,
    /// Give an excluded record one fresh generation pass with a reseeded
    /// prompt before accepting the exclusion.
    pub regenerate_on_exclude: bool,
    /// Write splits.json with train/val/test ids over the kept records.
    pub emit_splits: bool,
    pub annotation_url: Option<String>,
    pub codegen_url: Option<String>,
    pub imagegen_url: Option<String>,
    pub api_key: Option<String>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            dataset_dir: PathBuf::from("dataset"),
            seed: 0,
            parallelism: 0,
            max_attempts: 3,
            base_delay_ms: 250,
            max_delay_ms: 4000,
            gamma: 0.05,
            alpha: 2.0,
            tau: 0.0,
            strict_dialect: true,
            regenerate_on_exclude: false,
            emit_splits: false,
            annotation_url: None,
            codegen_url: None,
            imagegen_url: None,
            api_key: None,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("invalid config: {0}")]
    Parse(#[from] toml::de::Error),
}

impl PipelineConfig {
    pub fn retry(&self) -> RetryPolicy {
        RetryPolicy {
            max_attempts: self.max_attempts,
            base_delay_ms: self.base_delay_ms,
            max_delay_ms: self.max_delay_ms,
        }
    }

    pub fn from_toml_str(text: &str) -> Result<Self, ConfigError> {
        Ok(toml::from_str(text)?)
    }

    pub fn from_path(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_toml_str(&text)
    }

    /// Applies endpoint and credential overrides from a lookup, normally
    /// [`std::env::var`]. Only those four settings can come from the
    /// environment; everything else lives in the file.
    pub fn override_from(&mut self, get: impl Fn(&str) -> Option<String>) {
        if let Some(v) = get(ENV_ANNOTATION_URL) {
            self.annotation_url = Some(v);
        }
        if let Some(v) = get(ENV_CODEGEN_URL) {
            self.codegen_url = Some(v);
        }
        if let Some(v) = get(ENV_IMAGEGEN_URL) {
            self.imagegen_url = Some(v);
        }
        if let Some(v) = get(ENV_API_KEY) {
            self.api_key = Some(v);
        }
    }

    /// [`PipelineConfig::override_from`] with the process environment.
    pub fn override_from_env(&mut self) {
        self.override_from(|key| std::env::var(key).ok());
    }
}
