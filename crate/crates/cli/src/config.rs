//! Config file loading, flag/file merging, and the provenance hash that is
//! embedded into every output artifact.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use softskill::records::Meta;

use crate::error::CliError;

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_EMBED_DIM: usize = 100;
pub const DEFAULT_TARGET_PRECISION: f64 = 0.95;
pub const DEFAULT_THRESHOLD: f64 = 0.5;

/// Optional values loadable from a TOML file. Unknown keys are rejected so
/// typos fail loudly.
#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub seed: Option<u64>,
    pub lexicon: Option<PathBuf>,
    pub corpus: Option<PathBuf>,
    pub embeddings: Option<PathBuf>,
    pub embedding_dim: Option<usize>,
    pub window: Option<usize>,
    pub mode: Option<String>,
    pub model: Option<String>,
    pub target_precision: Option<f64>,
    pub threshold: Option<f64>,
    pub neg_ratio: Option<f64>,
    pub limit: Option<usize>,
    pub format: Option<String>,
    pub text_column: Option<String>,
    #[serde(default)]
    pub train: TrainSection,
}

#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrainSection {
    pub learning_rate: Option<f64>,
    pub batch_size: Option<usize>,
    pub max_epochs: Option<usize>,
    pub patience: Option<usize>,
    pub dropout: Option<f64>,
    pub hidden_size: Option<usize>,
    pub max_doc_len: Option<usize>,
    pub filter_widths: Option<Vec<usize>>,
    pub filters_per_width: Option<usize>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(FileConfig::default());
        };
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
            path: path.display().to_string(),
            source: e,
        })?;
        toml::from_str(&text)
            .map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))
    }
}

/// The resolved settings of one invocation, serialized (sorted keys) and
/// hashed for provenance. Output paths are excluded: they do not affect
/// the produced data.
#[derive(Debug, Serialize)]
pub struct Provenance {
    pub command: &'static str,
    pub seed: u64,
    pub settings: std::collections::BTreeMap<String, serde_json::Value>,
}

impl Provenance {
    pub fn new(command: &'static str, seed: u64) -> Self {
        Provenance {
            command,
            seed,
            settings: Default::default(),
        }
    }

    pub fn set(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        self.settings.insert(
            key.to_string(),
            serde_json::to_value(value).expect("config values serialize"),
        );
        self
    }

    pub fn config_sha256(&self) -> String {
        let canonical = serde_json::to_string(self).expect("provenance serializes");
        let digest = Sha256::digest(canonical.as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn meta(&self) -> Meta {
        Meta {
            seed: Some(self.seed),
            config_sha256: Some(self.config_sha256()),
        }
    }
}

/// First value that is set: flag beats file beats default.
pub fn pick<T: Clone>(flag: Option<T>, file: Option<T>, default: T) -> T {
    flag.or(file).unwrap_or(default)
}

/// Like [`pick`] but with no default; missing values are usage errors.
pub fn require<T>(flag: Option<T>, file: Option<T>, what: &str) -> Result<T, CliError> {
    flag.or(file)
        .ok_or_else(|| CliError::Usage(format!("missing required value: {what} (flag or config)")))
}
