//! Trainable classifiers over represented snippets: a mean-embedding
//! logistic baseline, a max-over-time CNN, and a single-direction LSTM,
//! all implemented directly in double precision with hand-written
//! backpropagation (verified against finite differences, see
//! [`gradient_check`]).
//!
//! Under the `masked-embed` representation the skill's mean embedding is
//! concatenated onto the input of the final dense layer, widening it by
//! the embedding dimension.

mod adam;
mod checkpoint;
mod cnn;
mod gradcheck;
mod logistic;
mod lstm;
mod net;
mod tensor;
mod train;
mod vocab;

pub use checkpoint::{load_model, save_model};
pub use gradcheck::{gradient_check, GradCheckReport};
pub use train::{train, EpochStats, TrainingLog};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::embed::EmbeddingTable;
use crate::error::Error;
use crate::represent::{RepresentationMode, RepresentedInput};
use crate::Result;

use net::{EncodedInput, Net};
use vocab::Vocab;

/// Classifier architecture.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    MeanLogistic,
    Cnn,
    Lstm,
}

impl ModelKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ModelKind::MeanLogistic => "mean-logistic",
            ModelKind::Cnn => "cnn",
            ModelKind::Lstm => "lstm",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "mean-logistic" => Ok(ModelKind::MeanLogistic),
            "cnn" => Ok(ModelKind::Cnn),
            "lstm" => Ok(ModelKind::Lstm),
            other => Err(Error::InvalidConfig(format!("unknown model kind `{other}`"))),
        }
    }
}

impl std::fmt::Display for ModelKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Training hyperparameters. `dropout: None` selects the per-architecture
/// default (0.5 for the CNN's pooled features, 0.2 before the LSTM's dense
/// layer, none for the logistic baseline).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub model_kind: ModelKind,
    pub mode: RepresentationMode,
    pub learning_rate: f64,
    pub batch_size: usize,
    pub max_epochs: usize,
    pub patience: usize,
    pub seed: u64,
    pub dropout: Option<f64>,
    pub max_doc_len: usize,
    pub hidden_size: usize,
    pub filter_widths: Vec<usize>,
    pub filters_per_width: usize,
}

impl TrainConfig {
    pub fn new(model_kind: ModelKind, mode: RepresentationMode) -> Self {
        TrainConfig {
            model_kind,
            mode,
            learning_rate: 0.001,
            batch_size: 16,
            max_epochs: 100,
            patience: 5,
            seed: 0,
            dropout: None,
            max_doc_len: 30,
            hidden_size: 100,
            filter_widths: vec![2, 3, 4],
            filters_per_width: 50,
        }
    }

    pub fn effective_dropout(&self) -> f64 {
        self.dropout.unwrap_or(match self.model_kind {
            ModelKind::MeanLogistic => 0.0,
            ModelKind::Cnn => 0.5,
            ModelKind::Lstm => 0.2,
        })
    }

    pub fn validate(&self) -> Result<()> {
        let dropout = self.effective_dropout();
        if !(0.0..1.0).contains(&dropout) {
            return Err(Error::InvalidConfig(format!(
                "dropout must be in [0, 1), got {dropout}"
            )));
        }
        if !self.learning_rate.is_finite() || self.learning_rate <= 0.0 {
            return Err(Error::InvalidConfig("learning rate must be positive".into()));
        }
        if self.batch_size == 0 {
            return Err(Error::InvalidConfig("batch size must be at least 1".into()));
        }
        if self.max_epochs == 0 {
            return Err(Error::InvalidConfig("max epochs must be at least 1".into()));
        }
        if self.model_kind == ModelKind::Lstm && self.hidden_size == 0 {
            return Err(Error::InvalidConfig("hidden size must be at least 1".into()));
        }
        if self.model_kind == ModelKind::Cnn {
            if self.filter_widths.is_empty() || self.filters_per_width == 0 {
                return Err(Error::InvalidConfig("CNN needs at least one filter".into()));
            }
            if self.filter_widths.iter().any(|&w| w == 0 || w > self.max_doc_len) {
                return Err(Error::InvalidConfig(format!(
                    "filter widths must be in [1, max_doc_len={}]",
                    self.max_doc_len
                )));
            }
        }
        Ok(())
    }
}

/// Classifier output for one input.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub probability_positive: f64,
    pub logits: [f64; 2],
}

/// A trained (or freshly initialized) classifier together with the
/// vocabulary and configuration it was built with.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassifierModel {
    config: TrainConfig,
    vocab: Vocab,
    net: Net,
}

impl ClassifierModel {
    /// Initializes an untrained model: embeddings from the table, random
    /// architecture weights, zero dense layer (so it predicts 0.5).
    pub(crate) fn init<R: Rng>(
        config: &TrainConfig,
        vocab: Vocab,
        table: &EmbeddingTable,
        rng: &mut R,
    ) -> Self {
        let skill_dim = if config.mode.uses_skill_vector() {
            table.dim()
        } else {
            0
        };
        let embedding = net::init_embedding(&vocab, table, rng);
        let net = match config.model_kind {
            ModelKind::MeanLogistic => Net::Logistic(logistic::LogisticNet::new(embedding, skill_dim)),
            ModelKind::Cnn => Net::Cnn(cnn::CnnNet::new(
                embedding,
                &config.filter_widths,
                config.filters_per_width,
                config.max_doc_len,
                skill_dim,
                rng,
            )),
            ModelKind::Lstm => Net::Lstm(lstm::LstmNet::new(
                embedding,
                config.hidden_size,
                skill_dim,
                rng,
            )),
        };
        ClassifierModel {
            config: config.clone(),
            vocab,
            net,
        }
    }

    pub fn kind(&self) -> ModelKind {
        self.config.model_kind
    }

    pub fn mode(&self) -> RepresentationMode {
        self.config.mode
    }

    pub fn config(&self) -> &TrainConfig {
        &self.config
    }

    pub fn embed_dim(&self) -> usize {
        self.net.embed_dim()
    }

    pub fn skill_dim(&self) -> usize {
        self.net.skill_dim()
    }

    pub fn vocab_len(&self) -> usize {
        self.vocab.len()
    }

    pub(crate) fn encode(&self, input: &RepresentedInput) -> Result<EncodedInput> {
        if input.mode != self.config.mode {
            return Err(Error::ModeMismatch {
                expected: self.config.mode.to_string(),
                found: input.mode.to_string(),
            });
        }
        if input.tokens.is_empty() {
            return Err(Error::EmptyInput);
        }
        let skill_vector = if self.config.mode.uses_skill_vector() {
            let vector = input.skill_vector.as_ref().ok_or_else(|| {
                Error::InvalidConfig("input is missing the skill embedding vector".into())
            })?;
            if vector.len() != self.skill_dim() {
                return Err(Error::InvalidConfig(format!(
                    "skill vector has dimension {}, model expects {}",
                    vector.len(),
                    self.skill_dim()
                )));
            }
            vector.clone()
        } else {
            Vec::new()
        };
        Ok(EncodedInput {
            indices: self.vocab.encode(&input.tokens),
            skill_vector,
        })
    }

    /// Inference-mode forward pass (dropout disabled): deterministic and
    /// side-effect free.
    pub fn predict(&self, input: &RepresentedInput) -> Result<Prediction> {
        let encoded = self.encode(input)?;
        let (logits, _) = self.net.forward(&encoded, None);
        let probs = tensor::softmax2(logits);
        Ok(Prediction {
            probability_positive: probs[1],
            logits,
        })
    }

    /// Positive-class probabilities for a batch of inputs.
    pub fn scores(&self, inputs: &[RepresentedInput]) -> Result<Vec<f64>> {
        inputs
            .iter()
            .map(|input| self.predict(input).map(|p| p.probability_positive))
            .collect()
    }
}
