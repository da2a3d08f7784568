//! The four classifier input representations.
//!
//! A snippet can be fed to a classifier as-is (`Unmodified`), with the
//! skill replaced by one `xxx` per skill word (`Masked`), masked plus the
//! mean word-embedding of the skill phrase attached for the final dense
//! layer (`MaskedWithEmbedding`), or with `<begin>`/`<end>` tokens wrapped
//! around the skill (`Tagged`).

use serde::{Deserialize, Serialize};

use crate::embed::{mean_embedding, EmbeddingTable};
use crate::error::Error;
use crate::matcher::Snippet;
use crate::preprocess::TokenSequence;
use crate::{Result, BEGIN_TOKEN, END_TOKEN, MASK_TOKEN};

/// How a snippet is presented to the classifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RepresentationMode {
    Unmodified,
    Masked,
    #[serde(rename = "masked-embed")]
    MaskedWithEmbedding,
    Tagged,
}

impl RepresentationMode {
    pub const ALL: [RepresentationMode; 4] = [
        RepresentationMode::Unmodified,
        RepresentationMode::Masked,
        RepresentationMode::MaskedWithEmbedding,
        RepresentationMode::Tagged,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            RepresentationMode::Unmodified => "unmodified",
            RepresentationMode::Masked => "masked",
            RepresentationMode::MaskedWithEmbedding => "masked-embed",
            RepresentationMode::Tagged => "tagged",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "unmodified" => Ok(RepresentationMode::Unmodified),
            "masked" => Ok(RepresentationMode::Masked),
            "masked-embed" => Ok(RepresentationMode::MaskedWithEmbedding),
            "tagged" => Ok(RepresentationMode::Tagged),
            other => Err(Error::InvalidConfig(format!(
                "unknown representation mode `{other}`"
            ))),
        }
    }

    /// True if inputs in this mode carry a skill embedding vector.
    pub fn uses_skill_vector(&self) -> bool {
        matches!(self, RepresentationMode::MaskedWithEmbedding)
    }
}

impl std::fmt::Display for RepresentationMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Binary label: does the skill describe the candidate?
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Positive,
    Negative,
}

impl Label {
    pub fn is_positive(&self) -> bool {
        matches!(self, Label::Positive)
    }

    /// Class index used by the classifiers (negative = 0, positive = 1).
    pub fn class_index(&self) -> usize {
        match self {
            Label::Negative => 0,
            Label::Positive => 1,
        }
    }
}

/// A snippet transformed into classifier input.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepresentedInput {
    pub tokens: TokenSequence,
    /// Present iff `mode == MaskedWithEmbedding`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub skill_vector: Option<Vec<f64>>,
    pub mode: RepresentationMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<Label>,
}

/// Applies `mode` to a snippet. `embeddings` is required exactly for
/// `MaskedWithEmbedding`, where the skill vector is the mean embedding of
/// the skill tokens.
pub fn represent(
    snippet: &Snippet,
    mode: RepresentationMode,
    embeddings: Option<&EmbeddingTable>,
) -> Result<RepresentedInput> {
    let mut tokens = Vec::with_capacity(snippet.left.len() + snippet.skill.len() + snippet.right.len() + 2);
    tokens.extend_from_slice(&snippet.left);
    match mode {
        RepresentationMode::Unmodified => tokens.extend_from_slice(&snippet.skill),
        RepresentationMode::Masked | RepresentationMode::MaskedWithEmbedding => {
            tokens.extend(std::iter::repeat_n(MASK_TOKEN.to_string(), snippet.skill.len()));
        }
        RepresentationMode::Tagged => {
            tokens.push(BEGIN_TOKEN.to_string());
            tokens.extend_from_slice(&snippet.skill);
            tokens.push(END_TOKEN.to_string());
        }
    }
    tokens.extend_from_slice(&snippet.right);

    let skill_vector = if mode.uses_skill_vector() {
        let table = embeddings.ok_or(Error::MissingEmbeddings)?;
        Some(mean_embedding(&snippet.skill, table)?.vector)
    } else {
        None
    };

    Ok(RepresentedInput {
        tokens,
        skill_vector,
        mode,
        label: None,
    })
}
