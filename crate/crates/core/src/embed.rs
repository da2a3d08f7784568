//! Pre-trained word vector loading and phrase embeddings.
//!
//! The file format is one word per line: `word v1 v2 ... vdim`, whitespace
//! separated. Out-of-vocabulary words resolve to a single shared `unk`
//! vector; the reserved tokens (`xxx`, `<begin>`, `<end>`) get their own
//! vectors. All of these are drawn from a seeded uniform distribution in
//! [-0.25, 0.25] at load time, so a table is reproducible from the file and
//! the seed.

use std::collections::HashMap;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::{Result, BEGIN_TOKEN, END_TOKEN, MASK_TOKEN};

const INIT_RANGE: f64 = 0.25;

/// Word -> vector table with fixed dimensionality.
#[derive(Debug, Clone)]
pub struct EmbeddingTable {
    dim: usize,
    vocab: HashMap<String, Vec<f64>>,
    unk: Vec<f64>,
    mask: Vec<f64>,
    begin: Vec<f64>,
    end: Vec<f64>,
}

/// Mean-of-words phrase embedding plus a degenerate-input flag.
#[derive(Debug, Clone, PartialEq)]
pub struct MeanEmbedding {
    pub vector: Vec<f64>,
    /// True when every token was out of vocabulary; the vector is then all
    /// zeros so the phrase contributes no information rather than a shared
    /// spurious direction.
    pub all_oov: bool,
}

impl EmbeddingTable {
    /// Builds a table from in-memory `(word, vector)` entries. Every vector
    /// must have length `dim`.
    pub fn from_entries<I>(dim: usize, entries: I, seed: u64) -> Result<Self>
    where
        I: IntoIterator<Item = (String, Vec<f64>)>,
    {
        let mut vocab = HashMap::new();
        for (line, (word, vector)) in entries.into_iter().enumerate() {
            if vector.len() != dim {
                return Err(Error::EmbeddingParse {
                    line: line + 1,
                    message: format!(
                        "word {word:?} has {} components, expected {dim}",
                        vector.len()
                    ),
                });
            }
            vocab.insert(word, vector);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut draw = || -> Vec<f64> {
            (0..dim).map(|_| rng.gen_range(-INIT_RANGE..=INIT_RANGE)).collect()
        };
        Ok(EmbeddingTable {
            dim,
            vocab,
            unk: draw(),
            mask: draw(),
            begin: draw(),
            end: draw(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of words loaded from the file (reserved/unk entries excluded).
    pub fn vocab_len(&self) -> usize {
        self.vocab.len()
    }

    pub fn contains(&self, token: &str) -> bool {
        matches!(token, MASK_TOKEN | BEGIN_TOKEN | END_TOKEN) || self.vocab.contains_key(token)
    }

    /// Vector for `token`; reserved tokens resolve to their dedicated
    /// vectors and anything unknown to the shared `unk` vector.
    pub fn lookup(&self, token: &str) -> &[f64] {
        match token {
            MASK_TOKEN => &self.mask,
            BEGIN_TOKEN => &self.begin,
            END_TOKEN => &self.end,
            _ => self.vocab.get(token).unwrap_or(&self.unk),
        }
    }

    pub fn unk_vector(&self) -> &[f64] {
        &self.unk
    }
}

/// Loads a table from a text vector file, checking every line against
/// `expected_dim`.
pub fn load_embeddings(path: &Path, expected_dim: usize, seed: u64) -> Result<EmbeddingTable> {
    let content = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut entries = Vec::new();
    for (idx, line) in content.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let word = parts.next().expect("non-empty line has a first field");
        let vector: Vec<f64> = parts
            .map(|p| {
                p.parse::<f64>().map_err(|_| Error::EmbeddingParse {
                    line: idx + 1,
                    message: format!("invalid vector component {p:?}"),
                })
            })
            .collect::<Result<_>>()?;
        if vector.len() != expected_dim {
            return Err(Error::EmbeddingParse {
                line: idx + 1,
                message: format!(
                    "word {word:?} has {} components, expected {expected_dim}",
                    vector.len()
                ),
            });
        }
        entries.push((word.to_string(), vector));
    }
    EmbeddingTable::from_entries(expected_dim, entries, seed)
}

/// Componentwise mean of the per-token vectors, with `unk` standing in for
/// out-of-vocabulary tokens. If every token is OOV the result is the zero
/// vector with `all_oov` set.
pub fn mean_embedding(tokens: &[String], table: &EmbeddingTable) -> Result<MeanEmbedding> {
    if tokens.is_empty() {
        return Err(Error::EmptyEmbeddingInput);
    }
    if tokens.iter().all(|t| !table.contains(t)) {
        log::warn!("embed: all tokens of {tokens:?} are out of vocabulary; using zero vector");
        return Ok(MeanEmbedding {
            vector: vec![0.0; table.dim()],
            all_oov: true,
        });
    }
    let mut vector = vec![0.0; table.dim()];
    for token in tokens {
        for (acc, component) in vector.iter_mut().zip(table.lookup(token)) {
            *acc += component;
        }
    }
    let n = tokens.len() as f64;
    vector.iter_mut().for_each(|v| *v /= n);
    Ok(MeanEmbedding { vector, all_oov: false })
}
