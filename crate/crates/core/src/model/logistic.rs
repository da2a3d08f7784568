//! Mean-embedding logistic baseline: average the token embeddings, append
//! the skill vector when present, and classify with the dense layer.

use crate::model::net::{apply_mask, mean_rows, Dense, EncodedInput};
use crate::model::tensor::Tensor;

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct LogisticNet {
    pub embedding: Tensor,
    pub dense: Dense,
    pub embed_dim: usize,
    pub skill_dim: usize,
}

pub(crate) struct LogisticCache {
    features: Vec<f64>,
    mask: Option<Vec<f64>>,
}

impl LogisticNet {
    pub fn new(embedding: Tensor, skill_dim: usize) -> Self {
        let embed_dim = embedding.cols;
        LogisticNet {
            embedding,
            dense: Dense::zeros(embed_dim + skill_dim),
            embed_dim,
            skill_dim,
        }
    }

    pub fn forward(&self, input: &EncodedInput, mask: Option<&[f64]>) -> ([f64; 2], LogisticCache) {
        let mut features = mean_rows(&self.embedding, &input.indices);
        features.extend_from_slice(&input.skill_vector);
        let dropped = apply_mask(&features, mask);
        let logits = self.dense.forward(&dropped);
        (
            logits,
            LogisticCache {
                features: dropped,
                mask: mask.map(|m| m.to_vec()),
            },
        )
    }

    pub fn backward(&mut self, input: &EncodedInput, cache: &LogisticCache, dlogits: [f64; 2]) {
        let dfeat_dropped = self.dense.backward(dlogits, &cache.features);
        let dfeat = apply_mask(&dfeat_dropped, cache.mask.as_deref());
        let scale = 1.0 / input.indices.len() as f64;
        for &idx in &input.indices {
            for (g, d) in self
                .embedding
                .grad_row_mut(idx)
                .iter_mut()
                .zip(&dfeat[..self.embed_dim])
            {
                *g += d * scale;
            }
        }
    }
}
