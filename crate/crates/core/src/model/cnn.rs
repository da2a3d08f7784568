//! Sentence-classification CNN: per-width filter banks over the full
//! embedding dimension, max-over-time pooling, dropout on the pooled
//! features, dense output. Inputs are padded or truncated to a fixed
//! document length; the padding row of the embedding is zero and frozen.

use rand::Rng;

use crate::model::net::{apply_mask, Dense, EncodedInput};
use crate::model::tensor::Tensor;
use crate::model::vocab::PAD_INDEX;

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct ConvBank {
    pub width: usize,
    /// filters_per_width x (width * embed_dim)
    pub filters: Tensor,
    pub bias: Tensor,
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct CnnNet {
    pub embedding: Tensor,
    pub banks: Vec<ConvBank>,
    pub dense: Dense,
    pub embed_dim: usize,
    pub skill_dim: usize,
    pub max_doc_len: usize,
}

pub(crate) struct CnnCache {
    padded: Vec<usize>,
    /// Per bank, per filter: (argmax position, pre-activation was positive).
    argmax: Vec<Vec<(usize, bool)>>,
    features: Vec<f64>,
    mask: Option<Vec<f64>>,
}

impl CnnNet {
    pub fn new<R: Rng>(
        embedding: Tensor,
        widths: &[usize],
        filters_per_width: usize,
        max_doc_len: usize,
        skill_dim: usize,
        rng: &mut R,
    ) -> Self {
        let embed_dim = embedding.cols;
        let banks = widths
            .iter()
            .map(|&width| {
                let fan_in = width * embed_dim;
                let range = 1.0 / (fan_in as f64).sqrt();
                ConvBank {
                    width,
                    filters: Tensor::uniform(
                        &format!("conv{width}.w"),
                        filters_per_width,
                        fan_in,
                        range,
                        rng,
                    ),
                    bias: Tensor::zeros(&format!("conv{width}.b"), filters_per_width, 1),
                }
            })
            .collect::<Vec<_>>();
        let pooled: usize = banks.iter().map(|b| b.filters.rows).sum();
        CnnNet {
            embedding,
            banks,
            dense: Dense::zeros(pooled + skill_dim),
            embed_dim,
            skill_dim,
            max_doc_len,
        }
    }

    pub fn pooled_len(&self) -> usize {
        self.banks.iter().map(|b| b.filters.rows).sum()
    }

    fn pad(&self, indices: &[usize]) -> Vec<usize> {
        let mut padded: Vec<usize> = indices.iter().take(self.max_doc_len).copied().collect();
        padded.resize(self.max_doc_len, PAD_INDEX);
        padded
    }

    /// Row-major (max_doc_len x embed_dim) matrix of embedded tokens; a
    /// width-w window starting at t is the contiguous slice
    /// [t*d .. (t+w)*d].
    fn embed_rows(&self, padded: &[usize]) -> Vec<f64> {
        let d = self.embed_dim;
        let mut x = vec![0.0; padded.len() * d];
        for (t, &idx) in padded.iter().enumerate() {
            x[t * d..(t + 1) * d].copy_from_slice(self.embedding.row(idx));
        }
        x
    }

    pub fn forward(&self, input: &EncodedInput, mask: Option<&[f64]>) -> ([f64; 2], CnnCache) {
        let padded = self.pad(&input.indices);
        let x = self.embed_rows(&padded);
        let d = self.embed_dim;
        let mut features = Vec::with_capacity(self.pooled_len() + self.skill_dim);
        let mut argmax = Vec::with_capacity(self.banks.len());
        for bank in &self.banks {
            let positions = self.max_doc_len - bank.width + 1;
            let mut pools = vec![0.0f64; bank.filters.rows];
            let mut args = vec![(0usize, false); bank.filters.rows];
            for t in 0..positions {
                let window = &x[t * d..(t + bank.width) * d];
                for f in 0..bank.filters.rows {
                    let mut a = bank.bias.data[f];
                    for (w, v) in bank.filters.row(f).iter().zip(window) {
                        a += w * v;
                    }
                    let z = a.max(0.0);
                    if t == 0 || z > pools[f] {
                        pools[f] = z;
                        args[f] = (t, a > 0.0);
                    }
                }
            }
            features.extend_from_slice(&pools);
            argmax.push(args);
        }
        features.extend_from_slice(&input.skill_vector);
        let dropped = apply_mask(&features, mask);
        let logits = self.dense.forward(&dropped);
        (
            logits,
            CnnCache {
                padded,
                argmax,
                features: dropped,
                mask: mask.map(|m| m.to_vec()),
            },
        )
    }

    pub fn backward(&mut self, _input: &EncodedInput, cache: &CnnCache, dlogits: [f64; 2]) {
        let dfeat_dropped = self.dense.backward(dlogits, &cache.features);
        let dfeat = apply_mask(&dfeat_dropped, cache.mask.as_deref());
        let d = self.embed_dim;
        let x = self.embed_rows(&cache.padded);
        let mut dx = vec![0.0; x.len()];
        let mut slot = 0;
        for (bank, args) in self.banks.iter_mut().zip(&cache.argmax) {
            for (f, &(t, active)) in args.iter().enumerate() {
                let dpool = dfeat[slot];
                slot += 1;
                if !active || dpool == 0.0 {
                    continue;
                }
                let window = &x[t * d..(t + bank.width) * d];
                for (g, v) in bank
                    .filters
                    .grad_row_mut(f)
                    .iter_mut()
                    .zip(window)
                {
                    *g += dpool * v;
                }
                bank.bias.grad[f] += dpool;
                let filter = bank.filters.row(f).to_vec();
                for (dv, w) in dx[t * d..(t + bank.width) * d].iter_mut().zip(&filter) {
                    *dv += dpool * w;
                }
            }
        }
        for (t, &idx) in cache.padded.iter().enumerate() {
            for (g, dv) in self
                .embedding
                .grad_row_mut(idx)
                .iter_mut()
                .zip(&dx[t * d..(t + 1) * d])
            {
                *g += dv;
            }
        }
    }
}
