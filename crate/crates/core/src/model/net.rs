//! Shared network plumbing: the final dense layer, feature dropout, the
//! embedding matrix, and static dispatch over the three classifier
//! architectures.

use rand::Rng;

use crate::embed::EmbeddingTable;
use crate::model::cnn::{CnnCache, CnnNet};
use crate::model::logistic::{LogisticCache, LogisticNet};
use crate::model::lstm::{LstmCache, LstmNet};
use crate::model::tensor::Tensor;
use crate::model::vocab::{Vocab, PAD_INDEX, UNK_INDEX};

/// Range of the uniform initialization for embeddings of words missing
/// from the pre-trained table, matching the table's own unk/reserved init.
const EMBED_INIT_RANGE: f64 = 0.25;

/// A classifier input after vocabulary encoding.
#[derive(Debug, Clone)]
pub(crate) struct EncodedInput {
    pub indices: Vec<usize>,
    /// Empty unless the representation carries a skill embedding.
    pub skill_vector: Vec<f64>,
}

/// Final fully connected layer producing the two class logits.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Dense {
    pub w: Tensor,
    pub b: Tensor,
}

impl Dense {
    /// Zero-initialized dense layer: an untrained model emits zero logits
    /// and therefore probability 0.5 for both classes.
    pub fn zeros(input_len: usize) -> Self {
        Dense {
            w: Tensor::zeros("dense.w", 2, input_len),
            b: Tensor::zeros("dense.b", 2, 1),
        }
    }

    pub fn forward(&self, x: &[f64]) -> [f64; 2] {
        let mut logits = [0.0; 2];
        self.w.matvec(x, &mut logits);
        logits[0] += self.b.data[0];
        logits[1] += self.b.data[1];
        logits
    }

    /// Accumulates parameter gradients and returns d(loss)/d(x).
    pub fn backward(&mut self, dlogits: [f64; 2], x: &[f64]) -> Vec<f64> {
        self.w.grad_add_outer(&dlogits, x);
        self.b.grad_add(&dlogits);
        let mut dx = vec![0.0; x.len()];
        self.w.matvec_t_add(&dlogits, &mut dx);
        dx
    }
}

/// Inverted-dropout mask: entries are 0 or 1/(1-rate), so inference needs
/// no rescaling.
pub(crate) fn sample_dropout_mask<R: Rng>(len: usize, rate: f64, rng: &mut R) -> Vec<f64> {
    let keep_scale = 1.0 / (1.0 - rate);
    (0..len)
        .map(|_| if rng.gen::<f64>() < rate { 0.0 } else { keep_scale })
        .collect()
}

pub(crate) fn apply_mask(features: &[f64], mask: Option<&[f64]>) -> Vec<f64> {
    match mask {
        Some(mask) => features.iter().zip(mask).map(|(f, m)| f * m).collect(),
        None => features.to_vec(),
    }
}

/// Builds the trainable embedding matrix: row 0 is the frozen zero padding
/// row, unknown/reserved rows come from the table's seeded vectors, words
/// present in the table copy their pre-trained vectors, and the rest are
/// drawn uniformly at random.
pub(crate) fn init_embedding<R: Rng>(
    vocab: &Vocab,
    table: &EmbeddingTable,
    rng: &mut R,
) -> Tensor {
    let dim = table.dim();
    let mut embedding = Tensor::zeros("embedding", vocab.len(), dim);
    embedding.frozen_rows = 1;
    for (row, word) in vocab.words().iter().enumerate() {
        if row == PAD_INDEX {
            continue;
        }
        let dst = row * dim..(row + 1) * dim;
        if row == UNK_INDEX {
            embedding.data[dst].copy_from_slice(table.unk_vector());
        } else if crate::is_reserved_token(word) || table.contains(word) {
            embedding.data[dst].copy_from_slice(table.lookup(word));
        } else {
            for v in &mut embedding.data[dst] {
                *v = rng.gen_range(-EMBED_INIT_RANGE..=EMBED_INIT_RANGE);
            }
        }
    }
    embedding
}

/// Mean of the embedding rows selected by `indices`.
pub(crate) fn mean_rows(embedding: &Tensor, indices: &[usize]) -> Vec<f64> {
    let mut mean = vec![0.0; embedding.cols];
    for &idx in indices {
        for (m, v) in mean.iter_mut().zip(embedding.row(idx)) {
            *m += v;
        }
    }
    let n = indices.len() as f64;
    mean.iter_mut().for_each(|m| *m /= n);
    mean
}

/// One of the three classifier architectures. A model holds exactly one,
/// so the variant size spread does not matter.
#[allow(clippy::large_enum_variant)]
#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Net {
    Logistic(LogisticNet),
    Cnn(CnnNet),
    Lstm(LstmNet),
}

/// Per-sample intermediates kept between forward and backward.
pub(crate) enum Cache {
    Logistic(LogisticCache),
    Cnn(CnnCache),
    Lstm(LstmCache),
}

impl Net {
    pub fn forward(&self, input: &EncodedInput, mask: Option<&[f64]>) -> ([f64; 2], Cache) {
        match self {
            Net::Logistic(net) => {
                let (logits, cache) = net.forward(input, mask);
                (logits, Cache::Logistic(cache))
            }
            Net::Cnn(net) => {
                let (logits, cache) = net.forward(input, mask);
                (logits, Cache::Cnn(cache))
            }
            Net::Lstm(net) => {
                let (logits, cache) = net.forward(input, mask);
                (logits, Cache::Lstm(cache))
            }
        }
    }

    pub fn backward(&mut self, input: &EncodedInput, cache: &Cache, dlogits: [f64; 2]) {
        match (self, cache) {
            (Net::Logistic(net), Cache::Logistic(cache)) => net.backward(input, cache, dlogits),
            (Net::Cnn(net), Cache::Cnn(cache)) => net.backward(input, cache, dlogits),
            (Net::Lstm(net), Cache::Lstm(cache)) => net.backward(input, cache, dlogits),
            _ => unreachable!("cache kind matches net kind"),
        }
    }

    /// Length of the feature vector entering the dense layer (dropout mask
    /// length).
    pub fn feature_len(&self) -> usize {
        match self {
            Net::Logistic(net) => net.embed_dim + net.skill_dim,
            Net::Cnn(net) => net.pooled_len() + net.skill_dim,
            Net::Lstm(net) => net.hidden + net.skill_dim,
        }
    }

    pub fn embed_dim(&self) -> usize {
        match self {
            Net::Logistic(net) => net.embed_dim,
            Net::Cnn(net) => net.embed_dim,
            Net::Lstm(net) => net.embed_dim,
        }
    }

    pub fn skill_dim(&self) -> usize {
        match self {
            Net::Logistic(net) => net.skill_dim,
            Net::Cnn(net) => net.skill_dim,
            Net::Lstm(net) => net.skill_dim,
        }
    }

    pub fn tensors(&self) -> Vec<&Tensor> {
        match self {
            Net::Logistic(net) => vec![&net.embedding, &net.dense.w, &net.dense.b],
            Net::Cnn(net) => {
                let mut t = vec![&net.embedding];
                for bank in &net.banks {
                    t.push(&bank.filters);
                    t.push(&bank.bias);
                }
                t.push(&net.dense.w);
                t.push(&net.dense.b);
                t
            }
            Net::Lstm(net) => {
                let mut t = vec![&net.embedding];
                for gate in &net.gates {
                    t.push(&gate.wx);
                    t.push(&gate.wh);
                    t.push(&gate.b);
                }
                t.push(&net.dense.w);
                t.push(&net.dense.b);
                t
            }
        }
    }

    pub fn tensors_mut(&mut self) -> Vec<&mut Tensor> {
        match self {
            Net::Logistic(net) => vec![&mut net.embedding, &mut net.dense.w, &mut net.dense.b],
            Net::Cnn(net) => {
                let mut t = vec![&mut net.embedding];
                for bank in &mut net.banks {
                    t.push(&mut bank.filters);
                    t.push(&mut bank.bias);
                }
                t.push(&mut net.dense.w);
                t.push(&mut net.dense.b);
                t
            }
            Net::Lstm(net) => {
                let mut t = vec![&mut net.embedding];
                for gate in &mut net.gates {
                    t.push(&mut gate.wx);
                    t.push(&mut gate.wh);
                    t.push(&mut gate.b);
                }
                t.push(&mut net.dense.w);
                t.push(&mut net.dense.b);
                t
            }
        }
    }

    pub fn zero_grads(&mut self) {
        for tensor in self.tensors_mut() {
            tensor.zero_grad();
        }
    }
}
