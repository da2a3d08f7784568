//! Single-direction LSTM classifier over variable-length inputs. The final
//! hidden state (optionally concatenated with the skill vector) goes
//! through dropout and the dense layer. Backpropagation through time is
//! written out by hand and verified by the finite-difference gradient
//! check.

use rand::Rng;

use crate::model::net::{apply_mask, Dense, EncodedInput};
use crate::model::tensor::{sigmoid, Tensor};

/// Gate order within `LstmNet::gates`.
pub(crate) const GATE_NAMES: [&str; 4] = ["input", "forget", "cell", "output"];

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Gate {
    pub wx: Tensor,
    pub wh: Tensor,
    pub b: Tensor,
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct LstmNet {
    pub embedding: Tensor,
    /// input, forget, cell, output.
    pub gates: [Gate; 4],
    pub dense: Dense,
    pub embed_dim: usize,
    pub hidden: usize,
    pub skill_dim: usize,
}

struct Step {
    gate_acts: [Vec<f64>; 4],
    c: Vec<f64>,
    tanh_c: Vec<f64>,
    h_prev: Vec<f64>,
    c_prev: Vec<f64>,
}

pub(crate) struct LstmCache {
    steps: Vec<Step>,
    features: Vec<f64>,
    mask: Option<Vec<f64>>,
}

impl LstmNet {
    pub fn new<R: Rng>(embedding: Tensor, hidden: usize, skill_dim: usize, rng: &mut R) -> Self {
        let embed_dim = embedding.cols;
        let range = 1.0 / (hidden as f64).sqrt();
        let gates = std::array::from_fn(|gate| {
            let name = GATE_NAMES[gate];
            let mut g = Gate {
                wx: Tensor::uniform(&format!("lstm.{name}.wx"), hidden, embed_dim, range, rng),
                wh: Tensor::uniform(&format!("lstm.{name}.wh"), hidden, hidden, range, rng),
                b: Tensor::zeros(&format!("lstm.{name}.b"), hidden, 1),
            };
            // forget gate bias starts at 1 so early training does not wipe
            // the cell state
            if name == "forget" {
                g.b.data.iter_mut().for_each(|v| *v = 1.0);
            }
            g
        });
        LstmNet {
            embedding,
            gates,
            dense: Dense::zeros(hidden + skill_dim),
            embed_dim,
            hidden,
            skill_dim,
        }
    }

    pub fn forward(&self, input: &EncodedInput, mask: Option<&[f64]>) -> ([f64; 2], LstmCache) {
        let h_dim = self.hidden;
        let mut h = vec![0.0; h_dim];
        let mut c = vec![0.0; h_dim];
        let mut steps = Vec::with_capacity(input.indices.len());
        for &idx in &input.indices {
            let x = self.embedding.row(idx);
            let mut gate_acts: [Vec<f64>; 4] = std::array::from_fn(|_| vec![0.0; h_dim]);
            for (gate, acts) in self.gates.iter().zip(gate_acts.iter_mut()) {
                gate.wx.matvec(x, acts);
                let mut from_h = vec![0.0; h_dim];
                gate.wh.matvec(&h, &mut from_h);
                for ((a, fh), b) in acts.iter_mut().zip(&from_h).zip(&gate.b.data) {
                    *a += fh + b;
                }
            }
            // squash pre-activations: sigmoid for i/f/o, tanh for the cell gate
            let mut step = Step {
                gate_acts,
                c: vec![0.0; h_dim],
                tanh_c: vec![0.0; h_dim],
                h_prev: h.clone(),
                c_prev: c.clone(),
            };
            for k in 0..h_dim {
                let i = sigmoid(step.gate_acts[0][k]);
                let f = sigmoid(step.gate_acts[1][k]);
                let g = step.gate_acts[2][k].tanh();
                let o = sigmoid(step.gate_acts[3][k]);
                step.gate_acts[0][k] = i;
                step.gate_acts[1][k] = f;
                step.gate_acts[2][k] = g;
                step.gate_acts[3][k] = o;
                step.c[k] = f * c[k] + i * g;
                step.tanh_c[k] = step.c[k].tanh();
                h[k] = o * step.tanh_c[k];
            }
            c.copy_from_slice(&step.c);
            steps.push(step);
        }
        let mut features = h;
        features.extend_from_slice(&input.skill_vector);
        let dropped = apply_mask(&features, mask);
        let logits = self.dense.forward(&dropped);
        (
            logits,
            LstmCache {
                steps,
                features: dropped,
                mask: mask.map(|m| m.to_vec()),
            },
        )
    }

    pub fn backward(&mut self, input: &EncodedInput, cache: &LstmCache, dlogits: [f64; 2]) {
        let h_dim = self.hidden;
        let dfeat_dropped = self.dense.backward(dlogits, &cache.features);
        let dfeat = apply_mask(&dfeat_dropped, cache.mask.as_deref());
        let mut dh = dfeat[..h_dim].to_vec();
        let mut dc = vec![0.0; h_dim];
        for (t, step) in cache.steps.iter().enumerate().rev() {
            let [i, f, g, o] = &step.gate_acts;
            let mut gate_deltas: [Vec<f64>; 4] = std::array::from_fn(|_| vec![0.0; h_dim]);
            let mut dc_prev = vec![0.0; h_dim];
            for k in 0..h_dim {
                let do_raw = dh[k] * step.tanh_c[k];
                let dct = dc[k] + dh[k] * o[k] * (1.0 - step.tanh_c[k] * step.tanh_c[k]);
                let di = dct * g[k];
                let dg = dct * i[k];
                let df = dct * step.c_prev[k];
                dc_prev[k] = dct * f[k];
                gate_deltas[0][k] = di * i[k] * (1.0 - i[k]);
                gate_deltas[1][k] = df * f[k] * (1.0 - f[k]);
                gate_deltas[2][k] = dg * (1.0 - g[k] * g[k]);
                gate_deltas[3][k] = do_raw * o[k] * (1.0 - o[k]);
            }
            let x = self.embedding.row(input.indices[t]).to_vec();
            let mut dx = vec![0.0; self.embed_dim];
            let mut dh_prev = vec![0.0; h_dim];
            for (gate, delta) in self.gates.iter_mut().zip(&gate_deltas) {
                gate.wx.grad_add_outer(delta, &x);
                gate.wh.grad_add_outer(delta, &step.h_prev);
                gate.b.grad_add(delta);
                gate.wx.matvec_t_add(delta, &mut dx);
                gate.wh.matvec_t_add(delta, &mut dh_prev);
            }
            for (grad, dv) in self
                .embedding
                .grad_row_mut(input.indices[t])
                .iter_mut()
                .zip(&dx)
            {
                *grad += dv;
            }
            dh = dh_prev;
            dc = dc_prev;
        }
    }
}
