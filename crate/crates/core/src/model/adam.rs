//! Adam optimizer with bias correction over the networks' named tensors.

use crate::model::tensor::Tensor;

const BETA1: f64 = 0.9;
const BETA2: f64 = 0.999;
const EPSILON: f64 = 1e-8;

pub(crate) struct Adam {
    learning_rate: f64,
    step: u64,
    first_moment: Vec<Vec<f64>>,
    second_moment: Vec<Vec<f64>>,
}

impl Adam {
    pub fn new(learning_rate: f64, tensors: &[&Tensor]) -> Self {
        Adam {
            learning_rate,
            step: 0,
            first_moment: tensors.iter().map(|t| vec![0.0; t.len()]).collect(),
            second_moment: tensors.iter().map(|t| vec![0.0; t.len()]).collect(),
        }
    }

    /// Applies one update from the accumulated gradients. Frozen leading
    /// rows (the padding embedding) are skipped.
    pub fn step(&mut self, tensors: &mut Vec<&mut Tensor>) {
        self.step += 1;
        let bias1 = 1.0 - BETA1.powi(self.step as i32);
        let bias2 = 1.0 - BETA2.powi(self.step as i32);
        for (tensor, (m, v)) in tensors
            .iter_mut()
            .zip(self.first_moment.iter_mut().zip(&mut self.second_moment))
        {
            let start = tensor.trainable_start();
            for idx in start..tensor.len() {
                let g = tensor.grad[idx];
                m[idx] = BETA1 * m[idx] + (1.0 - BETA1) * g;
                v[idx] = BETA2 * v[idx] + (1.0 - BETA2) * g * g;
                let m_hat = m[idx] / bias1;
                let v_hat = v[idx] / bias2;
                tensor.data[idx] -= self.learning_rate * m_hat / (v_hat.sqrt() + EPSILON);
            }
        }
    }
}
