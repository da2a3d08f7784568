//! Named parameter tensors and the handful of dense-linear-algebra kernels
//! the networks need. Everything is double precision; gradients live next
//! to the values they belong to.

use rand::Rng;

/// A named matrix (vectors are `cols == 1`) with its gradient buffer.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Tensor {
    pub name: String,
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
    pub grad: Vec<f64>,
    /// Leading rows excluded from optimizer updates (the padding embedding).
    pub frozen_rows: usize,
}

impl Tensor {
    pub fn zeros(name: &str, rows: usize, cols: usize) -> Self {
        Tensor {
            name: name.to_string(),
            rows,
            cols,
            data: vec![0.0; rows * cols],
            grad: vec![0.0; rows * cols],
            frozen_rows: 0,
        }
    }

    pub fn uniform<R: Rng>(name: &str, rows: usize, cols: usize, range: f64, rng: &mut R) -> Self {
        let mut t = Tensor::zeros(name, rows, cols);
        for v in &mut t.data {
            *v = rng.gen_range(-range..=range);
        }
        t
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    /// Index of the first entry the optimizer may update.
    pub fn trainable_start(&self) -> usize {
        self.frozen_rows * self.cols
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn grad_row_mut(&mut self, r: usize) -> &mut [f64] {
        &mut self.grad[r * self.cols..(r + 1) * self.cols]
    }

    pub fn zero_grad(&mut self) {
        self.grad.iter_mut().for_each(|g| *g = 0.0);
    }

    /// out = W x (requires `x.len() == cols`, `out.len() == rows`).
    pub fn matvec(&self, x: &[f64], out: &mut [f64]) {
        debug_assert_eq!(x.len(), self.cols);
        debug_assert_eq!(out.len(), self.rows);
        for (r, o) in out.iter_mut().enumerate() {
            let row = self.row(r);
            let mut acc = 0.0;
            for (w, xv) in row.iter().zip(x) {
                acc += w * xv;
            }
            *o = acc;
        }
    }

    /// out += W^T y (requires `y.len() == rows`, `out.len() == cols`).
    pub fn matvec_t_add(&self, y: &[f64], out: &mut [f64]) {
        debug_assert_eq!(y.len(), self.rows);
        debug_assert_eq!(out.len(), self.cols);
        for (r, yv) in y.iter().enumerate() {
            if *yv == 0.0 {
                continue;
            }
            let row = self.row(r);
            for (o, w) in out.iter_mut().zip(row) {
                *o += w * yv;
            }
        }
    }

    /// grad += y ⊗ x.
    pub fn grad_add_outer(&mut self, y: &[f64], x: &[f64]) {
        debug_assert_eq!(y.len(), self.rows);
        debug_assert_eq!(x.len(), self.cols);
        for (r, yv) in y.iter().enumerate() {
            if *yv == 0.0 {
                continue;
            }
            let row = &mut self.grad[r * self.cols..(r + 1) * self.cols];
            for (g, xv) in row.iter_mut().zip(x) {
                *g += yv * xv;
            }
        }
    }

    /// grad += y (vector tensors).
    pub fn grad_add(&mut self, y: &[f64]) {
        debug_assert_eq!(y.len(), self.grad.len());
        for (g, yv) in self.grad.iter_mut().zip(y) {
            *g += yv;
        }
    }
}

pub(crate) fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// Numerically stable two-class softmax.
pub(crate) fn softmax2(logits: [f64; 2]) -> [f64; 2] {
    let m = logits[0].max(logits[1]);
    let e0 = (logits[0] - m).exp();
    let e1 = (logits[1] - m).exp();
    let sum = e0 + e1;
    [e0 / sum, e1 / sum]
}

/// Cross-entropy of the true class under the softmax of `logits`.
pub(crate) fn cross_entropy(logits: [f64; 2], class: usize) -> f64 {
    let probs = softmax2(logits);
    -probs[class].max(f64::MIN_POSITIVE).ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matvec_and_transpose() {
        let mut w = Tensor::zeros("w", 2, 3);
        w.data = vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
        let mut out = vec![0.0; 2];
        w.matvec(&[1.0, 0.0, -1.0], &mut out);
        assert_eq!(out, vec![-2.0, -2.0]);
        let mut back = vec![0.0; 3];
        w.matvec_t_add(&[1.0, 1.0], &mut back);
        assert_eq!(back, vec![5.0, 7.0, 9.0]);
    }

    #[test]
    fn softmax_sums_to_one_and_centers_at_zero_logits() {
        let p = softmax2([0.0, 0.0]);
        assert_eq!(p, [0.5, 0.5]);
        let p = softmax2([1000.0, -1000.0]);
        assert!((p[0] + p[1] - 1.0).abs() < 1e-12);
        assert!(p[0] > 0.999);
    }

    #[test]
    fn outer_accumulation() {
        let mut w = Tensor::zeros("w", 2, 2);
        w.grad_add_outer(&[1.0, -1.0], &[2.0, 3.0]);
        assert_eq!(w.grad, vec![2.0, 3.0, -2.0, -3.0]);
    }
}
