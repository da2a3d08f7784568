//! Finite-difference verification of the hand-written backpropagation.
//!
//! Builds a small randomized model (embedding dim 8, hidden 8, dropout
//! off), computes the analytic gradient of the cross-entropy loss for one
//! input, and compares every trainable parameter against central finite
//! differences with step 1e-5.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::embed::EmbeddingTable;
use crate::model::net::{EncodedInput, Net};
use crate::model::tensor::{cross_entropy, softmax2};
use crate::model::vocab::Vocab;
use crate::model::{ClassifierModel, ModelKind, TrainConfig};
use crate::represent::{RepresentationMode, RepresentedInput};

const STEP: f64 = 1e-5;
const SMALL_DIM: usize = 8;

/// Outcome of one gradient check.
///
/// The relative error denominator is floored at 1e-8, so a parameter whose
/// true gradient is tiny can report an error dominated by the roundoff of
/// the difference quotient itself; `worst_analytic`/`worst_numeric` make
/// that case recognizable.
#[derive(Debug, Clone, PartialEq)]
pub struct GradCheckReport {
    pub kind: ModelKind,
    pub mode: RepresentationMode,
    /// max over parameters of |ga - gn| / max(|ga|, |gn|, 1e-8)
    pub max_relative_error: f64,
    pub checked_parameters: usize,
    pub worst_tensor: String,
    /// Analytic gradient at the worst parameter.
    pub worst_analytic: f64,
    /// Central-difference gradient at the worst parameter.
    pub worst_numeric: f64,
}

fn sample_tokens(mode: RepresentationMode) -> Vec<String> {
    let words: &[&str] = match mode {
        RepresentationMode::Unmodified => &["friendly", "team", "with", "great", "benefits"],
        RepresentationMode::Masked | RepresentationMode::MaskedWithEmbedding => {
            &["friendly", "xxx", "xxx", "great", "benefits"]
        }
        RepresentationMode::Tagged => {
            &["friendly", "<begin>", "team", "player", "<end>", "benefits"]
        }
    };
    words.iter().map(|s| s.to_string()).collect()
}

fn loss_of(net: &Net, input: &EncodedInput, class: usize) -> f64 {
    let (logits, _) = net.forward(input, None);
    cross_entropy(logits, class)
}

/// Runs the check for one architecture/representation pair.
pub fn gradient_check(kind: ModelKind, mode: RepresentationMode, seed: u64) -> GradCheckReport {
    let mut config = TrainConfig::new(kind, mode);
    config.seed = seed;
    config.hidden_size = SMALL_DIM;
    config.max_doc_len = 8;
    config.filter_widths = vec![2, 3];
    config.filters_per_width = 4;
    config.dropout = Some(0.0);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // two in-table words, the rest initialized randomly: both embedding
    // initialization paths contribute parameters
    let table = EmbeddingTable::from_entries(
        SMALL_DIM,
        [
            ("friendly".to_string(), (0..SMALL_DIM).map(|i| 0.1 * i as f64 - 0.3).collect()),
            ("team".to_string(), (0..SMALL_DIM).map(|i| 0.25 - 0.05 * i as f64).collect()),
        ],
        seed,
    )
    .expect("valid table");
    let input = RepresentedInput {
        tokens: sample_tokens(mode),
        skill_vector: mode
            .uses_skill_vector()
            .then(|| (0..SMALL_DIM).map(|_| rng.gen_range(-0.5..=0.5)).collect()),
        mode,
        label: None,
    };
    let vocab = Vocab::build([input.tokens.as_slice()]);
    let mut model = ClassifierModel::init(&config, vocab, &table, &mut rng);
    for tensor in model.net.tensors_mut() {
        let start = tensor.trainable_start();
        for v in &mut tensor.data[start..] {
            *v = rng.gen_range(-0.5..=0.5);
        }
    }

    let encoded = model.encode(&input).expect("valid input");
    let class = 1;
    model.net.zero_grads();
    let (logits, cache) = model.net.forward(&encoded, None);
    let probs = softmax2(logits);
    let mut dlogits = probs;
    dlogits[class] -= 1.0;
    model.net.backward(&encoded, &cache, dlogits);
    let analytic: Vec<Vec<f64>> = model.net.tensors().iter().map(|t| t.grad.clone()).collect();

    let mut report = GradCheckReport {
        kind,
        mode,
        max_relative_error: 0.0,
        checked_parameters: 0,
        worst_tensor: String::new(),
        worst_analytic: 0.0,
        worst_numeric: 0.0,
    };
    // index loops: the perturbation needs `model.net` mutable while the
    // analytic copies stay readable
    #[allow(clippy::needless_range_loop)]
    for ti in 0..analytic.len() {
        let (start, len, name) = {
            let t = model.net.tensors()[ti];
            (t.trainable_start(), t.len(), t.name.clone())
        };
        for i in start..len {
            let original = model.net.tensors()[ti].data[i];
            model.net.tensors_mut()[ti].data[i] = original + STEP;
            let loss_plus = loss_of(&model.net, &encoded, class);
            model.net.tensors_mut()[ti].data[i] = original - STEP;
            let loss_minus = loss_of(&model.net, &encoded, class);
            model.net.tensors_mut()[ti].data[i] = original;
            let numeric = (loss_plus - loss_minus) / (2.0 * STEP);
            let ga = analytic[ti][i];
            let relative = (ga - numeric).abs() / ga.abs().max(numeric.abs()).max(1e-8);
            if relative > report.max_relative_error {
                report.max_relative_error = relative;
                report.worst_tensor = name.clone();
                report.worst_analytic = ga;
                report.worst_numeric = numeric;
            }
            report.checked_parameters += 1;
        }
    }
    report
}
