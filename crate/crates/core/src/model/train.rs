//! Minibatch Adam training with a seeded 50/50 train/validation split and
//! early stopping on validation weighted F1.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::embed::EmbeddingTable;
use crate::error::Error;
use crate::eval::{f1_weighted, Confusion};
use crate::model::adam::Adam;
use crate::model::net::{sample_dropout_mask, EncodedInput};
use crate::model::tensor::{cross_entropy, softmax2};
use crate::model::vocab::Vocab;
use crate::model::{ClassifierModel, TrainConfig};
use crate::represent::RepresentedInput;
use crate::Result;

/// Validation metrics after one epoch.
#[derive(Debug, Clone, PartialEq)]
pub struct EpochStats {
    pub epoch: usize,
    pub train_loss: f64,
    pub val_f1_weighted: f64,
    pub val_accuracy: f64,
}

/// Progress record of a training run.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TrainingLog {
    pub epochs: Vec<EpochStats>,
    /// Epoch whose parameters the returned model carries.
    pub best_epoch: usize,
    pub best_val_f1_weighted: f64,
    pub best_val_accuracy: f64,
    pub stopped_early: bool,
    pub train_size: usize,
    pub validation_size: usize,
}

/// Trains a classifier on labeled represented inputs.
///
/// The dataset is shuffled with the seeded RNG and split in half: the first
/// half trains, the second half validates. Each epoch runs minibatch Adam
/// on the cross-entropy loss with inverted dropout; the parameters of the
/// epoch with the best validation weighted F1 are kept. Training stops
/// after `patience` epochs without improvement or at `max_epochs`.
/// Everything is deterministic given the config (including the seed) and
/// the dataset order.
pub fn train(
    dataset: &[RepresentedInput],
    table: &EmbeddingTable,
    config: &TrainConfig,
) -> Result<(ClassifierModel, TrainingLog)> {
    config.validate()?;
    if dataset.is_empty() || dataset.iter().any(|d| d.label.is_none()) {
        return Err(Error::EmptyDataset);
    }
    let classes: Vec<usize> = dataset
        .iter()
        .map(|d| d.label.expect("checked above").class_index())
        .collect();
    if classes.iter().all(|&c| c == 0) || classes.iter().all(|&c| c == 1) {
        return Err(Error::SingleClassDataset);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let vocab = Vocab::build(dataset.iter().map(|d| d.tokens.as_slice()));
    let mut model = ClassifierModel::init(config, vocab, table, &mut rng);
    let encoded: Vec<EncodedInput> = dataset
        .iter()
        .map(|d| model.encode(d))
        .collect::<Result<_>>()?;

    let mut order: Vec<usize> = (0..dataset.len()).collect();
    order.shuffle(&mut rng);
    let split = dataset.len() / 2;
    let mut train_idx: Vec<usize> = order[..split].to_vec();
    let val_idx: Vec<usize> = order[split..].to_vec();

    let dropout = config.effective_dropout();
    let feature_len = model.net.feature_len();
    let mut adam = Adam::new(config.learning_rate, &model.net.tensors());
    let mut log = TrainingLog {
        train_size: train_idx.len(),
        validation_size: val_idx.len(),
        ..TrainingLog::default()
    };
    let mut best_f1 = f64::NEG_INFINITY;
    let mut best_params: Vec<Vec<f64>> = Vec::new();
    let mut epochs_since_improvement = 0;

    for epoch in 1..=config.max_epochs {
        train_idx.shuffle(&mut rng);
        let mut epoch_loss = 0.0;
        for (batch_no, batch) in train_idx.chunks(config.batch_size).enumerate() {
            model.net.zero_grads();
            let scale = 1.0 / batch.len() as f64;
            for &sample in batch {
                let mask = if dropout > 0.0 {
                    Some(sample_dropout_mask(feature_len, dropout, &mut rng))
                } else {
                    None
                };
                let (logits, cache) = model.net.forward(&encoded[sample], mask.as_deref());
                let loss = cross_entropy(logits, classes[sample]);
                if !loss.is_finite() || logits.iter().any(|l| !l.is_finite()) {
                    return Err(Error::NonFiniteLoss {
                        epoch,
                        batch: batch_no,
                    });
                }
                epoch_loss += loss;
                let probs = softmax2(logits);
                let mut dlogits = [probs[0] * scale, probs[1] * scale];
                dlogits[classes[sample]] -= scale;
                model.net.backward(&encoded[sample], &cache, dlogits);
            }
            adam.step(&mut model.net.tensors_mut());
        }

        let mut confusion = Confusion::default();
        for &sample in &val_idx {
            let (logits, _) = model.net.forward(&encoded[sample], None);
            let predicted_positive = softmax2(logits)[1] >= 0.5;
            match (predicted_positive, classes[sample] == 1) {
                (true, true) => confusion.tp += 1,
                (true, false) => confusion.fp += 1,
                (false, true) => confusion.fn_ += 1,
                (false, false) => confusion.tn += 1,
            }
        }
        let stats = EpochStats {
            epoch,
            train_loss: epoch_loss / train_idx.len().max(1) as f64,
            val_f1_weighted: if confusion.total() > 0 {
                f1_weighted(&confusion)?
            } else {
                0.0
            },
            val_accuracy: confusion.accuracy(),
        };
        let improved = stats.val_f1_weighted > best_f1;
        log.epochs.push(stats.clone());
        if improved {
            best_f1 = stats.val_f1_weighted;
            log.best_epoch = epoch;
            log.best_val_f1_weighted = stats.val_f1_weighted;
            log.best_val_accuracy = stats.val_accuracy;
            best_params = model.net.tensors().iter().map(|t| t.data.clone()).collect();
            epochs_since_improvement = 0;
        } else {
            epochs_since_improvement += 1;
            if epochs_since_improvement >= config.patience {
                log.stopped_early = true;
                break;
            }
        }
    }

    for (tensor, data) in model.net.tensors_mut().into_iter().zip(best_params) {
        tensor.data = data;
    }
    Ok((model, log))
}
