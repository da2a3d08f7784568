//! Metrics, precision-fixed threshold calibration, the naive baseline, and
//! the skill-frequency filter report.
//!
//! Scores are probabilities of the positive (candidate) class; a snippet is
//! predicted positive when its score is at or above the decision threshold.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::lexicon::SkillId;
use crate::represent::Label;
use crate::Result;

/// Binary confusion counts; positive class = candidate skill.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct Confusion {
    pub tp: u64,
    pub fp: u64,
    pub tn: u64,
    pub fn_: u64,
}

impl Confusion {
    pub fn from_scores(scores: &[f64], labels: &[Label], threshold: f64) -> Self {
        let mut c = Confusion::default();
        for (score, label) in scores.iter().zip(labels) {
            match (*score >= threshold, label.is_positive()) {
                (true, true) => c.tp += 1,
                (true, false) => c.fp += 1,
                (false, true) => c.fn_ += 1,
                (false, false) => c.tn += 1,
            }
        }
        c
    }

    pub fn total(&self) -> u64 {
        self.tp + self.fp + self.tn + self.fn_
    }

    pub fn precision(&self) -> f64 {
        ratio(self.tp, self.tp + self.fp)
    }

    pub fn recall(&self) -> f64 {
        ratio(self.tp, self.tp + self.fn_)
    }

    pub fn accuracy(&self) -> f64 {
        ratio(self.tp + self.tn, self.total())
    }
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

fn f1(precision: f64, recall: f64) -> f64 {
    if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    }
}

/// Per-class F1 averaged with weights proportional to class support. A
/// class with zero support contributes weight zero; a 0/0 precision or
/// recall counts as zero.
pub fn f1_weighted(confusion: &Confusion) -> Result<f64> {
    let total = confusion.total();
    if total == 0 {
        return Err(crate::Error::EmptyEvalInput("empty confusion matrix"));
    }
    let f1_pos = f1(confusion.precision(), confusion.recall());
    let precision_neg = ratio(confusion.tn, confusion.tn + confusion.fn_);
    let recall_neg = ratio(confusion.tn, confusion.tn + confusion.fp);
    let f1_neg = f1(precision_neg, recall_neg);
    let support_pos = (confusion.tp + confusion.fn_) as f64;
    let support_neg = (confusion.tn + confusion.fp) as f64;
    Ok((support_pos * f1_pos + support_neg * f1_neg) / total as f64)
}

/// Result of precision-fixed threshold calibration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Calibration {
    pub threshold: f64,
    pub precision: f64,
    pub recall: f64,
    /// Set when no threshold reaches the target precision; `threshold` is
    /// then the one with maximum precision.
    pub target_unattained: bool,
}

/// Candidate thresholds: 0, 1, and the midpoints between consecutive
/// distinct sorted scores. This set realizes every achievable confusion
/// under the `score >= threshold` rule.
pub fn threshold_candidates(scores: &[f64]) -> Vec<f64> {
    let mut distinct: Vec<f64> = scores.to_vec();
    distinct.sort_by(|a, b| a.partial_cmp(b).expect("scores are finite"));
    distinct.dedup();
    let mut candidates = vec![0.0];
    candidates.extend(distinct.windows(2).map(|w| (w[0] + w[1]) / 2.0));
    candidates.push(1.0);
    candidates
}

/// Sweeps the candidate thresholds and returns the one maximizing recall
/// among those whose precision meets `target_precision`; recall ties break
/// toward the lower (more permissive) threshold. If the target is not
/// attainable, returns the threshold with maximum precision and flags it.
pub fn calibrate_threshold(
    scores: &[f64],
    labels: &[Label],
    target_precision: f64,
) -> Result<Calibration> {
    if scores.is_empty() || scores.len() != labels.len() {
        return Err(crate::Error::EmptyEvalInput(
            "calibration needs equally many scores and labels",
        ));
    }
    if !(target_precision > 0.0 && target_precision <= 1.0) {
        return Err(crate::Error::InvalidConfig(format!(
            "target precision must be in (0, 1], got {target_precision}"
        )));
    }
    let mut best_attained: Option<Calibration> = None;
    let mut best_fallback: Option<Calibration> = None;
    for threshold in threshold_candidates(scores) {
        let confusion = Confusion::from_scores(scores, labels, threshold);
        let point = Calibration {
            threshold,
            precision: confusion.precision(),
            recall: confusion.recall(),
            target_unattained: false,
        };
        if point.precision >= target_precision
            && best_attained.as_ref().is_none_or(|b| point.recall > b.recall)
        {
            best_attained = Some(point.clone());
        }
        let better_fallback = best_fallback.as_ref().is_none_or(|b| {
            point.precision > b.precision
                || (point.precision == b.precision && point.recall > b.recall)
        });
        if better_fallback {
            best_fallback = Some(point);
        }
    }
    Ok(best_attained.unwrap_or_else(|| {
        let mut fallback = best_fallback.expect("candidate set is never empty");
        fallback.target_unattained = true;
        fallback
    }))
}

/// The trivial matcher-only baseline: label every match positive. Returns
/// (precision, recall); recall is 1 by construction and precision is the
/// positive-class fraction.
pub fn naive_baseline(labels: &[Label]) -> Result<(f64, f64)> {
    if labels.is_empty() {
        return Err(crate::Error::EmptyEvalInput("naive baseline needs labels"));
    }
    let positives = labels.iter().filter(|l| l.is_positive()).count();
    Ok((positives as f64 / labels.len() as f64, 1.0))
}

/// Full evaluation at a calibrated threshold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub precision: f64,
    pub recall: f64,
    pub f1_weighted: f64,
    pub threshold: f64,
    pub target_unattained: bool,
    pub confusion: Confusion,
    /// Precision of the naive all-positive baseline (the positive fraction).
    pub naive_precision: f64,
}

/// Calibrates the threshold to `target_precision` and reports metrics at
/// the calibrated threshold.
pub fn evaluate(scores: &[f64], labels: &[Label], target_precision: f64) -> Result<EvalReport> {
    let calibration = calibrate_threshold(scores, labels, target_precision)?;
    let confusion = Confusion::from_scores(scores, labels, calibration.threshold);
    let (naive_precision, _) = naive_baseline(labels)?;
    Ok(EvalReport {
        precision: confusion.precision(),
        recall: confusion.recall(),
        f1_weighted: f1_weighted(&confusion)?,
        threshold: calibration.threshold,
        target_unattained: calibration.target_unattained,
        confusion,
        naive_precision,
    })
}

impl EvalReport {
    /// Human-readable key/value rendering, percentages to two decimals.
    pub fn render_text(&self) -> String {
        let c = &self.confusion;
        let mut out = String::new();
        out.push_str(&format!("precision: {:.2}%\n", self.precision * 100.0));
        out.push_str(&format!("recall: {:.2}%\n", self.recall * 100.0));
        out.push_str(&format!("f1_weighted: {:.2}%\n", self.f1_weighted * 100.0));
        out.push_str(&format!("threshold: {:.6}\n", self.threshold));
        out.push_str(&format!("target_unattained: {}\n", self.target_unattained));
        out.push_str(&format!(
            "confusion: tp={} fp={} tn={} fn={}\n",
            c.tp, c.fp, c.tn, c.fn_
        ));
        out.push_str(&format!("naive_precision: {:.2}%\n", self.naive_precision * 100.0));
        out
    }
}

/// Raw vs. post-filter occurrence counts for one skill.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FilterRecord {
    pub skill_id: SkillId,
    pub raw_count: u64,
    /// Occurrences kept: probability of the positive class at or above the
    /// threshold.
    pub filtered_count: u64,
}

/// Per-skill filter counts, sorted by (raw - filtered) descending so the
/// skills most affected by disambiguation come first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FilterReport {
    pub records: Vec<FilterRecord>,
}

/// Builds a filter report from per-snippet skill ids and positive-class
/// scores.
pub fn filter_report(scored: &[(SkillId, f64)], threshold: f64) -> FilterReport {
    let mut counts: BTreeMap<SkillId, (u64, u64)> = BTreeMap::new();
    for (skill_id, score) in scored {
        let entry = counts.entry(*skill_id).or_insert((0, 0));
        entry.0 += 1;
        if *score >= threshold {
            entry.1 += 1;
        }
    }
    let mut records: Vec<FilterRecord> = counts
        .into_iter()
        .map(|(skill_id, (raw_count, filtered_count))| FilterRecord {
            skill_id,
            raw_count,
            filtered_count,
        })
        .collect();
    records.sort_by_key(|r| (std::cmp::Reverse(r.raw_count - r.filtered_count), r.skill_id));
    FilterReport { records }
}
