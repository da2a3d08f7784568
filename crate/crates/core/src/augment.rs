//! Weak-label training-data construction from annotation vote counts.
//!
//! Skills whose pooled annotations are nearly unanimous become seed skills:
//! every corpus occurrence of a negative seed is labeled negative (after a
//! lexical exclusion filter drops snippets that plausibly talk about the
//! candidate anyway), and every occurrence of a positive seed is labeled
//! positive. Labels depend only on seed membership and the exclusion rule,
//! never on classifier output.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::lexicon::SkillId;
use crate::matcher::Snippet;
use crate::preprocess::normalize;
use crate::represent::Label;

/// Vote threshold above which a skill becomes a negative seed.
pub const DEFAULT_NEG_RATIO: f64 = 0.7;

/// Context phrases that disqualify a snippet from negative mining.
pub const DEFAULT_EXCLUSION_PHRASES: [&str; 3] = ["candidate", "individual", "looking for"];

/// Pooled annotation votes for one snippet.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnotationRecord {
    pub source_id: String,
    pub skill_id: SkillId,
    pub votes_positive: u32,
    pub votes_negative: u32,
}

/// Seed skills selected from the annotations.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SeedSkills {
    /// Skills described as non-candidate in more than `neg_ratio` of votes.
    pub negative: BTreeSet<SkillId>,
    /// Skills that described only the candidate (zero negative votes).
    pub positive: BTreeSet<SkillId>,
}

/// A snippet with its weak label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledSnippet {
    pub snippet: Snippet,
    pub label: Label,
}

/// Pools votes per skill and selects seeds: negative when the non-candidate
/// vote fraction strictly exceeds `neg_ratio`, positive when it is zero.
pub fn select_seed_skills(annotations: &[AnnotationRecord], neg_ratio: f64) -> SeedSkills {
    let mut votes: BTreeMap<SkillId, (u64, u64)> = BTreeMap::new();
    for record in annotations {
        let entry = votes.entry(record.skill_id).or_insert((0, 0));
        entry.0 += u64::from(record.votes_negative);
        entry.1 += u64::from(record.votes_positive);
    }
    let mut seeds = SeedSkills::default();
    for (skill_id, (neg, pos)) in votes {
        let total = neg + pos;
        if total == 0 {
            continue;
        }
        let neg_fraction = neg as f64 / total as f64;
        if neg_fraction > neg_ratio {
            seeds.negative.insert(skill_id);
        } else if neg == 0 {
            seeds.positive.insert(skill_id);
        }
    }
    seeds
}

/// True if `phrase` occurs as consecutive tokens of `context`.
fn contains_phrase(context: &[String], phrase: &[String]) -> bool {
    !phrase.is_empty()
        && context
            .windows(phrase.len())
            .any(|window| window == phrase)
}

/// Mines weakly-labeled snippets for one polarity.
///
/// Negative mining keeps snippets of negative-seed skills whose context
/// window contains none of the exclusion phrases; "near the skill" is
/// operationalized as anywhere in the snippet's left or right window.
/// Positive mining keeps every snippet of a positive-seed skill. The result
/// preserves corpus order and is truncated to `limit`.
pub fn mine_weak_labels(
    snippets: &[Snippet],
    seeds: &BTreeSet<SkillId>,
    polarity: Label,
    exclusion_phrases: &[String],
    limit: usize,
) -> Vec<LabeledSnippet> {
    let exclusions: Vec<Vec<String>> = exclusion_phrases
        .iter()
        .map(|p| normalize(p))
        .filter(|p| !p.is_empty())
        .collect();
    let mut labeled = Vec::new();
    for snippet in snippets {
        if labeled.len() == limit {
            break;
        }
        if !seeds.contains(&snippet.skill_id) {
            continue;
        }
        if polarity == Label::Negative {
            let excluded = exclusions.iter().any(|phrase| {
                contains_phrase(&snippet.left, phrase) || contains_phrase(&snippet.right, phrase)
            });
            if excluded {
                continue;
            }
        }
        labeled.push(LabeledSnippet {
            snippet: snippet.clone(),
            label: polarity,
        });
    }
    labeled
}

#[cfg(test)]
mod tests {
    use super::*;

    fn annotation(skill_id: SkillId, neg: u32, pos: u32) -> AnnotationRecord {
        AnnotationRecord {
            source_id: format!("s{skill_id}"),
            skill_id,
            votes_positive: pos,
            votes_negative: neg,
        }
    }

    fn snippet(skill_id: SkillId, left: &[&str], right: &[&str], source: &str) -> Snippet {
        Snippet {
            left: left.iter().map(|s| s.to_string()).collect(),
            skill: vec!["friendly".to_string()],
            right: right.iter().map(|s| s.to_string()).collect(),
            skill_id,
            source_id: source.to_string(),
        }
    }

    fn phrases(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn strong_negative_majority_becomes_negative_seed() {
        let seeds = select_seed_skills(&[annotation(1, 8, 2)], 0.7);
        assert!(seeds.negative.contains(&1));
        assert!(seeds.positive.is_empty());
    }

    #[test]
    fn all_positive_votes_become_positive_seed() {
        let seeds = select_seed_skills(&[annotation(2, 0, 5)], 0.7);
        assert!(seeds.positive.contains(&2));
        assert!(seeds.negative.is_empty());
    }

    #[test]
    fn exact_ratio_is_not_a_negative_seed() {
        // strictly more than 70% is required
        let seeds = select_seed_skills(&[annotation(3, 7, 3)], 0.7);
        assert!(!seeds.negative.contains(&3));
        assert!(!seeds.positive.contains(&3));
    }

    #[test]
    fn votes_pool_across_annotations_of_a_skill() {
        let seeds = select_seed_skills(&[annotation(4, 2, 0), annotation(4, 6, 2)], 0.7);
        assert!(seeds.negative.contains(&4)); // 8/10 pooled
    }

    #[test]
    fn exclusion_phrase_in_context_discards_the_snippet() {
        let seeds: BTreeSet<SkillId> = [1].into();
        let snippets = vec![
            snippet(1, &["we", "are", "looking", "for"], &["people"], "0:0"),
            snippet(1, &["join", "our"], &["environment"], "0:1"),
            snippet(1, &["the"], &["individual", "should"], "0:2"),
        ];
        let mined = mine_weak_labels(
            &snippets,
            &seeds,
            Label::Negative,
            &phrases(&DEFAULT_EXCLUSION_PHRASES),
            usize::MAX,
        );
        assert_eq!(mined.len(), 1);
        assert_eq!(mined[0].snippet.source_id, "0:1");
        assert_eq!(mined[0].label, Label::Negative);
    }

    #[test]
    fn multi_word_exclusion_requires_consecutive_tokens() {
        let seeds: BTreeSet<SkillId> = [1].into();
        let snippets = vec![snippet(1, &["looking", "ahead", "for"], &[], "0:0")];
        let mined = mine_weak_labels(
            &snippets,
            &seeds,
            Label::Negative,
            &phrases(&["looking for"]),
            usize::MAX,
        );
        assert_eq!(mined.len(), 1);
    }

    #[test]
    fn positive_mining_applies_no_exclusion_filter() {
        let seeds: BTreeSet<SkillId> = [1].into();
        let snippets = vec![snippet(1, &["looking", "for"], &[], "0:0")];
        let mined = mine_weak_labels(
            &snippets,
            &seeds,
            Label::Positive,
            &phrases(&DEFAULT_EXCLUSION_PHRASES),
            usize::MAX,
        );
        assert_eq!(mined.len(), 1);
        assert_eq!(mined[0].label, Label::Positive);
    }

    #[test]
    fn limit_truncates_in_corpus_order() {
        let seeds: BTreeSet<SkillId> = [1].into();
        let snippets: Vec<Snippet> = (0..20_000)
            .map(|i| snippet(1, &["ctx"], &[], &format!("0:{i}")))
            .collect();
        let mined = mine_weak_labels(&snippets, &seeds, Label::Negative, &[], 15_000);
        assert_eq!(mined.len(), 15_000);
        assert_eq!(mined[0].snippet.source_id, "0:0");
        assert_eq!(mined[14_999].snippet.source_id, "0:14999");
    }

    #[test]
    fn non_seed_skills_are_ignored() {
        let seeds: BTreeSet<SkillId> = [1].into();
        let snippets = vec![snippet(2, &["ctx"], &[], "0:0")];
        assert!(mine_weak_labels(&snippets, &seeds, Label::Positive, &[], 10).is_empty());
    }
}
