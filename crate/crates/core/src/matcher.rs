//! Multi-pattern phrase matching over token sequences and context-snippet
//! extraction.
//!
//! Matching is leftmost-longest and non-overlapping: positions are scanned
//! left to right, the longest lexicon phrase starting at a position wins,
//! and scanning resumes after the match. Cluster-mates like `polite` and
//! `polite manners` therefore resolve to the longer, more specific phrase,
//! and every snippet carries exactly one skill.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::lexicon::{SkillId, SkillLexicon};
use crate::preprocess::TokenSequence;
use crate::Result;

/// Default context window: up to this many tokens kept on each side of a
/// matched skill.
pub const DEFAULT_WINDOW: usize = 10;

#[derive(Debug, Default)]
struct TrieNode {
    children: HashMap<String, usize>,
    accept: Option<SkillId>,
}

/// Token trie over the lexicon's normalized phrases. Each accepting node
/// carries the phrase id. Construction is deterministic given the lexicon.
#[derive(Debug)]
pub struct MatchIndex {
    nodes: Vec<TrieNode>,
    pattern_count: usize,
}

/// A skill occurrence: `tokens[start..end]` equals the phrase's normalized
/// tokens.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Match {
    pub skill_id: SkillId,
    pub start: usize,
    pub end: usize,
}

/// A matched skill with up to `window` tokens of context on each side.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Snippet {
    pub left: TokenSequence,
    pub skill: TokenSequence,
    pub right: TokenSequence,
    pub skill_id: SkillId,
    pub source_id: String,
}

impl Snippet {
    /// left ++ skill ++ right, the unmodified classifier input.
    pub fn full_tokens(&self) -> TokenSequence {
        let mut tokens = Vec::with_capacity(self.left.len() + self.skill.len() + self.right.len());
        tokens.extend_from_slice(&self.left);
        tokens.extend_from_slice(&self.skill);
        tokens.extend_from_slice(&self.right);
        tokens
    }
}

/// Builds the token trie for a lexicon.
pub fn build_index(lexicon: &SkillLexicon) -> MatchIndex {
    let mut nodes = vec![TrieNode::default()];
    for phrase in lexicon.phrases() {
        let mut node = 0;
        for token in &phrase.tokens {
            node = match nodes[node].children.get(token) {
                Some(&next) => next,
                None => {
                    nodes.push(TrieNode::default());
                    let next = nodes.len() - 1;
                    nodes[node].children.insert(token.clone(), next);
                    next
                }
            };
        }
        // Lexicon loading collapses duplicate token sequences, so each
        // accepting node is reached by exactly one phrase.
        nodes[node].accept = Some(phrase.id);
    }
    MatchIndex {
        nodes,
        pattern_count: lexicon.len(),
    }
}

impl MatchIndex {
    /// Number of phrases the index accepts.
    pub fn len(&self) -> usize {
        self.pattern_count
    }

    pub fn is_empty(&self) -> bool {
        self.pattern_count == 0
    }

    /// Longest phrase starting at `tokens[start]`, if any.
    fn longest_at(&self, tokens: &[String], start: usize) -> Option<(SkillId, usize)> {
        let mut node = 0;
        let mut best = None;
        for (offset, token) in tokens[start..].iter().enumerate() {
            match self.nodes[node].children.get(token) {
                Some(&next) => node = next,
                None => break,
            }
            if let Some(id) = self.nodes[node].accept {
                best = Some((id, start + offset + 1));
            }
        }
        best
    }
}

/// Finds all leftmost-longest non-overlapping skill occurrences. The input
/// must not contain reserved tokens; they would make the match positions
/// ambiguous once a representation is applied.
pub fn find_matches(tokens: &[String], index: &MatchIndex) -> Result<Vec<Match>> {
    for (position, token) in tokens.iter().enumerate() {
        if crate::is_reserved_token(token) {
            return Err(Error::ReservedToken {
                token: token.clone(),
                position,
            });
        }
    }
    let mut matches = Vec::new();
    let mut pos = 0;
    while pos < tokens.len() {
        match index.longest_at(tokens, pos) {
            Some((skill_id, end)) => {
                matches.push(Match {
                    skill_id,
                    start: pos,
                    end,
                });
                pos = end;
            }
            None => pos += 1,
        }
    }
    Ok(matches)
}

/// Cuts the context snippet for a match: up to `window` tokens on each side,
/// clamped to the sequence bounds.
pub fn extract_snippet(
    tokens: &[String],
    m: &Match,
    window: usize,
    source_id: &str,
) -> Result<Snippet> {
    if m.start >= m.end || m.end > tokens.len() {
        return Err(Error::MatchOutOfBounds {
            start: m.start,
            end: m.end,
            len: tokens.len(),
        });
    }
    Ok(Snippet {
        left: tokens[m.start.saturating_sub(window)..m.start].to_vec(),
        skill: tokens[m.start..m.end].to_vec(),
        right: tokens[m.end..(m.end + window).min(tokens.len())].to_vec(),
        skill_id: m.skill_id,
        source_id: source_id.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexicon::SkillLexicon;
    use proptest::prelude::*;

    fn toks(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn lexicon(phrases: &[&str]) -> SkillLexicon {
        SkillLexicon::from_entries(phrases.iter().map(|p| (0u32, p.to_string()))).unwrap()
    }

    /// Brute-force reference: try every phrase at every start index, then
    /// resolve leftmost-longest without overlaps. Used as the oracle for
    /// `find_matches`.
    fn oracle_matches(tokens: &[String], lexicon: &SkillLexicon) -> Vec<Match> {
        let mut all: Vec<Match> = Vec::new();
        for start in 0..tokens.len() {
            for phrase in lexicon.phrases() {
                let end = start + phrase.tokens.len();
                if end <= tokens.len() && tokens[start..end] == phrase.tokens[..] {
                    all.push(Match {
                        skill_id: phrase.id,
                        start,
                        end,
                    });
                }
            }
        }
        let mut resolved = Vec::new();
        let mut pos = 0;
        while pos < tokens.len() {
            let best = all
                .iter()
                .filter(|m| m.start == pos)
                .max_by_key(|m| m.end)
                .copied();
            match best {
                Some(m) => {
                    resolved.push(m);
                    pos = m.end;
                }
                None => pos += 1,
            }
        }
        resolved
    }

    #[test]
    fn build_index_counts_patterns() {
        let lex = lexicon(&["polite", "polite manners", "team player"]);
        assert_eq!(build_index(&lex).len(), 3);
        assert!(build_index(&lexicon(&[])).is_empty());
    }

    #[test]
    fn finds_adjacent_matches() {
        let lex = lexicon(&["tolerant", "team player"]);
        let index = build_index(&lex);
        let tokens = toks(&["a", "fault", "tolerant", "team", "player"]);
        let expected = vec![
            Match { skill_id: 0, start: 2, end: 3 },
            Match { skill_id: 1, start: 3, end: 5 },
        ];
        assert_eq!(find_matches(&tokens, &index).unwrap(), expected);
        assert_eq!(oracle_matches(&tokens, &lex), expected);
    }

    #[test]
    fn longest_phrase_wins_at_a_position() {
        let lex = lexicon(&["polite", "polite manners"]);
        let index = build_index(&lex);
        let tokens = toks(&["polite", "manner"]);
        let expected = vec![Match { skill_id: 1, start: 0, end: 2 }];
        assert_eq!(find_matches(&tokens, &index).unwrap(), expected);
        assert_eq!(oracle_matches(&tokens, &lex), expected);
    }

    #[test]
    fn empty_input_matches_nothing() {
        let index = build_index(&lexicon(&["tolerant"]));
        assert_eq!(find_matches(&[], &index).unwrap(), vec![]);
    }

    #[test]
    fn reserved_tokens_are_an_input_error() {
        let index = build_index(&lexicon(&["tolerant"]));
        let err = find_matches(&toks(&["a", "xxx", "b"]), &index).unwrap_err();
        assert!(matches!(err, Error::ReservedToken { position: 1, .. }));
        let err = find_matches(&toks(&["<begin>"]), &index).unwrap_err();
        assert!(matches!(err, Error::ReservedToken { position: 0, .. }));
    }

    #[test]
    fn snippet_window_arithmetic() {
        let tokens: Vec<String> = (0..30).map(|i| format!("t{i}")).collect();
        let m = Match { skill_id: 0, start: 12, end: 14 };
        let s = extract_snippet(&tokens, &m, 10, "doc").unwrap();
        assert_eq!(s.left, tokens[2..12].to_vec());
        assert_eq!(s.skill, tokens[12..14].to_vec());
        assert_eq!(s.right, tokens[14..24].to_vec());
    }

    #[test]
    fn snippet_at_sequence_start_has_empty_left() {
        let tokens = toks(&["skill", "needed", "here"]);
        let m = Match { skill_id: 0, start: 0, end: 1 };
        let s = extract_snippet(&tokens, &m, 10, "doc").unwrap();
        assert!(s.left.is_empty());
        assert_eq!(s.right, toks(&["needed", "here"]));
    }

    #[test]
    fn snippet_covering_whole_sequence_has_no_context() {
        let tokens = toks(&["team", "player"]);
        let m = Match { skill_id: 0, start: 0, end: 2 };
        let s = extract_snippet(&tokens, &m, 10, "doc").unwrap();
        assert!(s.left.is_empty());
        assert!(s.right.is_empty());
    }

    #[test]
    fn out_of_bounds_match_is_an_error() {
        let tokens = toks(&["a", "b"]);
        let m = Match { skill_id: 0, start: 1, end: 3 };
        assert!(matches!(
            extract_snippet(&tokens, &m, 10, "doc"),
            Err(Error::MatchOutOfBounds { .. })
        ));
    }

    /// Small-alphabet token sequences and lexicons for oracle equivalence.
    fn arb_case() -> impl Strategy<Value = (Vec<String>, Vec<String>)> {
        let token = prop_oneof![Just("a"), Just("b"), Just("c"), Just("d")];
        let phrase = proptest::collection::vec(token.clone(), 1..4)
            .prop_map(|ts| ts.join(" "));
        (
            proptest::collection::vec(token.prop_map(str::to_string), 0..25),
            proptest::collection::vec(phrase, 0..8),
        )
    }

    proptest! {
        #[test]
        fn matches_agree_with_brute_force_oracle((tokens, phrases) in arb_case()) {
            let lex = SkillLexicon::from_entries(
                phrases.into_iter().map(|p| (0u32, p)),
            ).unwrap();
            let index = build_index(&lex);
            let found = find_matches(&tokens, &index).unwrap();
            prop_assert_eq!(found, oracle_matches(&tokens, &lex));
        }

        #[test]
        fn matches_are_ordered_and_disjoint((tokens, phrases) in arb_case()) {
            let lex = SkillLexicon::from_entries(
                phrases.into_iter().map(|p| (0u32, p)),
            ).unwrap();
            let found = find_matches(&tokens, &build_index(&lex)).unwrap();
            for pair in found.windows(2) {
                prop_assert!(pair[0].end <= pair[1].start);
            }
            for m in &found {
                prop_assert!(m.start < m.end && m.end <= tokens.len());
                let phrase = lex.phrase(m.skill_id).unwrap();
                prop_assert_eq!(&tokens[m.start..m.end], &phrase.tokens[..]);
            }
        }

        #[test]
        fn snippet_is_a_contiguous_subsequence(
            (tokens, phrases) in arb_case(),
            window in 0usize..12,
        ) {
            let lex = SkillLexicon::from_entries(
                phrases.into_iter().map(|p| (0u32, p)),
            ).unwrap();
            let index = build_index(&lex);
            for m in find_matches(&tokens, &index).unwrap() {
                let s = extract_snippet(&tokens, &m, window, "doc").unwrap();
                prop_assert!(s.left.len() <= window);
                prop_assert!(s.right.len() <= window);
                let rejoined = s.full_tokens();
                let start = m.start - s.left.len();
                prop_assert_eq!(&tokens[start..start + rejoined.len()], &rejoined[..]);
            }
        }
    }
}
