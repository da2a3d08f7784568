//! Token-to-index mapping for classifier embedding matrices.
//!
//! Index 0 is the padding entry (zero embedding, never updated), index 1
//! the shared unknown-word entry, and indices 2..5 the reserved
//! representation tokens. Corpus words follow in first-occurrence order of
//! the training data, which makes the mapping deterministic for a given
//! dataset.

use std::collections::HashMap;

use crate::{BEGIN_TOKEN, END_TOKEN, MASK_TOKEN};

pub(crate) const PAD_INDEX: usize = 0;
pub(crate) const UNK_INDEX: usize = 1;

const PAD_WORD: &str = "<pad>";
const UNK_WORD: &str = "<unk>";

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Vocab {
    words: Vec<String>,
    index: HashMap<String, usize>,
}

impl Vocab {
    /// Builds the vocabulary from training-data token streams.
    pub fn build<'a, I>(token_streams: I) -> Self
    where
        I: IntoIterator<Item = &'a [String]>,
    {
        let mut vocab = Vocab::with_specials();
        for tokens in token_streams {
            for token in tokens {
                vocab.insert(token);
            }
        }
        vocab
    }

    fn with_specials() -> Self {
        let mut vocab = Vocab {
            words: Vec::new(),
            index: HashMap::new(),
        };
        for word in [PAD_WORD, UNK_WORD, MASK_TOKEN, BEGIN_TOKEN, END_TOKEN] {
            vocab.insert(word);
        }
        vocab
    }

    /// Restores a vocabulary from a checkpoint word list.
    pub fn from_words(words: Vec<String>) -> Self {
        let index = words
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), i))
            .collect();
        Vocab { words, index }
    }

    fn insert(&mut self, token: &str) -> usize {
        if let Some(&i) = self.index.get(token) {
            return i;
        }
        let i = self.words.len();
        self.words.push(token.to_string());
        self.index.insert(token.to_string(), i);
        i
    }

    pub fn lookup(&self, token: &str) -> usize {
        self.index.get(token).copied().unwrap_or(UNK_INDEX)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn encode(&self, tokens: &[String]) -> Vec<usize> {
        tokens.iter().map(|t| self.lookup(t)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn specials_come_first_and_unknowns_map_to_unk() {
        let data = [vec!["team".to_string(), "player".to_string()]];
        let vocab = Vocab::build(data.iter().map(|v| v.as_slice()));
        assert_eq!(vocab.lookup("<pad>"), PAD_INDEX);
        assert_eq!(vocab.lookup("<unk>"), UNK_INDEX);
        assert_eq!(vocab.lookup(MASK_TOKEN), 2);
        assert_eq!(vocab.lookup("team"), 5);
        assert_eq!(vocab.lookup("never-seen"), UNK_INDEX);
        assert_eq!(vocab.len(), 7);
    }

    #[test]
    fn round_trips_through_word_list() {
        let data = [vec!["a".to_string(), "b".to_string(), "a".to_string()]];
        let vocab = Vocab::build(data.iter().map(|v| v.as_slice()));
        let restored = Vocab::from_words(vocab.words().to_vec());
        assert_eq!(vocab, restored);
    }
}
