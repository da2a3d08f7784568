//! Deterministic text normalization shared by lexicon loading, corpus
//! matching, and classifier input preparation.
//!
//! Matching only requires that the lexicon and the corpus are normalized
//! *identically*, so everything here is rule-based and dependency-free.
//! The rules are an approximation of a dictionary lemmatizer: noun plurals
//! are reduced, verbs and comparatives are left alone.

/// Ordered list of lowercase tokens. Tokens are non-empty, contain no
/// whitespace, and the only punctuation-only token is `,`.
pub type TokenSequence = Vec<String>;

/// Words ending in `s` that are not plurals and would be mangled by the
/// suffix rules.
const LEMMA_EXCEPTIONS: [&str; 11] = [
    "is", "its", "this", "as", "was", "has", "his", "always", "perhaps", "news", "yes",
];

/// Splits `text` on whitespace, case-folds, strips leading/trailing
/// punctuation from each fragment, and keeps commas as standalone `,`
/// tokens. Punctuation-only fragments other than commas are dropped.
/// Interior punctuation (hyphens, apostrophes, number commas) is left in
/// place, so `fault-tolerant` stays one token.
pub fn tokenize(text: &str) -> TokenSequence {
    let mut tokens = Vec::new();
    for fragment in text.split_whitespace() {
        let fragment = fragment.to_lowercase();
        let core = fragment.trim_matches(|c: char| !c.is_alphanumeric());
        if core.is_empty() {
            if fragment.contains(',') {
                tokens.push(",".to_string());
            }
            continue;
        }
        let start = fragment.find(core).expect("core is a substring");
        if fragment[..start].contains(',') {
            tokens.push(",".to_string());
        }
        tokens.push(core.to_string());
        if fragment[start + core.len()..].contains(',') {
            tokens.push(",".to_string());
        }
    }
    tokens
}

/// Rule-based suffix reduction for English noun plurals. The input is
/// expected to be a lowercase token. The rules are chosen so that the
/// output is always a fixed point of `lemmatize`, which makes `normalize`
/// idempotent.
pub fn lemmatize(token: &str) -> String {
    if LEMMA_EXCEPTIONS.contains(&token) {
        return token.to_string();
    }
    let n = token.len();
    let stem = |k: usize| token[..n - k].to_string();
    let candidate = if token.ends_with("ies") && n >= 5 {
        format!("{}y", &token[..n - 3])
    } else if token.ends_with("sses") && n >= 5 {
        stem(2)
    } else if token.ends_with("ses") && n >= 4 {
        stem(1)
    } else if ((token.ends_with("xes") || token.ends_with("zes")) && n >= 4)
        || ((token.ends_with("ches") || token.ends_with("shes")) && n >= 5)
    {
        stem(2)
    } else if token.ends_with('s')
        && !token.ends_with("ss")
        && !token.ends_with("us")
        && !token.ends_with("is")
        && n >= 4
    {
        stem(1)
    } else {
        return token.to_string();
    };
    // stripping may expose interior punctuation ("a0,s" -> "a0,"); such a
    // token would re-split on the next tokenize pass, so leave it alone
    if candidate.chars().last().is_some_and(char::is_alphanumeric) {
        candidate
    } else {
        token.to_string()
    }
}

/// Tokenizes and lemmatizes `text`. This is the single normalization entry
/// point used everywhere a token sequence is produced.
pub fn normalize(text: &str) -> TokenSequence {
    tokenize(text).iter().map(|t| lemmatize(t)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn toks(v: &[&str]) -> TokenSequence {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn tokenize_strips_trailing_punctuation() {
        assert_eq!(
            tokenize("Fault tolerant systems..."),
            toks(&["fault", "tolerant", "systems"])
        );
    }

    #[test]
    fn tokenize_keeps_commas_as_tokens() {
        assert_eq!(
            tokenize("accurate, legible documentation"),
            toks(&["accurate", ",", "legible", "documentation"])
        );
    }

    #[test]
    fn tokenize_empty_input() {
        assert_eq!(tokenize(""), Vec::<String>::new());
        assert_eq!(tokenize("  \t \n"), Vec::<String>::new());
    }

    #[test]
    fn tokenize_keeps_hyphenated_words_whole() {
        assert_eq!(tokenize("fault-tolerant design"), toks(&["fault-tolerant", "design"]));
    }

    #[test]
    fn tokenize_standalone_comma_and_dropped_punctuation() {
        assert_eq!(tokenize("a , b"), toks(&["a", ",", "b"]));
        assert_eq!(tokenize("a -- b !!"), toks(&["a", "b"]));
        assert_eq!(tokenize(",and"), toks(&[",", "and"]));
    }

    #[test]
    fn lemmatize_plural_rules() {
        assert_eq!(lemmatize("skills"), "skill");
        assert_eq!(lemmatize("abilities"), "ability");
        assert_eq!(lemmatize("this"), "this");
        assert_eq!(lemmatize("boxes"), "box");
        assert_eq!(lemmatize("churches"), "church");
        assert_eq!(lemmatize("wishes"), "wish");
        assert_eq!(lemmatize("classes"), "class");
        assert_eq!(lemmatize("houses"), "house");
        assert_eq!(lemmatize("business"), "business");
        assert_eq!(lemmatize("focus"), "focus");
        assert_eq!(lemmatize("analysis"), "analysis");
        assert_eq!(lemmatize(","), ",");
    }

    #[test]
    fn normalize_composes_rules() {
        assert_eq!(
            normalize("Communication Skills are required"),
            toks(&["communication", "skill", "are", "required"])
        );
        assert_eq!(normalize("Polite manners"), toks(&["polite", "manner"]));
        assert_eq!(normalize("friendly team,"), toks(&["friendly", "team", ","]));
    }

    #[test]
    fn reserved_tokens_survive_only_verbatim() {
        // tag-like input loses its angle brackets, so no reserved token
        // appears unless it was already one
        assert_eq!(normalize("<begin> <end>"), toks(&["begin", "end"]));
        assert_eq!(normalize("xxx"), toks(&["xxx"]));
    }

    #[test]
    fn normalize_idempotent_on_tricky_plurals() {
        for word in ["buses", "gases", "phrases", "glasses", "classes", "processes", "uses"] {
            let once = normalize(word);
            let again = normalize(&once.join(" "));
            assert_eq!(once, again, "not idempotent on {word:?}");
        }
    }

    proptest! {
        #[test]
        fn normalize_is_idempotent(text in "[ a-zA-Z0-9,.!?()'-]{0,60}") {
            let once = normalize(&text);
            let again = normalize(&once.join(" "));
            prop_assert_eq!(once, again);
        }

        #[test]
        fn tokens_are_lowercase_nonempty_and_whitespace_free(text in ".{0,60}") {
            for t in normalize(&text) {
                prop_assert!(!t.is_empty());
                prop_assert!(!t.chars().any(char::is_whitespace));
                prop_assert_eq!(t.to_lowercase(), t.clone());
                // the only punctuation-only token is a comma
                if t.chars().all(|c| !c.is_alphanumeric()) {
                    prop_assert_eq!(t, ",");
                }
            }
        }

        #[test]
        fn lemmatize_is_a_fixed_point(word in "[a-z]{1,12}") {
            let once = lemmatize(&word);
            prop_assert_eq!(lemmatize(&once), once.clone());
        }
    }
}
