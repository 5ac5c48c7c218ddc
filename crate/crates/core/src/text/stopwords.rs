//! The frozen English stopword list shipped with the crate.
//!
//! The list is versioned by its resource name; changing it changes term
//! identities everywhere (index, candidates, query strings), so it must
//! never be edited in place — add a new version instead.

use std::collections::HashSet;
use std::sync::OnceLock;

/// Resource name of the active stopword list.
pub const STOPWORD_LIST_VERSION: &str = "en-v1";

const STOPWORDS_RAW: &str = include_str!("../../resources/stopwords-en-v1.txt");

fn stopword_set() -> &'static HashSet<&'static str> {
    static SET: OnceLock<HashSet<&'static str>> = OnceLock::new();
    SET.get_or_init(|| {
        STOPWORDS_RAW
            .lines()
            .map(str::trim)
            .filter(|w| !w.is_empty())
            .collect()
    })
}

/// True if `word` (already lowercased) is on the frozen stopword list.
pub fn is_stopword(word: &str) -> bool {
    stopword_set().contains(word)
}

/// Number of entries in the active list.
pub fn stopword_count() -> usize {
    stopword_set().len()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn common_function_words_are_stopped() {
        for w in ["the", "in", "of", "and", "a", "i", "is", "with"] {
            assert!(is_stopword(w), "{w} should be a stopword");
        }
    }

    #[test]
    fn content_words_and_single_letters_pass() {
        for w in ["women", "parliaments", "u", "s", "based", "firms"] {
            assert!(!is_stopword(w), "{w} must not be a stopword");
        }
    }

    #[test]
    fn list_is_roughly_four_hundred_entries() {
        let n = stopword_count();
        assert!((300..500).contains(&n), "unexpected list size {n}");
    }
}
