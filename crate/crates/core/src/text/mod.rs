//! Deterministic text normalization shared by indexing, topic parsing, and
//! query generation, so that term identities agree across the whole
//! pipeline.
//!
//! The pipeline is frozen: Unicode lowercasing, splitting on
//! non-alphanumeric boundaries, stopword removal against the shipped list,
//! and (only where scoring needs conflation) Porter stemming iterated to a
//! fixed point. Tokens reduced to a single character by splitting are kept.

mod porter;
pub mod stopwords;

use std::borrow::Borrow;
use std::fmt;

use thiserror::Error;

pub use stopwords::{is_stopword, STOPWORD_LIST_VERSION};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TextError {
    #[error("invalid term {0:?}: must be non-empty, lowercase, and whitespace-free")]
    InvalidTerm(String),
}

/// A normalized token: non-empty, lowercase, free of whitespace.
///
/// Terms coming out of [`normalize`] are additionally never stopwords; that
/// filter runs before construction, so derived terms (e.g. stems) are not
/// re-checked against the list.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Term(String);

impl Term {
    /// Validating constructor for tokens produced outside [`normalize`]
    /// (tests, candidate terms read back from files).
    pub fn new(surface: impl Into<String>) -> Result<Self, TextError> {
        let surface = surface.into();
        let ok = !surface.is_empty()
            && !surface.chars().any(char::is_whitespace)
            && !surface.chars().any(char::is_uppercase);
        if ok {
            Ok(Term(surface))
        } else {
            Err(TextError::InvalidTerm(surface))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Porter stem of this term, applied to a fixed point so that
    /// `stem(stem(t)) == stem(t)` holds for every term.
    pub fn stem(&self) -> Term {
        let mut current = self.0.clone();
        loop {
            let next = porter::stem_word(&current);
            if next == current {
                return Term(current);
            }
            current = next;
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl Borrow<str> for Term {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl AsRef<str> for Term {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

/// An ordered sequence of terms in first-occurrence order of the source
/// text; duplicates are retained.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct TermSequence(Vec<Term>);

impl TermSequence {
    pub fn new(terms: Vec<Term>) -> Self {
        TermSequence(terms)
    }

    pub fn terms(&self) -> &[Term] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Term> {
        self.0.iter()
    }

    /// Renders the sequence as a space-joined query string.
    pub fn to_query_string(&self) -> String {
        let mut out = String::new();
        for (i, t) in self.0.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            out.push_str(t.as_str());
        }
        out
    }
}

impl IntoIterator for TermSequence {
    type Item = Term;
    type IntoIter = std::vec::IntoIter<Term>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.into_iter()
    }
}

impl<'a> IntoIterator for &'a TermSequence {
    type Item = &'a Term;
    type IntoIter = std::slice::Iter<'a, Term>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl FromIterator<Term> for TermSequence {
    fn from_iter<I: IntoIterator<Item = Term>>(iter: I) -> Self {
        TermSequence(iter.into_iter().collect())
    }
}

/// Normalizes raw text: lowercase, split on non-alphanumeric boundaries,
/// drop stopwords. Duplicates are retained in sequence order; empty input
/// yields an empty sequence.
pub fn normalize(text: &str) -> TermSequence {
    let lowered = text.to_lowercase();
    lowered
        .split(|c: char| !c.is_alphanumeric())
        .filter(|tok| !tok.is_empty() && !is_stopword(tok))
        .map(|tok| Term(tok.to_string()))
        .collect()
}

/// Removes duplicate terms, keeping the first occurrence and preserving
/// order.
pub fn unique_terms(seq: &TermSequence) -> TermSequence {
    let mut seen = std::collections::HashSet::new();
    seq.iter()
        .filter(|t| seen.insert((*t).clone()))
        .cloned()
        .collect()
}

/// Free-function form of [`Term::stem`].
pub fn stem(term: &Term) -> Term {
    term.stem()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn surfaces(seq: &TermSequence) -> Vec<&str> {
        seq.iter().map(Term::as_str).collect()
    }

    #[test]
    fn empty_input_yields_empty_sequence() {
        assert!(normalize("").is_empty());
        assert!(normalize("   \t\n").is_empty());
    }

    #[test]
    fn stopwords_are_removed() {
        let seq = normalize("Women in Parliaments");
        assert_eq!(surfaces(&seq), ["women", "parliaments"]);
    }

    #[test]
    fn splitting_keeps_single_characters_and_duplicates() {
        let seq = normalize("U.S.-based firms, firms");
        assert_eq!(surfaces(&seq), ["u", "s", "based", "firms", "firms"]);
    }

    #[test]
    fn unique_terms_keeps_first_occurrence_order() {
        let seq = normalize("gamma beta gamma alpha beta");
        let uniq = unique_terms(&seq);
        assert_eq!(surfaces(&uniq), ["gamma", "beta", "alpha"]);
        assert!(unique_terms(&TermSequence::default()).is_empty());
        let distinct = normalize("x1 y1 z1");
        assert_eq!(unique_terms(&distinct), distinct);
    }

    #[test]
    fn stem_matches_spec_examples() {
        let t = |s: &str| Term::new(s).unwrap();
        assert_eq!(t("running").stem().as_str(), "run");
        assert_eq!(t("run").stem().as_str(), "run");
        assert_eq!(t("parliaments").stem().as_str(), "parliament");
    }

    #[test]
    fn stem_is_idempotent_on_the_known_unstable_word() {
        let agreed = Term::new("agreed").unwrap();
        let once = agreed.stem();
        assert_eq!(once.stem(), once);
        assert_eq!(once.as_str(), "agr");
    }

    #[test]
    fn term_validation() {
        assert!(Term::new("ok").is_ok());
        assert!(Term::new("").is_err());
        assert!(Term::new("has space").is_err());
        assert!(Term::new("Upper").is_err());
    }

    #[test]
    fn query_string_round_trips_through_normalize() {
        let seq = normalize("nuclear reactor safety reactor");
        let rendered = seq.to_query_string();
        assert_eq!(normalize(&rendered), seq);
    }
}
