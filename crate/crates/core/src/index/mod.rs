//! Inverted index over a document corpus, plus the two retrieval models the
//! experiments use: BM25 and query likelihood with Dirichlet smoothing.

mod persist;
mod search;

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::text::{normalize, Term};

pub use persist::FORMAT_VERSION;
pub use search::{bm25_search, qld_search, Bm25Params, QldParams, RankedEntry, RankedList};

#[derive(Debug, Error)]
pub enum IndexError {
    #[error("duplicate document id {0:?}")]
    DuplicateDocId(String),
    #[error("operation requires a non-empty index")]
    EmptyIndex,
    #[error("invalid retrieval parameter: {0}")]
    InvalidParameter(String),
    #[error("index file i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("corrupt index file: {0}")]
    Corrupt(String),
}

/// Postings of one stemmed term: `(doc ordinal, term frequency)` pairs
/// sorted by ordinal, plus the collection frequency.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PostingsList {
    entries: Vec<(u32, u32)>,
    cf: u64,
}

impl PostingsList {
    pub fn entries(&self) -> &[(u32, u32)] {
        &self.entries
    }

    /// Document frequency of the term.
    pub fn df(&self) -> usize {
        self.entries.len()
    }

    /// Collection frequency of the term.
    pub fn cf(&self) -> u64 {
        self.cf
    }

    fn tf(&self, ordinal: u32) -> u32 {
        match self.entries.binary_search_by_key(&ordinal, |e| e.0) {
            Ok(pos) => self.entries[pos].1,
            Err(_) => 0,
        }
    }
}

/// Immutable inverted index with document and collection statistics.
///
/// Postings are keyed by stemmed term; document identity is the external
/// string id supplied at build time, with ordinals assigned in input order.
#[derive(Debug, Clone, PartialEq)]
pub struct PostingsIndex {
    doc_ids: Vec<String>,
    doc_len: Vec<u32>,
    total_tokens: u64,
    postings: BTreeMap<String, PostingsList>,
    id_to_ordinal: HashMap<String, u32>,
}

/// Human-readable index statistics for the JSON dump.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IndexStats {
    pub docs: usize,
    pub vocabulary: usize,
    pub total_tokens: u64,
    pub avg_doc_len: f64,
}

impl PostingsIndex {
    /// Builds an index from `(doc_id, text)` pairs, applying the shared
    /// normalization and stemming pipeline. Rejects duplicate ids.
    pub fn build<I, S>(docs: I) -> Result<Self, IndexError>
    where
        I: IntoIterator<Item = (S, S)>,
        S: Into<String>,
    {
        let mut index = PostingsIndex {
            doc_ids: Vec::new(),
            doc_len: Vec::new(),
            total_tokens: 0,
            postings: BTreeMap::new(),
            id_to_ordinal: HashMap::new(),
        };
        for (id, text) in docs {
            let id = id.into();
            let text = text.into();
            index.push_doc(id, &text)?;
        }
        Ok(index)
    }

    fn push_doc(&mut self, id: String, text: &str) -> Result<(), IndexError> {
        if self.id_to_ordinal.contains_key(&id) {
            return Err(IndexError::DuplicateDocId(id));
        }
        let ordinal = self.doc_ids.len() as u32;
        let tokens = normalize(text);
        let mut tf: BTreeMap<Term, u32> = BTreeMap::new();
        for term in tokens.iter() {
            *tf.entry(term.stem()).or_insert(0) += 1;
        }
        let dl = tokens.len() as u32;
        self.doc_len.push(dl);
        self.total_tokens += u64::from(dl);
        for (stem, count) in tf {
            let list = self
                .postings
                .entry(stem.as_str().to_string())
                .or_insert_with(|| PostingsList {
                    entries: Vec::new(),
                    cf: 0,
                });
            list.entries.push((ordinal, count));
            list.cf += u64::from(count);
        }
        self.id_to_ordinal.insert(id.clone(), ordinal);
        self.doc_ids.push(id);
        Ok(())
    }

    pub fn num_docs(&self) -> usize {
        self.doc_ids.len()
    }

    pub fn total_tokens(&self) -> u64 {
        self.total_tokens
    }

    pub fn doc_id(&self, ordinal: u32) -> &str {
        &self.doc_ids[ordinal as usize]
    }

    pub fn ordinal_of(&self, doc_id: &str) -> Option<u32> {
        self.id_to_ordinal.get(doc_id).copied()
    }

    pub fn doc_len(&self, ordinal: u32) -> u32 {
        self.doc_len[ordinal as usize]
    }

    /// Average document length; the index must be non-empty.
    pub fn avg_doc_len(&self) -> Result<f64, IndexError> {
        if self.doc_ids.is_empty() {
            return Err(IndexError::EmptyIndex);
        }
        Ok(self.total_tokens as f64 / self.doc_ids.len() as f64)
    }

    /// Postings for a stemmed term.
    pub fn postings(&self, stem: &str) -> Option<&PostingsList> {
        self.postings.get(stem)
    }

    /// Document frequency of a stemmed term (0 when absent).
    pub fn df(&self, stem: &str) -> usize {
        self.postings.get(stem).map_or(0, PostingsList::df)
    }

    /// Collection frequency of a stemmed term (0 when absent).
    pub fn cf(&self, stem: &str) -> u64 {
        self.postings.get(stem).map_or(0, PostingsList::cf)
    }

    /// Term frequency of a stemmed term in a document.
    pub fn tf(&self, stem: &str, ordinal: u32) -> u32 {
        self.postings.get(stem).map_or(0, |p| p.tf(ordinal))
    }

    /// Stemmed vocabulary in lexicographic order.
    pub fn vocabulary(&self) -> impl Iterator<Item = (&str, &PostingsList)> {
        self.postings.iter().map(|(t, p)| (t.as_str(), p))
    }

    pub fn stats(&self) -> IndexStats {
        IndexStats {
            docs: self.num_docs(),
            vocabulary: self.postings.len(),
            total_tokens: self.total_tokens,
            avg_doc_len: if self.doc_ids.is_empty() {
                0.0
            } else {
                self.total_tokens as f64 / self.doc_ids.len() as f64
            },
        }
    }

    /// Checks the structural invariants; used by tests and after loading
    /// from disk.
    pub fn validate(&self) -> Result<(), IndexError> {
        let n = self.doc_ids.len();
        if self.doc_len.len() != n {
            return Err(IndexError::Corrupt("doc_len length mismatch".into()));
        }
        let mut per_doc: Vec<u64> = vec![0; n];
        for (term, list) in &self.postings {
            if list.entries.is_empty() {
                return Err(IndexError::Corrupt(format!("empty postings for {term:?}")));
            }
            let mut prev: Option<u32> = None;
            let mut cf: u64 = 0;
            for &(ordinal, tf) in &list.entries {
                if ordinal as usize >= n {
                    return Err(IndexError::Corrupt(format!(
                        "ordinal {ordinal} out of range for {term:?}"
                    )));
                }
                if tf == 0 {
                    return Err(IndexError::Corrupt(format!("zero tf for {term:?}")));
                }
                if prev.is_some_and(|p| p >= ordinal) {
                    return Err(IndexError::Corrupt(format!(
                        "postings for {term:?} not strictly sorted"
                    )));
                }
                prev = Some(ordinal);
                cf += u64::from(tf);
                per_doc[ordinal as usize] += u64::from(tf);
            }
            if cf != list.cf {
                return Err(IndexError::Corrupt(format!("cf mismatch for {term:?}")));
            }
            if list.df() > n {
                return Err(IndexError::Corrupt(format!("df > N for {term:?}")));
            }
        }
        for (ordinal, &sum) in per_doc.iter().enumerate() {
            if sum != u64::from(self.doc_len[ordinal]) {
                return Err(IndexError::Corrupt(format!(
                    "token count mismatch for doc ordinal {ordinal}"
                )));
            }
        }
        if per_doc.iter().sum::<u64>() != self.total_tokens {
            return Err(IndexError::Corrupt("total_tokens mismatch".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_corpus_builds_empty_index() {
        let index = PostingsIndex::build(Vec::<(String, String)>::new()).unwrap();
        assert_eq!(index.num_docs(), 0);
        assert_eq!(index.total_tokens(), 0);
        assert_eq!(index.vocabulary().count(), 0);
        index.validate().unwrap();
    }

    #[test]
    fn hand_counted_statistics() {
        let index =
            PostingsIndex::build(vec![("d1", "apple banana"), ("d2", "banana banana")]).unwrap();
        assert_eq!(index.num_docs(), 2);
        assert_eq!(index.df("banana"), 2);
        assert_eq!(index.cf("banana"), 3);
        assert_eq!(index.doc_len(0), 2);
        assert_eq!(index.doc_len(1), 2);
        assert_eq!(index.total_tokens(), 4);
        index.validate().unwrap();
    }

    #[test]
    fn duplicate_doc_id_is_rejected_with_the_id() {
        let err = PostingsIndex::build(vec![("dup", "x1"), ("dup", "x2")]).unwrap_err();
        match err {
            IndexError::DuplicateDocId(id) => assert_eq!(id, "dup"),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn stopwords_do_not_count_toward_doc_len() {
        let index = PostingsIndex::build(vec![("d1", "the apple and the banana")]).unwrap();
        assert_eq!(index.doc_len(0), 2);
        assert_eq!(index.total_tokens(), 2);
    }

    #[test]
    fn indexing_stems_terms() {
        let index = PostingsIndex::build(vec![("d1", "running runs parliaments")]).unwrap();
        assert_eq!(index.df("run"), 1);
        assert_eq!(index.cf("run"), 2);
        assert_eq!(index.df("parliament"), 1);
        assert_eq!(index.df("running"), 0);
    }
}
