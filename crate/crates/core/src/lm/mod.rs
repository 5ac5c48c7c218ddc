//! Term distributions for candidate generation: the collection background
//! model, the per-topic model over relevant documents, their mixture, and
//! the ordered candidate lists drawn from them.
//!
//! Topic-side candidate terms are unstemmed surface forms; the relevance
//! and background models live over the stemmed index vocabulary, and all
//! membership tests between the two sides compare stems.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::io::Write;

use thiserror::Error;

use crate::collection::{Qrels, Topic};
use crate::index::PostingsIndex;
use crate::text::{normalize, unique_terms, Term};

#[derive(Debug, Error)]
pub enum LmError {
    #[error("operation requires a non-empty index")]
    EmptyIndex,
    #[error("topic {0:?} has no judged-relevant documents in the index")]
    NoRelevantDocs(String),
    #[error("topic {0:?} has no terms left after normalization")]
    NoTopicTerms(String),
    #[error("mixture weight lambda must be in [0, 1], got {0}")]
    InvalidLambda(f64),
    #[error("invalid distribution: {0}")]
    Distribution(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

/// Default mixture weight of the background model.
pub const DEFAULT_LAMBDA: f64 = 0.4;

/// A normalized term → probability table. All stored probabilities are
/// strictly positive and sum to 1 within 1e-9.
#[derive(Debug, Clone, PartialEq)]
pub struct TermDistribution {
    probs: BTreeMap<Term, f64>,
}

impl TermDistribution {
    pub fn from_probs(probs: BTreeMap<Term, f64>) -> Result<Self, LmError> {
        if probs.is_empty() {
            return Err(LmError::Distribution("empty support".into()));
        }
        let mut sum = 0.0;
        for (term, &p) in &probs {
            if !(p > 0.0) {
                return Err(LmError::Distribution(format!(
                    "probability of {term:?} is {p}, must be > 0"
                )));
            }
            sum += p;
        }
        if (sum - 1.0).abs() > 1e-9 {
            return Err(LmError::Distribution(format!(
                "probabilities sum to {sum}, expected 1 within 1e-9"
            )));
        }
        Ok(TermDistribution { probs })
    }

    /// Builds the maximum-likelihood distribution from raw counts.
    pub fn from_counts(counts: BTreeMap<Term, u64>) -> Result<Self, LmError> {
        let total: u64 = counts.values().sum();
        if total == 0 {
            return Err(LmError::Distribution("zero total count".into()));
        }
        let probs = counts
            .into_iter()
            .filter(|(_, c)| *c > 0)
            .map(|(t, c)| (t, c as f64 / total as f64))
            .collect();
        TermDistribution::from_probs(probs)
    }

    /// Probability of a term; 0 outside the support.
    pub fn prob(&self, term: &Term) -> f64 {
        self.probs.get(term).copied().unwrap_or(0.0)
    }

    pub fn support_size(&self) -> usize {
        self.probs.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Term, f64)> {
        self.probs.iter().map(|(t, &p)| (t, p))
    }

    /// Entries sorted by probability descending, ties lexicographic.
    pub fn sorted_by_prob(&self) -> Vec<(&Term, f64)> {
        let mut entries: Vec<(&Term, f64)> = self.iter().collect();
        entries.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(b.0)));
        entries
    }
}

/// Writes a distribution as `term,probability` CSV rows, probability
/// descending.
pub fn dump_distribution_csv<W: Write>(
    mut w: W,
    dist: &TermDistribution,
) -> Result<(), LmError> {
    writeln!(w, "term,probability")?;
    for (term, p) in dist.sorted_by_prob() {
        writeln!(w, "{term},{p}")?;
    }
    Ok(())
}

/// Background model over the whole corpus: `P(t) = cf(t) / total_tokens`.
pub fn background_model(index: &PostingsIndex) -> Result<TermDistribution, LmError> {
    if index.total_tokens() == 0 {
        return Err(LmError::EmptyIndex);
    }
    let total = index.total_tokens() as f64;
    let probs = index
        .vocabulary()
        .map(|(term, list)| {
            let term = Term::new(term).expect("index vocabulary is normalized");
            (term, list.cf() as f64 / total)
        })
        .collect();
    TermDistribution::from_probs(probs)
}

/// Ascending ordinals of the topic's judged-relevant documents that are
/// present in the index.
fn relevant_ordinals(index: &PostingsIndex, qrels: &Qrels, topic_id: &str) -> Vec<u32> {
    let mut ordinals: Vec<u32> = qrels
        .relevant_docs(topic_id)
        .filter_map(|doc| index.ordinal_of(doc))
        .collect();
    ordinals.sort_unstable();
    ordinals
}

/// Maximum-likelihood topic model over the concatenated token streams of
/// the topic's relevant documents.
pub fn topic_model(
    index: &PostingsIndex,
    qrels: &Qrels,
    topic_id: &str,
) -> Result<TermDistribution, LmError> {
    let ordinals = relevant_ordinals(index, qrels, topic_id);
    if ordinals.is_empty() {
        return Err(LmError::NoRelevantDocs(topic_id.to_string()));
    }
    let rel_set: HashSet<u32> = ordinals.iter().copied().collect();
    let mut counts: BTreeMap<Term, u64> = BTreeMap::new();
    for (term, list) in index.vocabulary() {
        let mut c: u64 = 0;
        for &(ordinal, tf) in list.entries() {
            if rel_set.contains(&ordinal) {
                c += u64::from(tf);
            }
        }
        if c > 0 {
            counts.insert(Term::new(term).expect("index vocabulary is normalized"), c);
        }
    }
    TermDistribution::from_counts(counts)
}

/// Pointwise mixture `(1 - lambda) * topic + lambda * background` over the
/// union support; terms whose mixture probability is exactly zero are
/// dropped so the support invariant holds.
pub fn cqg_model(
    topic: &TermDistribution,
    background: &TermDistribution,
    lambda: f64,
) -> Result<TermDistribution, LmError> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(LmError::InvalidLambda(lambda));
    }
    let mut probs: BTreeMap<Term, f64> = BTreeMap::new();
    for (term, p_topic) in topic.iter() {
        let p = (1.0 - lambda) * p_topic + lambda * background.prob(term);
        if p > 0.0 {
            probs.insert(term.clone(), p);
        }
    }
    for (term, p_bg) in background.iter() {
        if !probs.contains_key(term) {
            let p = (1.0 - lambda) * topic.prob(term) + lambda * p_bg;
            if p > 0.0 {
                probs.insert(term.clone(), p);
            }
        }
    }
    TermDistribution::from_probs(probs)
}

/// Inverse document frequency `ln(N / df)`, with a documented floor of
/// `df -> 0.5` for terms absent from the index.
pub fn idf(index: &PostingsIndex, term: &Term) -> Result<f64, LmError> {
    let n = index.num_docs();
    if n == 0 {
        return Err(LmError::EmptyIndex);
    }
    let df = index.df(term.as_str());
    let df = if df == 0 { 0.5 } else { df as f64 };
    Ok((n as f64 / df).ln())
}

/// Where a candidate list's terms come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CandidateSource {
    /// Unstemmed terms of the topic text, first-occurrence order.
    Topic,
    /// Stemmed terms ordered by decreasing mixture-model probability.
    Rel,
    /// Topic terms found in the relevance list plus the top-k other
    /// relevance terms.
    TopicPlusRel { k: usize },
}

/// An ordered, deduplicated list of weighted candidate terms.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidateList {
    source: CandidateSource,
    terms: Vec<(Term, f64)>,
}

impl CandidateList {
    /// Assembles a list from already-ordered `(term, weight)` pairs; terms
    /// must be unique.
    pub fn from_parts(source: CandidateSource, terms: Vec<(Term, f64)>) -> Self {
        debug_assert!(
            {
                let mut seen = HashSet::new();
                terms.iter().all(|(t, _)| seen.insert(t.clone()))
            },
            "candidate terms must be unique"
        );
        CandidateList { source, terms }
    }

    pub fn source(&self) -> CandidateSource {
        self.source
    }

    pub fn terms(&self) -> &[(Term, f64)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term(&self, i: usize) -> Option<&Term> {
        self.terms.get(i).map(|(t, _)| t)
    }

    /// The first `m` terms (all of them when `m` exceeds the length).
    pub fn top(&self, m: usize) -> &[(Term, f64)] {
        &self.terms[..self.terms.len().min(m)]
    }
}

/// Candidate terms from the topic text: `normalize(title || description ||
/// narrative)`, deduplicated in first-occurrence order. Weights are a
/// strictly decreasing rank surrogate.
pub fn candidates_topic(topic: &Topic) -> Result<CandidateList, LmError> {
    let text = format!("{} {} {}", topic.title, topic.description, topic.narrative);
    let seq = unique_terms(&normalize(&text));
    if seq.is_empty() {
        return Err(LmError::NoTopicTerms(topic.id.clone()));
    }
    let n = seq.len();
    let terms = seq
        .into_iter()
        .enumerate()
        .map(|(i, t)| (t, (n - i) as f64))
        .collect();
    Ok(CandidateList {
        source: CandidateSource::Topic,
        terms,
    })
}

/// Candidate terms from the mixture model over the topic's relevant
/// documents: the full support sorted by probability descending, ties
/// broken lexicographically.
pub fn candidates_rel(
    index: &PostingsIndex,
    qrels: &Qrels,
    topic_id: &str,
    lambda: f64,
) -> Result<CandidateList, LmError> {
    let topic = topic_model(index, qrels, topic_id)?;
    let background = background_model(index)?;
    let cqg = cqg_model(&topic, &background, lambda)?;
    let terms = cqg
        .sorted_by_prob()
        .into_iter()
        .map(|(t, p)| (t.clone(), p))
        .collect();
    Ok(CandidateList {
        source: CandidateSource::Rel,
        terms,
    })
}

/// Combines topic terms with relevance-model terms: topic surface forms
/// whose stem occurs in `rel`, united with the top-k `rel` terms whose stem
/// matches no topic term, ordered by mixture probability descending.
pub fn candidates_topic_plus_rel(topic: &Topic, rel: &CandidateList, k: usize) -> CandidateList {
    let text = format!("{} {} {}", topic.title, topic.description, topic.narrative);
    let topic_terms = unique_terms(&normalize(&text));
    // first surface form for each topic stem
    let mut stem_to_surface: HashMap<Term, Term> = HashMap::new();
    for term in topic_terms.iter() {
        stem_to_surface.entry(term.stem()).or_insert_with(|| term.clone());
    }
    let mut selected: Vec<(Term, f64)> = Vec::new();
    let mut taken_from_difference = 0usize;
    for (rel_term, weight) in rel.terms() {
        if let Some(surface) = stem_to_surface.get(rel_term) {
            selected.push((surface.clone(), *weight));
        } else if taken_from_difference < k {
            selected.push((rel_term.clone(), *weight));
            taken_from_difference += 1;
        }
    }
    selected.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    CandidateList::from_parts(CandidateSource::TopicPlusRel { k }, selected)
}
