//! BM25 and query-likelihood (Dirichlet) scoring over a [`PostingsIndex`].
//!
//! Both models score only documents containing at least one query term and
//! break score ties by ascending external document id, so rankings are
//! fully deterministic.

use std::collections::BTreeMap;

use super::{IndexError, PostingsIndex};
use crate::text::{Term, TermSequence};

/// BM25 parameters. The defaults mirror the toolkit defaults used for the
/// run production (`k1 = 0.9`, `b = 0.4`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bm25Params {
    k1: f64,
    b: f64,
}

impl Bm25Params {
    pub fn new(k1: f64, b: f64) -> Result<Self, IndexError> {
        if !(k1 >= 0.0) {
            return Err(IndexError::InvalidParameter(format!("k1 = {k1}, need k1 >= 0")));
        }
        if !(0.0..=1.0).contains(&b) {
            return Err(IndexError::InvalidParameter(format!("b = {b}, need 0 <= b <= 1")));
        }
        Ok(Bm25Params { k1, b })
    }

    pub fn k1(&self) -> f64 {
        self.k1
    }

    pub fn b(&self) -> f64 {
        self.b
    }
}

impl Default for Bm25Params {
    fn default() -> Self {
        Bm25Params { k1: 0.9, b: 0.4 }
    }
}

/// Dirichlet smoothing pseudo-count for the query likelihood model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QldParams {
    mu: f64,
}

impl QldParams {
    pub fn new(mu: f64) -> Result<Self, IndexError> {
        if !(mu > 0.0) {
            return Err(IndexError::InvalidParameter(format!("mu = {mu}, need mu > 0")));
        }
        Ok(QldParams { mu })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankedEntry {
    pub doc_id: String,
    pub score: f64,
}

/// A ranked result list for one topic/query.
///
/// Lists produced by a single search have non-increasing scores; pooled
/// session lists (see `sim::run_session`) keep each document's original
/// per-query score, so there the rank order is authoritative and scores are
/// informational.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RankedList {
    pub topic_id: String,
    entries: Vec<RankedEntry>,
    cutoff: usize,
}

impl RankedList {
    pub fn new(topic_id: impl Into<String>, entries: Vec<RankedEntry>, cutoff: usize) -> Self {
        RankedList {
            topic_id: topic_id.into(),
            entries,
            cutoff,
        }
    }

    pub fn with_topic(mut self, topic_id: impl Into<String>) -> Self {
        self.topic_id = topic_id.into();
        self
    }

    pub fn entries(&self) -> &[RankedEntry] {
        &self.entries
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn doc_ids(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|e| e.doc_id.as_str())
    }

    /// Checks the single-search invariants: unique documents, scores
    /// non-increasing, length within the cutoff.
    pub fn validate_search_output(&self) -> Result<(), IndexError> {
        if self.entries.len() > self.cutoff {
            return Err(IndexError::Corrupt("ranked list longer than cutoff".into()));
        }
        let mut seen = std::collections::HashSet::new();
        for w in self.entries.windows(2) {
            if w[1].score > w[0].score {
                return Err(IndexError::Corrupt("scores increase".into()));
            }
        }
        for e in &self.entries {
            if !seen.insert(e.doc_id.as_str()) {
                return Err(IndexError::Corrupt(format!("duplicate doc {:?}", e.doc_id)));
            }
        }
        Ok(())
    }
}

/// Distinct query stems in first-occurrence order with their query term
/// frequencies.
fn query_stems(query: &TermSequence) -> Vec<(Term, u32)> {
    let mut order: Vec<Term> = Vec::new();
    let mut counts: BTreeMap<Term, u32> = BTreeMap::new();
    for term in query.iter() {
        let stem = term.stem();
        let entry = counts.entry(stem.clone()).or_insert(0);
        if *entry == 0 {
            order.push(stem);
        }
        *entry += 1;
    }
    order
        .into_iter()
        .map(|stem| {
            let count = counts[&stem];
            (stem, count)
        })
        .collect()
}

/// Ascending ordinals of documents containing at least one of the stems.
fn candidate_ordinals(index: &PostingsIndex, stems: &[(Term, u32)]) -> Vec<u32> {
    let mut candidates: Vec<u32> = stems
        .iter()
        .filter_map(|(stem, _)| index.postings(stem.as_str()))
        .flat_map(|p| p.entries().iter().map(|&(ordinal, _)| ordinal))
        .collect();
    candidates.sort_unstable();
    candidates.dedup();
    candidates
}

/// Sorts scored candidates by score descending, ties by ascending external
/// doc id, and truncates to the cutoff.
fn finish(
    index: &PostingsIndex,
    scored: Vec<(u32, f64)>,
    cutoff: usize,
) -> Vec<RankedEntry> {
    let mut scored: Vec<(&str, f64)> = scored
        .into_iter()
        .map(|(ordinal, score)| (index.doc_id(ordinal), score))
        .collect();
    scored.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    scored.truncate(cutoff);
    scored
        .into_iter()
        .map(|(doc_id, score)| RankedEntry {
            doc_id: doc_id.to_string(),
            score,
        })
        .collect()
}

/// BM25 with the Lucene-style idf `ln(1 + (N - df + 0.5)/(df + 0.5))` and
/// no `(k1 + 1)` numerator factor. Duplicate query terms multiply that
/// term's contribution. An empty query yields an empty list.
pub fn bm25_search(
    index: &PostingsIndex,
    query: &TermSequence,
    params: Bm25Params,
    cutoff: usize,
) -> Result<RankedList, IndexError> {
    let n = index.num_docs();
    if n == 0 {
        return Err(IndexError::EmptyIndex);
    }
    let stems = query_stems(query);
    if stems.is_empty() {
        return Ok(RankedList::new("", Vec::new(), cutoff));
    }
    let avgdl = index.avg_doc_len()?;
    let candidates = candidate_ordinals(index, &stems);
    let weights: Vec<(Option<&super::PostingsList>, f64, f64)> = stems
        .iter()
        .map(|(stem, qtf)| {
            let postings = index.postings(stem.as_str());
            let df = postings.map_or(0, |p| p.df()) as f64;
            let idf = (1.0 + (n as f64 - df + 0.5) / (df + 0.5)).ln();
            (postings, idf, f64::from(*qtf))
        })
        .collect();
    let mut scored = Vec::with_capacity(candidates.len());
    for ordinal in candidates {
        let dl = f64::from(index.doc_len(ordinal));
        let norm = 1.0 - params.b + params.b * dl / avgdl;
        let mut score = 0.0;
        for (postings, idf, qtf) in &weights {
            let tf = postings.map_or(0, |p| p.tf(ordinal));
            if tf == 0 {
                continue;
            }
            let tf = f64::from(tf);
            score += qtf * idf * (tf / (tf + params.k1 * norm));
        }
        scored.push((ordinal, score));
    }
    Ok(RankedList::new("", finish(index, scored, cutoff), cutoff))
}

/// Query likelihood with Dirichlet smoothing:
/// `score(d) = sum_t qtf(t) * ln((tf(t,d) + mu * P_bg(t)) / (dl + mu))`.
/// Query terms absent from the whole collection are skipped rather than
/// contributing negative infinity.
pub fn qld_search(
    index: &PostingsIndex,
    query: &TermSequence,
    params: QldParams,
    cutoff: usize,
) -> Result<RankedList, IndexError> {
    if index.num_docs() == 0 {
        return Err(IndexError::EmptyIndex);
    }
    let stems = query_stems(query);
    if stems.is_empty() {
        return Ok(RankedList::new("", Vec::new(), cutoff));
    }
    let total = index.total_tokens() as f64;
    let mu = params.mu();
    // cf = 0 terms are dropped from scoring but still never match postings,
    // so dropping them here only skips the smoothed background component.
    let scoring: Vec<(&Term, f64, f64)> = stems
        .iter()
        .filter(|(stem, _)| index.cf(stem.as_str()) > 0)
        .map(|(stem, qtf)| {
            let p_bg = index.cf(stem.as_str()) as f64 / total;
            (stem, p_bg, f64::from(*qtf))
        })
        .collect();
    let candidates = candidate_ordinals(index, &stems);
    let mut scored = Vec::with_capacity(candidates.len());
    for ordinal in candidates {
        let dl = f64::from(index.doc_len(ordinal));
        let mut score = 0.0;
        for (stem, p_bg, qtf) in &scoring {
            let tf = f64::from(index.tf(stem.as_str(), ordinal));
            score += qtf * ((tf + mu * p_bg) / (dl + mu)).ln();
        }
        scored.push((ordinal, score));
    }
    Ok(RankedList::new("", finish(index, scored, cutoff), cutoff))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::normalize;

    fn toy_index() -> PostingsIndex {
        PostingsIndex::build(vec![
            ("d1", "quark boson quark"),
            ("d2", "boson lepton"),
            ("d3", "lepton lepton muon"),
        ])
        .unwrap()
    }

    #[test]
    fn absent_term_yields_empty_list() {
        let index = toy_index();
        let run = bm25_search(&index, &normalize("gravity"), Bm25Params::default(), 10).unwrap();
        assert!(run.is_empty());
    }

    #[test]
    fn empty_query_yields_empty_list() {
        let index = toy_index();
        let run = bm25_search(&index, &normalize("the of and"), Bm25Params::default(), 10).unwrap();
        assert!(run.is_empty());
        let run = qld_search(&index, &normalize(""), QldParams::new(100.0).unwrap(), 10).unwrap();
        assert!(run.is_empty());
    }

    #[test]
    fn empty_index_is_an_error() {
        let index = PostingsIndex::build(Vec::<(String, String)>::new()).unwrap();
        assert!(bm25_search(&index, &normalize("x1"), Bm25Params::default(), 10).is_err());
        assert!(qld_search(&index, &normalize("x1"), QldParams::new(1.0).unwrap(), 10).is_err());
    }

    #[test]
    fn bm25_single_doc_hand_computation() {
        // One doc "quark quark boson": N = 1, df(quark) = 1, avgdl = 3.
        let index = PostingsIndex::build(vec![("d1", "quark quark boson")]).unwrap();
        let params = Bm25Params::new(0.9, 0.4).unwrap();
        let run = bm25_search(&index, &normalize("quark"), params, 10).unwrap();
        let idf = (1.0 + (1.0 - 1.0 + 0.5) / 1.5f64).ln();
        let expected = idf * 2.0 / (2.0 + 0.9 * (1.0 - 0.4 + 0.4 * 3.0 / 3.0));
        assert!((run.entries()[0].score - expected).abs() < 1e-12);
    }

    #[test]
    fn duplicate_query_term_doubles_contribution() {
        let index = PostingsIndex::build(vec![("d1", "quark quark boson")]).unwrap();
        let params = Bm25Params::default();
        let single = bm25_search(&index, &normalize("quark"), params, 10).unwrap();
        let double = bm25_search(&index, &normalize("quark quark"), params, 10).unwrap();
        assert!((double.entries()[0].score - 2.0 * single.entries()[0].score).abs() < 1e-12);
    }

    #[test]
    fn identical_docs_tie_break_by_doc_id() {
        let index = PostingsIndex::build(vec![("zz", "muon"), ("aa", "muon")]).unwrap();
        let run = qld_search(&index, &normalize("muon"), QldParams::new(50.0).unwrap(), 10).unwrap();
        let ids: Vec<&str> = run.doc_ids().collect();
        assert_eq!(ids, ["aa", "zz"]);
        assert_eq!(run.entries()[0].score, run.entries()[1].score);
        let run = bm25_search(&index, &normalize("muon"), Bm25Params::default(), 10).unwrap();
        let ids: Vec<&str> = run.doc_ids().collect();
        assert_eq!(ids, ["aa", "zz"]);
    }

    #[test]
    fn qld_skips_terms_absent_from_collection() {
        let index = toy_index();
        let with_oov = qld_search(
            &index,
            &normalize("lepton gravity"),
            QldParams::new(100.0).unwrap(),
            10,
        )
        .unwrap();
        let without = qld_search(&index, &normalize("lepton"), QldParams::new(100.0).unwrap(), 10)
            .unwrap();
        assert_eq!(with_oov, without);
    }

    #[test]
    fn cutoff_truncates() {
        let index = toy_index();
        let run = bm25_search(&index, &normalize("lepton boson"), Bm25Params::default(), 2).unwrap();
        assert_eq!(run.len(), 2);
        run.validate_search_output().unwrap();
    }

    #[test]
    fn invalid_params_are_rejected() {
        assert!(Bm25Params::new(-0.1, 0.4).is_err());
        assert!(Bm25Params::new(0.9, 1.2).is_err());
        assert!(QldParams::new(0.0).is_err());
        assert!(QldParams::new(f64::NAN).is_err());
    }
}
