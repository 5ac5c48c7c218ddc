//! Parsers and writers for test-collection artifacts: topics, qrels, query
//! variant files, TREC run files, and evaluation matrices.
//!
//! Every parser is strict over its documented grammar and reports positions
//! (line numbers) on failure. Parsed values are immutable.

mod eval_matrix;
mod run_file;

use std::collections::{BTreeMap, BTreeSet};
use std::io::BufRead;

use serde::Deserialize;
use thiserror::Error;

pub use eval_matrix::{read_eval_matrix, write_eval_matrix, EvalMatrix, EvalMetadata};
pub use run_file::{read_trec_run, write_trec_run};

/// Relevance-grade threshold for membership in a topic's relevant set.
pub const RELEVANCE_THRESHOLD: u32 = 1;

#[derive(Debug, Error)]
pub enum CollectionError {
    #[error("{file} line {line}: {message}")]
    Parse {
        file: String,
        line: usize,
        message: String,
    },
    #[error("{0}")]
    Invalid(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

fn parse_err(file: &str, line: usize, message: impl Into<String>) -> CollectionError {
    CollectionError::Parse {
        file: file.to_string(),
        line,
        message: message.into(),
    }
}

/// Non-fatal observations made while parsing (e.g. duplicate qrels lines).
pub type Warnings = Vec<String>;

/// A TREC-style information-need statement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Topic {
    pub id: String,
    pub title: String,
    pub description: String,
    pub narrative: String,
}

#[derive(Debug, Deserialize)]
struct TopicRecord {
    id: Option<serde_json::Value>,
    title: Option<String>,
    #[serde(default)]
    description: String,
    #[serde(default)]
    narrative: String,
}

/// Parses JSON-lines topics: one object per line with `id` and `title`
/// (required) plus optional `description` and `narrative`. Fields are
/// whitespace-trimmed; `id` may be a JSON string or number.
pub fn parse_topics<R: BufRead>(reader: R, file: &str) -> Result<Vec<Topic>, CollectionError> {
    let mut topics = Vec::new();
    let mut seen = BTreeSet::new();
    for (lineno, line) in reader.lines().enumerate() {
        let lineno = lineno + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let record: TopicRecord = serde_json::from_str(&line)
            .map_err(|e| parse_err(file, lineno, format!("invalid JSON: {e}")))?;
        let id = match record.id {
            Some(serde_json::Value::String(s)) => s.trim().to_string(),
            Some(serde_json::Value::Number(n)) => n.to_string(),
            Some(other) => {
                return Err(parse_err(file, lineno, format!("id must be string or number, got {other}")))
            }
            None => return Err(parse_err(file, lineno, "missing required field \"id\"")),
        };
        if id.is_empty() {
            return Err(parse_err(file, lineno, "empty topic id"));
        }
        let title = record
            .title
            .ok_or_else(|| parse_err(file, lineno, "missing required field \"title\""))?
            .trim()
            .to_string();
        if title.is_empty() {
            return Err(parse_err(file, lineno, "empty topic title"));
        }
        if !seen.insert(id.clone()) {
            return Err(parse_err(file, lineno, format!("duplicate topic id {id:?}")));
        }
        topics.push(Topic {
            id,
            title,
            description: record.description.trim().to_string(),
            narrative: record.narrative.trim().to_string(),
        });
    }
    Ok(topics)
}

/// Relevance judgments: `(topic, doc) -> grade >= 0`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Qrels {
    judgments: BTreeMap<String, BTreeMap<String, u32>>,
}

impl Qrels {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, topic: impl Into<String>, doc: impl Into<String>, grade: u32) {
        self.judgments
            .entry(topic.into())
            .or_default()
            .insert(doc.into(), grade);
    }

    pub fn grade(&self, topic: &str, doc: &str) -> Option<u32> {
        self.judgments.get(topic).and_then(|m| m.get(doc)).copied()
    }

    pub fn topics(&self) -> impl Iterator<Item = &str> {
        self.judgments.keys().map(String::as_str)
    }

    pub fn is_judged(&self, topic: &str) -> bool {
        self.judgments.contains_key(topic)
    }

    /// Judged documents of a topic with their grades, doc id ascending.
    pub fn judged_docs(&self, topic: &str) -> impl Iterator<Item = (&str, u32)> {
        self.judgments
            .get(topic)
            .into_iter()
            .flat_map(|m| m.iter().map(|(d, &g)| (d.as_str(), g)))
    }

    /// Documents with grade >= [`RELEVANCE_THRESHOLD`], doc id ascending.
    pub fn relevant_docs(&self, topic: &str) -> impl Iterator<Item = &str> {
        self.judged_docs(topic)
            .filter(|&(_, g)| g >= RELEVANCE_THRESHOLD)
            .map(|(d, _)| d)
    }

    pub fn relevant_count(&self, topic: &str) -> usize {
        self.relevant_docs(topic).count()
    }
}

/// Parses 4-column qrels lines `topic 0 docid grade` (whitespace-separated).
/// Duplicate `(topic, doc)` lines: last one wins, with a warning.
pub fn parse_qrels<R: BufRead>(
    reader: R,
    file: &str,
) -> Result<(Qrels, Warnings), CollectionError> {
    let mut qrels = Qrels::new();
    let mut warnings = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let lineno = lineno + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 4 {
            return Err(parse_err(
                file,
                lineno,
                format!("expected 4 fields `topic 0 docid grade`, got {}", fields.len()),
            ));
        }
        let grade: u32 = fields[3].parse().map_err(|_| {
            parse_err(file, lineno, format!("grade {:?} is not a non-negative integer", fields[3]))
        })?;
        if qrels.grade(fields[0], fields[2]).is_some() {
            warnings.push(format!(
                "{file} line {lineno}: duplicate judgment for topic {} doc {}; keeping the later grade {grade}",
                fields[0], fields[2]
            ));
        }
        qrels.insert(fields[0], fields[2], grade);
    }
    Ok((qrels, warnings))
}

/// Query variants grouped by `(topic, source)` in formulation order.
///
/// A source is either a real user (e.g. `uqv1`) or a simulator label; both
/// are interchangeable downstream.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct QueryVariantSet {
    groups: BTreeMap<(String, String), Vec<String>>,
}

impl QueryVariantSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Registers a full ordered group; replaces any existing one.
    pub fn insert_group(
        &mut self,
        topic: impl Into<String>,
        source: impl Into<String>,
        queries: Vec<String>,
    ) -> Result<(), CollectionError> {
        if queries.is_empty() {
            return Err(CollectionError::Invalid(
                "query variant group must be non-empty".into(),
            ));
        }
        self.groups.insert((topic.into(), source.into()), queries);
        Ok(())
    }

    pub fn variants(&self, topic: &str, source: &str) -> Option<&[String]> {
        self.groups
            .get(&(topic.to_string(), source.to_string()))
            .map(Vec::as_slice)
    }

    pub fn sources(&self) -> BTreeSet<&str> {
        self.groups.keys().map(|(_, s)| s.as_str()).collect()
    }

    pub fn topics_of(&self, source: &str) -> BTreeSet<&str> {
        self.groups
            .keys()
            .filter(|(_, s)| s == source)
            .map(|(t, _)| t.as_str())
            .collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str, &[String])> {
        self.groups
            .iter()
            .map(|((t, s), q)| (t.as_str(), s.as_str(), q.as_slice()))
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    /// Merges another set into this one; colliding `(topic, source)` groups
    /// are an error.
    pub fn merge(&mut self, other: QueryVariantSet) -> Result<(), CollectionError> {
        for (key, queries) in other.groups {
            if self.groups.contains_key(&key) {
                return Err(CollectionError::Invalid(format!(
                    "duplicate query variant group for topic {:?} source {:?}",
                    key.0, key.1
                )));
            }
            self.groups.insert(key, queries);
        }
        Ok(())
    }
}

/// Parses tab-separated variant lines `topic<TAB>source<TAB>seq<TAB>query`.
/// Groups are ordered by their 1-based `seq`, which must be contiguous
/// within each group; empty query strings are rejected.
pub fn parse_uqv<R: BufRead>(reader: R, file: &str) -> Result<QueryVariantSet, CollectionError> {
    let mut staged: BTreeMap<(String, String), Vec<(u32, String, usize)>> = BTreeMap::new();
    for (lineno, line) in reader.lines().enumerate() {
        let lineno = lineno + 1;
        let line = line?;
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 4 {
            return Err(parse_err(
                file,
                lineno,
                format!("expected 4 tab-separated fields, got {}", fields.len()),
            ));
        }
        let seq: u32 = fields[2].parse().map_err(|_| {
            parse_err(file, lineno, format!("seq {:?} is not a positive integer", fields[2]))
        })?;
        if seq == 0 {
            return Err(parse_err(file, lineno, "seq must start at 1"));
        }
        let query = fields[3].trim();
        if query.is_empty() {
            return Err(parse_err(file, lineno, "empty query string"));
        }
        staged
            .entry((fields[0].to_string(), fields[1].to_string()))
            .or_default()
            .push((seq, query.to_string(), lineno));
    }
    let mut set = QueryVariantSet::new();
    for ((topic, source), mut entries) in staged {
        entries.sort_by_key(|(seq, _, _)| *seq);
        for (i, (seq, _, lineno)) in entries.iter().enumerate() {
            let expected = (i + 1) as u32;
            if *seq != expected {
                return Err(parse_err(
                    file,
                    *lineno,
                    format!(
                        "topic {topic:?} source {source:?}: seq numbers must be contiguous from 1 \
                         (expected {expected}, found {seq})"
                    ),
                ));
            }
        }
        let queries = entries.into_iter().map(|(_, q, _)| q).collect();
        set.insert_group(topic, source, queries)?;
    }
    Ok(set)
}

/// Writes a [`QueryVariantSet`] in the 4-column TSV format accepted by
/// [`parse_uqv`].
pub fn write_uqv<W: std::io::Write>(
    mut w: W,
    set: &QueryVariantSet,
) -> Result<(), CollectionError> {
    for (topic, source, queries) in set.iter() {
        for (i, query) in queries.iter().enumerate() {
            writeln!(w, "{topic}\t{source}\t{}\t{query}", i + 1)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_topics_file_parses_to_empty_list() {
        let topics = parse_topics("".as_bytes(), "t.jsonl").unwrap();
        assert!(topics.is_empty());
    }

    #[test]
    fn topics_round_trip_fields() {
        let data = concat!(
            "{\"id\": 301, \"title\": \" Solar power \", \"description\": \"desc\", \"narrative\": \"narr\"}\n",
            "{\"id\": \"302\", \"title\": \"Wind power\"}\n",
        );
        let topics = parse_topics(data.as_bytes(), "t.jsonl").unwrap();
        assert_eq!(topics.len(), 2);
        assert_eq!(topics[0].id, "301");
        assert_eq!(topics[0].title, "Solar power");
        assert_eq!(topics[0].description, "desc");
        assert_eq!(topics[1].narrative, "");
    }

    #[test]
    fn topic_without_title_names_the_record() {
        let err = parse_topics("{\"id\": 1}".as_bytes(), "t.jsonl").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line 1") && msg.contains("title"), "{msg}");
    }

    #[test]
    fn qrels_direct_read() {
        let (qrels, warnings) = parse_qrels("301 0 d1 2\n".as_bytes(), "q.txt").unwrap();
        assert_eq!(qrels.grade("301", "d1"), Some(2));
        assert!(warnings.is_empty());
    }

    #[test]
    fn qrels_duplicate_last_wins_with_warning() {
        let data = "301 0 d1 1\n301 0 d1 0\n";
        let (qrels, warnings) = parse_qrels(data.as_bytes(), "q.txt").unwrap();
        assert_eq!(qrels.grade("301", "d1"), Some(0));
        assert_eq!(warnings.len(), 1);
        assert!(warnings[0].contains("duplicate"));
    }

    #[test]
    fn qrels_non_integer_grade_errors_with_line() {
        let err = parse_qrels("301 0 d1 2\n301 0 d2 x\n".as_bytes(), "q.txt").unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
    }

    #[test]
    fn relevance_threshold_is_grade_one() {
        let (qrels, _) = parse_qrels("1 0 a 0\n1 0 b 1\n1 0 c 2\n".as_bytes(), "q").unwrap();
        let rel: Vec<&str> = qrels.relevant_docs("1").collect();
        assert_eq!(rel, ["b", "c"]);
        assert_eq!(qrels.relevant_count("1"), 2);
    }

    #[test]
    fn uqv_singleton() {
        let set = parse_uqv("301\tuqv1\t1\tsolar power\n".as_bytes(), "u.tsv").unwrap();
        assert_eq!(set.variants("301", "uqv1").unwrap(), ["solar power"]);
    }

    #[test]
    fn uqv_shuffled_seq_is_sorted() {
        let data = "301\tuqv1\t2\tsecond query\n301\tuqv1\t1\tfirst query\n";
        let set = parse_uqv(data.as_bytes(), "u.tsv").unwrap();
        assert_eq!(
            set.variants("301", "uqv1").unwrap(),
            ["first query", "second query"]
        );
    }

    #[test]
    fn uqv_gap_in_seq_names_the_group() {
        let data = "301\tuqv1\t1\tq one\n301\tuqv1\t3\tq three\n";
        let err = parse_uqv(data.as_bytes(), "u.tsv").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("301") && msg.contains("uqv1") && msg.contains("contiguous"), "{msg}");
    }

    #[test]
    fn uqv_empty_query_is_rejected() {
        let err = parse_uqv("301\tuqv1\t1\t  \n".as_bytes(), "u.tsv").unwrap_err();
        assert!(err.to_string().contains("empty query"), "{err}");
    }

    #[test]
    fn uqv_write_read_round_trip() {
        let mut set = QueryVariantSet::new();
        set.insert_group("301", "sim_a", vec!["one term".into(), "two terms".into()])
            .unwrap();
        set.insert_group("302", "uqv1", vec!["query here".into()]).unwrap();
        let mut buf = Vec::new();
        write_uqv(&mut buf, &set).unwrap();
        let parsed = parse_uqv(buf.as_slice(), "mem").unwrap();
        assert_eq!(parsed, set);
    }
}
