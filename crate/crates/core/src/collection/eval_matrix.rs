//! The topic × query-index × measure score tensor and its CSV form.
//!
//! CSV columns: `source,model,cutoff,topic,query,measure,value`, header row
//! mandatory. Values are written in Rust's shortest round-trip float form;
//! NaN is written as an empty cell and read back as a missing entry.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use super::CollectionError;
use crate::eval::MeasureId;

/// Provenance of an evaluation matrix: which query source produced the
/// runs, under which retrieval model, at which depth.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EvalMetadata {
    pub source: String,
    pub model: String,
    pub cutoff: usize,
}

/// Scores keyed by `(topic, query index, measure)`. Query indices are
/// 1-based; index 0 is reserved for session-level measures.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct EvalMatrix {
    pub metadata: EvalMetadata,
    scores: BTreeMap<(String, u32), BTreeMap<MeasureId, f64>>,
}

impl EvalMatrix {
    pub fn new(metadata: EvalMetadata) -> Self {
        EvalMatrix {
            metadata,
            scores: BTreeMap::new(),
        }
    }

    /// Inserts a score; rejects values outside the measure's range
    /// (NaN is allowed as the explicit missing marker) and duplicate keys.
    pub fn insert(
        &mut self,
        topic: impl Into<String>,
        query_index: u32,
        measure: MeasureId,
        value: f64,
    ) -> Result<(), CollectionError> {
        let (lo, hi) = measure.range();
        if !value.is_nan() && !(value >= lo && value <= hi) {
            return Err(CollectionError::Invalid(format!(
                "{measure} value {value} outside [{lo}, {hi}]"
            )));
        }
        let cell = self.scores.entry((topic.into(), query_index)).or_default();
        if cell.insert(measure, value).is_some() {
            return Err(CollectionError::Invalid(format!(
                "duplicate matrix entry for measure {measure}"
            )));
        }
        Ok(())
    }

    pub fn get(&self, topic: &str, query_index: u32, measure: MeasureId) -> Option<f64> {
        self.scores
            .get(&(topic.to_string(), query_index))
            .and_then(|m| m.get(&measure))
            .copied()
    }

    /// All `(topic, query_index, measure, value)` entries in key order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, u32, MeasureId, f64)> {
        self.scores.iter().flat_map(|((topic, qidx), cell)| {
            cell.iter()
                .map(move |(m, v)| (topic.as_str(), *qidx, *m, *v))
        })
    }

    /// Entries of one measure as `(topic, query_index, value)`, skipping
    /// NaN (missing) cells.
    pub fn measure_entries(&self, measure: MeasureId) -> Vec<(&str, u32, f64)> {
        self.iter()
            .filter(|(_, _, m, v)| *m == measure && !v.is_nan())
            .map(|(t, q, _, v)| (t, q, v))
            .collect()
    }

    pub fn topics(&self) -> Vec<&str> {
        let mut topics: Vec<&str> = self.scores.keys().map(|(t, _)| t.as_str()).collect();
        topics.dedup();
        topics
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }
}

const HEADER: [&str; 7] = ["source", "model", "cutoff", "topic", "query", "measure", "value"];

pub fn write_eval_matrix<W: Write>(w: W, matrix: &EvalMatrix) -> Result<(), CollectionError> {
    let mut writer = csv::Writer::from_writer(w);
    writer.write_record(HEADER)?;
    for (topic, qidx, measure, value) in matrix.iter() {
        let value_text = if value.is_nan() {
            String::new()
        } else {
            value.to_string()
        };
        writer.write_record([
            matrix.metadata.source.as_str(),
            matrix.metadata.model.as_str(),
            &matrix.metadata.cutoff.to_string(),
            topic,
            &qidx.to_string(),
            &measure.to_string(),
            &value_text,
        ])?;
    }
    writer.flush()?;
    Ok(())
}

pub fn read_eval_matrix<R: Read>(r: R) -> Result<EvalMatrix, CollectionError> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(r);
    {
        let headers = reader.headers()?;
        let got: Vec<&str> = headers.iter().collect();
        if got != HEADER {
            return Err(CollectionError::Invalid(format!(
                "unexpected CSV header {got:?}, expected {HEADER:?}"
            )));
        }
    }
    let mut matrix: Option<EvalMatrix> = None;
    for (i, record) in reader.records().enumerate() {
        let record = record?;
        let row = i + 2; // header is line 1
        let field = |idx: usize| record.get(idx).unwrap_or("");
        let cutoff: usize = field(2)
            .parse()
            .map_err(|_| CollectionError::Invalid(format!("row {row}: bad cutoff {:?}", field(2))))?;
        let metadata = EvalMetadata {
            source: field(0).to_string(),
            model: field(1).to_string(),
            cutoff,
        };
        let matrix = match &mut matrix {
            Some(m) => {
                if m.metadata != metadata {
                    return Err(CollectionError::Invalid(format!(
                        "row {row}: metadata changes mid-file"
                    )));
                }
                m
            }
            None => matrix.get_or_insert(EvalMatrix::new(metadata)),
        };
        let qidx: u32 = field(4)
            .parse()
            .map_err(|_| CollectionError::Invalid(format!("row {row}: bad query index {:?}", field(4))))?;
        let measure: MeasureId = field(5)
            .parse()
            .map_err(|e| CollectionError::Invalid(format!("row {row}: {e}")))?;
        let value = if field(6).is_empty() {
            f64::NAN
        } else {
            field(6)
                .parse()
                .map_err(|_| CollectionError::Invalid(format!("row {row}: bad value {:?}", field(6))))?
        };
        matrix
            .insert(field(3), qidx, measure, value)
            .map_err(|e| CollectionError::Invalid(format!("row {row}: {e}")))?;
    }
    Ok(matrix.unwrap_or_default())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn measure_ndcg() -> MeasureId {
        MeasureId::ndcg(1000).unwrap()
    }

    fn sample() -> EvalMatrix {
        let mut m = EvalMatrix::new(EvalMetadata {
            source: "uqv1".into(),
            model: "bm25".into(),
            cutoff: 1000,
        });
        m.insert("301", 1, measure_ndcg(), 0.1234567890123).unwrap();
        m.insert("301", 2, measure_ndcg(), 0.5).unwrap();
        m.insert("302", 1, measure_ndcg(), 1.0).unwrap();
        m.insert("302", 1, MeasureId::Ap, 0.25).unwrap();
        m
    }

    #[test]
    fn round_trip_is_identity() {
        let matrix = sample();
        let mut buf = Vec::new();
        write_eval_matrix(&mut buf, &matrix).unwrap();
        let back = read_eval_matrix(buf.as_slice()).unwrap();
        assert_eq!(back, matrix);
    }

    #[test]
    fn nan_serializes_as_empty_cell_and_reads_as_missing() {
        let mut matrix = sample();
        matrix.insert("303", 1, MeasureId::Ap, f64::NAN).unwrap();
        let mut buf = Vec::new();
        write_eval_matrix(&mut buf, &matrix).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.lines().any(|l| l.ends_with("ap,")), "{text}");
        let back = read_eval_matrix(buf.as_slice()).unwrap();
        assert!(back.get("303", 1, MeasureId::Ap).unwrap().is_nan());
        assert!(back
            .measure_entries(MeasureId::Ap)
            .iter()
            .all(|(t, _, _)| *t != "303"));
    }

    #[test]
    fn duplicate_key_is_rejected() {
        let mut buf = Vec::new();
        write_eval_matrix(&mut buf, &sample()).unwrap();
        let mut text = String::from_utf8(buf).unwrap();
        let dup = text.lines().nth(1).unwrap().to_string();
        text.push_str(&dup);
        text.push('\n');
        assert!(read_eval_matrix(text.as_bytes()).is_err());
    }

    #[test]
    fn unknown_measure_is_rejected() {
        let data = "source,model,cutoff,topic,query,measure,value\nu,bm25,10,301,1,recall@5,0.5\n";
        let err = read_eval_matrix(data.as_bytes()).unwrap_err();
        assert!(err.to_string().contains("recall@5"), "{err}");
    }

    #[test]
    fn out_of_range_value_is_rejected() {
        let mut m = EvalMatrix::default();
        assert!(m.insert("301", 1, MeasureId::Ap, 1.5).is_err());
        assert!(m.insert("301", 1, measure_ndcg(), -0.1).is_err());
    }
}
