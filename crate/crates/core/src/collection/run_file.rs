//! TREC run format: `topic Q0 docid rank score tag`, space-separated,
//! rank starting at 1, score printed with 6 decimal places.

use std::io::{BufRead, Write};

use super::{parse_err, CollectionError};
use crate::index::{RankedEntry, RankedList};

/// Writes one line per entry. Each list's `topic_id` is emitted verbatim,
/// ranks restart at 1 per list.
pub fn write_trec_run<W: Write>(
    mut w: W,
    lists: &[RankedList],
    tag: &str,
) -> Result<(), CollectionError> {
    for list in lists {
        for (i, entry) in list.entries().iter().enumerate() {
            writeln!(
                w,
                "{} Q0 {} {} {:.6} {}",
                list.topic_id,
                entry.doc_id,
                i + 1,
                entry.score,
                tag
            )?;
        }
    }
    Ok(())
}

/// Reads a run file back into per-topic lists (file order of first
/// appearance). Ranks within a topic must be 1..n without gaps; document
/// ids within a topic must be unique.
pub fn read_trec_run<R: BufRead>(reader: R, file: &str) -> Result<Vec<RankedList>, CollectionError> {
    let mut order: Vec<String> = Vec::new();
    let mut by_topic: std::collections::HashMap<String, Vec<(u32, RankedEntry)>> =
        std::collections::HashMap::new();
    for (lineno, line) in reader.lines().enumerate() {
        let lineno = lineno + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 6 {
            return Err(parse_err(
                file,
                lineno,
                format!("expected 6 fields `topic Q0 docid rank score tag`, got {}", fields.len()),
            ));
        }
        let rank: u32 = fields[3]
            .parse()
            .map_err(|_| parse_err(file, lineno, format!("invalid rank {:?}", fields[3])))?;
        let score: f64 = fields[4]
            .parse()
            .map_err(|_| parse_err(file, lineno, format!("invalid score {:?}", fields[4])))?;
        if !by_topic.contains_key(fields[0]) {
            order.push(fields[0].to_string());
        }
        by_topic.entry(fields[0].to_string()).or_default().push((
            rank,
            RankedEntry {
                doc_id: fields[2].to_string(),
                score,
            },
        ));
    }
    let mut lists = Vec::with_capacity(order.len());
    for topic in order {
        let mut entries = by_topic.remove(&topic).unwrap();
        entries.sort_by_key(|(rank, _)| *rank);
        let mut seen = std::collections::HashSet::new();
        for (i, (rank, entry)) in entries.iter().enumerate() {
            if *rank != (i + 1) as u32 {
                return Err(CollectionError::Invalid(format!(
                    "{file}: topic {topic:?} ranks are not contiguous from 1 (found {rank} at position {})",
                    i + 1
                )));
            }
            if !seen.insert(entry.doc_id.clone()) {
                return Err(CollectionError::Invalid(format!(
                    "{file}: topic {topic:?} lists document {:?} twice",
                    entry.doc_id
                )));
            }
        }
        let cutoff = entries.len();
        let entries: Vec<RankedEntry> = entries.into_iter().map(|(_, e)| e).collect();
        lists.push(RankedList::new(topic, entries, cutoff));
    }
    Ok(lists)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn list(topic: &str, docs: &[(&str, f64)]) -> RankedList {
        let entries = docs
            .iter()
            .map(|(d, s)| RankedEntry {
                doc_id: d.to_string(),
                score: *s,
            })
            .collect();
        RankedList::new(topic, entries, docs.len())
    }

    #[test]
    fn format_is_exact() {
        let lists = vec![list("301", &[("d9", 1.25), ("d2", 0.5)])];
        let mut buf = Vec::new();
        write_trec_run(&mut buf, &lists, "runtag").unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "301 Q0 d9 1 1.250000 runtag\n301 Q0 d2 2 0.500000 runtag\n");
    }

    #[test]
    fn round_trip() {
        let lists = vec![
            list("301", &[("a", 3.0), ("b", 2.0), ("c", 1.0)]),
            list("302", &[("x", 0.125)]),
        ];
        let mut buf = Vec::new();
        write_trec_run(&mut buf, &lists, "t").unwrap();
        let back = read_trec_run(buf.as_slice(), "mem").unwrap();
        assert_eq!(back.len(), 2);
        assert_eq!(back[0].topic_id, "301");
        let ids: Vec<&str> = back[0].doc_ids().collect();
        assert_eq!(ids, ["a", "b", "c"]);
        assert_eq!(back[1].entries()[0].score, 0.125);
    }

    #[test]
    fn rank_gap_is_rejected() {
        let data = "301 Q0 a 1 1.0 t\n301 Q0 b 3 0.5 t\n";
        assert!(read_trec_run(data.as_bytes(), "mem").is_err());
    }

    #[test]
    fn duplicate_doc_is_rejected() {
        let data = "301 Q0 a 1 1.0 t\n301 Q0 a 2 0.5 t\n";
        assert!(read_trec_run(data.as_bytes(), "mem").is_err());
    }
}
