//! Single-file binary persistence for [`PostingsIndex`].
//!
//! Layout (all integers little-endian):
//!
//! ```text
//! magic    [u8; 8] = b"UQVSIDX1"
//! version  u32
//! n_docs   u64
//! per doc: id (u32 length + UTF-8 bytes), doc_len u32
//! total_tokens u64
//! n_terms  u64
//! per term: term (u32 length + UTF-8 bytes), n_postings u64,
//!           then (ordinal u32, tf u32) pairs sorted by ordinal
//! ```
//!
//! Document frequency and collection frequency are recomputed on load and
//! the full structural invariants are re-validated.

use std::io::{Read, Write};

use super::{IndexError, PostingsIndex, PostingsList};

const MAGIC: &[u8; 8] = b"UQVSIDX1";
pub const FORMAT_VERSION: u32 = 1;

fn write_u32<W: Write>(w: &mut W, v: u32) -> std::io::Result<()> {
    w.write_all(&v.to_le_bytes())
}

fn write_u64<W: Write>(w: &mut W, v: u64) -> std::io::Result<()> {
    w.write_all(&v.to_le_bytes())
}

fn write_str<W: Write>(w: &mut W, s: &str) -> std::io::Result<()> {
    write_u32(w, s.len() as u32)?;
    w.write_all(s.as_bytes())
}

fn read_u32<R: Read>(r: &mut R) -> Result<u32, IndexError> {
    let mut buf = [0u8; 4];
    r.read_exact(&mut buf)?;
    Ok(u32::from_le_bytes(buf))
}

fn read_u64<R: Read>(r: &mut R) -> Result<u64, IndexError> {
    let mut buf = [0u8; 8];
    r.read_exact(&mut buf)?;
    Ok(u64::from_le_bytes(buf))
}

fn read_str<R: Read>(r: &mut R) -> Result<String, IndexError> {
    let len = read_u32(r)? as usize;
    let mut buf = vec![0u8; len];
    r.read_exact(&mut buf)?;
    String::from_utf8(buf).map_err(|_| IndexError::Corrupt("non-UTF-8 string".into()))
}

impl PostingsIndex {
    pub fn save<W: Write>(&self, mut w: W) -> Result<(), IndexError> {
        w.write_all(MAGIC)?;
        write_u32(&mut w, FORMAT_VERSION)?;
        write_u64(&mut w, self.doc_ids.len() as u64)?;
        for (id, &dl) in self.doc_ids.iter().zip(&self.doc_len) {
            write_str(&mut w, id)?;
            write_u32(&mut w, dl)?;
        }
        write_u64(&mut w, self.total_tokens)?;
        write_u64(&mut w, self.postings.len() as u64)?;
        for (term, list) in &self.postings {
            write_str(&mut w, term)?;
            write_u64(&mut w, list.entries.len() as u64)?;
            for &(ordinal, tf) in &list.entries {
                write_u32(&mut w, ordinal)?;
                write_u32(&mut w, tf)?;
            }
        }
        Ok(())
    }

    pub fn load<R: Read>(mut r: R) -> Result<Self, IndexError> {
        let mut magic = [0u8; 8];
        r.read_exact(&mut magic)?;
        if &magic != MAGIC {
            return Err(IndexError::Corrupt("bad magic header".into()));
        }
        let version = read_u32(&mut r)?;
        if version != FORMAT_VERSION {
            return Err(IndexError::Corrupt(format!(
                "unsupported format version {version}, expected {FORMAT_VERSION}"
            )));
        }
        let n_docs = read_u64(&mut r)? as usize;
        let mut doc_ids = Vec::with_capacity(n_docs);
        let mut doc_len = Vec::with_capacity(n_docs);
        let mut id_to_ordinal = std::collections::HashMap::with_capacity(n_docs);
        for ordinal in 0..n_docs {
            let id = read_str(&mut r)?;
            if id_to_ordinal.insert(id.clone(), ordinal as u32).is_some() {
                return Err(IndexError::Corrupt(format!("duplicate doc id {id:?}")));
            }
            doc_ids.push(id);
            doc_len.push(read_u32(&mut r)?);
        }
        let total_tokens = read_u64(&mut r)?;
        let n_terms = read_u64(&mut r)? as usize;
        let mut postings = std::collections::BTreeMap::new();
        for _ in 0..n_terms {
            let term = read_str(&mut r)?;
            let n_postings = read_u64(&mut r)? as usize;
            let mut entries = Vec::with_capacity(n_postings);
            let mut cf: u64 = 0;
            for _ in 0..n_postings {
                let ordinal = read_u32(&mut r)?;
                let tf = read_u32(&mut r)?;
                cf += u64::from(tf);
                entries.push((ordinal, tf));
            }
            if postings.insert(term.clone(), PostingsList { entries, cf }).is_some() {
                return Err(IndexError::Corrupt(format!("duplicate term {term:?}")));
            }
        }
        let index = PostingsIndex {
            doc_ids,
            doc_len,
            total_tokens,
            postings,
            id_to_ordinal,
        };
        index.validate()?;
        Ok(index)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> PostingsIndex {
        PostingsIndex::build(vec![
            ("doc-a", "solar panels convert sunlight"),
            ("doc-b", "wind turbines and solar panels"),
            ("doc-c", "turbines turbines turbines"),
        ])
        .unwrap()
    }

    #[test]
    fn round_trip_preserves_the_index() {
        let index = sample();
        let mut buf = Vec::new();
        index.save(&mut buf).unwrap();
        let loaded = PostingsIndex::load(buf.as_slice()).unwrap();
        assert_eq!(index, loaded);
    }

    #[test]
    fn bad_magic_is_rejected() {
        let mut buf = Vec::new();
        sample().save(&mut buf).unwrap();
        buf[0] ^= 0xff;
        assert!(matches!(
            PostingsIndex::load(buf.as_slice()),
            Err(IndexError::Corrupt(_))
        ));
    }

    #[test]
    fn wrong_version_is_rejected() {
        let mut buf = Vec::new();
        sample().save(&mut buf).unwrap();
        buf[8] = 99;
        assert!(matches!(
            PostingsIndex::load(buf.as_slice()),
            Err(IndexError::Corrupt(_))
        ));
    }

    #[test]
    fn truncated_file_is_rejected() {
        let mut buf = Vec::new();
        sample().save(&mut buf).unwrap();
        buf.truncate(buf.len() - 3);
        assert!(PostingsIndex::load(buf.as_slice()).is_err());
    }

    #[test]
    fn corrupted_count_fails_validation() {
        let mut buf = Vec::new();
        sample().save(&mut buf).unwrap();
        // flip a tf byte somewhere in the postings section
        let at = buf.len() - 1;
        buf[at] = buf[at].wrapping_add(1);
        assert!(PostingsIndex::load(buf.as_slice()).is_err());
    }
}
