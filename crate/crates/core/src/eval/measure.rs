//! Measure identifiers with a canonical textual form used in evaluation
//! matrices and reports: `ap`, `ndcg@K`, `p@K`, `sdcg(b=B,bq=BQ)`.

use std::fmt;
use std::str::FromStr;

use super::EvalError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MeasureId {
    /// Average precision over the full run.
    Ap,
    /// Normalized discounted cumulated gain at a rank cutoff.
    Ndcg { cutoff: u32 },
    /// Precision at k with a fixed denominator of k.
    Precision { k: u32 },
    /// Session DCG with rank discount base `b` and query discount base `bq`.
    Sdcg { b: f64, bq: f64 },
}

impl MeasureId {
    pub fn ndcg(cutoff: u32) -> Result<Self, EvalError> {
        if cutoff == 0 {
            return Err(EvalError::Invalid("ndcg cutoff must be >= 1".into()));
        }
        Ok(MeasureId::Ndcg { cutoff })
    }

    pub fn precision(k: u32) -> Result<Self, EvalError> {
        if k == 0 {
            return Err(EvalError::Invalid("precision k must be >= 1".into()));
        }
        Ok(MeasureId::Precision { k })
    }

    pub fn sdcg(b: f64, bq: f64) -> Result<Self, EvalError> {
        if !(b > 1.0) || !(bq > 1.0) || !b.is_finite() || !bq.is_finite() {
            return Err(EvalError::Invalid(format!(
                "sdcg bases must be finite and > 1, got b={b}, bq={bq}"
            )));
        }
        Ok(MeasureId::Sdcg { b, bq })
    }

    /// Inclusive value range of the measure; scores outside are invalid.
    pub fn range(&self) -> (f64, f64) {
        match self {
            MeasureId::Ap | MeasureId::Ndcg { .. } | MeasureId::Precision { .. } => (0.0, 1.0),
            MeasureId::Sdcg { .. } => (0.0, f64::INFINITY),
        }
    }
}

impl Eq for MeasureId {}

impl Ord for MeasureId {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        fn key(m: &MeasureId) -> (u8, u64, u64) {
            match m {
                MeasureId::Ap => (0, 0, 0),
                MeasureId::Ndcg { cutoff } => (1, u64::from(*cutoff), 0),
                MeasureId::Precision { k } => (2, u64::from(*k), 0),
                MeasureId::Sdcg { b, bq } => (3, b.to_bits(), bq.to_bits()),
            }
        }
        key(self).cmp(&key(other))
    }
}

impl PartialOrd for MeasureId {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MeasureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeasureId::Ap => write!(f, "ap"),
            MeasureId::Ndcg { cutoff } => write!(f, "ndcg@{cutoff}"),
            MeasureId::Precision { k } => write!(f, "p@{k}"),
            MeasureId::Sdcg { b, bq } => write!(f, "sdcg(b={b},bq={bq})"),
        }
    }
}

impl FromStr for MeasureId {
    type Err = EvalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || EvalError::Invalid(format!("unknown measure {s:?}"));
        if s == "ap" {
            return Ok(MeasureId::Ap);
        }
        if let Some(rest) = s.strip_prefix("ndcg@") {
            let cutoff: u32 = rest.parse().map_err(|_| bad())?;
            return MeasureId::ndcg(cutoff);
        }
        if let Some(rest) = s.strip_prefix("p@") {
            let k: u32 = rest.parse().map_err(|_| bad())?;
            return MeasureId::precision(k);
        }
        if let Some(rest) = s.strip_prefix("sdcg(b=") {
            let rest = rest.strip_suffix(')').ok_or_else(bad)?;
            let (b, bq) = rest.split_once(",bq=").ok_or_else(bad)?;
            let b: f64 = b.parse().map_err(|_| bad())?;
            let bq: f64 = bq.parse().map_err(|_| bad())?;
            return MeasureId::sdcg(b, bq);
        }
        Err(bad())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_parse_round_trip() {
        for m in [
            MeasureId::Ap,
            MeasureId::ndcg(1000).unwrap(),
            MeasureId::precision(10).unwrap(),
            MeasureId::sdcg(2.0, 4.0).unwrap(),
        ] {
            let text = m.to_string();
            assert_eq!(text.parse::<MeasureId>().unwrap(), m, "{text}");
        }
        assert_eq!(MeasureId::sdcg(2.0, 4.0).unwrap().to_string(), "sdcg(b=2,bq=4)");
    }

    #[test]
    fn invalid_forms_are_rejected() {
        for s in ["ndcg", "ndcg@0", "p@", "sdcg(b=2)", "recall@5", ""] {
            assert!(s.parse::<MeasureId>().is_err(), "{s}");
        }
    }
}
