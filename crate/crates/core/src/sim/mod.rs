//! Query simulators: the conventional modification strategies S1–S3′, the
//! change-model scored strategies S4/S4′/S4″, and session assembly with
//! cross-query document pooling.

mod conventional;
mod qcm;
mod session;

use thiserror::Error;

use crate::index::IndexError;
use crate::lm::{CandidateSource, LmError};
use crate::text::TermSequence;

pub use conventional::generate_conventional;
pub use qcm::{
    enumerate_query_candidates, qcm_query_score, qcm_theta, simulate_qcm, QcmContext,
};
pub use session::{pool_runs, pooled_query_lists, run_session};

#[derive(Debug, Error)]
pub enum SimError {
    #[error("invalid simulator spec: {0}")]
    InvalidSpec(String),
    #[error("strategy {0} is not a conventional strategy")]
    NotConventional(String),
    #[error("strategy {0} is not a change-model strategy")]
    NotQcm(String),
    #[error("candidate query must be non-empty")]
    EmptyCandidate,
    #[error(transparent)]
    Lm(#[from] LmError),
    #[error(transparent)]
    Index(#[from] IndexError),
}

/// Weights and bounds of the change-model scoring stage.
#[derive(Debug, Clone, PartialEq)]
pub struct QcmParams {
    /// Reward weight for topic-title terms.
    pub alpha: f64,
    /// Damping weight for added terms that occur in the topic text.
    pub beta: f64,
    /// idf weight for added terms outside the topic text.
    pub epsilon: f64,
    /// Penalty weight for removed terms.
    pub delta: f64,
    /// Query lengths to enumerate (sorted, deduplicated).
    pub ngram_sizes: Vec<usize>,
    /// Cap on the number of candidate terms considered; `None` resolves to
    /// a per-source default (20 for `Rel`, the whole list otherwise).
    pub vocab_cap: Option<usize>,
}

/// Default n-gram sizes of the candidate enumeration.
pub const DEFAULT_NGRAM_SIZES: [usize; 3] = [3, 4, 5];

/// Default candidate-vocabulary cap for `Rel`-sourced simulators.
pub const DEFAULT_REL_VOCAB_CAP: usize = 20;

impl QcmParams {
    pub fn new(alpha: f64, beta: f64, epsilon: f64, delta: f64) -> Self {
        QcmParams {
            alpha,
            beta,
            epsilon,
            delta,
            ngram_sizes: DEFAULT_NGRAM_SIZES.to_vec(),
            vocab_cap: None,
        }
    }

    /// Preset "prefers topic terms, mostly keeps previous terms".
    pub fn preset_s4() -> Self {
        QcmParams::new(2.2, 0.2, 0.05, 0.6)
    }

    /// Preset "keeps previous terms, pulls in non-topic terms".
    pub fn preset_s4_prime() -> Self {
        QcmParams::new(2.2, 0.2, 0.25, 0.1)
    }

    /// Preset "sticks to topic terms, reformulates freely".
    pub fn preset_s4_double_prime() -> Self {
        QcmParams::new(0.2, 0.2, 0.025, 0.5)
    }

    pub fn with_ngram_sizes(mut self, sizes: Vec<usize>) -> Self {
        self.ngram_sizes = sizes;
        self
    }

    pub fn with_vocab_cap(mut self, cap: usize) -> Self {
        self.vocab_cap = Some(cap);
        self
    }

    pub fn validate(&self) -> Result<(), SimError> {
        for (name, v) in [
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("epsilon", self.epsilon),
            ("delta", self.delta),
        ] {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(SimError::InvalidSpec(format!(
                    "{name} must be a finite non-negative weight, got {v}"
                )));
            }
        }
        if self.ngram_sizes.is_empty() {
            return Err(SimError::InvalidSpec("ngram_sizes must be non-empty".into()));
        }
        if self.ngram_sizes.iter().any(|&s| s == 0) {
            return Err(SimError::InvalidSpec("ngram sizes must be >= 1".into()));
        }
        if !self.ngram_sizes.windows(2).all(|w| w[0] < w[1]) {
            return Err(SimError::InvalidSpec(
                "ngram_sizes must be strictly increasing".into(),
            ));
        }
        if let Some(cap) = self.vocab_cap {
            let max = *self.ngram_sizes.iter().max().expect("non-empty");
            if cap < max {
                return Err(SimError::InvalidSpec(format!(
                    "vocab cap {cap} is smaller than the largest n-gram size {max}"
                )));
            }
        }
        Ok(())
    }

    /// The effective candidate-term cap for a given source.
    pub fn resolve_cap(&self, source: CandidateSource, available: usize) -> usize {
        match self.vocab_cap {
            Some(cap) => cap.min(available),
            None => match source {
                CandidateSource::Rel => DEFAULT_REL_VOCAB_CAP.min(available),
                _ => available,
            },
        }
    }
}

/// Query modification strategy.
#[derive(Debug, Clone, PartialEq)]
pub enum StrategyId {
    /// Single-term queries following the candidate order.
    S1,
    /// First term fixed, second term replaced per reformulation.
    S2,
    /// First two terms fixed, third term replaced per reformulation.
    S2Prime,
    /// Incremental: query i uses the first i candidate terms.
    S3,
    /// Incremental starting from three terms.
    S3Prime,
    /// Change-model scored selection, preset "S4".
    S4(QcmParams),
    /// Change-model scored selection, preset "S4 prime".
    S4Prime(QcmParams),
    /// Change-model scored selection, preset "S4 double prime".
    S4DoublePrime(QcmParams),
}

impl StrategyId {
    pub fn is_conventional(&self) -> bool {
        matches!(
            self,
            StrategyId::S1 | StrategyId::S2 | StrategyId::S2Prime | StrategyId::S3 | StrategyId::S3Prime
        )
    }

    pub fn qcm_params(&self) -> Option<&QcmParams> {
        match self {
            StrategyId::S4(p) | StrategyId::S4Prime(p) | StrategyId::S4DoublePrime(p) => Some(p),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            StrategyId::S1 => "s1",
            StrategyId::S2 => "s2",
            StrategyId::S2Prime => "s2p",
            StrategyId::S3 => "s3",
            StrategyId::S3Prime => "s3p",
            StrategyId::S4(_) => "s4",
            StrategyId::S4Prime(_) => "s4p",
            StrategyId::S4DoublePrime(_) => "s4pp",
        }
    }
}

impl std::fmt::Display for StrategyId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Declarative description of one simulator.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulatorSpec {
    pub source: CandidateSource,
    pub strategy: StrategyId,
    pub n_queries: usize,
    pub label: String,
}

/// Default number of reformulations per topic.
pub const DEFAULT_N_QUERIES: usize = 10;

impl SimulatorSpec {
    pub fn new(source: CandidateSource, strategy: StrategyId, label: impl Into<String>) -> Self {
        SimulatorSpec {
            source,
            strategy,
            n_queries: DEFAULT_N_QUERIES,
            label: label.into(),
        }
    }

    pub fn with_n_queries(mut self, n: usize) -> Self {
        self.n_queries = n;
        self
    }

    pub fn validate(&self) -> Result<(), SimError> {
        if self.label.is_empty() {
            return Err(SimError::InvalidSpec("simulator label must be non-empty".into()));
        }
        if self.n_queries == 0 {
            return Err(SimError::InvalidSpec("n_queries must be >= 1".into()));
        }
        match (&self.strategy, self.source) {
            (s, CandidateSource::TopicPlusRel { .. }) if s.is_conventional() => {
                Err(SimError::InvalidSpec(format!(
                    "conventional strategy {s} requires a topic or rel candidate source"
                )))
            }
            (s, CandidateSource::Topic) if !s.is_conventional() => Err(SimError::InvalidSpec(
                format!("strategy {s} requires a rel or topic+rel candidate source"),
            )),
            _ => {
                if let Some(p) = self.strategy.qcm_params() {
                    p.validate()?;
                }
                Ok(())
            }
        }
    }
}

/// An ordered sequence of simulated reformulations for one topic.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulatedSession {
    pub topic_id: String,
    pub queries: Vec<TermSequence>,
    pub provenance: SimulatorSpec,
}

impl SimulatedSession {
    /// Renders the session in query-variant form (one string per query).
    pub fn query_strings(&self) -> Vec<String> {
        self.queries.iter().map(TermSequence::to_query_string).collect()
    }
}
