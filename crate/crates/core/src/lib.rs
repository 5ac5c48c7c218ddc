//! Simulation and validation of user query variants over test-collection
//! resources.
//!
//! The crate is organized around the stages of the pipeline:
//!
//! * [`text`] — deterministic tokenization, stopword filtering, and stemming
//!   shared by indexing, topic parsing, and query generation.
//! * [`index`] — an inverted index with BM25 and query-likelihood (Dirichlet)
//!   retrieval.
//! * [`collection`] — parsers and writers for topics, qrels, query-variant
//!   files, TREC runs, and evaluation matrices.
//! * [`lm`] — background/topic/mixture term distributions and the ordered
//!   term-candidate lists that feed the simulators.
//! * [`sim`] — query modification strategies (S1–S3′), change-model scored
//!   candidate selection (S4 family), and session assembly.
//! * [`eval`] — effectiveness measures, reproducibility measures, session
//!   gain, isoquants, and term-overlap similarity, plus the comparison
//!   report that ties them together.

pub mod collection;
pub mod eval;
pub mod index;
pub mod lm;
pub mod sim;
pub mod text;
