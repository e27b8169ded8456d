//! Simulation of collaborative training regimes for small code models and
//! auditing of the trained models for verbatim training-data memorization.
//!
//! The crate is organised along the measurement pipeline:
//!
//! - [`corpus`]: per-organization source ingestion, quality filters, splits
//!   and per-megabyte statistics.
//! - [`dedup`]: MinHash + LSH near-duplicate file removal.
//! - [`clones`]: Type-1 clone detection over normalized lines.
//! - [`pysurface`]: indentation-driven extraction of Python functions,
//!   docstrings and extraction prompts.
//! - [`tinylm`]: a byte-level decoder-only transformer trained from scratch.
//! - [`collab`]: centralized, federated (FedAvg / FedYogi) and incremental
//!   training orchestration.
//! - [`audit`]: targeted extraction and memorization ratios.
//! - [`metrics`]: pass@k and the perplexity / zlib membership score.

pub mod audit;
pub mod clones;
pub mod collab;
pub mod corpus;
pub mod dedup;
mod error;
pub mod metrics;
pub mod pysurface;
pub mod seeds;
pub mod synthetic;
pub mod tinylm;

pub use audit::{GenerationRecord, MemorizationReport, MemorizationRow};
pub use clones::{CloneBlock, CloneConfig, Occurrence};
pub use collab::{ModelRegistry, Strategy, TrainPlan, YogiState};
pub use corpus::{OrgCorpus, SourceFile, Split, StatsRecord};
pub use dedup::MinHashSignature;
pub use error::{Error, Result};
pub use metrics::{MembershipScore, PassAtKInput};
pub use pysurface::{FunctionRecord, Prompt, PromptKind};
pub use tinylm::{ArchConfig, LrSchedule, ModelParams, SamplingConfig, TrainHyper};
