//! A byte-level decoder-only transformer small enough to train on a laptop
//! CPU: tokenizer, parameter layout, forward/backward, Adam training,
//! nucleus sampling with a key/value cache, perplexity and checkpoints.

mod checkpoint;
mod infer;
mod model;
mod params;
mod sampling;
mod tokenizer;
mod train;

pub use checkpoint::{read_checkpoint, write_checkpoint, CHECKPOINT_MAGIC};
pub use infer::Decoder;
pub use model::{logits, loss_and_grad, nll_sum};
pub use params::{init_model, Layout, ParamGroup};
pub use sampling::{generate, nucleus_set, sample_token};
pub use tokenizer::{detokenize, tokenize, tokenize_corpus, EOT, VOCAB_SIZE};
pub use train::{perplexity, phased_windows, train, train_observed, windows};

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ArchConfig {
    pub vocab_size: usize,
    pub context_len: usize,
    pub d_model: usize,
    pub n_heads: usize,
    pub n_layers: usize,
    pub ffn_mult: usize,
}

impl Default for ArchConfig {
    fn default() -> Self {
        Self {
            vocab_size: VOCAB_SIZE,
            context_len: 512,
            d_model: 128,
            n_heads: 4,
            n_layers: 4,
            ffn_mult: 4,
        }
    }
}

impl ArchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.vocab_size < VOCAB_SIZE {
            return Err(Error::InvalidArgument(format!(
                "vocab_size {} cannot hold the byte tokenizer ({VOCAB_SIZE} ids)",
                self.vocab_size
            )));
        }
        if self.context_len < 2 {
            return Err(Error::InvalidArgument(
                "context_len must be at least 2".into(),
            ));
        }
        if self.d_model == 0 || self.n_heads == 0 || self.n_layers == 0 || self.ffn_mult == 0 {
            return Err(Error::InvalidArgument(
                "d_model, n_heads, n_layers and ffn_mult must be positive".into(),
            ));
        }
        if !self.d_model.is_multiple_of(self.n_heads) {
            return Err(Error::InvalidArgument(format!(
                "d_model {} is not divisible by n_heads {}",
                self.d_model, self.n_heads
            )));
        }
        Ok(())
    }

    pub fn head_dim(&self) -> usize {
        self.d_model / self.n_heads
    }

    pub fn ffn_dim(&self) -> usize {
        self.d_model * self.ffn_mult
    }

    /// Longest prompt accepted by [`generate`], and the default generation budget.
    pub fn prompt_cap(&self) -> usize {
        self.context_len / 2
    }

    /// Closed-form parameter count.
    ///
    /// Token embedding (tied with the output head) `V*d`, positional embedding
    /// `T*d`, per block `4d^2 + 2df + 9d + f`, final layer norm `2d`.
    pub fn param_count(&self) -> usize {
        let (v, t, d, f) = (
            self.vocab_size,
            self.context_len,
            self.d_model,
            self.ffn_dim(),
        );
        v * d + t * d + self.n_layers * (4 * d * d + 2 * d * f + 9 * d + f) + 2 * d
    }
}

/// A trained or freshly initialised model: architecture plus one flat weight
/// vector in the canonical order described by [`Layout`].
#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
    pub arch: ArchConfig,
    pub weights: Vec<f64>,
    pub param_count: usize,
    pub seed: u64,
}

impl ModelParams {
    pub fn layout(&self) -> Layout {
        Layout::new(&self.arch)
    }

    pub fn check(&self) -> Result<()> {
        self.arch.validate()?;
        let expected = self.arch.param_count();
        if self.weights.len() != expected || self.param_count != expected {
            return Err(Error::ShapeMismatch {
                expected,
                actual: self.weights.len(),
            });
        }
        Ok(())
    }

    pub fn same_arch(&self, other: &ModelParams) -> Result<()> {
        if self.arch != other.arch {
            return Err(Error::ArchMismatch(format!(
                "{:?} vs {:?}",
                self.arch, other.arch
            )));
        }
        Ok(())
    }

    pub fn with_weights(&self, weights: Vec<f64>) -> ModelParams {
        ModelParams {
            arch: self.arch,
            param_count: weights.len(),
            weights,
            seed: self.seed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SamplingConfig {
    pub temperature: f64,
    pub top_p: f64,
    pub n_generations: usize,
    /// `None` means half the context window.
    pub max_new_tokens: Option<usize>,
    pub seed: u64,
}

impl Default for SamplingConfig {
    fn default() -> Self {
        Self {
            temperature: 0.6,
            top_p: 0.6,
            n_generations: 5,
            max_new_tokens: None,
            seed: 0,
        }
    }
}

impl SamplingConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.temperature > 0.0) || !self.temperature.is_finite() {
            return Err(Error::InvalidArgument("temperature must be > 0".into()));
        }
        if !(self.top_p > 0.0 && self.top_p <= 1.0) {
            return Err(Error::InvalidArgument("top_p must lie in (0, 1]".into()));
        }
        if self.n_generations == 0 {
            return Err(Error::InvalidArgument("n_generations must be >= 1".into()));
        }
        Ok(())
    }

    pub fn max_new(&self, arch: &ArchConfig) -> usize {
        self.max_new_tokens.unwrap_or(arch.prompt_cap())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Optimizer {
    Adam,
}

/// Learning-rate multiplier over the steps of one [`train`] call.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LrSchedule {
    Constant,
    /// Half-cosine from `lr` towards zero over the planned steps.
    Cosine,
}

impl LrSchedule {
    pub fn factor(self, step: usize, total: usize) -> f64 {
        match self {
            LrSchedule::Constant => 1.0,
            LrSchedule::Cosine if total <= 1 => 1.0,
            LrSchedule::Cosine => {
                0.5 * (1.0 + (std::f64::consts::PI * step as f64 / (total - 1) as f64).cos())
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TrainHyper {
    pub epochs: usize,
    pub batch_size: usize,
    pub lr: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
    /// Global gradient-norm clip; 0 disables clipping.
    pub clip_norm: f64,
    pub optimizer: Optimizer,
    pub schedule: LrSchedule,
}

impl Default for TrainHyper {
    fn default() -> Self {
        Self {
            epochs: 10,
            batch_size: 2,
            lr: 5e-4,
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
            clip_norm: 1.0,
            optimizer: Optimizer::Adam,
            schedule: LrSchedule::Constant,
        }
    }
}

impl TrainHyper {
    pub fn validate(&self) -> Result<()> {
        if self.batch_size == 0 {
            return Err(Error::InvalidArgument("batch_size must be >= 1".into()));
        }
        if !(self.lr >= 0.0)
            || !(0.0..1.0).contains(&self.beta1)
            || !(0.0..1.0).contains(&self.beta2)
        {
            return Err(Error::InvalidArgument(
                "invalid optimizer hyperparameters".into(),
            ));
        }
        Ok(())
    }
}
