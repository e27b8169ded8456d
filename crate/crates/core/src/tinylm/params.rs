use std::ops::Range;

use rand_distr::{Distribution, Normal};

use super::{ArchConfig, ModelParams};
use crate::{seeds, Result};

const INIT_STD: f64 = 0.02;

/// Offsets of one transformer block inside the flat weight vector.
#[derive(Debug, Clone)]
pub struct BlockLayout {
    pub ln1_g: usize,
    pub ln1_b: usize,
    pub w_qkv: usize,
    pub b_qkv: usize,
    pub w_o: usize,
    pub b_o: usize,
    pub ln2_g: usize,
    pub ln2_b: usize,
    pub w_fc: usize,
    pub b_fc: usize,
    pub w_proj: usize,
    pub b_proj: usize,
}

/// Canonical ordering of the flat weight vector:
///
/// ```text
/// tok_emb [V x d]            (also the transposed output head)
/// pos_emb [T x d]
/// for each block:
///   ln1_g [d], ln1_b [d]
///   w_qkv [d x 3d], b_qkv [3d]
///   w_o [d x d], b_o [d]
///   ln2_g [d], ln2_b [d]
///   w_fc [d x f], b_fc [f]
///   w_proj [f x d], b_proj [d]
/// lnf_g [d], lnf_b [d]
/// ```
///
/// Matrices are row-major with the input dimension first, so a linear layer
/// computes `y = x W + b` for row vectors `x`.
#[derive(Debug, Clone)]
pub struct Layout {
    pub arch: ArchConfig,
    pub tok_emb: usize,
    pub pos_emb: usize,
    pub blocks: Vec<BlockLayout>,
    pub lnf_g: usize,
    pub lnf_b: usize,
    pub total: usize,
}

/// A named contiguous tensor inside the flat weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamGroup {
    pub name: String,
    pub range: Range<usize>,
    /// Gains initialise to one, biases to zero, everything else Gaussian.
    pub init: GroupInit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupInit {
    Gaussian,
    Ones,
    Zeros,
}

impl Layout {
    pub fn new(arch: &ArchConfig) -> Self {
        let (v, t, d, f) = (
            arch.vocab_size,
            arch.context_len,
            arch.d_model,
            arch.ffn_dim(),
        );
        let mut cursor = 0usize;
        let mut take = |n: usize| {
            let at = cursor;
            cursor += n;
            at
        };
        let tok_emb = take(v * d);
        let pos_emb = take(t * d);
        let blocks = (0..arch.n_layers)
            .map(|_| BlockLayout {
                ln1_g: take(d),
                ln1_b: take(d),
                w_qkv: take(d * 3 * d),
                b_qkv: take(3 * d),
                w_o: take(d * d),
                b_o: take(d),
                ln2_g: take(d),
                ln2_b: take(d),
                w_fc: take(d * f),
                b_fc: take(f),
                w_proj: take(f * d),
                b_proj: take(d),
            })
            .collect();
        let lnf_g = take(d);
        let lnf_b = take(d);
        Self {
            arch: *arch,
            tok_emb,
            pos_emb,
            blocks,
            lnf_g,
            lnf_b,
            total: cursor,
        }
    }

    pub fn groups(&self) -> Vec<ParamGroup> {
        let (v, t, d, f) = (
            self.arch.vocab_size,
            self.arch.context_len,
            self.arch.d_model,
            self.arch.ffn_dim(),
        );
        let g = |name: String, at: usize, len: usize, init: GroupInit| ParamGroup {
            name,
            range: at..at + len,
            init,
        };
        let mut out = vec![
            g("tok_emb".into(), self.tok_emb, v * d, GroupInit::Gaussian),
            g("pos_emb".into(), self.pos_emb, t * d, GroupInit::Gaussian),
        ];
        for (i, b) in self.blocks.iter().enumerate() {
            out.extend([
                g(format!("h{i}.ln1_g"), b.ln1_g, d, GroupInit::Ones),
                g(format!("h{i}.ln1_b"), b.ln1_b, d, GroupInit::Zeros),
                g(
                    format!("h{i}.w_qkv"),
                    b.w_qkv,
                    3 * d * d,
                    GroupInit::Gaussian,
                ),
                g(format!("h{i}.b_qkv"), b.b_qkv, 3 * d, GroupInit::Zeros),
                g(format!("h{i}.w_o"), b.w_o, d * d, GroupInit::Gaussian),
                g(format!("h{i}.b_o"), b.b_o, d, GroupInit::Zeros),
                g(format!("h{i}.ln2_g"), b.ln2_g, d, GroupInit::Ones),
                g(format!("h{i}.ln2_b"), b.ln2_b, d, GroupInit::Zeros),
                g(format!("h{i}.w_fc"), b.w_fc, d * f, GroupInit::Gaussian),
                g(format!("h{i}.b_fc"), b.b_fc, f, GroupInit::Zeros),
                g(format!("h{i}.w_proj"), b.w_proj, f * d, GroupInit::Gaussian),
                g(format!("h{i}.b_proj"), b.b_proj, d, GroupInit::Zeros),
            ]);
        }
        out.push(g("lnf_g".into(), self.lnf_g, d, GroupInit::Ones));
        out.push(g("lnf_b".into(), self.lnf_b, d, GroupInit::Zeros));
        out
    }
}

/// Seeded initialisation: Gaussian(0, 0.02) matrices and embeddings, unit
/// layer-norm gains, zero biases.
pub fn init_model(arch: &ArchConfig, seed: u64) -> Result<ModelParams> {
    arch.validate()?;
    let layout = Layout::new(arch);
    let mut weights = vec![0.0; layout.total];
    let mut rng = seeds::derived_rng(seed, "init", "weights");
    let normal = Normal::new(0.0, INIT_STD).expect("valid std");
    for group in layout.groups() {
        let slot = &mut weights[group.range];
        match group.init {
            GroupInit::Gaussian => slot.iter_mut().for_each(|w| *w = normal.sample(&mut rng)),
            GroupInit::Ones => slot.fill(1.0),
            GroupInit::Zeros => {}
        }
    }
    Ok(ModelParams {
        arch: *arch,
        param_count: weights.len(),
        weights,
        seed,
    })
}
