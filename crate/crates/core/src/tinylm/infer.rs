use super::model::{gelu, View};
use super::ModelParams;
use crate::{Error, Result};

const LN_EPS: f64 = 1e-5;

/// Incremental decoder with a per-layer key/value cache. Feeding tokens one
/// at a time yields the same logits as a full forward pass over the prefix.
#[derive(Clone)]
pub struct Decoder<'a> {
    view: std::rc::Rc<View<'a>>,
    keys: Vec<Vec<f64>>,
    values: Vec<Vec<f64>>,
    len: usize,
}

fn matvec_into(x: &[f64], w: &[f64], bias: &[f64], out: &mut [f64]) {
    let fan_out = out.len();
    out.copy_from_slice(bias);
    for (i, &xi) in x.iter().enumerate() {
        let row = &w[i * fan_out..(i + 1) * fan_out];
        out.iter_mut().zip(row).for_each(|(o, w)| *o += xi * w);
    }
}

fn norm_into(x: &[f64], g: &[f64], b: &[f64], out: &mut [f64]) {
    let d = x.len() as f64;
    let mean = x.iter().sum::<f64>() / d;
    let var = x.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / d;
    let r = 1.0 / (var + LN_EPS).sqrt();
    for j in 0..x.len() {
        out[j] = (x[j] - mean) * r * g[j] + b[j];
    }
}

impl<'a> Decoder<'a> {
    pub fn new(params: &'a ModelParams) -> Result<Self> {
        params.check()?;
        let arch = params.arch;
        let cap = arch.context_len * arch.d_model;
        Ok(Self {
            view: std::rc::Rc::new(View::new(params)),
            keys: (0..arch.n_layers)
                .map(|_| Vec::with_capacity(cap))
                .collect(),
            values: (0..arch.n_layers)
                .map(|_| Vec::with_capacity(cap))
                .collect(),
            len: 0,
        })
    }

    /// Number of tokens consumed so far.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Consumes one token and returns the next-token logits.
    pub fn step(&mut self, token: u32) -> Result<Vec<f64>> {
        let layout = &self.view.layout;
        let arch = layout.arch;
        if self.len >= arch.context_len {
            return Err(Error::SequenceTooLong {
                len: self.len + 1,
                limit: arch.context_len,
            });
        }
        if token as usize >= arch.vocab_size {
            return Err(Error::InvalidArgument(format!(
                "token id {token} out of vocabulary"
            )));
        }
        let (d, f, v, heads) = (arch.d_model, arch.ffn_dim(), arch.vocab_size, arch.n_heads);
        let hd = d / heads;
        let scale = 1.0 / (hd as f64).sqrt();
        let view = &self.view;
        let pos = self.len;

        let te = view.slice(layout.tok_emb + token as usize * d, d);
        let pe = view.slice(layout.pos_emb + pos * d, d);
        let mut x: Vec<f64> = te.iter().zip(pe).map(|(a, b)| a + b).collect();
        let mut h = vec![0.0; d];
        let mut qkv = vec![0.0; 3 * d];
        let mut att = vec![0.0; d];
        let mut o = vec![0.0; d];
        let mut u = vec![0.0; f];
        let mut scores = vec![0.0; pos + 1];

        for (li, b) in layout.blocks.iter().enumerate() {
            norm_into(&x, view.slice(b.ln1_g, d), view.slice(b.ln1_b, d), &mut h);
            matvec_into(
                &h,
                view.slice(b.w_qkv, 3 * d * d),
                view.slice(b.b_qkv, 3 * d),
                &mut qkv,
            );
            self.keys[li].extend_from_slice(&qkv[d..2 * d]);
            self.values[li].extend_from_slice(&qkv[2 * d..]);
            let keys = &self.keys[li];
            let values = &self.values[li];
            for hh in 0..heads {
                let q = &qkv[hh * hd..(hh + 1) * hd];
                let mut max = f64::NEG_INFINITY;
                for (t, s) in scores.iter_mut().enumerate() {
                    let k = &keys[t * d + hh * hd..t * d + (hh + 1) * hd];
                    *s = q.iter().zip(k).map(|(a, b)| a * b).sum::<f64>() * scale;
                    max = max.max(*s);
                }
                let mut sum = 0.0;
                for s in scores.iter_mut() {
                    *s = (*s - max).exp();
                    sum += *s;
                }
                let out = &mut att[hh * hd..(hh + 1) * hd];
                out.fill(0.0);
                for (t, s) in scores.iter().enumerate() {
                    let p = s / sum;
                    let val = &values[t * d + hh * hd..t * d + (hh + 1) * hd];
                    out.iter_mut().zip(val).for_each(|(o, v)| *o += p * v);
                }
            }
            matvec_into(&att, view.slice(b.w_o, d * d), view.slice(b.b_o, d), &mut o);
            x.iter_mut().zip(&o).for_each(|(a, b)| *a += b);
            norm_into(&x, view.slice(b.ln2_g, d), view.slice(b.ln2_b, d), &mut h);
            matvec_into(&h, view.slice(b.w_fc, d * f), view.slice(b.b_fc, f), &mut u);
            u.iter_mut().for_each(|z| *z = gelu(*z));
            matvec_into(
                &u,
                view.slice(b.w_proj, f * d),
                view.slice(b.b_proj, d),
                &mut o,
            );
            x.iter_mut().zip(&o).for_each(|(a, b)| *a += b);
        }
        norm_into(
            &x,
            view.slice(layout.lnf_g, d),
            view.slice(layout.lnf_b, d),
            &mut h,
        );
        let emb = view.slice(layout.tok_emb, v * d);
        let logits = emb
            .chunks_exact(d)
            .map(|e| e.iter().zip(&h).map(|(a, b)| a * b).sum())
            .collect();
        self.len += 1;
        Ok(logits)
    }
}
