//! Forward and backward passes of the decoder.
//!
//! Each batch row is processed independently as an `n x d` activation matrix.
//! The block is pre-norm: `x += Attn(LN1(x)); x += MLP(LN2(x))`, with a final
//! layer norm and an output head tied to the token embedding.
//!
//! The passes are generic over the float type: the public entry points work in
//! `f64`, training runs the same code in `f32`.

use std::iter::Sum;
use std::ops::{AddAssign, DivAssign, MulAssign, SubAssign};

use num_traits::Float;

use super::params::{BlockLayout, Layout};
use super::ModelParams;
use crate::{Error, Result};

const LN_EPS: f64 = 1e-5;
const GELU_C: f64 = 0.797_884_560_802_865_4; // sqrt(2 / pi)
const GELU_K: f64 = 0.044_715;
/// Query rows per causal attention tile.
const TILE: usize = 32;

pub(crate) trait Real:
    Float + Sum + AddAssign + SubAssign + MulAssign + DivAssign + Send + Sync + 'static
{
    /// # Safety
    /// Same contract as `matrixmultiply::dgemm` with `alpha = 1`.
    #[allow(clippy::too_many_arguments)]
    unsafe fn gemm_raw(
        m: usize,
        k: usize,
        n: usize,
        a: *const Self,
        rsa: isize,
        csa: isize,
        b: *const Self,
        rsb: isize,
        csb: isize,
        beta: Self,
        c: *mut Self,
        rsc: isize,
    );

    fn of(x: f64) -> Self {
        Self::from(x).unwrap()
    }
}

impl Real for f64 {
    unsafe fn gemm_raw(
        m: usize,
        k: usize,
        n: usize,
        a: *const f64,
        rsa: isize,
        csa: isize,
        b: *const f64,
        rsb: isize,
        csb: isize,
        beta: f64,
        c: *mut f64,
        rsc: isize,
    ) {
        matrixmultiply::dgemm(m, k, n, 1.0, a, rsa, csa, b, rsb, csb, beta, c, rsc, 1);
    }
}

impl Real for f32 {
    unsafe fn gemm_raw(
        m: usize,
        k: usize,
        n: usize,
        a: *const f32,
        rsa: isize,
        csa: isize,
        b: *const f32,
        rsb: isize,
        csb: isize,
        beta: f32,
        c: *mut f32,
        rsc: isize,
    ) {
        matrixmultiply::sgemm(m, k, n, 1.0, a, rsa, csa, b, rsb, csb, beta, c, rsc, 1);
    }
}

/// `c = a * b + beta * c` for strided row-major views.
#[allow(clippy::too_many_arguments)]
#[inline]
pub(crate) fn gemm<T: Real>(
    m: usize,
    k: usize,
    n: usize,
    a: &[T],
    rsa: usize,
    csa: usize,
    b: &[T],
    rsb: usize,
    csb: usize,
    beta: T,
    c: &mut [T],
    rsc: usize,
) {
    if m == 0 || n == 0 {
        return;
    }
    debug_assert!(k == 0 || a.len() > (m - 1) * rsa + (k - 1) * csa);
    debug_assert!(k == 0 || b.len() > (k - 1) * rsb + (n - 1) * csb);
    debug_assert!(c.len() > (m - 1) * rsc + (n - 1));
    // SAFETY: the debug assertions above spell out the extents touched by the
    // kernel; every call site passes views whose extents are within bounds.
    unsafe {
        T::gemm_raw(
            m,
            k,
            n,
            a.as_ptr(),
            rsa as isize,
            csa as isize,
            b.as_ptr(),
            rsb as isize,
            csb as isize,
            beta,
            c.as_mut_ptr(),
            rsc as isize,
        );
    }
}

/// `y[n x out] = x[n x in] * W[in x out] + bias`.
fn linear<T: Real>(
    x: &[T],
    n: usize,
    w: &[T],
    bias: &[T],
    fan_in: usize,
    fan_out: usize,
) -> Vec<T> {
    let mut y = Vec::with_capacity(n * fan_out);
    for _ in 0..n {
        y.extend_from_slice(bias);
    }
    gemm(
        n,
        fan_in,
        fan_out,
        x,
        fan_in,
        1,
        w,
        fan_out,
        1,
        T::one(),
        &mut y,
        fan_out,
    );
    y
}

/// Accumulates `dW += x^T dy`, `db += sum(dy)` and returns `dx = dy W^T`.
#[allow(clippy::too_many_arguments)]
fn linear_backward<T: Real>(
    x: &[T],
    dy: &[T],
    n: usize,
    w: &[T],
    fan_in: usize,
    fan_out: usize,
    dw: &mut [T],
    db: &mut [T],
) -> Vec<T> {
    gemm(
        fan_in,
        n,
        fan_out,
        x,
        1,
        fan_in,
        dy,
        fan_out,
        1,
        T::one(),
        dw,
        fan_out,
    );
    for row in dy.chunks_exact(fan_out) {
        db.iter_mut().zip(row).for_each(|(b, &g)| *b += g);
    }
    let mut dx = vec![T::zero(); n * fan_in];
    gemm(
        n,
        fan_out,
        fan_in,
        dy,
        fan_out,
        1,
        w,
        1,
        fan_out,
        T::zero(),
        &mut dx,
        fan_in,
    );
    dx
}

struct NormCache<T> {
    xhat: Vec<T>,
    rstd: Vec<T>,
}

fn layer_norm<T: Real>(x: &[T], d: usize, g: &[T], b: &[T]) -> (Vec<T>, NormCache<T>) {
    let n = x.len() / d;
    let dn = T::of(d as f64);
    let eps = T::of(LN_EPS);
    let mut y = vec![T::zero(); x.len()];
    let mut xhat = vec![T::zero(); x.len()];
    let mut rstd = vec![T::zero(); n];
    for i in 0..n {
        let row = &x[i * d..(i + 1) * d];
        let mean = row.iter().copied().sum::<T>() / dn;
        let var = row.iter().map(|&v| (v - mean) * (v - mean)).sum::<T>() / dn;
        let r = T::one() / (var + eps).sqrt();
        rstd[i] = r;
        for j in 0..d {
            let h = (row[j] - mean) * r;
            xhat[i * d + j] = h;
            y[i * d + j] = h * g[j] + b[j];
        }
    }
    (y, NormCache { xhat, rstd })
}

fn layer_norm_backward<T: Real>(
    dy: &[T],
    d: usize,
    g: &[T],
    cache: &NormCache<T>,
    dg: &mut [T],
    db: &mut [T],
    dx: &mut [T],
) {
    let n = dy.len() / d;
    let dn = T::of(d as f64);
    let mut dxhat = vec![T::zero(); d];
    for i in 0..n {
        let dyr = &dy[i * d..(i + 1) * d];
        let xh = &cache.xhat[i * d..(i + 1) * d];
        let mut mean_dxhat = T::zero();
        let mut mean_dxhat_xhat = T::zero();
        for j in 0..d {
            dg[j] += dyr[j] * xh[j];
            db[j] += dyr[j];
            dxhat[j] = dyr[j] * g[j];
            mean_dxhat += dxhat[j];
            mean_dxhat_xhat += dxhat[j] * xh[j];
        }
        mean_dxhat /= dn;
        mean_dxhat_xhat /= dn;
        let r = cache.rstd[i];
        for j in 0..d {
            dx[i * d + j] += r * (dxhat[j] - mean_dxhat - xh[j] * mean_dxhat_xhat);
        }
    }
}

#[inline]
fn gelu_tanh<T: Real>(u: T) -> T {
    (T::of(GELU_C) * (u + T::of(GELU_K) * u * u * u)).tanh()
}

#[inline]
pub(crate) fn gelu<T: Real>(u: T) -> T {
    T::of(0.5) * u * (T::one() + gelu_tanh(u))
}

/// Derivative of [`gelu`] at `u` given `t = gelu_tanh(u)`.
#[inline]
fn gelu_grad<T: Real>(u: T, t: T) -> T {
    let half = T::of(0.5);
    half * (T::one() + t)
        + half * u * (T::one() - t * t) * T::of(GELU_C) * (T::one() + T::of(3.0 * GELU_K) * u * u)
}

struct BlockCache<T> {
    ln1: NormCache<T>,
    h1: Vec<T>,
    qkv: Vec<T>,
    /// Per head causal attention weights, `n x n` each, zero above the diagonal.
    probs: Vec<T>,
    att: Vec<T>,
    ln2: NormCache<T>,
    h2: Vec<T>,
    pre_act: Vec<T>,
    tanh: Vec<T>,
    act: Vec<T>,
}

struct RowCache<T> {
    tokens: Vec<u32>,
    blocks: Vec<BlockCache<T>>,
    lnf: NormCache<T>,
    hf: Vec<T>,
    logits: Vec<T>,
}

/// Row tiles `[r0, r1)` of an `n`-row causal matrix; a tile only ever reads
/// columns `< r1`.
fn tiles(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).step_by(TILE).map(move |r0| (r0, (r0 + TILE).min(n)))
}

/// Causal multi-head attention over the packed `qkv` rows. Returns the
/// concatenated head outputs and the attention weights.
pub(crate) fn attention<T: Real>(qkv: &[T], n: usize, d: usize, heads: usize) -> (Vec<T>, Vec<T>) {
    let hd = d / heads;
    let scale = T::of(1.0 / (hd as f64).sqrt());
    let stride = 3 * d;
    let mut probs = vec![T::zero(); heads * n * n];
    let mut att = vec![T::zero(); n * d];
    for h in 0..heads {
        let p = &mut probs[h * n * n..(h + 1) * n * n];
        let q = &qkv[h * hd..];
        let k = &qkv[d + h * hd..];
        let v = &qkv[2 * d + h * hd..];
        for (r0, r1) in tiles(n) {
            gemm(
                r1 - r0,
                hd,
                r1,
                &q[r0 * stride..],
                stride,
                1,
                k,
                1,
                stride,
                T::zero(),
                &mut p[r0 * n..],
                n,
            );
            for i in r0..r1 {
                let row = &mut p[i * n..i * n + r1];
                let mut max = T::neg_infinity();
                for s in &mut row[..=i] {
                    *s *= scale;
                    max = max.max(*s);
                }
                let mut sum = T::zero();
                for s in &mut row[..=i] {
                    *s = (*s - max).exp();
                    sum += *s;
                }
                let inv = T::one() / sum;
                for s in &mut row[..=i] {
                    *s *= inv;
                }
                row[i + 1..].fill(T::zero());
            }
            gemm(
                r1 - r0,
                r1,
                hd,
                &p[r0 * n..],
                n,
                1,
                v,
                stride,
                1,
                T::zero(),
                &mut att[r0 * d + h * hd..],
                d,
            );
        }
    }
    (att, probs)
}

fn attention_backward<T: Real>(
    datt: &[T],
    qkv: &[T],
    probs: &[T],
    n: usize,
    d: usize,
    heads: usize,
) -> Vec<T> {
    let hd = d / heads;
    let scale = T::of(1.0 / (hd as f64).sqrt());
    let stride = 3 * d;
    let mut dqkv = vec![T::zero(); n * stride];
    let mut ds = vec![T::zero(); n * n];
    for h in 0..heads {
        let p = &probs[h * n * n..(h + 1) * n * n];
        let dat = &datt[h * hd..];
        let q = &qkv[h * hd..];
        let k = &qkv[d + h * hd..];
        let v = &qkv[2 * d + h * hd..];
        for (r0, r1) in tiles(n) {
            // dP = dAtt V^T
            gemm(
                r1 - r0,
                hd,
                r1,
                &dat[r0 * d..],
                d,
                1,
                v,
                1,
                stride,
                T::zero(),
                &mut ds[r0 * n..],
                n,
            );
            for i in r0..r1 {
                let prow = &p[i * n..i * n + r1];
                let drow = &mut ds[i * n..i * n + r1];
                let dot: T = prow[..=i]
                    .iter()
                    .zip(&drow[..=i])
                    .map(|(&a, &b)| a * b)
                    .sum();
                for j in 0..=i {
                    drow[j] = prow[j] * (drow[j] - dot) * scale;
                }
                drow[i + 1..].fill(T::zero());
            }
            // dQ = dS K
            gemm(
                r1 - r0,
                r1,
                hd,
                &ds[r0 * n..],
                n,
                1,
                k,
                stride,
                1,
                T::zero(),
                &mut dqkv[r0 * stride + h * hd..],
                stride,
            );
        }
        // Column tile [c0, c1) of dV = P^T dAtt and dK = dS^T Q only meets rows >= c0.
        for (c0, c1) in tiles(n) {
            let rows = n - c0;
            let dv = &mut dqkv[c0 * stride + 2 * d + h * hd..];
            gemm(
                c1 - c0,
                rows,
                hd,
                &p[c0 * n + c0..],
                1,
                n,
                &dat[c0 * d..],
                d,
                1,
                T::zero(),
                dv,
                stride,
            );
            let dk = &mut dqkv[c0 * stride + d + h * hd..];
            gemm(
                c1 - c0,
                rows,
                hd,
                &ds[c0 * n + c0..],
                1,
                n,
                &q[c0 * stride..],
                stride,
                1,
                T::zero(),
                dk,
                stride,
            );
        }
    }
    dqkv
}

pub(crate) struct View<'a, T = f64> {
    pub layout: Layout,
    pub w: &'a [T],
}

impl<'a> View<'a, f64> {
    pub fn new(params: &'a ModelParams) -> Self {
        Self {
            layout: params.layout(),
            w: &params.weights,
        }
    }
}

impl<'a, T: Real> View<'a, T> {
    pub fn slice(&self, at: usize, len: usize) -> &'a [T] {
        &self.w[at..at + len]
    }

    fn forward(&self, tokens: &[u32]) -> RowCache<T> {
        let arch = self.layout.arch;
        let (d, f, v, heads) = (arch.d_model, arch.ffn_dim(), arch.vocab_size, arch.n_heads);
        let n = tokens.len();
        let tok = self.slice(self.layout.tok_emb, v * d);
        let pos = self.slice(self.layout.pos_emb, arch.context_len * d);
        let mut x = vec![T::zero(); n * d];
        for (i, &t) in tokens.iter().enumerate() {
            let row = &mut x[i * d..(i + 1) * d];
            let te = &tok[t as usize * d..(t as usize + 1) * d];
            let pe = &pos[i * d..(i + 1) * d];
            for j in 0..d {
                row[j] = te[j] + pe[j];
            }
        }
        let mut blocks = Vec::with_capacity(arch.n_layers);
        for b in &self.layout.blocks {
            let (h1, ln1) = layer_norm(&x, d, self.slice(b.ln1_g, d), self.slice(b.ln1_b, d));
            let qkv = linear(
                &h1,
                n,
                self.slice(b.w_qkv, 3 * d * d),
                self.slice(b.b_qkv, 3 * d),
                d,
                3 * d,
            );
            let (att, probs) = attention(&qkv, n, d, heads);
            let o = linear(
                &att,
                n,
                self.slice(b.w_o, d * d),
                self.slice(b.b_o, d),
                d,
                d,
            );
            x.iter_mut().zip(&o).for_each(|(a, &b)| *a += b);
            let (h2, ln2) = layer_norm(&x, d, self.slice(b.ln2_g, d), self.slice(b.ln2_b, d));
            let pre_act = linear(
                &h2,
                n,
                self.slice(b.w_fc, d * f),
                self.slice(b.b_fc, f),
                d,
                f,
            );
            let tanh: Vec<T> = pre_act.iter().map(|&u| gelu_tanh(u)).collect();
            let half = T::of(0.5);
            let act: Vec<T> = pre_act
                .iter()
                .zip(&tanh)
                .map(|(&u, &t)| half * u * (T::one() + t))
                .collect();
            let m = linear(
                &act,
                n,
                self.slice(b.w_proj, f * d),
                self.slice(b.b_proj, d),
                f,
                d,
            );
            x.iter_mut().zip(&m).for_each(|(a, &b)| *a += b);
            blocks.push(BlockCache {
                ln1,
                h1,
                qkv,
                probs,
                att,
                ln2,
                h2,
                pre_act,
                tanh,
                act,
            });
        }
        let (hf, lnf) = layer_norm(
            &x,
            d,
            self.slice(self.layout.lnf_g, d),
            self.slice(self.layout.lnf_b, d),
        );
        let mut logits = vec![T::zero(); n * v];
        gemm(n, d, v, &hf, d, 1, tok, 1, d, T::zero(), &mut logits, v);
        RowCache {
            tokens: tokens.to_vec(),
            blocks,
            lnf,
            hf,
            logits,
        }
    }

    /// Backpropagates `dlogits` through a cached row into `grad`.
    fn backward(&self, cache: &RowCache<T>, dlogits: &[T], grad: &mut [T]) {
        let arch = self.layout.arch;
        let (d, f, v, heads) = (arch.d_model, arch.ffn_dim(), arch.vocab_size, arch.n_heads);
        let n = cache.tokens.len();
        let l = &self.layout;
        let tok = self.slice(l.tok_emb, v * d);

        // Tied head: logits = hf E^T.
        gemm(
            v,
            n,
            d,
            dlogits,
            1,
            v,
            &cache.hf,
            d,
            1,
            T::one(),
            &mut grad[l.tok_emb..l.tok_emb + v * d],
            d,
        );
        let mut dhf = vec![T::zero(); n * d];
        gemm(n, v, d, dlogits, v, 1, tok, d, 1, T::zero(), &mut dhf, d);

        let mut dx = vec![T::zero(); n * d];
        {
            let (gs, rest) = grad.split_at_mut(l.lnf_b);
            layer_norm_backward(
                &dhf,
                d,
                self.slice(l.lnf_g, d),
                &cache.lnf,
                &mut gs[l.lnf_g..l.lnf_g + d],
                &mut rest[..d],
                &mut dx,
            );
        }

        for (b, bc) in l.blocks.iter().zip(&cache.blocks).rev() {
            self.block_backward(b, bc, n, d, f, heads, &mut dx, grad);
        }

        for (i, &t) in cache.tokens.iter().enumerate() {
            let row = &dx[i * d..(i + 1) * d];
            let te = l.tok_emb + t as usize * d;
            grad[te..te + d]
                .iter_mut()
                .zip(row)
                .for_each(|(g, &x)| *g += x);
            let pe = l.pos_emb + i * d;
            grad[pe..pe + d]
                .iter_mut()
                .zip(row)
                .for_each(|(g, &x)| *g += x);
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn block_backward(
        &self,
        b: &BlockLayout,
        bc: &BlockCache<T>,
        n: usize,
        d: usize,
        f: usize,
        heads: usize,
        dx: &mut [T],
        grad: &mut [T],
    ) {
        // MLP branch.
        let (gw, gb) = two_slices(grad, b.w_proj, f * d, b.b_proj, d);
        let dact = linear_backward(&bc.act, dx, n, self.slice(b.w_proj, f * d), f, d, gw, gb);
        let dpre: Vec<T> = dact
            .iter()
            .zip(bc.pre_act.iter().zip(&bc.tanh))
            .map(|(&g, (&u, &t))| g * gelu_grad(u, t))
            .collect();
        let (gw, gb) = two_slices(grad, b.w_fc, d * f, b.b_fc, f);
        let dh2 = linear_backward(&bc.h2, &dpre, n, self.slice(b.w_fc, d * f), d, f, gw, gb);
        let (gg, gbeta) = two_slices(grad, b.ln2_g, d, b.ln2_b, d);
        layer_norm_backward(&dh2, d, self.slice(b.ln2_g, d), &bc.ln2, gg, gbeta, dx);

        // Attention branch.
        let (gw, gb) = two_slices(grad, b.w_o, d * d, b.b_o, d);
        let datt = linear_backward(&bc.att, dx, n, self.slice(b.w_o, d * d), d, d, gw, gb);
        let dqkv = attention_backward(&datt, &bc.qkv, &bc.probs, n, d, heads);
        let (gw, gb) = two_slices(grad, b.w_qkv, 3 * d * d, b.b_qkv, 3 * d);
        let dh1 = linear_backward(
            &bc.h1,
            &dqkv,
            n,
            self.slice(b.w_qkv, 3 * d * d),
            d,
            3 * d,
            gw,
            gb,
        );
        let (gg, gbeta) = two_slices(grad, b.ln1_g, d, b.ln1_b, d);
        layer_norm_backward(&dh1, d, self.slice(b.ln1_g, d), &bc.ln1, gg, gbeta, dx);
    }
}

/// Two disjoint mutable windows `[a, a+la)` and `[b, b+lb)` with `a + la <= b`.
fn two_slices<T>(buf: &mut [T], a: usize, la: usize, b: usize, lb: usize) -> (&mut [T], &mut [T]) {
    debug_assert!(a + la <= b);
    let (lo, hi) = buf.split_at_mut(b);
    (&mut lo[a..a + la], &mut hi[..lb])
}

/// Writes softmax cross-entropy gradients for row positions `0..n-1` into
/// `logits` (in place) scaled by `scale`, and returns the summed NLL.
fn softmax_xent<T: Real>(logits: &mut [T], tokens: &[u32], v: usize, scale: f64) -> f64 {
    let n = tokens.len();
    let mut nll = 0.0;
    let scale_t = T::of(scale);
    for i in 0..n {
        let row = &mut logits[i * v..(i + 1) * v];
        if i + 1 == n {
            row.fill(T::zero());
            break;
        }
        let target = tokens[i + 1] as usize;
        let max = row.iter().copied().fold(T::neg_infinity(), T::max);
        let shifted_target = row[target] - max;
        let mut sum = T::zero();
        for z in row.iter_mut() {
            *z = (*z - max).exp();
            sum += *z;
        }
        nll += (sum.ln() - shifted_target).to_f64().unwrap();
        let k = scale_t / sum;
        for z in row.iter_mut() {
            *z *= k;
        }
        row[target] -= scale_t;
    }
    nll
}

fn row_nll(logits: &[f64], tokens: &[u32], v: usize) -> f64 {
    let n = tokens.len();
    let mut nll = 0.0;
    for i in 0..n.saturating_sub(1) {
        let row = &logits[i * v..(i + 1) * v];
        let max = row.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let lse = max + row.iter().map(|z| (z - max).exp()).sum::<f64>().ln();
        nll += lse - row[tokens[i + 1] as usize];
    }
    nll
}

fn check_row(params: &ModelParams, row: &[u32]) -> Result<()> {
    if row.len() > params.arch.context_len {
        return Err(Error::SequenceTooLong {
            len: row.len(),
            limit: params.arch.context_len,
        });
    }
    if let Some(&t) = row.iter().find(|&&t| t as usize >= params.arch.vocab_size) {
        return Err(Error::InvalidArgument(format!(
            "token id {t} out of vocabulary"
        )));
    }
    Ok(())
}

/// Mean next-token negative log-likelihood over every predicted position in
/// the batch, and its gradient with respect to the flat weights.
pub fn loss_and_grad(params: &ModelParams, batch: &[Vec<u32>]) -> Result<(f64, Vec<f64>)> {
    loss_and_grad_in(params, &params.weights, batch)
}

/// [`loss_and_grad`] evaluated at `weights` (laid out for `params.arch`) in
/// the precision of `T`.
pub(crate) fn loss_and_grad_in<T: Real>(
    params: &ModelParams,
    weights: &[T],
    batch: &[Vec<u32>],
) -> Result<(f64, Vec<T>)> {
    params.check()?;
    for row in batch {
        check_row(params, row)?;
    }
    let predictions: usize = batch.iter().map(|r| r.len().saturating_sub(1)).sum();
    if predictions == 0 {
        return Err(Error::EmptyDataset(
            "batch has no next-token targets".into(),
        ));
    }
    let view = View {
        layout: params.layout(),
        w: weights,
    };
    let v = params.arch.vocab_size;
    let scale = 1.0 / predictions as f64;
    let mut grad = vec![T::zero(); weights.len()];
    let mut total = 0.0;
    for row in batch.iter().filter(|r| r.len() >= 2) {
        let mut cache = view.forward(row);
        let mut dlogits = std::mem::take(&mut cache.logits);
        total += softmax_xent(&mut dlogits, row, v, scale);
        view.backward(&cache, &dlogits, &mut grad);
    }
    Ok((total * scale, grad))
}

/// Summed next-token NLL of one row and the number of predicted positions.
pub fn nll_sum(params: &ModelParams, tokens: &[u32]) -> Result<(f64, usize)> {
    params.check()?;
    check_row(params, tokens)?;
    if tokens.len() < 2 {
        return Ok((0.0, 0));
    }
    let cache = View::new(params).forward(tokens);
    Ok((
        row_nll(&cache.logits, tokens, params.arch.vocab_size),
        tokens.len() - 1,
    ))
}

/// Row-major `n x vocab` logits for every position of `tokens`.
pub fn logits(params: &ModelParams, tokens: &[u32]) -> Result<Vec<f64>> {
    params.check()?;
    check_row(params, tokens)?;
    Ok(View::new(params).forward(tokens).logits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tinylm::{init_model, ArchConfig};

    fn arch() -> ArchConfig {
        ArchConfig {
            context_len: 12,
            d_model: 8,
            n_heads: 2,
            n_layers: 2,
            ffn_mult: 2,
            ..ArchConfig::default()
        }
    }

    #[test]
    fn init_loss_is_near_uniform() {
        let params = init_model(&arch(), 1).unwrap();
        let batch = vec![vec![1, 50, 99, 200, 7, 3], vec![10, 20, 30, 40]];
        let (loss, grad) = loss_and_grad(&params, &batch).unwrap();
        assert!((loss - (257f64).ln()).abs() < 0.5, "{loss}");
        assert_eq!(grad.len(), params.weights.len());
    }

    #[test]
    fn row_permutation_keeps_loss() {
        let params = init_model(&arch(), 2).unwrap();
        let a = vec![vec![1, 2, 3, 4], vec![9, 8, 7, 6, 5]];
        let b = vec![a[1].clone(), a[0].clone()];
        let la = loss_and_grad(&params, &a).unwrap().0;
        let lb = loss_and_grad(&params, &b).unwrap().0;
        assert!((la - lb).abs() < 1e-12);
    }

    #[test]
    fn too_long_row_is_rejected() {
        let params = init_model(&arch(), 2).unwrap();
        let err = loss_and_grad(&params, &[vec![0; 13]]).unwrap_err();
        assert!(matches!(err, Error::SequenceTooLong { len: 13, limit: 12 }));
    }

    #[test]
    fn nll_sum_matches_loss() {
        let params = init_model(&arch(), 5).unwrap();
        let row = vec![3, 1, 4, 1, 5, 9, 2, 6];
        let (sum, count) = nll_sum(&params, &row).unwrap();
        let (loss, _) = loss_and_grad(&params, &[row]).unwrap();
        assert_eq!(count, 7);
        assert!((sum / count as f64 - loss).abs() < 1e-12);
    }
}
