use rand::seq::SliceRandom;
use rand::Rng;

use super::model::loss_and_grad_in;
use super::{nll_sum, ModelParams, TrainHyper};
use crate::{seeds, Error, Result};

/// Fixed-length training windows over a token stream. Consecutive windows
/// overlap by one token so every next-token transition is predicted exactly
/// once; a trailing window shorter than two tokens is dropped.
pub fn windows(tokens: &[u32], context_len: usize) -> Vec<&[u32]> {
    let stride = context_len.saturating_sub(1).max(1);
    let mut out = Vec::new();
    let mut start = 0;
    while start + 1 < tokens.len() {
        let end = (start + context_len).min(tokens.len());
        out.push(&tokens[start..end]);
        if end == tokens.len() {
            break;
        }
        start += stride;
    }
    out
}

/// [`windows`] with the grid shifted right by `phase` tokens; the first
/// `phase` transitions fall in a shorter leading window.
pub fn phased_windows(tokens: &[u32], context_len: usize, phase: usize) -> Vec<&[u32]> {
    if phase == 0 || phase + 1 >= tokens.len() {
        return windows(tokens, context_len);
    }
    let mut out = vec![&tokens[..=phase]];
    out.extend(windows(&tokens[phase..], context_len));
    out
}

struct Adam {
    m: Vec<f64>,
    v: Vec<f64>,
    t: i32,
}

impl Adam {
    fn new(n: usize) -> Self {
        Self {
            m: vec![0.0; n],
            v: vec![0.0; n],
            t: 0,
        }
    }

    fn step(&mut self, weights: &mut [f64], grad: &[f64], h: &TrainHyper, lr: f64) {
        self.t += 1;
        let bc1 = 1.0 - h.beta1.powi(self.t);
        let bc2 = 1.0 - h.beta2.powi(self.t);
        let step = lr * bc2.sqrt() / bc1;
        for i in 0..weights.len() {
            let g = grad[i];
            self.m[i] = h.beta1 * self.m[i] + (1.0 - h.beta1) * g;
            self.v[i] = h.beta2 * self.v[i] + (1.0 - h.beta2) * g * g;
            weights[i] -= step * self.m[i] / (self.v[i].sqrt() + h.eps * bc2.sqrt());
        }
    }
}

fn clip(grad: &mut [f64], max_norm: f64) {
    if max_norm <= 0.0 {
        return;
    }
    let norm = grad.iter().map(|g| g * g).sum::<f64>().sqrt();
    if norm > max_norm {
        let s = max_norm / norm;
        grad.iter_mut().for_each(|g| *g *= s);
    }
}

/// Trains on a token stream with freshly initialised Adam moments. Each epoch
/// draws a window phase and a shuffle from `derive(seed, "epoch", e)`, so a
/// token does not sit at the same position every time it is seen.
///
/// Forward and backward passes run in `f32` on a rounded copy of the weights;
/// clipping and Adam update the `f64` weights.
pub fn train(
    params: &ModelParams,
    dataset: &[u32],
    hyper: &TrainHyper,
    seed: u64,
) -> Result<ModelParams> {
    train_observed(params, dataset, hyper, seed, |_, _| {})
}

/// [`train`] with a callback receiving `(epoch, params)` after every epoch.
pub fn train_observed(
    params: &ModelParams,
    dataset: &[u32],
    hyper: &TrainHyper,
    seed: u64,
    mut observe: impl FnMut(usize, &ModelParams),
) -> Result<ModelParams> {
    params.check()?;
    hyper.validate()?;
    let ctx = params.arch.context_len;
    if dataset.len() < 2 {
        return Err(Error::EmptyDataset(
            "training stream has fewer than two tokens".into(),
        ));
    }
    let mut out = params.clone();
    let mut adam = Adam::new(out.weights.len());
    let mut work: Vec<f32> = out.weights.iter().map(|&w| w as f32).collect();
    // Phases only ever add one leading window.
    let per_epoch = windows(dataset, ctx).len().div_ceil(hyper.batch_size) + 1;
    let total = per_epoch * hyper.epochs;
    let mut step = 0;
    for epoch in 0..hyper.epochs {
        let mut rng = seeds::derived_rng(seed, "epoch", &epoch.to_string());
        let wins = phased_windows(dataset, ctx, rng.random_range(0..(ctx - 1).max(1)));
        let mut order: Vec<usize> = (0..wins.len()).collect();
        order.shuffle(&mut rng);
        for chunk in order.chunks(hyper.batch_size) {
            let batch: Vec<Vec<u32>> = chunk.iter().map(|&i| wins[i].to_vec()).collect();
            let (_, grad32) = loss_and_grad_in(&out, &work, &batch)?;
            let mut grad: Vec<f64> = grad32.iter().map(|&g| g as f64).collect();
            clip(&mut grad, hyper.clip_norm);
            adam.step(
                &mut out.weights,
                &grad,
                hyper,
                hyper.lr * hyper.schedule.factor(step, total),
            );
            work.iter_mut()
                .zip(&out.weights)
                .for_each(|(a, &w)| *a = w as f32);
            step += 1;
        }
        log::debug!("epoch {} done over {} windows", epoch + 1, wins.len());
        observe(epoch + 1, &out);
    }
    if out.weights.iter().any(|w| !w.is_finite()) {
        return Err(Error::InvalidArgument(
            "training diverged to non-finite weights".into(),
        ));
    }
    Ok(out)
}

/// `exp` of the token-weighted mean next-token NLL over all windows.
pub fn perplexity(params: &ModelParams, dataset: &[u32]) -> Result<f64> {
    let wins = windows(dataset, params.arch.context_len);
    if wins.is_empty() {
        return Err(Error::EmptyDataset(
            "evaluation stream has fewer than two tokens".into(),
        ));
    }
    let mut sum = 0.0;
    let mut count = 0usize;
    for w in wins {
        let (s, c) = nll_sum(params, w)?;
        sum += s;
        count += c;
    }
    Ok((sum / count as f64).exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn windows_cover_each_transition_once() {
        let tokens: Vec<u32> = (0..10).collect();
        let w = windows(&tokens, 4);
        assert_eq!(w, vec![&tokens[0..4], &tokens[3..7], &tokens[6..10]]);
        let predicted: usize = w.iter().map(|w| w.len() - 1).sum();
        assert_eq!(predicted, 9);
        assert!(windows(&[1], 4).is_empty());
        assert_eq!(windows(&[1, 2], 4).len(), 1);
        let w = windows(&tokens[..8], 4);
        assert_eq!(w.last().unwrap(), &&tokens[6..8]);
    }

    #[test]
    fn phase_shifts_the_grid() {
        let tokens: Vec<u32> = (0..10).collect();
        let w = phased_windows(&tokens, 4, 2);
        assert_eq!(
            w,
            vec![&tokens[0..3], &tokens[2..6], &tokens[5..9], &tokens[8..10]]
        );
        assert_eq!(w.iter().map(|w| w.len() - 1).sum::<usize>(), 9);
        assert_eq!(phased_windows(&tokens, 4, 0), windows(&tokens, 4));
    }
}
