use rand::Rng;

use super::{Decoder, ModelParams, SamplingConfig, EOT};
use crate::{seeds, Error, Result};

/// Temperatures below this are treated as the greedy limit.
pub const GREEDY_TEMPERATURE: f64 = 1e-6;

/// The nucleus for one step: the smallest prefix of tokens sorted by
/// descending probability whose mass reaches `top_p`, widened to include every
/// token tied with the boundary probability. Returned probabilities are
/// renormalised over the nucleus. Ties in the sort fall back to token id.
pub fn nucleus_set(logits: &[f64], temperature: f64, top_p: f64) -> Vec<(u32, f64)> {
    let max = logits.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut probs: Vec<(u32, f64)> = logits
        .iter()
        .enumerate()
        .map(|(i, &z)| (i as u32, ((z - max) / temperature).exp()))
        .collect();
    let total: f64 = probs.iter().map(|p| p.1).sum();
    probs.iter_mut().for_each(|p| p.1 /= total);
    probs.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));

    let mut cumulative = 0.0;
    let mut keep = probs.len();
    for (i, &(_, p)) in probs.iter().enumerate() {
        cumulative += p;
        if cumulative >= top_p {
            keep = i + 1;
            break;
        }
    }
    let boundary = probs[keep - 1].1;
    while keep < probs.len() && probs[keep].1 == boundary {
        keep += 1;
    }
    probs.truncate(keep);
    let mass: f64 = probs.iter().map(|p| p.1).sum();
    probs.iter_mut().for_each(|p| p.1 /= mass);
    probs
}

fn argmax(logits: &[f64]) -> u32 {
    let mut best = 0;
    for (i, &z) in logits.iter().enumerate() {
        if z > logits[best] {
            best = i;
        }
    }
    best as u32
}

/// Draws one token: greedy below [`GREEDY_TEMPERATURE`], nucleus sampling otherwise.
pub fn sample_token(logits: &[f64], temperature: f64, top_p: f64, rng: &mut impl Rng) -> u32 {
    if temperature < GREEDY_TEMPERATURE {
        return argmax(logits);
    }
    let nucleus = nucleus_set(logits, temperature, top_p);
    let mut u: f64 = rng.random();
    for &(tok, p) in &nucleus {
        if u < p {
            return tok;
        }
        u -= p;
    }
    nucleus.last().expect("nucleus is never empty").0
}

/// Autoregressive sampling of `cfg.n_generations` continuations of `prompt`.
/// Each continuation excludes the prompt and stops at end-of-text, after
/// `max_new_tokens`, or when the context window is full. Generation `i` uses
/// the stream `derive(cfg.seed, "generate", i)`.
pub fn generate(
    params: &ModelParams,
    prompt: &[u32],
    cfg: &SamplingConfig,
) -> Result<Vec<Vec<u32>>> {
    cfg.validate()?;
    let cap = params.arch.prompt_cap();
    if prompt.len() > cap {
        return Err(Error::SequenceTooLong {
            len: prompt.len(),
            limit: cap,
        });
    }
    let mut primed = Decoder::new(params)?;
    let mut last = Vec::new();
    let feed: &[u32] = if prompt.is_empty() { &[EOT] } else { prompt };
    for &t in feed {
        last = primed.step(t)?;
    }
    let max_new = cfg.max_new(&params.arch);
    let ctx = params.arch.context_len;

    let mut out = Vec::with_capacity(cfg.n_generations);
    for g in 0..cfg.n_generations {
        let mut rng = seeds::derived_rng(cfg.seed, "generate", &g.to_string());
        let mut dec = primed.clone();
        let mut logits = last.clone();
        let mut sample = Vec::new();
        while sample.len() < max_new {
            let tok = sample_token(&logits, cfg.temperature, cfg.top_p, &mut rng);
            if tok == EOT {
                break;
            }
            sample.push(tok);
            if dec.len() >= ctx || sample.len() == max_new {
                break;
            }
            logits = dec.step(tok)?;
        }
        out.push(sample);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tinylm::{init_model, ArchConfig};

    fn arch() -> ArchConfig {
        ArchConfig {
            context_len: 32,
            d_model: 8,
            n_heads: 2,
            n_layers: 1,
            ffn_mult: 2,
            ..ArchConfig::default()
        }
    }

    #[test]
    fn tiny_top_p_is_greedy() {
        let params = init_model(&arch(), 9).unwrap();
        let prompt = [100u32, 101, 102];
        let nucleus = SamplingConfig {
            top_p: 1e-9,
            n_generations: 2,
            seed: 5,
            ..SamplingConfig::default()
        };
        let greedy = SamplingConfig {
            temperature: 1e-9,
            ..nucleus
        };
        let a = generate(&params, &prompt, &nucleus).unwrap();
        let b = generate(&params, &prompt, &greedy).unwrap();
        assert_eq!(a, b);
        assert_eq!(a[0], a[1]);
    }

    #[test]
    fn generations_are_seeded() {
        let params = init_model(&arch(), 9).unwrap();
        let cfg = SamplingConfig {
            temperature: 1.5,
            top_p: 1.0,
            seed: 77,
            ..SamplingConfig::default()
        };
        let a = generate(&params, &[1, 2], &cfg).unwrap();
        let b = generate(&params, &[1, 2], &cfg).unwrap();
        assert_eq!(a.len(), 5);
        assert_eq!(a, b);
        assert!(a.iter().all(|s| s.len() <= 16));
    }

    #[test]
    fn over_long_prompt_is_rejected() {
        let params = init_model(&arch(), 9).unwrap();
        let err = generate(&params, &[1; 17], &SamplingConfig::default()).unwrap_err();
        assert!(matches!(err, Error::SequenceTooLong { len: 17, limit: 16 }));
    }

    #[test]
    fn nucleus_includes_boundary_ties() {
        // Probabilities 0.4, 0.3, 0.3: top_p 0.6 stops inside the tie.
        let logits = [0.4f64.ln(), 0.3f64.ln(), 0.3f64.ln()];
        let set = nucleus_set(&logits, 1.0, 0.6);
        assert_eq!(set.len(), 3);
        let set = nucleus_set(&logits, 1.0, 0.35);
        assert_eq!(set, vec![(0, 1.0)]);
    }
}
