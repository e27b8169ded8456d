//! Desk-scale pass@k: a sample passes when its normalized lines contain the
//! task's canonical output as a contiguous run.

use collabaudit_core::clones::normalize_lines;
use collabaudit_core::metrics::pass_at_k;
use collabaudit_core::tinylm::{detokenize, generate, tokenize};
use collabaudit_core::{seeds, Error, ModelParams, PassAtKInput, Result, SamplingConfig};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PassKTask {
    pub id: String,
    pub prompt: String,
    pub canonical_output: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PassKRow {
    pub k: usize,
    /// Mean of the unbiased estimator over tasks.
    pub pass_at_k: f64,
}

pub fn passes(sample: &str, canonical: &[String]) -> bool {
    if canonical.is_empty() {
        return true;
    }
    let lines = normalize_lines(sample);
    lines.windows(canonical.len()).any(|w| w == canonical)
}

/// Draws `n` continuations per task and averages pass@k over tasks. Task `t`
/// samples with seed `derive(cfg.seed, "passk", t.id)`.
pub fn toy_passk_runner(
    tasks: &[PassKTask],
    model: &ModelParams,
    n: usize,
    k_list: &[usize],
    cfg: &SamplingConfig,
) -> Result<Vec<PassKRow>> {
    if k_list.iter().any(|&k| k == 0 || k > n) {
        return Err(Error::InvalidArgument(format!(
            "pass@k needs 1 <= k <= n={n}, got {k_list:?}"
        )));
    }
    if tasks.is_empty() {
        return Err(Error::InvalidArgument(
            "pass@k needs at least one task".into(),
        ));
    }
    let mut counts = Vec::with_capacity(tasks.len());
    for t in tasks {
        let task_cfg = SamplingConfig {
            n_generations: n,
            seed: seeds::derive(cfg.seed, "passk", &t.id),
            ..*cfg
        };
        let canonical = normalize_lines(&t.canonical_output);
        let samples = generate(model, &tokenize(&t.prompt), &task_cfg)?;
        let c = samples
            .iter()
            .filter(|s| passes(&detokenize(s), &canonical))
            .count();
        counts.push(c as u64);
    }
    k_list
        .iter()
        .map(|&k| {
            let sum = counts
                .iter()
                .map(|&c| {
                    pass_at_k(PassAtKInput {
                        n: n as u64,
                        c,
                        k: k as u64,
                    })
                })
                .sum::<Result<f64>>()?;
            Ok(PassKRow {
                k,
                pass_at_k: sum / tasks.len() as f64,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use collabaudit_core::tinylm::{init_model, train};
    use collabaudit_core::{ArchConfig, LrSchedule, TrainHyper};

    fn tiny() -> ArchConfig {
        ArchConfig {
            context_len: 64,
            d_model: 32,
            n_heads: 2,
            n_layers: 1,
            ..ArchConfig::default()
        }
    }

    fn tasks() -> Vec<PassKTask> {
        vec![
            PassKTask {
                id: "t0".into(),
                prompt: "def add(a, b):\n".into(),
                canonical_output: "    return a + b\n".into(),
            },
            PassKTask {
                id: "t1".into(),
                prompt: "def neg(x):\n".into(),
                canonical_output: "    y = 0 - x\n    return y\n".into(),
            },
        ]
    }

    #[test]
    fn subsequence_rule() {
        let canon = normalize_lines("a\n  b\n");
        assert!(passes("x\na\n\nb\ny", &canon));
        assert!(!passes("a\nx\nb", &canon));
        assert!(!passes("b\na", &canon));
    }

    #[test]
    fn n_must_cover_every_k() {
        let model = init_model(&tiny(), 1).unwrap();
        let err = toy_passk_runner(&tasks(), &model, 5, &[1, 10], &SamplingConfig::default());
        assert!(err.is_err());
    }

    #[test]
    fn untrained_model_scores_near_zero() {
        let model = init_model(&tiny(), 3).unwrap();
        let rows =
            toy_passk_runner(&tasks(), &model, 10, &[1, 10], &SamplingConfig::default()).unwrap();
        for r in rows {
            assert!(r.pass_at_k < 0.05, "{r:?}");
        }
    }

    #[test]
    fn overfit_model_passes_at_one() {
        let text: String = tasks()
            .iter()
            .map(|t| format!("{}{}", t.prompt, t.canonical_output))
            .collect::<Vec<_>>()
            .join("\n");
        let data = tokenize(&text.repeat(4));
        let hyper = TrainHyper {
            epochs: 150,
            lr: 3e-3,
            schedule: LrSchedule::Cosine,
            ..TrainHyper::default()
        };
        let model = train(&init_model(&tiny(), 5).unwrap(), &data, &hyper, 5).unwrap();
        let cfg = SamplingConfig {
            max_new_tokens: Some(32),
            ..SamplingConfig::default()
        };
        let rows = toy_passk_runner(&tasks(), &model, 10, &[1, 5], &cfg).unwrap();
        assert_eq!(
            rows[0],
            PassKRow {
                k: 1,
                pass_at_k: 1.0
            }
        );
    }

    #[test]
    fn accepts_two_hundred_samples_for_k_up_to_one_hundred() {
        let model = init_model(&tiny(), 9).unwrap();
        let cfg = SamplingConfig {
            max_new_tokens: Some(2),
            ..SamplingConfig::default()
        };
        let rows = toy_passk_runner(&tasks()[..1], &model, 200, &[1, 10, 100], &cfg).unwrap();
        assert_eq!(
            rows.iter().map(|r| r.k).collect::<Vec<_>>(),
            vec![1, 10, 100]
        );
    }
}
