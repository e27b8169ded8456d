//! Targeted extraction against trained models and the memorization ratio of
//! what they generate.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::clones::{detect_clones, normalize_lines, CloneBlock, CloneConfig, CloneSource};
use crate::corpus::{OrgCorpus, SourceFile};
use crate::pysurface::{Prompt, PromptKind};
use crate::tinylm::{detokenize, generate, tokenize, ModelParams, SamplingConfig};
use crate::{seeds, Error, Result};

/// Source id of generated samples in clone detection.
pub const GENERATED_SOURCE: &str = "<generated>";
const SUFFIX_SOURCE: &str = "<suffix>";
/// Row label of the cross-organization clone evaluation.
pub const CROSS_ORG_ROW: &str = "cross_org";
pub const CROSS_ORG_MIN_LINES: usize = 3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerationRecord {
    pub prompt_id: String,
    pub model_name: String,
    pub samples: Vec<String>,
    pub sampling: SamplingConfig,
    pub generated_line_counts: Vec<usize>,
}

impl GenerationRecord {
    fn sample_path(&self, i: usize) -> String {
        format!("{}/{}/{i}", self.model_name, self.prompt_id)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PromptError {
    pub prompt_id: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MemorizationRow {
    pub org_id: String,
    pub lines_of_gen: usize,
    pub mem_blocks: usize,
    pub mem_lines: usize,
    pub mem_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MemorizationReport {
    pub model_name: String,
    pub rows: Vec<MemorizationRow>,
}

/// `n_generations` continuations per prompt. Prompt `p` samples with seed
/// `derive(cfg.seed, "prompt", p.id)`; prompts over the cap become error records.
pub fn run_extraction(
    model: &ModelParams,
    model_name: &str,
    prompts: &[Prompt],
    cfg: &SamplingConfig,
) -> Result<(Vec<GenerationRecord>, Vec<PromptError>)> {
    cfg.validate()?;
    let mut records = Vec::with_capacity(prompts.len());
    let mut errors = Vec::new();
    for p in prompts {
        let per_prompt = SamplingConfig {
            seed: seeds::derive(cfg.seed, "prompt", &p.id),
            ..*cfg
        };
        match generate(model, &tokenize(&p.text), &per_prompt) {
            Ok(outs) => {
                let samples: Vec<String> = outs.iter().map(|t| detokenize(t)).collect();
                let generated_line_counts =
                    samples.iter().map(|s| normalize_lines(s).len()).collect();
                records.push(GenerationRecord {
                    prompt_id: p.id.clone(),
                    model_name: model_name.to_string(),
                    samples,
                    sampling: *cfg,
                    generated_line_counts,
                });
            }
            Err(e @ Error::SequenceTooLong { .. }) => errors.push(PromptError {
                prompt_id: p.id.clone(),
                message: e.to_string(),
            }),
            Err(e) => return Err(e),
        }
    }
    Ok((records, errors))
}

fn sample_files(records: &[GenerationRecord]) -> Vec<SourceFile> {
    records
        .iter()
        .flat_map(|r| {
            r.samples
                .iter()
                .enumerate()
                .map(|(i, s)| SourceFile::new(r.sample_path(i), s.as_str()))
        })
        .collect()
}

fn spans_both(block: &CloneBlock, other: &str) -> bool {
    block.sources().any(|s| s == GENERATED_SOURCE) && block.sources().any(|s| s == other)
}

/// Clone blocks shared between generated samples and `corpus`.
pub fn detect_memorization(
    records: &[GenerationRecord],
    corpus: &OrgCorpus,
    cfg: &CloneConfig,
) -> Result<Vec<CloneBlock>> {
    let generated = sample_files(records);
    let sources = [
        CloneSource {
            id: GENERATED_SOURCE,
            files: &generated,
        },
        CloneSource::from(corpus),
    ];
    let mut blocks = detect_clones(&sources, cfg)?;
    blocks.retain(|b| spans_both(b, &corpus.org_id));
    Ok(blocks)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MemorizationCounts {
    pub mem_blocks: usize,
    pub mem_lines: usize,
    pub lines_of_gen: usize,
    pub ratio: f64,
}

/// `mem_lines / lines_of_gen`; zero generated lines is an error.
pub fn ratio(mem_lines: usize, lines_of_gen: usize) -> Result<f64> {
    if lines_of_gen == 0 {
        return Err(Error::NoGeneratedLines);
    }
    Ok(mem_lines as f64 / lines_of_gen as f64)
}

/// Memorized lines over generated lines, both counted on normalized lines.
/// Overlapping block occurrences within a sample are merged first, so each
/// generated line counts at most once.
pub fn memorization_ratio(
    blocks: &[CloneBlock],
    records: &[GenerationRecord],
) -> Result<MemorizationCounts> {
    let lines_of_gen: usize = records.iter().flat_map(|r| &r.generated_line_counts).sum();
    if lines_of_gen == 0 {
        return Err(Error::NoGeneratedLines);
    }
    let mut spans: BTreeMap<&str, Vec<(usize, usize)>> = BTreeMap::new();
    for b in blocks {
        for o in b
            .occurrences
            .iter()
            .filter(|o| o.source == GENERATED_SOURCE)
        {
            spans
                .entry(&o.path)
                .or_default()
                .push((o.index, o.index + b.line_count));
        }
    }
    let mut mem_lines = 0;
    for ranges in spans.values_mut() {
        ranges.sort_unstable();
        let mut end = 0;
        for &(s, e) in ranges.iter() {
            let s = s.max(end);
            if e > s {
                mem_lines += e - s;
                end = e;
            }
        }
    }
    Ok(MemorizationCounts {
        mem_blocks: blocks.len(),
        mem_lines,
        lines_of_gen,
        ratio: ratio(mem_lines, lines_of_gen)?,
    })
}

/// One report row per corpus.
pub fn audit_model(
    model_name: &str,
    records: &[GenerationRecord],
    corpora: &[OrgCorpus],
    cfg: &CloneConfig,
) -> Result<MemorizationReport> {
    let rows = corpora
        .iter()
        .map(|c| {
            let blocks = detect_memorization(records, c, cfg)?;
            let m = memorization_ratio(&blocks, records)?;
            Ok(MemorizationRow {
                org_id: c.org_id.clone(),
                lines_of_gen: m.lines_of_gen,
                mem_blocks: m.mem_blocks,
                mem_lines: m.mem_lines,
                mem_ratio: m.ratio,
            })
        })
        .collect::<Result<_>>()?;
    Ok(MemorizationReport {
        model_name: model_name.to_string(),
        rows,
    })
}

/// One row per corpus, each scored only on generations from prompts that
/// originate in that corpus. Corpora without any such generation are skipped.
pub fn audit_by_origin(
    model_name: &str,
    records: &[GenerationRecord],
    prompts: &[Prompt],
    corpora: &[OrgCorpus],
    cfg: &CloneConfig,
) -> Result<MemorizationReport> {
    let origin: BTreeMap<&str, &str> = prompts
        .iter()
        .map(|p| (p.id.as_str(), p.origin_org.as_str()))
        .collect();
    let mut rows = Vec::new();
    for c in corpora {
        let own: Vec<GenerationRecord> = records
            .iter()
            .filter(|r| origin.get(r.prompt_id.as_str()) == Some(&c.org_id.as_str()))
            .cloned()
            .collect();
        if own
            .iter()
            .flat_map(|r| &r.generated_line_counts)
            .sum::<usize>()
            == 0
        {
            continue;
        }
        rows.extend(audit_model(model_name, &own, std::slice::from_ref(c), cfg)?.rows);
    }
    Ok(MemorizationReport {
        model_name: model_name.to_string(),
        rows,
    })
}

/// Continuations of clone-prefix prompts matched against the withheld
/// suffixes at a three-line threshold. Prefix lines never count, since only
/// newly generated text is compared.
pub fn clone_mem_eval(
    model: &ModelParams,
    model_name: &str,
    clone_prompts: &[Prompt],
    cfg: &SamplingConfig,
) -> Result<(MemorizationRow, Vec<GenerationRecord>)> {
    if clone_prompts.is_empty() {
        return Err(Error::InvalidArgument(
            "clone evaluation needs at least one prompt".into(),
        ));
    }
    let suffixes = clone_prompts
        .iter()
        .map(|p| match (&p.kind, &p.expected_suffix) {
            (PromptKind::ClonePrefix, Some(s)) => {
                Ok(SourceFile::new(format!("suffix/{}", p.id), s.as_str()))
            }
            _ => Err(Error::InvalidArgument(format!(
                "prompt {} carries no expected suffix",
                p.id
            ))),
        })
        .collect::<Result<Vec<_>>>()?;
    let (records, _) = run_extraction(model, model_name, clone_prompts, cfg)?;
    let generated = sample_files(&records);
    let sources = [
        CloneSource {
            id: GENERATED_SOURCE,
            files: &generated,
        },
        CloneSource {
            id: SUFFIX_SOURCE,
            files: &suffixes,
        },
    ];
    let mut blocks = detect_clones(&sources, &CloneConfig::new(CROSS_ORG_MIN_LINES)?)?;
    blocks.retain(|b| spans_both(b, SUFFIX_SOURCE));
    let m = memorization_ratio(&blocks, &records)?;
    let row = MemorizationRow {
        org_id: CROSS_ORG_ROW.to_string(),
        lines_of_gen: m.lines_of_gen,
        mem_blocks: m.mem_blocks,
        mem_lines: m.mem_lines,
        mem_ratio: m.ratio,
    };
    Ok((row, records))
}

/// Ratio as a percentage with three decimals, e.g. `0.249%`.
pub fn format_percent(ratio: f64) -> String {
    format!("{:.3}%", ratio * 100.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Split;

    fn record(samples: &[&str]) -> GenerationRecord {
        GenerationRecord {
            prompt_id: "p".into(),
            model_name: "m".into(),
            samples: samples.iter().map(|s| s.to_string()).collect(),
            sampling: SamplingConfig::default(),
            generated_line_counts: samples.iter().map(|s| normalize_lines(s).len()).collect(),
        }
    }

    fn lines(range: std::ops::Range<usize>) -> String {
        range.map(|i| format!("line {i}\n")).collect()
    }

    #[test]
    fn overlapping_blocks_are_merged() {
        // Sample lines 0..10; corpus has 0..6 and 4..10 in separate files.
        let rec = record(&[&lines(0..10)]);
        let corpus = OrgCorpus::new(
            "A",
            vec![
                SourceFile::new("x.py", lines(0..6)),
                SourceFile::new("y.py", lines(4..10)),
            ],
            Split::Train,
        )
        .unwrap();
        let blocks =
            detect_memorization(std::slice::from_ref(&rec), &corpus, &CloneConfig::default())
                .unwrap();
        assert_eq!(blocks.len(), 2);
        let m = memorization_ratio(&blocks, &[rec]).unwrap();
        assert_eq!((m.mem_lines, m.lines_of_gen, m.mem_blocks), (10, 10, 2));
        assert_eq!(m.ratio, 1.0);
    }

    #[test]
    fn generation_only_blocks_are_excluded() {
        let rec = record(&[&lines(0..8), &lines(0..8)]);
        let corpus = OrgCorpus::new(
            "A",
            vec![SourceFile::new("x.py", lines(100..120))],
            Split::Train,
        )
        .unwrap();
        let blocks =
            detect_memorization(std::slice::from_ref(&rec), &corpus, &CloneConfig::default())
                .unwrap();
        assert!(blocks.is_empty());
        let m = memorization_ratio(&blocks, &[rec]).unwrap();
        assert_eq!((m.mem_lines, m.lines_of_gen, m.ratio), (0, 16, 0.0));
    }

    #[test]
    fn no_generated_lines_is_an_error() {
        assert!(matches!(
            memorization_ratio(&[], &[record(&["", "  \n"])]),
            Err(Error::NoGeneratedLines)
        ));
    }

    #[test]
    fn percent_format() {
        assert_eq!(format_percent(7_372.0 / 2_961_075.0), "0.249%");
        assert_eq!(format_percent(0.0), "0.000%");
    }
}
