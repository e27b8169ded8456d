//! One method per subcommand. Each reads earlier artifacts from the output
//! directory and writes its own.

use std::collections::BTreeMap;
use std::path::Path;

use collabaudit_core::audit::{audit_by_origin, clone_mem_eval, run_extraction, PromptError};
use collabaudit_core::clones::{cross_org_clones, detect_clones, normalize_lines, CloneSource};
use collabaudit_core::collab::{model_name, parse_order, Provenance};
use collabaudit_core::corpus::{filter_files, ingest, per_mb_stats, split};
use collabaudit_core::dedup::lsh_dedup;
use collabaudit_core::pysurface::{
    build_clone_prefix_prompts, build_function_prompts, extract_functions, sample_prompts,
};
use collabaudit_core::tinylm::{
    perplexity, read_checkpoint, tokenize, tokenize_corpus, write_checkpoint,
};
use collabaudit_core::{
    seeds, CloneBlock, Error, GenerationRecord, ModelParams, ModelRegistry, OrgCorpus, Prompt,
    SourceFile, Split, StatsRecord, Strategy, TrainPlan,
};
use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::artifacts::{Header, Store};
use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::passk::{toy_passk_runner, PassKRow, PassKTask};

pub const INGEST: &str = "ingest.jsonl";
pub const INGEST_SKIPS: &str = "ingest_skips.jsonl";
pub const CORPUS: &str = "corpus.jsonl";
pub const FILTERED: &str = "filtered.jsonl";
pub const DEDUP_GROUPS: &str = "dedup_groups.jsonl";
pub const STATS: &str = "stats.jsonl";
pub const CLONES: &str = "clones.jsonl";
pub const CLONE_SUMMARY: &str = "clone_summary.jsonl";
pub const PROMPTS: &str = "prompts.jsonl";
pub const PROMPT_COUNTS: &str = "prompt_counts.jsonl";
pub const MODELS_DIR: &str = "models";
pub const GENERATIONS_DIR: &str = "generations";
pub const GENERATION_ERRORS_DIR: &str = "generation_errors";
pub const AUDIT: &str = "audit.jsonl";
pub const CROSSORG_CLONES: &str = "crossorg_clones.jsonl";
pub const CROSSORG_SUMMARY: &str = "crossorg_summary.jsonl";
pub const CROSSORG_PROMPTS: &str = "crossorg_prompts.jsonl";
pub const CROSSORG: &str = "crossorg.jsonl";
pub const PASSK_TASKS: &str = "passk_tasks.jsonl";
pub const PASSK: &str = "passk.jsonl";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileRecord {
    pub org: String,
    pub split: Split,
    pub path: String,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrgSkip {
    pub org: String,
    pub path: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrgGroup {
    pub org: String,
    pub kept_path: String,
    pub dropped_paths: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsRow {
    pub org: String,
    pub train_files: usize,
    pub train_bytes: usize,
    pub validation_files: usize,
    pub validation_bytes: usize,
    pub total_lines: usize,
    pub clone_blocks: usize,
    pub clone_lines: usize,
    pub per_mb: StatsRecord,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CloneRow {
    pub org: String,
    pub block: CloneBlock,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CloneSummaryRow {
    pub org: String,
    pub total_lines: usize,
    pub clone_blocks: usize,
    pub clone_lines: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PromptCountRow {
    pub org: String,
    pub total_functions: usize,
    pub total_prompts: usize,
    pub sampled: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelMeta {
    pub provenance: Provenance,
    pub param_count: usize,
    pub checkpoint: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditRow {
    pub model: String,
    pub org: String,
    pub lines_of_gen: usize,
    pub mem_blocks: usize,
    pub mem_lines: usize,
    /// `None` when the model generated no lines for this row.
    pub mem_ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossOrgRow {
    pub model: String,
    pub lines_of_gen: usize,
    pub mem_blocks: usize,
    pub mem_lines: usize,
    /// `None` when the model generated no lines for this row.
    pub mem_ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PassKModelRow {
    pub model: String,
    pub perplexity: f64,
    pub tasks: usize,
    pub pass_at: Vec<PassKRow>,
}

/// A model to train, as requested on the command line.
#[derive(Debug, Clone)]
pub struct TrainRequest {
    pub strategy: Strategy,
    pub order: Option<String>,
}

pub struct Pipeline {
    pub cfg: RunConfig,
    pub store: Store,
}

fn generations_name(model: &str) -> String {
    format!("{GENERATIONS_DIR}/{model}.jsonl")
}

fn model_meta_name(model: &str) -> String {
    format!("{MODELS_DIR}/{model}.jsonl")
}

impl Pipeline {
    pub fn new(cfg: RunConfig, config_dir: &Path) -> Self {
        let hash = cfg.hash(config_dir);
        let store = Store::new(cfg.out_dir.clone(), hash, cfg.seed);
        Self { cfg, store }
    }

    fn by_org<T>(
        &self,
        items: Vec<T>,
        org: impl Fn(&T) -> &str,
    ) -> CliResult<Vec<(String, Vec<T>)>> {
        let mut grouped: BTreeMap<String, Vec<T>> = self
            .cfg
            .orgs
            .iter()
            .map(|o| (o.id.clone(), Vec::new()))
            .collect();
        for item in items {
            let key = org(&item).to_string();
            grouped
                .get_mut(&key)
                .ok_or_else(|| {
                    CliError::Config(format!(
                        "artifact mentions org {key:?} absent from the config"
                    ))
                })?
                .push(item);
        }
        Ok(self
            .cfg
            .orgs
            .iter()
            .map(|o| (o.id.clone(), grouped.remove(&o.id).unwrap_or_default()))
            .collect())
    }

    pub fn ingest(&self) -> CliResult<()> {
        let mut files = Vec::new();
        let mut skips = Vec::new();
        for org in &self.cfg.orgs {
            let (corpus, skipped) = ingest(&org.dir, &org.id, &self.cfg.corpus.suffix)?;
            log::info!(
                "ingest {}: {} files, {} skipped",
                org.id,
                corpus.files.len(),
                skipped.len()
            );
            files.extend(corpus.files.into_iter().map(|f| FileRecord {
                org: org.id.clone(),
                split: Split::Unsplit,
                path: f.path,
                text: f.text,
            }));
            skips.extend(skipped.into_iter().map(|s| OrgSkip {
                org: org.id.clone(),
                path: s.path,
                reason: s.reason,
            }));
        }
        self.store.write_records(INGEST, &files)?;
        self.store.write_records(INGEST_SKIPS, &skips)
    }

    /// Quality filters, near-duplicate removal, then the train/validation split.
    pub fn dedup(&self) -> CliResult<()> {
        let records: Vec<FileRecord> = self.store.read_records(INGEST, "ingest")?;
        let mut out = Vec::new();
        let mut filtered = Vec::new();
        let mut groups = Vec::new();
        for (org, files) in self.by_org(records, |r| &r.org)? {
            let files = files
                .into_iter()
                .map(|r| SourceFile::new(r.path, r.text))
                .collect();
            let corpus = OrgCorpus::new(org.clone(), files, Split::Unsplit)?;
            let (kept, dropped) = filter_files(&corpus)?;
            let (deduped, dups) = lsh_dedup(
                &kept,
                self.cfg.dedup.threshold,
                self.cfg.dedup.num_perm,
                self.cfg.seed,
            )?;
            let (train, validation) = split(
                &deduped,
                self.cfg.corpus.train_fraction,
                seeds::derive(self.cfg.seed, "split", &org),
            )?;
            log::info!(
                "dedup {org}: {} filtered, {} duplicate groups, {} train / {} validation",
                dropped.len(),
                dups.len(),
                train.files.len(),
                validation.files.len()
            );
            filtered.extend(dropped.into_iter().map(|s| OrgSkip {
                org: org.clone(),
                path: s.path,
                reason: s.reason,
            }));
            groups.extend(dups.into_iter().map(|g| OrgGroup {
                org: org.clone(),
                kept_path: g.kept_path,
                dropped_paths: g.dropped_paths,
            }));
            for part in [train, validation] {
                out.extend(part.files.into_iter().map(|f| FileRecord {
                    org: org.clone(),
                    split: part.split,
                    path: f.path,
                    text: f.text,
                }));
            }
        }
        self.store.write_records(CORPUS, &out)?;
        self.store.write_records(FILTERED, &filtered)?;
        self.store.write_records(DEDUP_GROUPS, &groups)
    }

    /// Per-organization corpora of one split, in config order.
    pub fn corpora(&self, which: Split) -> CliResult<Vec<OrgCorpus>> {
        let records: Vec<FileRecord> = self.store.read_records(CORPUS, "dedup")?;
        self.by_org(records, |r| &r.org)?
            .into_iter()
            .map(|(org, files)| {
                let files = files
                    .into_iter()
                    .filter(|r| which == Split::Unsplit || r.split == which)
                    .map(|r| SourceFile::new(r.path, r.text))
                    .collect();
                Ok(OrgCorpus::new(org, files, which)?)
            })
            .collect()
    }

    fn intra_clones(&self, corpus: &OrgCorpus) -> CliResult<Vec<CloneBlock>> {
        Ok(detect_clones(
            &[CloneSource::from(corpus)],
            &self.cfg.clones,
        )?)
    }

    pub fn stats(&self) -> CliResult<()> {
        let train = self.corpora(Split::Train)?;
        let validation = self.corpora(Split::Validation)?;
        let mut rows = Vec::new();
        for (t, v) in train.iter().zip(&validation) {
            let mut files = t.files.clone();
            files.extend(v.files.iter().cloned());
            let whole = OrgCorpus::new(t.org_id.clone(), files, Split::Unsplit)?;
            let blocks = self.intra_clones(&whole)?;
            rows.push(StatsRow {
                org: t.org_id.clone(),
                train_files: t.files.len(),
                train_bytes: t.total_bytes(),
                validation_files: v.files.len(),
                validation_bytes: v.total_bytes(),
                total_lines: whole.total_lines(),
                clone_blocks: blocks.len(),
                clone_lines: blocks
                    .iter()
                    .map(|b| b.line_count * b.occurrences.len())
                    .sum(),
                per_mb: per_mb_stats(&whole, &blocks)?,
            });
        }
        self.store.write_records(STATS, &rows)
    }

    /// Intra-organization clones of every training split.
    pub fn clones(&self) -> CliResult<()> {
        let mut rows = Vec::new();
        let mut summary = Vec::new();
        for corpus in self.corpora(Split::Train)? {
            let blocks = self.intra_clones(&corpus)?;
            summary.push(CloneSummaryRow {
                org: corpus.org_id.clone(),
                total_lines: corpus.total_lines(),
                clone_blocks: blocks.len(),
                clone_lines: blocks.iter().map(|b| b.line_count).sum(),
            });
            rows.extend(blocks.into_iter().map(|block| CloneRow {
                org: corpus.org_id.clone(),
                block,
            }));
        }
        self.store.write_records(CLONES, &rows)?;
        self.store.write_records(CLONE_SUMMARY, &summary)
    }

    pub fn prompts(&self) -> CliResult<()> {
        let cap = self.cfg.arch.prompt_cap();
        let mut sampled = Vec::new();
        let mut counts = Vec::new();
        for corpus in self.corpora(Split::Train)? {
            let total_functions = corpus
                .files
                .iter()
                .map(|f| extract_functions(f).len())
                .sum();
            let all = build_function_prompts(&corpus, cap);
            let picked = sample_prompts(
                &all,
                self.cfg.prompts.sample_fraction,
                seeds::derive(self.cfg.seed, "prompts", &corpus.org_id),
            )?;
            counts.push(PromptCountRow {
                org: corpus.org_id.clone(),
                total_functions,
                total_prompts: all.len(),
                sampled: picked.len(),
            });
            sampled.extend(picked);
        }
        self.store.write_records(PROMPTS, &sampled)?;
        self.store.write_records(PROMPT_COUNTS, &counts)
    }

    fn plans(&self, request: Option<&TrainRequest>) -> CliResult<Vec<TrainPlan>> {
        match request {
            Some(r) => {
                let order = match (r.strategy, &r.order) {
                    (Strategy::Incremental, Some(o)) => Some(parse_order(o)?),
                    (Strategy::Incremental, None) => {
                        return Err(CliError::Config(
                            "--strategy incremental needs --order".into(),
                        ))
                    }
                    (_, Some(_)) => {
                        return Err(CliError::Config(
                            "--order applies to incremental only".into(),
                        ))
                    }
                    (_, None) => None,
                };
                Ok(vec![self.cfg.plan.plan(r.strategy, order)])
            }
            None => self
                .cfg
                .plan
                .models
                .iter()
                .map(|m| self.cfg.plan.parse_model(m))
                .collect(),
        }
    }

    /// Trains the requested model, or every model listed in the config, and
    /// returns the registry names written.
    pub fn train(&self, request: Option<&TrainRequest>) -> CliResult<Vec<String>> {
        let corpora = self.corpora(Split::Train)?;
        self.drop_stale_models()?;
        let mut registry = ModelRegistry::new();
        let mut names = Vec::new();
        for plan in self.plans(request)? {
            let orgs: Vec<&str> = corpora.iter().map(|c| c.org_id.as_str()).collect();
            log::info!("training {}", model_name(&plan, &orgs)?);
            let name = registry.train(
                &corpora,
                &plan,
                &self.cfg.arch,
                &self.cfg.train,
                self.cfg.seed,
            )?;
            let params = registry.get(&name).expect("just trained");
            let mut bytes = Vec::new();
            write_checkpoint(params, &mut bytes)?;
            let checkpoint = format!("{name}.ckpt");
            self.store
                .write_bytes(&format!("{MODELS_DIR}/{checkpoint}"), &bytes)?;
            let meta = ModelMeta {
                provenance: registry.provenance(&name).expect("just trained").clone(),
                param_count: params.param_count,
                checkpoint,
            };
            self.store.write_records(&model_meta_name(&name), &[meta])?;
            names.push(name);
        }
        Ok(names)
    }

    /// Removes models written under a different config so later stages see a
    /// consistent registry.
    fn drop_stale_models(&self) -> CliResult<()> {
        for name in self.store.list(MODELS_DIR, ".jsonl")? {
            let path = self.store.path(&model_meta_name(&name));
            let text = std::fs::read_to_string(&path).map_err(|e| CliError::io(&path, e))?;
            let header: Option<Header> = text
                .lines()
                .next()
                .and_then(|l| serde_json::from_str(l).ok());
            if header.is_some_and(|h| self.store.check_header(&path, &h, "train").is_ok()) {
                continue;
            }
            log::warn!("removing stale model {name}");
            for f in [path, self.store.path(&format!("{MODELS_DIR}/{name}.ckpt"))] {
                if f.exists() {
                    std::fs::remove_file(&f).map_err(|e| CliError::io(&f, e))?;
                }
            }
        }
        Ok(())
    }

    /// Registry names with a checkpoint under the current config.
    pub fn model_names(&self) -> CliResult<Vec<String>> {
        let names = self.store.list(MODELS_DIR, ".jsonl")?;
        if names.is_empty() {
            return Err(CliError::MissingArtifact {
                path: self.store.path(MODELS_DIR),
                producer: "train",
            });
        }
        Ok(names)
    }

    pub fn load_model(&self, name: &str) -> CliResult<ModelParams> {
        let meta: Vec<ModelMeta> = self.store.read_records(&model_meta_name(name), "train")?;
        let meta = meta
            .first()
            .ok_or_else(|| CliError::UnknownModel(name.to_string()))?;
        let bytes = self
            .store
            .read_bytes(&format!("{MODELS_DIR}/{}", meta.checkpoint), "train")?;
        Ok(read_checkpoint(bytes.as_slice())?)
    }

    fn selected_models(&self, only: Option<&str>) -> CliResult<Vec<String>> {
        let names = self.model_names()?;
        match only {
            Some(m) if names.iter().any(|n| n == m) => Ok(vec![m.to_string()]),
            Some(m) => Err(CliError::UnknownModel(m.to_string())),
            None => Ok(names),
        }
    }

    fn sampling(&self) -> collabaudit_core::SamplingConfig {
        self.cfg
            .sampling
            .config(seeds::derive(self.cfg.seed, "sampling", ""))
    }

    pub fn generate(&self, only: Option<&str>) -> CliResult<()> {
        let prompts: Vec<Prompt> = self.store.read_records(PROMPTS, "prompts")?;
        for name in self.selected_models(only)? {
            let model = self.load_model(&name)?;
            let (records, errors) = run_extraction(&model, &name, &prompts, &self.sampling())?;
            log::info!(
                "generate {name}: {} records, {} prompt errors",
                records.len(),
                errors.len()
            );
            self.store
                .write_records(&generations_name(&name), &records)?;
            self.store.write_records::<PromptError>(
                &format!("{GENERATION_ERRORS_DIR}/{name}.jsonl"),
                &errors,
            )?;
        }
        Ok(())
    }

    pub fn audit(&self) -> CliResult<()> {
        let prompts: Vec<Prompt> = self.store.read_records(PROMPTS, "prompts")?;
        let corpora = self.corpora(Split::Train)?;
        let mut rows = Vec::new();
        for name in self.model_names()? {
            let records: Vec<GenerationRecord> = self
                .store
                .read_records(&generations_name(&name), "generate")?;
            let report = audit_by_origin(&name, &records, &prompts, &corpora, &self.cfg.clones)?;
            for c in &corpora {
                let row = match report.rows.iter().find(|r| r.org_id == c.org_id) {
                    Some(r) => AuditRow {
                        model: name.clone(),
                        org: r.org_id.clone(),
                        lines_of_gen: r.lines_of_gen,
                        mem_blocks: r.mem_blocks,
                        mem_lines: r.mem_lines,
                        mem_ratio: Some(r.mem_ratio),
                    },
                    None => AuditRow {
                        model: name.clone(),
                        org: c.org_id.clone(),
                        lines_of_gen: 0,
                        mem_blocks: 0,
                        mem_lines: 0,
                        mem_ratio: None,
                    },
                };
                rows.push(row);
            }
        }
        self.store.write_records(AUDIT, &rows)
    }

    /// Clones shared across organizations, their prefix prompts, and each
    /// model's recovery of the withheld suffixes.
    pub fn crossorg(&self) -> CliResult<()> {
        let corpora = self.corpora(Split::Train)?;
        let blocks = if corpora.len() >= 2 {
            cross_org_clones(&corpora, &self.cfg.clones)?
        } else {
            Vec::new()
        };
        let clone_lines: usize = blocks.iter().map(|b| b.line_count).sum();
        let summary: Vec<CloneSummaryRow> = corpora
            .iter()
            .map(|c| CloneSummaryRow {
                org: c.org_id.clone(),
                total_lines: c.total_lines(),
                clone_blocks: blocks.len(),
                clone_lines,
            })
            .collect();
        let prompts = build_clone_prefix_prompts(&blocks, self.cfg.arch.prompt_cap());
        let mut rows = Vec::new();
        if prompts.is_empty() {
            log::warn!("no cross-organization clones; nothing to evaluate");
        } else {
            for name in self.model_names()? {
                let model = self.load_model(&name)?;
                let row = match clone_mem_eval(&model, &name, &prompts, &self.sampling()) {
                    Ok((row, _)) => CrossOrgRow {
                        model: name,
                        lines_of_gen: row.lines_of_gen,
                        mem_blocks: row.mem_blocks,
                        mem_lines: row.mem_lines,
                        mem_ratio: Some(row.mem_ratio),
                    },
                    Err(Error::NoGeneratedLines) => CrossOrgRow {
                        model: name,
                        lines_of_gen: 0,
                        mem_blocks: 0,
                        mem_lines: 0,
                        mem_ratio: None,
                    },
                    Err(e) => return Err(e.into()),
                };
                rows.push(row);
            }
        }
        self.store.write_records(CROSSORG_CLONES, &blocks)?;
        self.store.write_records(CROSSORG_SUMMARY, &summary)?;
        self.store.write_records(CROSSORG_PROMPTS, &prompts)?;
        self.store.write_records(CROSSORG, &rows)
    }

    /// Documented held-out functions: the header is the prompt, the body the
    /// expected output.
    pub fn passk_tasks(&self, validation: &[OrgCorpus]) -> Vec<PassKTask> {
        let cap = self.cfg.arch.prompt_cap();
        let mut tasks: Vec<PassKTask> = validation
            .iter()
            .flat_map(|c| {
                c.files.iter().flat_map(move |f| {
                    extract_functions(f).into_iter().filter_map(move |func| {
                        let ok = func.docstring.is_some()
                            && tokenize(&func.header).len() <= cap
                            && !normalize_lines(&func.body).is_empty();
                        ok.then(|| PassKTask {
                            id: format!("{}/{}:{}", c.org_id, func.path, func.start_line),
                            prompt: func.header,
                            canonical_output: func.body,
                        })
                    })
                })
            })
            .collect();
        let mut idx: Vec<usize> = (0..tasks.len()).collect();
        idx.shuffle(&mut seeds::derived_rng(self.cfg.seed, "passk", "tasks"));
        idx.truncate(self.cfg.passk.max_tasks);
        idx.sort_unstable();
        let keep: std::collections::BTreeSet<usize> = idx.into_iter().collect();
        let mut i = 0;
        tasks.retain(|_| {
            i += 1;
            keep.contains(&(i - 1))
        });
        tasks
    }

    pub fn passk(&self) -> CliResult<()> {
        let validation = self.corpora(Split::Validation)?;
        let tasks = self.passk_tasks(&validation);
        let stream: Vec<u32> = validation.iter().flat_map(tokenize_corpus).collect();
        let mut rows = Vec::new();
        for name in self.model_names()? {
            let model = self.load_model(&name)?;
            let pass_at = if tasks.is_empty() {
                Vec::new()
            } else {
                toy_passk_runner(
                    &tasks,
                    &model,
                    self.cfg.passk.n,
                    &self.cfg.passk.k,
                    &self.sampling(),
                )?
            };
            rows.push(PassKModelRow {
                model: name,
                perplexity: perplexity(&model, &stream)?,
                tasks: tasks.len(),
                pass_at,
            });
        }
        self.store.write_records(PASSK_TASKS, &tasks)?;
        self.store.write_records(PASSK, &rows)
    }
}
