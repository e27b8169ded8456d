//! Run configuration: one TOML file plus command-line overrides.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use collabaudit_core::collab::{parse_order, ClientWeights, YogiConfig};
use collabaudit_core::dedup::{choose_bands, DEFAULT_NUM_PERM, DEFAULT_THRESHOLD, MIN_NUM_PERM};
use collabaudit_core::{ArchConfig, CloneConfig, SamplingConfig, Strategy, TrainHyper, TrainPlan};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrgEntry {
    pub id: String,
    /// Relative paths resolve against the config file's directory.
    pub dir: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CorpusSection {
    pub suffix: String,
    pub train_fraction: f64,
}

impl Default for CorpusSection {
    fn default() -> Self {
        Self {
            suffix: ".py".into(),
            train_fraction: 0.8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DedupSection {
    pub threshold: f64,
    pub num_perm: usize,
}

impl Default for DedupSection {
    fn default() -> Self {
        Self {
            threshold: DEFAULT_THRESHOLD,
            num_perm: DEFAULT_NUM_PERM,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PromptSection {
    pub sample_fraction: f64,
}

impl Default for PromptSection {
    fn default() -> Self {
        Self {
            sample_fraction: 0.1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PlanSection {
    /// Models trained by a bare `train`: `centralized`, `fedavg`, `fedyogi`
    /// or `incremental:<ORDER>` such as `incremental:A2B2C`.
    pub models: Vec<String>,
    pub rounds: usize,
    pub local_epochs: Option<usize>,
    pub client_weights: ClientWeights,
    pub yogi: YogiConfig,
}

impl Default for PlanSection {
    fn default() -> Self {
        let base = TrainPlan::new(Strategy::Centralized);
        Self {
            models: vec!["centralized".into(), "fedavg".into(), "fedyogi".into()],
            rounds: base.rounds,
            local_epochs: base.local_epochs,
            client_weights: base.client_weights,
            yogi: base.yogi,
        }
    }
}

impl PlanSection {
    pub fn plan(&self, strategy: Strategy, order: Option<Vec<String>>) -> TrainPlan {
        TrainPlan {
            strategy,
            order,
            rounds: self.rounds,
            local_epochs: self.local_epochs,
            client_weights: self.client_weights,
            yogi: self.yogi,
        }
    }

    /// Parses one `models` entry.
    pub fn parse_model(&self, spec: &str) -> CliResult<TrainPlan> {
        let (kind, order) = match spec.split_once(':') {
            Some((k, o)) => (k, Some(o)),
            None => (spec, None),
        };
        let strategy = match kind {
            "centralized" => Strategy::Centralized,
            "fedavg" => Strategy::Fedavg,
            "fedyogi" => Strategy::Fedyogi,
            "incremental" => Strategy::Incremental,
            _ => {
                return Err(CliError::Config(format!(
                    "unknown model kind {kind:?} in {spec:?}"
                )))
            }
        };
        let order = match (strategy, order) {
            (Strategy::Incremental, Some(o)) => Some(parse_order(o)?),
            (Strategy::Incremental, None) => {
                return Err(CliError::Config(format!(
                    "{spec:?} needs an order, e.g. incremental:A2B2C"
                )))
            }
            (_, Some(_)) => {
                return Err(CliError::Config(format!(
                    "{spec:?}: only incremental takes an order"
                )))
            }
            (_, None) => None,
        };
        Ok(self.plan(strategy, order))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SamplingSection {
    pub temperature: f64,
    pub top_p: f64,
    pub n_generations: usize,
    pub max_new_tokens: Option<usize>,
}

impl Default for SamplingSection {
    fn default() -> Self {
        let d = SamplingConfig::default();
        Self {
            temperature: d.temperature,
            top_p: d.top_p,
            n_generations: d.n_generations,
            max_new_tokens: d.max_new_tokens,
        }
    }
}

impl SamplingSection {
    pub fn config(&self, seed: u64) -> SamplingConfig {
        SamplingConfig {
            temperature: self.temperature,
            top_p: self.top_p,
            n_generations: self.n_generations,
            max_new_tokens: self.max_new_tokens,
            seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PassKSection {
    pub n: usize,
    pub k: Vec<usize>,
    /// Held-out documented functions used as tasks.
    pub max_tasks: usize,
}

impl Default for PassKSection {
    fn default() -> Self {
        Self {
            n: 200,
            k: vec![1, 10, 100],
            max_tasks: 20,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_out_dir")]
    pub out_dir: PathBuf,
    pub orgs: Vec<OrgEntry>,
    #[serde(default)]
    pub corpus: CorpusSection,
    #[serde(default)]
    pub dedup: DedupSection,
    #[serde(default)]
    pub clones: CloneConfig,
    #[serde(default)]
    pub prompts: PromptSection,
    #[serde(default)]
    pub arch: ArchConfig,
    #[serde(default)]
    pub train: TrainHyper,
    #[serde(default)]
    pub plan: PlanSection,
    #[serde(default)]
    pub sampling: SamplingSection,
    #[serde(default)]
    pub passk: PassKSection,
}

fn default_seed() -> u64 {
    42
}

fn default_out_dir() -> PathBuf {
    PathBuf::from("out")
}

/// Command-line adjustments applied on top of the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub out_dir: Option<PathBuf>,
    /// `dotted.key=value` pairs; values parse as TOML, falling back to a string.
    pub set: Vec<String>,
}

fn set_dotted(root: &mut toml::Table, assignment: &str) -> CliResult<()> {
    let (key, raw) = assignment
        .split_once('=')
        .ok_or_else(|| CliError::Config(format!("override {assignment:?} is not key=value")))?;
    let value = toml::from_str::<toml::Table>(&format!("v = {raw}"))
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(raw.to_string()));
    let parts: Vec<&str> = key.trim().split('.').collect();
    let (last, parents) = parts.split_last().expect("split yields at least one part");
    let mut table = root;
    for p in parents {
        let entry = table
            .entry(p.to_string())
            .or_insert_with(|| toml::Value::Table(toml::Table::new()));
        table = entry
            .as_table_mut()
            .ok_or_else(|| CliError::Config(format!("override {key:?}: {p:?} is not a section")))?;
    }
    table.insert(last.to_string(), value);
    Ok(())
}

impl RunConfig {
    pub fn parse(text: &str, base_dir: &Path, overrides: &Overrides) -> CliResult<Self> {
        let mut table: toml::Table =
            toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        for s in &overrides.set {
            set_dotted(&mut table, s)?;
        }
        let mut cfg: RunConfig = toml::Value::Table(table)
            .try_into()
            .map_err(|e: toml::de::Error| CliError::Config(e.to_string()))?;
        if let Some(seed) = overrides.seed {
            cfg.seed = seed;
        }
        for org in &mut cfg.orgs {
            if org.dir.is_relative() {
                org.dir = base_dir.join(&org.dir);
            }
        }
        match &overrides.out_dir {
            Some(out) => cfg.out_dir = out.clone(),
            None if cfg.out_dir.is_relative() => cfg.out_dir = base_dir.join(&cfg.out_dir),
            None => {}
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path, overrides: &Overrides) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
            path: path.to_path_buf(),
            source: e,
        })?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::parse(&text, base, overrides)
    }

    pub fn validate(&self) -> CliResult<()> {
        if self.orgs.is_empty() {
            return Err(CliError::Config(
                "at least one [[orgs]] entry is required".into(),
            ));
        }
        let mut seen = BTreeSet::new();
        for org in &self.orgs {
            if org.id.is_empty()
                || org.id.contains(['/', '2'])
                || org.id.chars().any(char::is_whitespace)
            {
                return Err(CliError::Config(format!(
                    "org id {:?} must be nonempty without '/', '2' or whitespace",
                    org.id
                )));
            }
            if !seen.insert(&org.id) {
                return Err(CliError::Config(format!("duplicate org id {:?}", org.id)));
            }
        }
        let frac = self.corpus.train_fraction;
        if !(frac > 0.0 && frac < 1.0) {
            return Err(CliError::Config(format!(
                "corpus.train_fraction {frac} must lie in (0, 1)"
            )));
        }
        let t = self.dedup.threshold;
        if !(t > 0.0 && t < 1.0) {
            return Err(CliError::Config(format!(
                "dedup.threshold {t} must lie in (0, 1)"
            )));
        }
        if self.dedup.num_perm < MIN_NUM_PERM {
            return Err(CliError::Config(format!(
                "dedup.num_perm must be >= {MIN_NUM_PERM}"
            )));
        }
        choose_bands(self.dedup.num_perm, t)?;
        self.clones.validate()?;
        let f = self.prompts.sample_fraction;
        if !(f > 0.0 && f <= 1.0) {
            return Err(CliError::Config(format!(
                "prompts.sample_fraction {f} must lie in (0, 1]"
            )));
        }
        self.arch.validate()?;
        self.train.validate()?;
        self.sampling.config(self.seed).validate()?;
        for m in &self.plan.models {
            let plan = self.plan.parse_model(m)?;
            for id in plan.order.iter().flatten() {
                if !seen.contains(id) {
                    return Err(CliError::Config(format!(
                        "model {m:?} names unknown org {id:?}"
                    )));
                }
            }
        }
        if self.plan.rounds == 0 {
            return Err(CliError::Config("plan.rounds must be >= 1".into()));
        }
        let max_k = self.passk.k.iter().copied().max().unwrap_or(0);
        if self.passk.k.contains(&0) || self.passk.n < max_k || self.passk.n == 0 {
            return Err(CliError::Config(format!(
                "passk needs 1 <= k <= n, got n={} k={:?}",
                self.passk.n, self.passk.k
            )));
        }
        Ok(())
    }

    /// SHA-256 of the canonical JSON form, with the output directory blanked
    /// and organization directories as written relative to the config file.
    pub fn hash(&self, base_dir: &Path) -> String {
        let mut canon = self.clone();
        canon.out_dir = PathBuf::new();
        for org in &mut canon.orgs {
            if let Ok(rel) = org.dir.strip_prefix(base_dir) {
                org.dir = rel.to_path_buf();
            }
        }
        let json = serde_json::to_vec(&canon).expect("config serializes");
        let digest = Sha256::digest(&json);
        digest[..8].iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn org_ids(&self) -> Vec<&str> {
        self.orgs.iter().map(|o| o.id.as_str()).collect()
    }
}
