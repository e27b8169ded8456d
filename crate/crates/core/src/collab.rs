//! Centralized, federated (FedAvg / FedYogi) and incremental training over
//! per-organization corpora.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::corpus::OrgCorpus;
use crate::tinylm::{init_model, tokenize, train, ArchConfig, ModelParams, TrainHyper, EOT};
use crate::{seeds, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Centralized,
    Fedavg,
    Fedyogi,
    Incremental,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClientWeights {
    Uniform,
    BySize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct YogiConfig {
    pub eta: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub tau: f64,
}

impl Default for YogiConfig {
    fn default() -> Self {
        Self {
            eta: 1e-2,
            beta1: 0.9,
            beta2: 0.99,
            tau: 1e-3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrainPlan {
    pub strategy: Strategy,
    #[serde(default)]
    pub order: Option<Vec<String>>,
    #[serde(default = "default_rounds")]
    pub rounds: usize,
    /// Epochs per client per round (federated) or per stage; `None` picks 1
    /// for federated strategies and 10 otherwise.
    #[serde(default)]
    pub local_epochs: Option<usize>,
    #[serde(default = "default_client_weights")]
    pub client_weights: ClientWeights,
    #[serde(default)]
    pub yogi: YogiConfig,
}

fn default_rounds() -> usize {
    10
}

fn default_client_weights() -> ClientWeights {
    ClientWeights::BySize
}

impl TrainPlan {
    pub fn new(strategy: Strategy) -> Self {
        Self {
            strategy,
            order: None,
            rounds: default_rounds(),
            local_epochs: None,
            client_weights: default_client_weights(),
            yogi: YogiConfig::default(),
        }
    }

    pub fn with_order(mut self, order: &[&str]) -> Self {
        self.order = Some(order.iter().map(|s| s.to_string()).collect());
        self
    }

    pub fn epochs_per_stage(&self) -> usize {
        self.local_epochs.unwrap_or(match self.strategy {
            Strategy::Fedavg | Strategy::Fedyogi => 1,
            Strategy::Centralized | Strategy::Incremental => 10,
        })
    }

    fn hyper(&self, base: &TrainHyper) -> TrainHyper {
        TrainHyper {
            epochs: self.epochs_per_stage(),
            ..*base
        }
    }
}

/// Registry name for a plan over organizations `orgs` (in corpus order).
pub fn model_name(plan: &TrainPlan, orgs: &[&str]) -> Result<String> {
    Ok(match plan.strategy {
        Strategy::Centralized => format!("Centralized_{}", orgs.concat()),
        Strategy::Fedavg => format!("Federated_Avg_{}", orgs.concat()),
        Strategy::Fedyogi => format!("Federated_Yogi_{}", orgs.concat()),
        Strategy::Incremental => {
            let order = plan
                .order
                .as_ref()
                .ok_or_else(|| Error::InvalidOrder("incremental plan has no order".into()))?;
            if order.len() == 1 {
                format!("{}_Only", order[0])
            } else {
                format!("Incremental_{}", order.join("2"))
            }
        }
    })
}

/// Parses `G2M2F` style sequences. Ids may not contain `2`.
pub fn parse_order(spec: &str) -> Result<Vec<String>> {
    let order: Vec<String> = spec.split('2').map(str::to_string).collect();
    if order.iter().any(String::is_empty) {
        return Err(Error::InvalidOrder(format!("malformed sequence {spec:?}")));
    }
    Ok(order)
}

/// Token stream of a corpus: every file's bytes followed by end-of-text.
fn corpus_tokens(corpus: &OrgCorpus, mut on_read: impl FnMut(&str)) -> Vec<u32> {
    let mut out = Vec::with_capacity(corpus.total_bytes() + corpus.files.len());
    for f in &corpus.files {
        on_read(&f.path);
        out.extend(tokenize(&f.text));
        out.push(EOT);
    }
    out
}

fn stage_seed(seed: u64, stage: usize) -> u64 {
    seeds::derive(seed, "stage", &stage.to_string())
}

/// Trains one model on the union of all corpora, concatenated in the given order.
pub fn train_centralized(
    corpora: &[OrgCorpus],
    plan: &TrainPlan,
    arch: &ArchConfig,
    base: &TrainHyper,
    seed: u64,
) -> Result<ModelParams> {
    let data: Vec<u32> = corpora
        .iter()
        .flat_map(|c| corpus_tokens(c, |_| {}))
        .collect();
    if data.is_empty() {
        return Err(Error::EmptyDataset("centralized union is empty".into()));
    }
    let init = init_model(arch, seed)?;
    train(&init, &data, &plan.hyper(base), stage_seed(seed, 0))
}

/// `sum(w_i * theta_i) / sum(w_i)`.
pub fn aggregate_fedavg(clients: &[(&ModelParams, f64)]) -> Result<ModelParams> {
    let (first, _) = clients
        .first()
        .ok_or_else(|| Error::InvalidArgument("no clients to aggregate".into()))?;
    for (c, w) in clients {
        c.check()?;
        first.same_arch(c)?;
        if !(*w >= 0.0) || !w.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "client weight must be finite and >= 0, got {w}"
            )));
        }
    }
    // Summing in a canonical client order makes the result independent of the
    // input order bit for bit; summing offsets from one client makes identical
    // clients an exact fixed point.
    let mut sorted: Vec<&(&ModelParams, f64)> = clients.iter().collect();
    sorted.sort_by(|a, b| {
        a.1.total_cmp(&b.1).then_with(|| {
            a.0.weights
                .iter()
                .zip(&b.0.weights)
                .map(|(x, y)| x.total_cmp(y))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
        })
    });
    let total: f64 = sorted.iter().map(|(_, w)| w).sum();
    if total <= 0.0 {
        return Err(Error::ZeroWeights);
    }
    let base = &sorted[0].0.weights;
    let mut out = base.clone();
    for (i, o) in out.iter_mut().enumerate() {
        let shift: f64 = sorted
            .iter()
            .map(|(c, w)| w / total * (c.weights[i] - base[i]))
            .sum();
        *o += shift;
    }
    Ok(first.with_weights(out))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct YogiState {
    pub m: Vec<f64>,
    pub v: Vec<f64>,
    pub eta: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub tau: f64,
}

impl YogiState {
    pub fn new(param_count: usize, cfg: &YogiConfig) -> Self {
        Self {
            m: vec![0.0; param_count],
            v: vec![cfg.tau * cfg.tau; param_count],
            eta: cfg.eta,
            beta1: cfg.beta1,
            beta2: cfg.beta2,
            tau: cfg.tau,
        }
    }
}

fn sign(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// One Yogi server step on the aggregated client delta.
pub fn yogi_server_update(
    state: &YogiState,
    current: &ModelParams,
    delta: &[f64],
) -> Result<(ModelParams, YogiState)> {
    let n = current.weights.len();
    for len in [delta.len(), state.m.len(), state.v.len()] {
        if len != n {
            return Err(Error::ShapeMismatch {
                expected: n,
                actual: len,
            });
        }
    }
    let mut next = state.clone();
    let mut w = current.weights.clone();
    for i in 0..n {
        let d = delta[i];
        let d2 = d * d;
        next.m[i] = state.beta1 * state.m[i] + (1.0 - state.beta1) * d;
        next.v[i] = state.v[i] - (1.0 - state.beta2) * d2 * sign(state.v[i] - d2);
        w[i] += state.eta * next.m[i] / (next.v[i].sqrt() + state.tau);
    }
    Ok((current.with_weights(w), next))
}

/// A corpus file read by a federated client.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FileAccess {
    pub client: String,
    pub org: String,
    pub path: String,
}

/// Federated training; see [`train_federated_audited`].
pub fn train_federated(
    corpora: &[OrgCorpus],
    plan: &TrainPlan,
    arch: &ArchConfig,
    base: &TrainHyper,
    seed: u64,
) -> Result<ModelParams> {
    train_federated_audited(corpora, plan, arch, base, seed, &mut Vec::new())
}

/// Each round every client starts from the global weights and trains on its
/// own corpus with fresh optimizer state, seeded by `derive(seed, "round<r>",
/// org)`. The server then averages (FedAvg) or applies a Yogi step to the
/// averaged delta (FedYogi). Every file a client reads is appended to `log`.
pub fn train_federated_audited(
    corpora: &[OrgCorpus],
    plan: &TrainPlan,
    arch: &ArchConfig,
    base: &TrainHyper,
    seed: u64,
    log: &mut Vec<FileAccess>,
) -> Result<ModelParams> {
    if corpora.len() < 2 {
        return Err(Error::InvalidArgument(format!(
            "federated training needs at least 2 corpora, got {}",
            corpora.len()
        )));
    }
    if !matches!(plan.strategy, Strategy::Fedavg | Strategy::Fedyogi) {
        return Err(Error::InvalidArgument(format!(
            "{:?} is not a federated strategy",
            plan.strategy
        )));
    }
    if plan.rounds == 0 {
        return Err(Error::InvalidArgument("rounds must be >= 1".into()));
    }
    let hyper = plan.hyper(base);
    let data: Vec<Vec<u32>> = corpora
        .iter()
        .map(|c| {
            corpus_tokens(c, |path| {
                log.push(FileAccess {
                    client: c.org_id.clone(),
                    org: c.org_id.clone(),
                    path: path.to_string(),
                })
            })
        })
        .collect();
    let mut global = init_model(arch, seed)?;
    let mut yogi = YogiState::new(global.param_count, &plan.yogi);
    for round in 0..plan.rounds {
        let stage = format!("round{round}");
        let mut locals = Vec::with_capacity(corpora.len());
        for (c, tokens) in corpora.iter().zip(&data) {
            let local = train(
                &global,
                tokens,
                &hyper,
                seeds::derive(seed, &stage, &c.org_id),
            )?;
            let w = match plan.client_weights {
                ClientWeights::Uniform => 1.0,
                ClientWeights::BySize => tokens.len() as f64,
            };
            locals.push((local, w));
        }
        let refs: Vec<(&ModelParams, f64)> = locals.iter().map(|(p, w)| (p, *w)).collect();
        let avg = aggregate_fedavg(&refs)?;
        global = match plan.strategy {
            Strategy::Fedavg => avg,
            _ => {
                let delta: Vec<f64> = avg
                    .weights
                    .iter()
                    .zip(&global.weights)
                    .map(|(a, g)| a - g)
                    .collect();
                let (next, state) = yogi_server_update(&yogi, &global, &delta)?;
                yogi = state;
                next
            }
        };
        log::debug!("federated round {} of {} done", round + 1, plan.rounds);
    }
    Ok(global)
}

fn resolve_order<'a>(corpora: &'a [OrgCorpus], order: &[String]) -> Result<Vec<&'a OrgCorpus>> {
    if order.is_empty() {
        return Err(Error::InvalidOrder("empty order".into()));
    }
    let unique: BTreeSet<&String> = order.iter().collect();
    if unique.len() != order.len() {
        return Err(Error::InvalidOrder(format!(
            "repeated organization in {}",
            order.join("2")
        )));
    }
    order
        .iter()
        .map(|id| {
            corpora
                .iter()
                .find(|c| &c.org_id == id)
                .ok_or_else(|| Error::InvalidOrder(format!("unknown organization {id:?}")))
        })
        .collect()
}

/// Sequential fine-tuning over `plan.order`, returning the model after each stage.
pub fn train_incremental_stages(
    corpora: &[OrgCorpus],
    plan: &TrainPlan,
    arch: &ArchConfig,
    base: &TrainHyper,
    seed: u64,
) -> Result<Vec<ModelParams>> {
    let order = plan
        .order
        .as_deref()
        .ok_or_else(|| Error::InvalidOrder("incremental plan has no order".into()))?;
    let stages = resolve_order(corpora, order)?;
    let hyper = plan.hyper(base);
    let mut model = init_model(arch, seed)?;
    let mut out = Vec::with_capacity(stages.len());
    for (i, c) in stages.into_iter().enumerate() {
        let tokens = corpus_tokens(c, |_| {});
        model = train(&model, &tokens, &hyper, stage_seed(seed, i))?;
        out.push(model.clone());
    }
    Ok(out)
}

pub fn train_incremental(
    corpora: &[OrgCorpus],
    plan: &TrainPlan,
    arch: &ArchConfig,
    base: &TrainHyper,
    seed: u64,
) -> Result<ModelParams> {
    let mut stages = train_incremental_stages(corpora, plan, arch, base, seed)?;
    Ok(stages.pop().expect("order is nonempty"))
}

/// Dispatches on `plan.strategy`.
pub fn train_plan(
    corpora: &[OrgCorpus],
    plan: &TrainPlan,
    arch: &ArchConfig,
    base: &TrainHyper,
    seed: u64,
) -> Result<ModelParams> {
    match plan.strategy {
        Strategy::Centralized => train_centralized(corpora, plan, arch, base, seed),
        Strategy::Fedavg | Strategy::Fedyogi => train_federated(corpora, plan, arch, base, seed),
        Strategy::Incremental => train_incremental(corpora, plan, arch, base, seed),
    }
}

/// Stable content hash of a corpus, as 16 hex digits.
pub fn corpus_fingerprint(corpus: &OrgCorpus) -> String {
    let mut h = seeds::fnv1a(corpus.org_id.as_bytes());
    for f in &corpus.files {
        h = seeds::fnv1a_extend(h, &[0]);
        h = seeds::fnv1a_extend(h, f.path.as_bytes());
        h = seeds::fnv1a_extend(h, &[0]);
        h = seeds::fnv1a_extend(h, f.text.as_bytes());
    }
    format!("{h:016x}")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub name: String,
    pub plan: TrainPlan,
    pub seed: u64,
    pub corpus_fingerprints: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Default)]
pub struct ModelRegistry {
    entries: BTreeMap<String, (ModelParams, Provenance)>,
}

impl ModelRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    /// Trains `plan` and stores the result under its canonical name.
    pub fn train(
        &mut self,
        corpora: &[OrgCorpus],
        plan: &TrainPlan,
        arch: &ArchConfig,
        base: &TrainHyper,
        seed: u64,
    ) -> Result<String> {
        let orgs: Vec<&str> = corpora.iter().map(|c| c.org_id.as_str()).collect();
        let name = model_name(plan, &orgs)?;
        let params = train_plan(corpora, plan, arch, base, seed)?;
        let used: Vec<&OrgCorpus> = match &plan.order {
            Some(order) if plan.strategy == Strategy::Incremental => resolve_order(corpora, order)?,
            _ => corpora.iter().collect(),
        };
        let provenance = Provenance {
            name: name.clone(),
            plan: plan.clone(),
            seed,
            corpus_fingerprints: used
                .iter()
                .map(|c| (c.org_id.clone(), corpus_fingerprint(c)))
                .collect(),
        };
        self.insert(params, provenance);
        Ok(name)
    }

    pub fn insert(&mut self, params: ModelParams, provenance: Provenance) {
        self.entries
            .insert(provenance.name.clone(), (params, provenance));
    }

    pub fn get(&self, name: &str) -> Option<&ModelParams> {
        self.entries.get(name).map(|e| &e.0)
    }

    pub fn provenance(&self, name: &str) -> Option<&Provenance> {
        self.entries.get(name).map(|e| &e.1)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}
