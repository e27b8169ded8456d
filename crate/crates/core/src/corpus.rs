//! Per-organization corpora: ingestion from disk, quality filters,
//! train/validation splits and per-megabyte statistics.

use std::collections::BTreeSet;
use std::path::Path;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::clones::CloneBlock;
use crate::pysurface::count_surface;
use crate::{seeds, Error, Result};

/// Files whose alphanumeric share of code points is below this are dropped.
pub const MIN_ALNUM_FRACTION: f64 = 0.25;
/// Marker searched (case-insensitively) in the first lines of a file.
pub const AUTO_GENERATED_MARKER: &str = "auto-generated";
pub const AUTO_GENERATED_WINDOW: usize = 5;
/// Bytes per megabyte in every per-MB statistic.
pub const BYTES_PER_MB: f64 = (1u64 << 20) as f64;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourceFile {
    pub path: String,
    pub text: String,
    pub bytes: usize,
    pub lines: usize,
}

impl SourceFile {
    pub fn new(path: impl Into<String>, text: impl Into<String>) -> Self {
        let text = text.into();
        Self {
            path: path.into(),
            bytes: text.len(),
            lines: text.lines().count(),
            text,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Unsplit,
    Train,
    Validation,
}

/// One organization's files, always ordered lexicographically by path.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrgCorpus {
    pub org_id: String,
    pub files: Vec<SourceFile>,
    pub split: Split,
}

impl OrgCorpus {
    pub fn new(
        org_id: impl Into<String>,
        mut files: Vec<SourceFile>,
        split: Split,
    ) -> Result<Self> {
        let org_id = org_id.into();
        if org_id.is_empty() {
            return Err(Error::InvalidArgument("org_id must be nonempty".into()));
        }
        files.sort_by(|a, b| a.path.cmp(&b.path));
        if let Some(w) = files.windows(2).find(|w| w[0].path == w[1].path) {
            return Err(Error::InvalidArgument(format!(
                "duplicate path `{}` in corpus `{org_id}`",
                w[0].path
            )));
        }
        Ok(Self {
            org_id,
            files,
            split,
        })
    }

    pub fn total_bytes(&self) -> usize {
        self.files.iter().map(|f| f.bytes).sum()
    }

    pub fn total_lines(&self) -> usize {
        self.files.iter().map(|f| f.lines).sum()
    }

    pub fn paths(&self) -> BTreeSet<&str> {
        self.files.iter().map(|f| f.path.as_str()).collect()
    }

    fn derived(&self, files: Vec<SourceFile>, split: Split) -> OrgCorpus {
        OrgCorpus {
            org_id: self.org_id.clone(),
            files,
            split,
        }
    }
}

/// Why a file was skipped at ingestion or dropped by a filter.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkipRecord {
    pub path: String,
    pub reason: String,
}

/// Reads every regular file under `root_dir` whose name ends in `suffix`.
/// Unreadable and non-UTF-8 files become skip records instead of errors.
pub fn ingest(root_dir: &Path, org_id: &str, suffix: &str) -> Result<(OrgCorpus, Vec<SkipRecord>)> {
    if !root_dir.is_dir() {
        return Err(Error::MissingDirectory {
            path: root_dir.to_path_buf(),
        });
    }
    let mut files = Vec::new();
    let mut skipped = Vec::new();
    for entry in walkdir::WalkDir::new(root_dir).sort_by_file_name() {
        let entry = match entry {
            Ok(e) => e,
            Err(e) => {
                let path = e.path().map(|p| relative(root_dir, p)).unwrap_or_default();
                skipped.push(SkipRecord {
                    path,
                    reason: format!("unreadable: {e}"),
                });
                continue;
            }
        };
        if !entry.file_type().is_file() || !entry.file_name().to_string_lossy().ends_with(suffix) {
            continue;
        }
        let rel = relative(root_dir, entry.path());
        match std::fs::read(entry.path()) {
            Ok(bytes) => match String::from_utf8(bytes) {
                Ok(text) => files.push(SourceFile::new(rel, text)),
                Err(_) => {
                    log::warn!("skipping {rel}: not valid UTF-8");
                    skipped.push(SkipRecord {
                        path: rel,
                        reason: "invalid_utf8".into(),
                    });
                }
            },
            Err(e) => skipped.push(SkipRecord {
                path: rel,
                reason: format!("unreadable: {e}"),
            }),
        }
    }
    Ok((OrgCorpus::new(org_id, files, Split::Unsplit)?, skipped))
}

fn relative(root: &Path, path: &Path) -> String {
    let rel = path.strip_prefix(root).unwrap_or(path);
    rel.components()
        .map(|c| c.as_os_str().to_string_lossy())
        .collect::<Vec<_>>()
        .join("/")
}

/// Share of Unicode-alphanumeric code points among all code points; an empty
/// text has fraction 0.
pub fn alnum_fraction(text: &str) -> f64 {
    let (mut alnum, mut total) = (0usize, 0usize);
    for c in text.chars() {
        total += 1;
        if c.is_alphanumeric() {
            alnum += 1;
        }
    }
    if total == 0 {
        0.0
    } else {
        alnum as f64 / total as f64
    }
}

pub fn looks_auto_generated(text: &str) -> bool {
    text.split('\n')
        .take(AUTO_GENERATED_WINDOW)
        .any(|line| line.to_lowercase().contains(AUTO_GENERATED_MARKER))
}

/// Applies the quality filters. Kept files are untouched.
pub fn filter_files(corpus: &OrgCorpus) -> Result<(OrgCorpus, Vec<SkipRecord>)> {
    if corpus.split != Split::Unsplit {
        return Err(Error::InvalidArgument(
            "filters apply to unsplit corpora only".into(),
        ));
    }
    let mut kept = Vec::new();
    let mut dropped = Vec::new();
    for file in &corpus.files {
        let reason = if alnum_fraction(&file.text) < MIN_ALNUM_FRACTION {
            Some("alnum_fraction")
        } else if looks_auto_generated(&file.text) {
            Some("auto_generated")
        } else {
            None
        };
        match reason {
            Some(r) => dropped.push(SkipRecord {
                path: file.path.clone(),
                reason: r.into(),
            }),
            None => kept.push(file.clone()),
        }
    }
    Ok((corpus.derived(kept, Split::Unsplit), dropped))
}

/// Seeded shuffle, then the first `ceil(fraction * N)` files train. The train
/// count is clamped to `[1, N-1]` so both sides are nonempty.
pub fn split(corpus: &OrgCorpus, train_fraction: f64, seed: u64) -> Result<(OrgCorpus, OrgCorpus)> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "train_fraction {train_fraction} must lie in (0, 1)"
        )));
    }
    let n = corpus.files.len();
    if n < 2 {
        return Err(Error::TooFewFiles {
            org: corpus.org_id.clone(),
            files: n,
        });
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut seeds::derived_rng(seed, "split", &corpus.org_id));
    let n_train = ((train_fraction * n as f64).ceil() as usize).clamp(1, n - 1);
    let pick = |idx: &[usize]| {
        let mut files: Vec<SourceFile> = idx.iter().map(|&i| corpus.files[i].clone()).collect();
        files.sort_by(|a, b| a.path.cmp(&b.path));
        files
    };
    Ok((
        corpus.derived(pick(&order[..n_train]), Split::Train),
        corpus.derived(pick(&order[n_train..]), Split::Validation),
    ))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsRecord {
    pub loc_per_mb: f64,
    pub classes_per_mb: f64,
    pub funcs_per_mb: f64,
    pub docs_per_mb: f64,
    pub clone_blocks_per_mb: f64,
    pub clone_loc_per_mb: f64,
}

/// Per-megabyte statistics. `clones` must come from this corpus alone; clone
/// LOC counts every occurrence of every block.
pub fn per_mb_stats(corpus: &OrgCorpus, clones: &[CloneBlock]) -> Result<StatsRecord> {
    let bytes = corpus.total_bytes();
    if bytes == 0 {
        return Err(Error::EmptyCorpus(corpus.org_id.clone()));
    }
    let mb = bytes as f64 / BYTES_PER_MB;
    let (mut classes, mut funcs, mut docs) = (0usize, 0usize, 0usize);
    for file in &corpus.files {
        let (c, f, d) = count_surface(file);
        classes += c;
        funcs += f;
        docs += d;
    }
    let clone_loc: usize = clones
        .iter()
        .map(|b| b.line_count * b.occurrences.len())
        .sum();
    Ok(StatsRecord {
        loc_per_mb: corpus.total_lines() as f64 / mb,
        classes_per_mb: classes as f64 / mb,
        funcs_per_mb: funcs as f64 / mb,
        docs_per_mb: docs as f64 / mb,
        clone_blocks_per_mb: clones.len() as f64 / mb,
        clone_loc_per_mb: clone_loc as f64 / mb,
    })
}
