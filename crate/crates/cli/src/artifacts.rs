//! Line-delimited artifacts under the output directory.
//!
//! Every `.jsonl` file starts with a header line carrying the config hash and
//! seed; all writes go through a temporary file and a rename.

use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Header {
    pub artifact: String,
    pub config_hash: String,
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub struct Store {
    root: PathBuf,
    config_hash: String,
    seed: u64,
}

/// Writes `bytes` to `path` via a sibling temporary file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> CliResult<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(|e| CliError::io(parent, e))?;
    }
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, bytes).map_err(|e| CliError::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| CliError::io(path, e))
}

impl Store {
    pub fn new(root: impl Into<PathBuf>, config_hash: impl Into<String>, seed: u64) -> Self {
        Self {
            root: root.into(),
            config_hash: config_hash.into(),
            seed,
        }
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn config_hash(&self) -> &str {
        &self.config_hash
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.root.join(name)
    }

    pub fn exists(&self, name: &str) -> bool {
        self.path(name).is_file()
    }

    fn header(&self, name: &str) -> Header {
        Header {
            artifact: name.to_string(),
            config_hash: self.config_hash.clone(),
            seed: self.seed,
        }
    }

    pub fn write_records<T: Serialize>(&self, name: &str, records: &[T]) -> CliResult<()> {
        let mut out = serde_json::to_string(&self.header(name)).expect("header serializes");
        out.push('\n');
        for r in records {
            out.push_str(&serde_json::to_string(r).map_err(|e| CliError::Malformed {
                path: self.path(name),
                message: e.to_string(),
            })?);
            out.push('\n');
        }
        write_atomic(&self.path(name), out.as_bytes())
    }

    /// Reads `name`, insisting it was written under the current config.
    /// `producer` is the subcommand that creates the artifact.
    pub fn read_records<T: DeserializeOwned>(
        &self,
        name: &str,
        producer: &'static str,
    ) -> CliResult<Vec<T>> {
        let path = self.path(name);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
                return Err(CliError::MissingArtifact { path, producer })
            }
            Err(e) => return Err(CliError::io(path, e)),
        };
        let malformed = |message: String| CliError::Malformed {
            path: path.clone(),
            message,
        };
        let mut lines = text.lines();
        let header: Header = lines
            .next()
            .ok_or_else(|| malformed("empty file".into()))
            .and_then(|l| serde_json::from_str(l).map_err(|e| malformed(format!("header: {e}"))))?;
        self.check_header(&path, &header, producer)?;
        lines
            .enumerate()
            .map(|(i, l)| {
                serde_json::from_str(l).map_err(|e| malformed(format!("line {}: {e}", i + 2)))
            })
            .collect()
    }

    pub fn check_header(
        &self,
        path: &Path,
        header: &Header,
        producer: &'static str,
    ) -> CliResult<()> {
        if header.config_hash != self.config_hash || header.seed != self.seed {
            return Err(CliError::StaleArtifact {
                path: path.to_path_buf(),
                found: format!("{} (seed {})", header.config_hash, header.seed),
                expected: format!("{} (seed {})", self.config_hash, self.seed),
                producer,
            });
        }
        Ok(())
    }

    pub fn write_text(&self, name: &str, text: &str) -> CliResult<()> {
        write_atomic(&self.path(name), text.as_bytes())
    }

    pub fn write_bytes(&self, name: &str, bytes: &[u8]) -> CliResult<()> {
        write_atomic(&self.path(name), bytes)
    }

    pub fn read_bytes(&self, name: &str, producer: &'static str) -> CliResult<Vec<u8>> {
        let path = self.path(name);
        fs::read(&path).map_err(|e| match e.kind() {
            std::io::ErrorKind::NotFound => CliError::MissingArtifact { path, producer },
            _ => CliError::io(self.path(name), e),
        })
    }

    /// File stems in `dir` ending in `suffix`, sorted.
    pub fn list(&self, dir: &str, suffix: &str) -> CliResult<Vec<String>> {
        let path = self.path(dir);
        let entries = match fs::read_dir(&path) {
            Ok(e) => e,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Vec::new()),
            Err(e) => return Err(CliError::io(path, e)),
        };
        let mut out = Vec::new();
        for entry in entries {
            let entry = entry.map_err(|e| CliError::io(&path, e))?;
            let name = entry.file_name().to_string_lossy().into_owned();
            if let Some(stem) = name.strip_suffix(suffix) {
                out.push(stem.to_string());
            }
        }
        out.sort();
        Ok(out)
    }
}
