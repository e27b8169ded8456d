//! Type-1 clone detection over normalized lines.
//!
//! Lines are trimmed and blank lines dropped; every distinct line is interned
//! to an integer and each file becomes a run of ids closed by a separator
//! unique to that file. A clone block is a *maximal repeat* of that sequence:
//! a run of at least `min_lines` ids together with every site where it occurs,
//! such that the run cannot be extended one line left, or one line right, at
//! all of its sites at once. Blocks are enumerated from the lcp-intervals of a
//! suffix array, so nested repeats with different occurrence sets are each
//! reported once.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::corpus::{OrgCorpus, SourceFile};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CloneConfig {
    pub min_lines: usize,
}

impl Default for CloneConfig {
    fn default() -> Self {
        Self { min_lines: 6 }
    }
}

impl CloneConfig {
    pub fn new(min_lines: usize) -> Result<Self> {
        let cfg = Self { min_lines };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.min_lines < 2 {
            return Err(Error::InvalidArgument(format!(
                "min_lines must be >= 2, got {}",
                self.min_lines
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Occurrence {
    pub source: String,
    pub path: String,
    /// 1-based line number of the block's first line in the original text.
    pub start_line: usize,
    /// 1-based line number of the block's last line in the original text.
    #[serde(skip)]
    pub end_line: usize,
    /// Offset of the first line within the file's normalized lines.
    #[serde(skip)]
    pub index: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CloneBlock {
    pub line_count: usize,
    pub occurrences: Vec<Occurrence>,
    #[serde(rename = "lines")]
    pub normalized_lines: Vec<String>,
    /// Untrimmed text of each block line at the first occurrence.
    #[serde(skip)]
    pub raw_lines: Vec<String>,
}

impl CloneBlock {
    pub fn sources(&self) -> impl Iterator<Item = &str> {
        self.occurrences.iter().map(|o| o.source.as_str())
    }
}

/// One side of a clone comparison: a labelled set of files.
#[derive(Debug, Clone, Copy)]
pub struct CloneSource<'a> {
    pub id: &'a str,
    pub files: &'a [SourceFile],
}

impl<'a> From<&'a OrgCorpus> for CloneSource<'a> {
    fn from(c: &'a OrgCorpus) -> Self {
        Self {
            id: &c.org_id,
            files: &c.files,
        }
    }
}

/// Trimmed, non-blank lines of `text`.
pub fn normalize_lines(text: &str) -> Vec<String> {
    numbered_lines(text).map(|(_, l)| l.to_string()).collect()
}

/// Trimmed non-blank lines with their original 1-based line numbers and raw text.
pub fn numbered_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.split('\n')
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty())
}

struct Site {
    source: usize,
    file: usize,
    index: usize,
}

/// Suffix array by prefix doubling over an integer sequence.
fn suffix_array(seq: &[u32]) -> Vec<usize> {
    let n = seq.len();
    let mut sa: Vec<usize> = (0..n).collect();
    let mut rank: Vec<usize> = seq.iter().map(|&x| x as usize).collect();
    let mut tmp = vec![0usize; n];
    if n <= 1 {
        return sa;
    }
    let mut k = 1;
    loop {
        let key = |i: usize, rank: &[usize]| (rank[i], if i + k < n { rank[i + k] + 1 } else { 0 });
        sa.sort_unstable_by_key(|&i| key(i, &rank));
        tmp[sa[0]] = 0;
        for w in 1..n {
            let bump = usize::from(key(sa[w - 1], &rank) != key(sa[w], &rank));
            tmp[sa[w]] = tmp[sa[w - 1]] + bump;
        }
        std::mem::swap(&mut rank, &mut tmp);
        if rank[sa[n - 1]] == n - 1 {
            break;
        }
        k *= 2;
    }
    sa
}

/// Kasai: `lcp[i]` is the common prefix length of suffixes `sa[i-1]` and `sa[i]`.
fn lcp_array(seq: &[u32], sa: &[usize]) -> Vec<usize> {
    let n = seq.len();
    let mut rank = vec![0usize; n];
    for (i, &s) in sa.iter().enumerate() {
        rank[s] = i;
    }
    let mut lcp = vec![0usize; n];
    let mut h = 0usize;
    for i in 0..n {
        if rank[i] > 0 {
            let j = sa[rank[i] - 1];
            while i + h < n && j + h < n && seq[i + h] == seq[j + h] {
                h += 1;
            }
            lcp[rank[i]] = h;
            h = h.saturating_sub(1);
        } else {
            h = 0;
        }
    }
    lcp
}

/// Every maximal repeat of at least `cfg.min_lines` normalized lines, sorted
/// by descending length, then by first occurrence.
pub fn detect_clones(sources: &[CloneSource<'_>], cfg: &CloneConfig) -> Result<Vec<CloneBlock>> {
    cfg.validate()?;
    let mut intern: HashMap<&str, u32> = HashMap::new();
    let mut lines: Vec<&str> = Vec::new();
    let mut numbered: Vec<Vec<(usize, &str)>> = Vec::new();
    let mut raw: Vec<Vec<&str>> = Vec::new();
    let mut file_meta: Vec<(usize, usize)> = Vec::new();
    let mut seq: Vec<u32> = Vec::new();
    let mut sites: Vec<Option<Site>> = Vec::new();

    for (si, src) in sources.iter().enumerate() {
        for (fi, file) in src.files.iter().enumerate() {
            let raw_file: Vec<&str> = file.text.split('\n').collect();
            let nl: Vec<(usize, &str)> = numbered_lines(&file.text).collect();
            for (idx, &(_, text)) in nl.iter().enumerate() {
                let next = lines.len() as u32;
                let id = *intern.entry(text).or_insert_with(|| {
                    lines.push(text);
                    next
                });
                seq.push(id);
                sites.push(Some(Site {
                    source: si,
                    file: fi,
                    index: idx,
                }));
            }
            // Placeholder; separators are renumbered past the line ids below.
            seq.push(u32::MAX);
            sites.push(None);
            numbered.push(nl);
            raw.push(raw_file);
            file_meta.push((si, fi));
        }
    }
    for (s, sep) in seq
        .iter_mut()
        .filter(|s| **s == u32::MAX)
        .zip(lines.len() as u32..)
    {
        *s = sep;
    }
    if seq.is_empty() {
        return Ok(Vec::new());
    }

    let file_of = {
        let mut lookup = HashMap::new();
        for (k, &(si, fi)) in file_meta.iter().enumerate() {
            lookup.insert((si, fi), k);
        }
        lookup
    };

    let sa = suffix_array(&seq);
    let lcp = lcp_array(&seq, &sa);
    let n = seq.len();
    let min = cfg.min_lines;
    let is_sep = |x: u32| x as usize >= lines.len();

    let mut blocks = Vec::new();
    let mut emit = |len: usize, lb: usize, rb: usize| {
        let positions = &sa[lb..=rb];
        let mut left: Option<u32> = None;
        let mut left_diverse = false;
        for &p in positions {
            if p == 0 || is_sep(seq[p - 1]) {
                left_diverse = true;
                break;
            }
            match left {
                None => left = Some(seq[p - 1]),
                Some(c) if c != seq[p - 1] => {
                    left_diverse = true;
                    break;
                }
                _ => {}
            }
        }
        if !left_diverse {
            return;
        }
        let mut occ: Vec<(usize, Occurrence)> = positions
            .iter()
            .map(|&p| {
                let site = sites[p]
                    .as_ref()
                    .expect("repeats never start on a separator");
                let src = &sources[site.source];
                let file = &src.files[site.file];
                let nl = &numbered[file_of[&(site.source, site.file)]];
                (
                    site.source,
                    Occurrence {
                        source: src.id.to_string(),
                        path: file.path.clone(),
                        start_line: nl[site.index].0,
                        end_line: nl[site.index + len - 1].0,
                        index: site.index,
                    },
                )
            })
            .collect();
        occ.sort_by(|a, b| (a.0, &a.1.path, a.1.index).cmp(&(b.0, &b.1.path, b.1.index)));
        let first = &occ[0];
        let first_site = positions
            .iter()
            .map(|&p| sites[p].as_ref().unwrap())
            .find(|s| {
                s.source == first.0
                    && sources[s.source].files[s.file].path == first.1.path
                    && s.index == first.1.index
            })
            .unwrap();
        let k = file_of[&(first_site.source, first_site.file)];
        let nl = &numbered[k];
        let raw_lines = nl[first_site.index..first_site.index + len]
            .iter()
            .map(|&(line_no, _)| raw[k][line_no - 1].trim_end_matches('\r').to_string())
            .collect();
        let p0 = positions[0];
        blocks.push((
            occ.iter().map(|o| o.0).collect::<Vec<_>>(),
            CloneBlock {
                line_count: len,
                occurrences: occ.into_iter().map(|o| o.1).collect(),
                normalized_lines: seq[p0..p0 + len]
                    .iter()
                    .map(|&id| lines[id as usize].to_string())
                    .collect(),
                raw_lines,
            },
        ));
    };

    // Bottom-up traversal of lcp-intervals.
    let mut stack: Vec<(usize, usize)> = vec![(0, 0)];
    for i in 1..=n {
        let cur = if i < n { lcp[i] } else { 0 };
        let mut lb = i - 1;
        while cur < stack.last().unwrap().0 {
            let (len, start) = stack.pop().unwrap();
            if len >= min {
                emit(len, start, i - 1);
            }
            lb = start;
        }
        if cur > stack.last().unwrap().0 {
            stack.push((cur, lb));
        }
    }

    blocks.sort_by(|(sa_, a), (sb_, b)| {
        b.line_count.cmp(&a.line_count).then_with(|| {
            let ka = a
                .occurrences
                .iter()
                .zip(sa_)
                .map(|(o, s)| (*s, &o.path, o.index));
            let kb = b
                .occurrences
                .iter()
                .zip(sb_)
                .map(|(o, s)| (*s, &o.path, o.index));
            ka.cmp(kb)
        })
    });
    Ok(blocks.into_iter().map(|(_, b)| b).collect())
}

/// Blocks shared by at least two organizations.
pub fn cross_org_clones(corpora: &[OrgCorpus], cfg: &CloneConfig) -> Result<Vec<CloneBlock>> {
    if corpora.len() < 2 {
        return Err(Error::InvalidArgument(format!(
            "cross-org detection needs at least 2 corpora, got {}",
            corpora.len()
        )));
    }
    let sources: Vec<CloneSource<'_>> = corpora.iter().map(CloneSource::from).collect();
    let mut blocks = detect_clones(&sources, cfg)?;
    blocks.retain(|b| {
        let first = &b.occurrences[0].source;
        b.occurrences.iter().any(|o| &o.source != first)
    });
    Ok(blocks)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn file(path: &str, lines: &[&str]) -> SourceFile {
        SourceFile::new(path, lines.join("\n"))
    }

    #[test]
    fn normalization() {
        assert_eq!(normalize_lines("a\n\n  b  \n"), vec!["a", "b"]);
        assert!(normalize_lines("").is_empty());
        assert_eq!(normalize_lines("x = 1\nx = 1"), vec!["x = 1", "x = 1"]);
    }

    #[test]
    fn two_files_sharing_eight_lines() {
        let shared: Vec<String> = (0..8).map(|i| format!("line_{i}()")).collect();
        let shared: Vec<&str> = shared.iter().map(|s| s.as_str()).collect();
        let mut a = vec!["head_a"];
        a.extend(&shared);
        let mut b = shared.clone();
        b.push("tail_b");
        let files = vec![file("a.py", &a), file("b.py", &b)];
        let blocks = detect_clones(
            &[CloneSource {
                id: "o",
                files: &files,
            }],
            &CloneConfig::default(),
        )
        .unwrap();
        assert_eq!(blocks.len(), 1);
        assert_eq!(blocks[0].line_count, 8);
        assert_eq!(blocks[0].occurrences.len(), 2);
        assert_eq!(blocks[0].occurrences[0].path, "a.py");
        assert_eq!(blocks[0].occurrences[0].start_line, 2);
        assert_eq!(blocks[0].occurrences[1].start_line, 1);
    }

    #[test]
    fn five_shared_lines_are_below_threshold() {
        let files = vec![
            file("a.py", &["1", "2", "3", "4", "5", "a"]),
            file("b.py", &["1", "2", "3", "4", "5", "b"]),
        ];
        let blocks = detect_clones(
            &[CloneSource {
                id: "o",
                files: &files,
            }],
            &CloneConfig::default(),
        )
        .unwrap();
        assert!(blocks.is_empty());
    }

    #[test]
    fn repeated_paragraph_in_one_file() {
        let para = ["p1", "p2", "p3", "p4", "p5", "p6"];
        let mut lines = vec!["start"];
        lines.extend(para);
        lines.push("middle");
        lines.extend(para);
        let files = vec![file("one.py", &lines)];
        let blocks = detect_clones(
            &[CloneSource {
                id: "o",
                files: &files,
            }],
            &CloneConfig::default(),
        )
        .unwrap();
        assert_eq!(blocks.len(), 1);
        let b = &blocks[0];
        assert_eq!(b.line_count, 6);
        assert_eq!(
            b.occurrences
                .iter()
                .map(|o| (o.path.as_str(), o.start_line))
                .collect::<Vec<_>>(),
            vec![("one.py", 2), ("one.py", 9)]
        );
    }

    #[test]
    fn blank_lines_are_invisible_but_numbered() {
        let files = vec![
            SourceFile::new("a.py", "a\n\nb\n  c\nd"),
            SourceFile::new("b.py", "x\na\nb\n\n\nc\nd\n"),
        ];
        let blocks = detect_clones(
            &[CloneSource {
                id: "o",
                files: &files,
            }],
            &CloneConfig::new(3).unwrap(),
        )
        .unwrap();
        assert_eq!(blocks.len(), 1);
        let o = &blocks[0].occurrences;
        assert_eq!((o[0].start_line, o[0].end_line), (1, 5));
        assert_eq!((o[1].start_line, o[1].end_line), (2, 7));
        assert_eq!(blocks[0].raw_lines, vec!["a", "b", "  c", "d"]);
    }

    #[test]
    fn cross_org_filtering() {
        let block: Vec<String> = (0..10).map(|i| format!("shared {i}")).collect();
        let block: Vec<&str> = block.iter().map(|s| s.as_str()).collect();
        let mut a_text = vec!["only a"];
        a_text.extend(&block);
        let a = OrgCorpus::new(
            "A",
            vec![file("x.py", &a_text)],
            crate::corpus::Split::Train,
        )
        .unwrap();
        let b =
            OrgCorpus::new("B", vec![file("y.py", &block)], crate::corpus::Split::Train).unwrap();
        let blocks = cross_org_clones(&[a.clone(), b], &CloneConfig::default()).unwrap();
        assert_eq!(blocks.len(), 1);
        assert_eq!(blocks[0].sources().collect::<Vec<_>>(), vec!["A", "B"]);

        let internal = vec![file("p.py", &block), file("q.py", &block)];
        let a2 = OrgCorpus::new("A", internal, crate::corpus::Split::Train).unwrap();
        let c = OrgCorpus::new(
            "C",
            vec![file("z.py", &["nothing", "shared"])],
            crate::corpus::Split::Train,
        )
        .unwrap();
        assert!(cross_org_clones(&[a2, c], &CloneConfig::default())
            .unwrap()
            .is_empty());
        assert!(cross_org_clones(&[a], &CloneConfig::default()).is_err());
    }

    #[test]
    fn min_lines_below_two_is_invalid() {
        assert!(CloneConfig::new(1).is_err());
    }
}
