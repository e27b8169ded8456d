//! Indentation-level parsing of Python source: function spans, docstrings,
//! class counts, and the extraction prompts built from them.

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::clones::CloneBlock;
use crate::corpus::{OrgCorpus, SourceFile};
use crate::{seeds, Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionRecord {
    /// From `def`/`async def` through the `:` closing the header.
    pub signature: String,
    /// Verbatim literal, quotes and prefix included.
    pub docstring: Option<String>,
    pub body: String,
    pub path: String,
    pub start_line: usize,
    /// Verbatim source from `def` through the docstring (or the header when
    /// undocumented), plus the newline that follows it.
    pub header: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PromptKind {
    Function,
    ClonePrefix,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prompt {
    pub id: String,
    pub kind: PromptKind,
    #[serde(rename = "org")]
    pub origin_org: String,
    pub text: String,
    pub token_len: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected_suffix: Option<String>,
}

impl Prompt {
    fn new(
        id: String,
        kind: PromptKind,
        origin_org: &str,
        text: String,
        expected_suffix: Option<String>,
    ) -> Self {
        Self {
            id,
            kind,
            origin_org: origin_org.to_string(),
            token_len: text.len(),
            text,
            expected_suffix,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Str {
    Code,
    Single(u8),
    Triple(u8),
}

/// Scans one line from `state`. `on_code` sees every byte outside strings and
/// comments and may stop the scan by returning true.
fn scan(
    line: &[u8],
    mut state: Str,
    mut on_code: impl FnMut(usize, u8) -> bool,
) -> (Str, Option<usize>) {
    let mut i = 0;
    while i < line.len() {
        let b = line[i];
        match state {
            Str::Code => {
                if b == b'#' {
                    break;
                }
                if b == b'"' || b == b'\'' {
                    if line[i..].starts_with(&[b, b, b]) {
                        state = Str::Triple(b);
                        i += 3;
                    } else {
                        state = Str::Single(b);
                        i += 1;
                    }
                    continue;
                }
                if on_code(i, b) {
                    return (state, Some(i));
                }
            }
            Str::Single(q) => {
                if b == b'\\' {
                    i += 2;
                    continue;
                }
                if b == q {
                    state = Str::Code;
                }
            }
            Str::Triple(q) => {
                if b == b'\\' {
                    i += 2;
                    continue;
                }
                if line[i..].starts_with(&[q, q, q]) {
                    state = Str::Code;
                    i += 3;
                    continue;
                }
            }
        }
        i += 1;
    }
    if let Str::Single(_) = state {
        if !line.ends_with(b"\\") {
            state = Str::Code;
        }
    }
    (state, None)
}

/// End offset (exclusive) of a string literal starting at `s[0]`, if any.
fn string_literal_len(s: &[u8]) -> Option<usize> {
    let mut i = 0;
    while i < s.len() && i < 2 && matches!(s[i], b'r' | b'R' | b'u' | b'U') {
        i += 1;
    }
    let q = *s.get(i)?;
    if q != b'"' && q != b'\'' {
        return None;
    }
    let triple = s[i..].starts_with(&[q, q, q]);
    i += if triple { 3 } else { 1 };
    while i < s.len() {
        let b = s[i];
        if b == b'\\' {
            i += 2;
            continue;
        }
        if triple {
            if s[i..].starts_with(&[q, q, q]) {
                return Some(i + 3);
            }
        } else if b == q {
            return Some(i + 1);
        } else if b == b'\n' {
            return None;
        }
        i += 1;
    }
    None
}

fn indent_width(line: &str) -> usize {
    let mut w = 0;
    for c in line.chars() {
        match c {
            ' ' => w += 1,
            '\t' => w = (w / 8 + 1) * 8,
            _ => break,
        }
    }
    w
}

fn is_neutral(line: &str) -> bool {
    let t = line.trim();
    t.is_empty() || t.starts_with('#')
}

fn is_def(stripped: &str) -> bool {
    let def = |s: &str| s.starts_with("def ") || s.starts_with("def\t");
    if def(stripped) {
        return true;
    }
    stripped.strip_prefix("async").is_some_and(|rest| {
        let after = rest.trim_start_matches([' ', '\t']);
        after.len() < rest.len() && def(after)
    })
}

struct Lines<'a> {
    text: &'a str,
    lines: Vec<&'a str>,
    offsets: Vec<usize>,
    starts_in_string: Vec<bool>,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let lines: Vec<&str> = text.split('\n').collect();
        let mut offsets = Vec::with_capacity(lines.len());
        let mut off = 0;
        for l in &lines {
            offsets.push(off);
            off += l.len() + 1;
        }
        let mut state = Str::Code;
        let mut starts_in_string = Vec::with_capacity(lines.len());
        for l in &lines {
            starts_in_string.push(state != Str::Code);
            state = scan(l.as_bytes(), state, |_, _| false).0;
        }
        Self {
            text,
            lines,
            offsets,
            starts_in_string,
        }
    }

    fn code_line(&self, i: usize) -> bool {
        !self.starts_in_string[i]
    }

    fn line_of(&self, offset: usize) -> usize {
        self.offsets.partition_point(|&o| o <= offset) - 1
    }

    /// Offset of the `:` ending a def header that starts at `line`.
    fn header_colon(&self, line: usize) -> Option<usize> {
        let mut depth = 0i64;
        let mut state = Str::Code;
        for j in line..self.lines.len() {
            let (next, hit) = scan(self.lines[j].as_bytes(), state, |_, b| {
                match b {
                    b'(' | b'[' | b'{' => depth += 1,
                    b')' | b']' | b'}' => depth -= 1,
                    b':' if depth <= 0 => return true,
                    _ => {}
                }
                false
            });
            if let Some(i) = hit {
                return Some(self.offsets[j] + i);
            }
            state = next;
        }
        None
    }

    fn function_at(&self, i: usize, path: &str) -> Option<FunctionRecord> {
        let line = self.lines[i];
        let stripped = line.trim_start();
        if !is_def(stripped) {
            return None;
        }
        let def_indent = indent_width(line);
        let start = self.offsets[i] + (line.len() - stripped.len());
        let colon = self.header_colon(i)?;
        let sig_end_line = self.line_of(colon);
        let signature = &self.text[start..=colon];
        let line_end = self.offsets[sig_end_line] + self.lines[sig_end_line].len();
        let rest = &self.text[colon + 1..line_end];

        if !is_neutral(rest) {
            let body = rest.trim();
            let docstring = string_literal_len(body.as_bytes())
                .filter(|&n| is_neutral(&body[n..]))
                .map(|n| body[..n].to_string());
            let header_end = match &docstring {
                Some(d) => colon + 1 + (rest.len() - rest.trim_start().len()) + d.len(),
                None => colon + 1,
            };
            return Some(FunctionRecord {
                signature: signature.to_string(),
                body: match &docstring {
                    Some(d) => body[d.len()..].trim().to_string(),
                    None => body.to_string(),
                },
                docstring,
                path: path.to_string(),
                start_line: i + 1,
                header: self.header(start, header_end),
            });
        }

        let mut last_content = None;
        for j in sig_end_line + 1..self.lines.len() {
            if self.starts_in_string[j] {
                last_content = Some(j);
                continue;
            }
            let l = self.lines[j];
            if is_neutral(l) {
                continue;
            }
            if indent_width(l) > def_indent {
                last_content = Some(j);
            } else {
                break;
            }
        }
        let Some(last) = last_content else {
            return Some(FunctionRecord {
                signature: signature.to_string(),
                docstring: None,
                body: String::new(),
                path: path.to_string(),
                start_line: i + 1,
                header: self.header(start, colon + 1),
            });
        };
        let first = (sig_end_line + 1..=last).find(|&j| !is_neutral(self.lines[j]))?;
        let first_line = self.lines[first];
        let lit_start = self.offsets[first] + (first_line.len() - first_line.trim_start().len());
        let docstring = string_literal_len(&self.text.as_bytes()[lit_start..])
            .map(|n| (lit_start, lit_start + n))
            .filter(|&(_, end)| {
                let l = self.line_of(end - 1);
                let eol = self.offsets[l] + self.lines[l].len();
                is_neutral(&self.text[end..eol])
            });
        let (body_from, header_end, doc) = match docstring {
            Some((s, e)) => (
                self.line_of(e - 1) + 1,
                e,
                Some(self.text[s..e].to_string()),
            ),
            None => (sig_end_line + 1, colon + 1, None),
        };
        let body = if body_from <= last {
            self.lines[body_from..=last].join("\n")
        } else {
            String::new()
        };
        Some(FunctionRecord {
            signature: signature.to_string(),
            docstring: doc,
            body,
            path: path.to_string(),
            start_line: i + 1,
            header: self.header(start, header_end),
        })
    }

    fn header(&self, start: usize, end: usize) -> String {
        let end = if self.text[end..].starts_with('\n') {
            end + 1
        } else {
            end
        };
        self.text[start..end].to_string()
    }
}

/// Every `def`/`async def` in `file`, nested ones included, in line order.
pub fn extract_functions(file: &SourceFile) -> Vec<FunctionRecord> {
    let lines = Lines::new(&file.text);
    (0..lines.lines.len())
        .filter(|&i| lines.code_line(i))
        .filter_map(|i| lines.function_at(i, &file.path))
        .collect()
}

/// `(classes, functions, documented functions)` for one file.
pub fn count_surface(file: &SourceFile) -> (usize, usize, usize) {
    let lines = Lines::new(&file.text);
    let classes = (0..lines.lines.len())
        .filter(|&i| lines.code_line(i))
        .filter(|&i| {
            let t = lines.lines[i].trim_start();
            t.strip_prefix("class")
                .is_some_and(|r| r.starts_with([' ', '\t']))
        })
        .count();
    let funcs = extract_functions(file);
    let docs = funcs.iter().filter(|f| f.docstring.is_some()).count();
    (classes, funcs.len(), docs)
}

/// One prompt per documented function whose header fits in `prompt_cap` bytes.
/// The text is the verbatim source from `def` to the closing docstring quotes,
/// followed by the newline that ends that line in the source.
pub fn build_function_prompts(corpus: &OrgCorpus, prompt_cap: usize) -> Vec<Prompt> {
    let mut out = Vec::new();
    for file in &corpus.files {
        for f in extract_functions(file) {
            if f.docstring.is_none() {
                continue;
            }
            let text = f.header;
            if text.len() > prompt_cap {
                continue;
            }
            let id = format!("{}/{}:{}", corpus.org_id, f.path, f.start_line);
            out.push(Prompt::new(
                id,
                PromptKind::Function,
                &corpus.org_id,
                text,
                None,
            ));
        }
    }
    out
}

/// `round(fraction * N)` with halves rounded up.
pub fn sample_size(n: usize, fraction: f64) -> usize {
    ((fraction * n as f64) + 0.5).floor() as usize
}

/// A seeded uniform subset of `sample_size(N, fraction)` prompts, kept in input order.
pub fn sample_prompts(prompts: &[Prompt], fraction: f64, seed: u64) -> Result<Vec<Prompt>> {
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "sample fraction must lie in (0, 1], got {fraction}"
        )));
    }
    let k = sample_size(prompts.len(), fraction).min(prompts.len());
    let mut idx: Vec<usize> = (0..prompts.len()).collect();
    idx.shuffle(&mut seeds::derived_rng(seed, "prompts", "sample"));
    let mut chosen = idx[..k].to_vec();
    chosen.sort_unstable();
    Ok(chosen.into_iter().map(|i| prompts[i].clone()).collect())
}

fn block_text(lines: &[String]) -> String {
    let mut s = lines.join("\n");
    s.push('\n');
    s
}

/// `n` lines cut into `parts` consecutive runs whose sizes differ by at most one.
fn even_chunks(n: usize, parts: usize) -> Vec<std::ops::Range<usize>> {
    let base = n / parts;
    let extra = n % parts;
    let mut start = 0;
    (0..parts)
        .map(|p| {
            let len = base + usize::from(p < extra);
            let r = start..start + len;
            start += len;
            r
        })
        .collect()
}

/// Prefix prompts from clone blocks: the first `ceil(n/2)` lines as the prompt
/// and the rest as the expected suffix. Blocks whose prefix exceeds the cap are
/// cut into the fewest equal runs (each at least two lines) whose prefixes fit;
/// runs that still do not fit are dropped.
pub fn build_clone_prefix_prompts(blocks: &[CloneBlock], prompt_cap: usize) -> Vec<Prompt> {
    let mut out = Vec::new();
    for (b, block) in blocks.iter().enumerate() {
        let lines = if block.raw_lines.len() == block.line_count {
            &block.raw_lines
        } else {
            &block.normalized_lines
        };
        let n = lines.len();
        if n < 2 {
            continue;
        }
        let org = block.occurrences.first().map_or("", |o| o.source.as_str());
        let split = |r: &std::ops::Range<usize>| {
            let mid = r.start + (r.len()).div_ceil(2);
            (
                block_text(&lines[r.start..mid]),
                block_text(&lines[mid..r.end]),
            )
        };
        let max_parts = n / 2;
        let mut parts = 1;
        let chunks = loop {
            let chunks = even_chunks(n, parts);
            if parts == max_parts || chunks.iter().all(|r| split(r).0.len() <= prompt_cap) {
                break chunks;
            }
            parts += 1;
        };
        for (p, r) in chunks.iter().enumerate() {
            let (prefix, suffix) = split(r);
            if prefix.len() > prompt_cap {
                continue;
            }
            let id = format!("clone{b}.{p}");
            out.push(Prompt::new(
                id,
                PromptKind::ClonePrefix,
                org,
                prefix,
                Some(suffix),
            ));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clones::Occurrence;
    use crate::corpus::Split;

    fn sf(text: &str) -> SourceFile {
        SourceFile::new("m.py", text)
    }

    #[test]
    fn single_documented_function() {
        let f = extract_functions(&sf(
            "def f(x):\n    \"\"\"Doc.\n    more\n    \"\"\"\n    y = x\n    return y\n",
        ));
        assert_eq!(f.len(), 1);
        assert_eq!(f[0].signature, "def f(x):");
        assert_eq!(
            f[0].docstring.as_deref(),
            Some("\"\"\"Doc.\n    more\n    \"\"\"")
        );
        assert_eq!(f[0].body, "    y = x\n    return y");
        assert_eq!(f[0].start_line, 1);
    }

    #[test]
    fn one_liner_without_docstring() {
        let f = extract_functions(&sf("def g(): ...\nx = 1\n"));
        assert_eq!(f.len(), 1);
        assert_eq!(f[0].docstring, None);
        assert_eq!(f[0].body, "...");
    }

    #[test]
    fn nested_functions_and_decorators() {
        let src = "\
@decorator
async def outer(a,
                b: int = 3) -> dict[str, int]:
    'outer doc'
    def h():
        return 1

    return h()
";
        let f = extract_functions(&sf(src));
        assert_eq!(f.len(), 2);
        assert_eq!(
            f[0].signature,
            "async def outer(a,\n                b: int = 3) -> dict[str, int]:"
        );
        assert_eq!(f[0].docstring.as_deref(), Some("'outer doc'"));
        assert!(f[0].body.contains("return h()"));
        assert_eq!(f[1].signature, "def h():");
        assert_eq!(f[1].start_line, 5);
        assert_eq!(f[1].body, "        return 1");
    }

    #[test]
    fn defs_inside_strings_are_ignored() {
        let src = "x = \"\"\"\ndef fake():\n    pass\n\"\"\"\ns = 'def nope(): pass'\n";
        assert!(extract_functions(&sf(src)).is_empty());
    }

    #[test]
    fn non_docstring_first_statement() {
        let f = extract_functions(&sf("def f():\n    \"a\".join(x)\n"));
        assert_eq!(f[0].docstring, None);
    }

    #[test]
    fn surface_counts() {
        assert_eq!(count_surface(&sf("")), (0, 0, 0));
        let src = "class A:\n    def one(self):\n        \"\"\"Doc.\"\"\"\n        return 1\n\n    def two(self):\n        return 2\n";
        assert_eq!(count_surface(&sf(src)), (1, 2, 1));
        assert_eq!(count_surface(&sf("\"\"\"Module doc.\"\"\"\n")), (0, 0, 0));
    }

    fn corpus(text: &str) -> OrgCorpus {
        OrgCorpus::new("O", vec![SourceFile::new("a.py", text)], Split::Train).unwrap()
    }

    #[test]
    fn function_prompts_are_verbatim() {
        let src = "\
def a():
    \"\"\"A.\"\"\"
    return 1

def b(x):
    return x

class K:
    def c(self):
        '''C
        doc'''
        pass

    def d(self):
        \"D.\"
";
        let c = corpus(src);
        let prompts = build_function_prompts(&c, 512);
        assert_eq!(prompts.len(), 3);
        for p in &prompts {
            assert!(src.contains(&p.text));
            assert_eq!(p.token_len, p.text.len());
            assert!(p.text.ends_with('\n'));
        }
        assert_eq!(prompts[0].text, "def a():\n    \"\"\"A.\"\"\"\n");
        assert_eq!(
            prompts[1].text,
            "def c(self):\n        '''C\n        doc'''\n"
        );
        assert_eq!(prompts[1].id, "O/a.py:9");
    }

    #[test]
    fn function_prompt_cap() {
        let long = format!("def f():\n    \"\"\"{}\"\"\"\n    pass\n", "x".repeat(600));
        assert!(build_function_prompts(&corpus(&long), 512).is_empty());
        assert_eq!(build_function_prompts(&corpus(&long), 1024).len(), 1);
    }

    #[test]
    fn sample_size_rounds_half_up() {
        assert_eq!(sample_size(187_900, 0.1), 18_790);
        assert_eq!(sample_size(58_068, 0.1), 5_807);
        assert_eq!(sample_size(8_159, 0.1), 816);
        assert_eq!(sample_size(5, 0.5), 3);
    }

    #[test]
    fn sampling_is_seeded_and_ordered() {
        let prompts: Vec<Prompt> = (0..40)
            .map(|i| {
                Prompt::new(
                    format!("p{i}"),
                    PromptKind::Function,
                    "O",
                    format!("t{i}"),
                    None,
                )
            })
            .collect();
        let a = sample_prompts(&prompts, 0.25, 3).unwrap();
        assert_eq!(a, sample_prompts(&prompts, 0.25, 3).unwrap());
        assert_eq!(a.len(), 10);
        let pos: Vec<usize> = a.iter().map(|p| p.id[1..].parse().unwrap()).collect();
        assert!(pos.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(sample_prompts(&prompts, 1.0, 9).unwrap(), prompts);
        assert!(sample_prompts(&prompts, 0.0, 9).is_err());
    }

    fn block(lines: Vec<String>) -> CloneBlock {
        let occ = |s: &str| Occurrence {
            source: s.to_string(),
            path: "x.py".into(),
            start_line: 1,
            end_line: lines.len(),
            index: 0,
        };
        CloneBlock {
            line_count: lines.len(),
            occurrences: vec![occ("A"), occ("B")],
            normalized_lines: lines.iter().map(|l| l.trim().to_string()).collect(),
            raw_lines: lines,
        }
    }

    #[test]
    fn clone_prefix_halves() {
        let b = block((1..=8).map(|i| format!("    line{i}")).collect());
        let p = build_clone_prefix_prompts(&[b], 512);
        assert_eq!(p.len(), 1);
        assert_eq!(p[0].text, "    line1\n    line2\n    line3\n    line4\n");
        assert_eq!(
            p[0].expected_suffix.as_deref(),
            Some("    line5\n    line6\n    line7\n    line8\n")
        );
        assert_eq!(p[0].origin_org, "A");

        let odd = block((1..=7).map(|i| format!("l{i}")).collect());
        let p = build_clone_prefix_prompts(&[odd], 512);
        assert_eq!(p[0].text, "l1\nl2\nl3\nl4\n");
    }

    #[test]
    fn long_clone_blocks_are_partitioned() {
        let b = block(
            (0..12)
                .map(|i| format!("{i:02}{}", "z".repeat(38)))
                .collect(),
        );
        let cap = 100;
        let p = build_clone_prefix_prompts(std::slice::from_ref(&b), cap);
        assert!(p.len() >= 2);
        assert!(p.iter().all(|p| p.token_len <= cap));
        let rebuilt: String = p
            .iter()
            .map(|p| format!("{}{}", p.text, p.expected_suffix.as_ref().unwrap()))
            .collect();
        assert_eq!(rebuilt, block_text(&b.raw_lines));
    }
}
