//! Deterministic synthetic Python corpora.
//!
//! Each organization gets its own small vocabulary and coding habits, so its
//! files share a recognisable style without sharing text with other
//! organizations. An organization may also carry one documented function that
//! is pasted verbatim into several of its files.

use rand::seq::IndexedRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::{OrgCorpus, SourceFile, Split};
use crate::{seeds, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DuplicateSpec {
    /// Lines of the pasted function, signature and docstring included.
    pub lines: usize,
    pub copies: usize,
}

/// Short statement runs that recur inside function bodies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdiomSpec {
    pub count: usize,
    pub lines: usize,
    pub copies: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrgSpec {
    pub id: String,
    pub target_bytes: usize,
    #[serde(default)]
    pub duplicate: Option<DuplicateSpec>,
    #[serde(default)]
    pub idioms: Option<IdiomSpec>,
}

/// Three organizations of about 50 KB with a few recurring idioms each. Every
/// organization pastes one 20-line function into several of its files: four
/// times for the first and third, ten times for the second.
pub fn standard_specs() -> Vec<OrgSpec> {
    let idioms = Some(IdiomSpec {
        count: 2,
        lines: 6,
        copies: 5,
    });
    ["A", "B", "C"]
        .into_iter()
        .map(|id| OrgSpec {
            id: id.into(),
            target_bytes: 50_000,
            duplicate: Some(DuplicateSpec {
                lines: 20,
                copies: if id == "B" { 10 } else { 4 },
            }),
            idioms: idioms.clone(),
        })
        .collect()
}

const CONSONANTS: &[u8] = b"bcdfghjklmnprstvwz";
const VOWELS: &[u8] = b"aeiou";

/// A pronounceable word that never repeats a letter.
fn word(rng: &mut ChaCha8Rng, syllables: usize) -> String {
    let mut w = String::new();
    let fresh = |w: &String, set: &[u8], rng: &mut ChaCha8Rng| loop {
        let c = *set.choose(rng).unwrap() as char;
        if !w.contains(c) {
            return c;
        }
    };
    for _ in 0..syllables {
        let c = fresh(&w, CONSONANTS, rng);
        w.push(c);
        let v = fresh(&w, VOWELS, rng);
        w.push(v);
    }
    if rng.random_bool(0.5) {
        let c = fresh(&w, CONSONANTS, rng);
        w.push(c);
    }
    w
}

fn words(rng: &mut ChaCha8Rng, n: usize, taken: &mut Vec<String>) -> Vec<String> {
    let mut out: Vec<String> = Vec::with_capacity(n);
    while out.len() < n {
        let syl = rng.random_range(1..=2);
        let w = word(rng, syl);
        if !taken.contains(&w) {
            taken.push(w.clone());
            out.push(w);
        }
    }
    out
}

struct Style {
    nouns: Vec<String>,
    verbs: Vec<String>,
    helpers: Vec<String>,
}

impl Style {
    /// Words never used by an earlier style sharing `taken`.
    fn new(rng: &mut ChaCha8Rng, sizes: (usize, usize, usize), taken: &mut Vec<String>) -> Self {
        Self {
            nouns: words(rng, sizes.0, taken),
            verbs: words(rng, sizes.1, taken),
            helpers: words(rng, sizes.2, taken),
        }
    }

    fn pick<'a>(list: &'a [String], rng: &mut ChaCha8Rng) -> &'a str {
        list.choose(rng).unwrap()
    }

    fn statement(
        &self,
        rng: &mut ChaCha8Rng,
        args: &[String],
        vars: &mut Vec<String>,
        out: &mut Vec<String>,
    ) {
        let arg = Self::pick(args, rng).to_string();
        let noun = Self::pick(&self.nouns, rng).to_string();
        let fresh = noun.clone();
        let known = vars.choose(rng).cloned().unwrap_or_else(|| arg.clone());
        let helper = Self::pick(&self.helpers, rng).to_string();
        match rng.random_range(0..7) {
            0 => out.push(format!("    {fresh} = {arg}.{noun}")),
            1 => out.push(format!("    {fresh} = {helper}({known})")),
            2 => {
                out.push(format!("    if {known} is None:"));
                out.push(format!("        return {arg}"));
            }
            3 => {
                out.push(format!("    for item in {known}:"));
                out.push(format!("        {helper}(item)"));
            }
            4 => out.push(format!(
                "    {fresh} = {known} + {}",
                rng.random_range(1..10)
            )),
            5 => out.push(format!("    {known}.{helper}({arg})")),
            _ => out.push(format!("    {fresh} = [{known}, {arg}]")),
        }
        if !vars.contains(&fresh) {
            vars.push(fresh);
        }
    }

    /// Exactly `n` body-level lines, never ending on an opened block.
    fn statements(
        &self,
        rng: &mut ChaCha8Rng,
        args: &[String],
        n: usize,
    ) -> (Vec<String>, Vec<String>) {
        let mut out: Vec<String> = Vec::new();
        let mut vars = Vec::new();
        while out.len() < n || out.last().is_some_and(|l| l.ends_with(':')) {
            self.statement(rng, args, &mut vars, &mut out);
            if out.len() > n && out[n - 1].ends_with(':') {
                out.truncate(n - 1);
            }
        }
        out.truncate(n);
        (out, vars)
    }

    /// `n` lines `a = h(b)` walking the nouns so that each line's pair of
    /// nouns occurs once; the next line always starts with the last `b`.
    fn chain(&self, rng: &mut ChaCha8Rng, first: &str, n: usize) -> (Vec<String>, String) {
        let walk = loop {
            let mut walk = vec![first.to_string()];
            let mut used: Vec<(String, String)> = Vec::new();
            while walk.len() <= n {
                let cur = walk.last().unwrap().clone();
                let next: Vec<&String> = self
                    .nouns
                    .iter()
                    .filter(|w| **w != cur && !used.contains(&(cur.clone(), (*w).clone())))
                    .collect();
                let Some(&w) = next.choose(rng) else { break };
                used.push((cur, w.clone()));
                walk.push(w.clone());
            }
            if walk.len() > n {
                break walk;
            }
        };
        let out = walk
            .windows(2)
            .map(|p| {
                let i = self.nouns.iter().position(|w| *w == p[1]).unwrap_or(0);
                format!(
                    "    {} = {}({})",
                    p[0],
                    self.helpers[i % self.helpers.len()],
                    p[1]
                )
            })
            .collect();
        (out, walk[n].clone())
    }

    fn function(&self, rng: &mut ChaCha8Rng, body_lines: usize) -> Vec<String> {
        let verb = Self::pick(&self.verbs, rng);
        let noun = Self::pick(&self.nouns, rng);
        let n_args = rng.random_range(1..=2);
        let mut args: Vec<String> = (0..n_args)
            .map(|_| Self::pick(&self.nouns, rng).to_string())
            .collect();
        args.dedup();
        let mut out = vec![
            format!("def {verb}_{noun}({}):", args.join(", ")),
            format!("    \"\"\"{} the {noun}.\"\"\"", capitalize(verb)),
        ];
        let (body, vars) = self.statements(rng, &args, body_lines.saturating_sub(1).max(1));
        out.extend(body);
        let ret = vars.last().cloned().unwrap_or_else(|| args[0].clone());
        out.push(format!("    return {ret}"));
        out
    }
}

fn capitalize(s: &str) -> String {
    let mut c = s.chars();
    match c.next() {
        Some(f) => f.to_uppercase().chain(c).collect(),
        None => String::new(),
    }
}

/// Lines before which a body-level snippet can be inserted without
/// splitting a block or the docstring.
fn insertion_points(lines: &[String]) -> Vec<usize> {
    (1..lines.len())
        .filter(|&i| {
            let l = &lines[i];
            l.starts_with("    ")
                && !l.starts_with("     ")
                && !l.contains("\"\"\"")
                && !lines[i - 1].ends_with(':')
        })
        .collect()
}

/// One organization's corpus, reproducible from `(spec, seed)`.
pub fn generate_org(spec: &OrgSpec, seed: u64) -> Result<OrgCorpus> {
    let mut rng = seeds::derived_rng(seed, "synthetic", &spec.id);
    let mut taken = Vec::new();
    let style = Style::new(&mut rng, (14, 8, 6), &mut taken);
    let pasted = spec.duplicate.as_ref().map(|d| {
        let body = d.lines.saturating_sub(3).max(1);
        let own = Style::new(&mut rng, (6, 1, 2), &mut taken);
        let (verb, arg) = (&own.verbs[0], &own.nouns[0]);
        let mut f = vec![
            format!("def {verb}_{arg}({arg}):"),
            format!("    \"\"\"{} the {arg}.\"\"\"", capitalize(verb)),
        ];
        let (lines, last) = own.chain(&mut rng, arg, body);
        f.extend(lines);
        f.push(format!("    return {last}"));
        f
    });
    let idioms: Vec<Vec<String>> = match &spec.idioms {
        Some(i) => (0..i.count)
            .map(|_| {
                let own = Style::new(&mut rng, (4, 1, 2), &mut taken);
                own.chain(&mut rng, &own.nouns[0], i.lines).0
            })
            .collect(),
        None => Vec::new(),
    };
    let mut files: Vec<Vec<String>> = Vec::new();
    let mut bytes = 0usize;
    while bytes < spec.target_bytes {
        let mut lines = Vec::new();
        for _ in 0..rng.random_range(3..=6) {
            if !lines.is_empty() {
                lines.push(String::new());
            }
            let body = rng.random_range(4..=12);
            lines.extend(style.function(&mut rng, body));
        }
        bytes += lines.iter().map(|l| l.len() + 1).sum::<usize>();
        files.push(lines);
    }
    if let Some(i) = &spec.idioms {
        for idiom in &idioms {
            for _ in 0..i.copies {
                let f = rng.random_range(0..files.len());
                let points = insertion_points(&files[f]);
                let at = *points
                    .choose(&mut rng)
                    .expect("every function has a body line");
                files[f].splice(at..at, idiom.iter().cloned());
            }
        }
    }
    if let (Some(d), Some(block)) = (&spec.duplicate, &pasted) {
        let step = (files.len() / d.copies.max(1)).max(1);
        for c in 0..d.copies {
            let target = (c * step) % files.len();
            let f = &mut files[target];
            let at = f.len() / 2;
            let at = (at..f.len()).find(|&i| f[i].is_empty()).unwrap_or(f.len());
            let mut insert = vec![String::new()];
            insert.extend(block.iter().cloned());
            f.splice(at..at, insert);
        }
    }
    let files = files
        .into_iter()
        .enumerate()
        .map(|(i, lines)| {
            let mut text = lines.join("\n");
            text.push('\n');
            SourceFile::new(format!("{}/mod_{i:03}.py", spec.id.to_lowercase()), text)
        })
        .collect();
    OrgCorpus::new(spec.id.clone(), files, Split::Unsplit)
}

/// Writes every file of `corpora` under `root/<org_id>/`.
pub fn write_tree(root: &std::path::Path, corpora: &[OrgCorpus]) -> Result<()> {
    for c in corpora {
        for f in &c.files {
            let path = root.join(&c.org_id).join(&f.path);
            if let Some(parent) = path.parent() {
                std::fs::create_dir_all(parent).map_err(|e| crate::Error::io(parent, e))?;
            }
            std::fs::write(&path, &f.text).map_err(|e| crate::Error::io(&path, e))?;
        }
    }
    Ok(())
}
