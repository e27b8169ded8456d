//! Near-duplicate file removal with MinHash signatures and LSH banding.

use std::collections::{BTreeMap, HashMap, HashSet};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::OrgCorpus;
use crate::{seeds, Error, Result};

pub const DEFAULT_SHINGLE_K: usize = 5;
pub const DEFAULT_NUM_PERM: usize = 128;
pub const DEFAULT_THRESHOLD: f64 = 0.85;
pub const MIN_NUM_PERM: usize = 8;

/// Mersenne prime 2^61 - 1; permutations are `(a*h + b) mod P`.
const MERSENNE_61: u64 = (1 << 61) - 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinHashSignature {
    pub values: Vec<u64>,
    pub num_permutations: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DuplicateGroup {
    pub kept_path: String,
    pub dropped_paths: Vec<String>,
}

fn hash_tokens(tokens: &[&str]) -> u64 {
    let mut h = seeds::fnv1a(b"");
    for (i, t) in tokens.iter().enumerate() {
        if i > 0 {
            h = seeds::fnv1a_extend(h, b" ");
        }
        h = seeds::fnv1a_extend(h, t.as_bytes());
    }
    seeds::mix64(h)
}

/// Hashes of every `k`-gram of whitespace-separated tokens.
pub fn shingles(text: &str, k: usize) -> Result<HashSet<u64>> {
    if k < 1 {
        return Err(Error::InvalidArgument("shingle size k must be >= 1".into()));
    }
    let tokens: Vec<&str> = text.split_whitespace().collect();
    Ok(tokens.windows(k).map(hash_tokens).collect())
}

fn permutations(num_perm: usize, seed: u64) -> Vec<(u64, u64)> {
    let mut rng = seeds::derived_rng(seed, "minhash", "permutations");
    (0..num_perm)
        .map(|_| {
            (
                rng.random_range(1..MERSENNE_61),
                rng.random_range(0..MERSENNE_61),
            )
        })
        .collect()
}

fn permute(a: u64, b: u64, h: u64) -> u64 {
    let x = (u128::from(a) * u128::from(h % MERSENNE_61) + u128::from(b)) % u128::from(MERSENNE_61);
    x as u64
}

/// MinHash signature; the empty set maps to all `u64::MAX`.
pub fn signature(shingles: &HashSet<u64>, num_perm: usize, seed: u64) -> Result<MinHashSignature> {
    if num_perm < MIN_NUM_PERM {
        return Err(Error::InvalidArgument(format!(
            "num_perm must be >= {MIN_NUM_PERM}, got {num_perm}"
        )));
    }
    let values = permutations(num_perm, seed)
        .into_iter()
        .map(|(a, b)| {
            shingles
                .iter()
                .map(|&h| permute(a, b, h))
                .min()
                .unwrap_or(u64::MAX)
        })
        .collect();
    Ok(MinHashSignature {
        values,
        num_permutations: num_perm,
        seed,
    })
}

/// Fraction of positions where the two signatures agree.
pub fn estimate_jaccard(a: &MinHashSignature, b: &MinHashSignature) -> Result<f64> {
    if a.num_permutations != b.num_permutations
        || a.seed != b.seed
        || a.values.len() != b.values.len()
    {
        return Err(Error::SignatureMismatch(format!(
            "({} perms, seed {}) vs ({} perms, seed {})",
            a.num_permutations, a.seed, b.num_permutations, b.seed
        )));
    }
    let same = a
        .values
        .iter()
        .zip(&b.values)
        .filter(|(x, y)| x == y)
        .count();
    Ok(same as f64 / a.values.len() as f64)
}

/// Bands `b` and rows `r` with `b * r == num_perm`, both at least 2, whose
/// S-curve midpoint `(1/b)^(1/r)` lies closest to `threshold`.
pub fn choose_bands(num_perm: usize, threshold: f64) -> Result<(usize, usize)> {
    (2..=num_perm / 2)
        .filter(|b| num_perm.is_multiple_of(*b) && num_perm / b >= 2)
        .map(|b| {
            let r = num_perm / b;
            let mid = (1.0 / b as f64).powf(1.0 / r as f64);
            ((mid - threshold).abs(), b, r)
        })
        .min_by(|x, y| x.0.total_cmp(&y.0))
        .map(|(_, b, r)| (b, r))
        .ok_or(Error::NoBanding { num_perm })
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Shingle set for deduplication. Files too short for a single `k`-gram are
/// represented by one hash of their whole token stream, so only identical
/// short files collide.
fn file_shingles(text: &str, k: usize) -> Result<HashSet<u64>> {
    let s = shingles(text, k)?;
    if !s.is_empty() {
        return Ok(s);
    }
    let tokens: Vec<&str> = text.split_whitespace().collect();
    Ok(HashSet::from([hash_tokens(&tokens)]))
}

/// Groups files whose signatures share an LSH band and whose estimated Jaccard
/// reaches `threshold`, keeping the lexicographically first path of each group.
pub fn lsh_dedup(
    corpus: &OrgCorpus,
    threshold: f64,
    num_perm: usize,
    seed: u64,
) -> Result<(OrgCorpus, Vec<DuplicateGroup>)> {
    if !(threshold > 0.0 && threshold < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "dedup threshold must lie in (0, 1), got {threshold}"
        )));
    }
    let (bands, rows) = choose_bands(num_perm, threshold)?;
    let sigs = corpus
        .files
        .iter()
        .map(|f| signature(&file_shingles(&f.text, DEFAULT_SHINGLE_K)?, num_perm, seed))
        .collect::<Result<Vec<_>>>()?;

    let n = sigs.len();
    let mut parent: Vec<usize> = (0..n).collect();
    let mut checked: HashSet<(usize, usize)> = HashSet::new();
    for band in 0..bands {
        let mut buckets: HashMap<&[u64], Vec<usize>> = HashMap::new();
        for (i, s) in sigs.iter().enumerate() {
            buckets
                .entry(&s.values[band * rows..(band + 1) * rows])
                .or_default()
                .push(i);
        }
        let mut members: Vec<Vec<usize>> = buckets.into_values().filter(|m| m.len() > 1).collect();
        members.sort();
        for m in members {
            for (x, &i) in m.iter().enumerate() {
                for &j in &m[x + 1..] {
                    if !checked.insert((i, j)) {
                        continue;
                    }
                    if estimate_jaccard(&sigs[i], &sigs[j])? >= threshold {
                        let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                        if ri != rj {
                            parent[ri.max(rj)] = ri.min(rj);
                        }
                    }
                }
            }
        }
    }

    let mut components: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        components.entry(r).or_default().push(i);
    }
    let mut drop = vec![false; n];
    let mut groups = Vec::new();
    for members in components.values().filter(|m| m.len() > 1) {
        let mut paths: Vec<(&str, usize)> = members
            .iter()
            .map(|&i| (corpus.files[i].path.as_str(), i))
            .collect();
        paths.sort();
        for &(_, i) in &paths[1..] {
            drop[i] = true;
        }
        groups.push(DuplicateGroup {
            kept_path: paths[0].0.to_string(),
            dropped_paths: paths[1..].iter().map(|p| p.0.to_string()).collect(),
        });
    }
    groups.sort_by(|a, b| a.kept_path.cmp(&b.kept_path));
    let kept = corpus
        .files
        .iter()
        .zip(&drop)
        .filter(|(_, d)| !**d)
        .map(|(f, _)| f.clone())
        .collect();
    Ok((
        OrgCorpus::new(corpus.org_id.clone(), kept, corpus.split)?,
        groups,
    ))
}
