use std::collections::HashSet;

use collabaudit_core::dedup::{estimate_jaccard, lsh_dedup, shingles, signature};
use collabaudit_core::{seeds, OrgCorpus, SourceFile, Split};
use rand::seq::IndexedRandom;
use rand::Rng;

fn jaccard(a: &HashSet<u64>, b: &HashSet<u64>) -> f64 {
    a.intersection(b).count() as f64 / a.union(b).count() as f64
}

#[test]
fn estimate_is_unbiased_over_random_pairs() {
    let mut rng = seeds::rng(5);
    let (mut est, mut exact) = (0.0, 0.0);
    let pairs = 250;
    for p in 0..pairs {
        let universe: u64 = rng.random_range(20..400);
        let a: HashSet<u64> = (0..universe).filter(|_| rng.random_bool(0.5)).collect();
        let keep = rng.random_range(0.0..1.0);
        let b: HashSet<u64> = (0..universe)
            .filter(|x| {
                if a.contains(x) {
                    rng.random_bool(keep)
                } else {
                    rng.random_bool(0.3)
                }
            })
            .collect();
        if a.is_empty() || b.is_empty() {
            continue;
        }
        let sa = signature(&a, 128, p).unwrap();
        let sb = signature(&b, 128, p).unwrap();
        est += estimate_jaccard(&sa, &sb).unwrap();
        exact += jaccard(&a, &b);
    }
    let gap = (est - exact).abs() / pairs as f64;
    assert!(gap < 0.05, "mean gap {gap}");
}

fn random_code(rng: &mut impl Rng, words: &[&str], n: usize) -> String {
    (0..n)
        .map(|_| {
            let line: Vec<&str> = (0..6).map(|_| *words.choose(rng).unwrap()).collect();
            line.join(" ")
        })
        .collect::<Vec<_>>()
        .join("\n")
}

fn fixture() -> OrgCorpus {
    let mut rng = seeds::rng(17);
    let words: Vec<String> = (0..300).map(|i| format!("w{i}")).collect();
    let words: Vec<&str> = words.iter().map(String::as_str).collect();
    let mut files = Vec::new();
    for i in 0..30 {
        files.push(SourceFile::new(
            format!("u{i:02}.py"),
            random_code(&mut rng, &words, 40),
        ));
    }
    let base = random_code(&mut rng, &words, 60);
    for i in 0..3 {
        files.push(SourceFile::new(
            format!("d{i}.py"),
            format!("{base}\n# copy {i}"),
        ));
    }
    OrgCorpus::new("X", files, Split::Unsplit).unwrap()
}

#[test]
fn dissimilar_files_survive_and_copies_collapse() {
    let c = fixture();
    let (kept, groups) = lsh_dedup(&c, 0.85, 128, 42).unwrap();
    let sets: Vec<(String, HashSet<u64>)> = c
        .files
        .iter()
        .map(|f| (f.path.clone(), shingles(&f.text, 5).unwrap()))
        .collect();
    for (path, s) in &sets {
        let max = sets
            .iter()
            .filter(|(p, _)| p != path)
            .map(|(_, o)| jaccard(s, o))
            .fold(0.0, f64::max);
        if max < 0.85 - 0.2 {
            assert!(
                kept.files.iter().any(|f| &f.path == path),
                "{path} dropped at max Jaccard {max}"
            );
        }
    }
    assert_eq!(groups.len(), 1);
    assert_eq!(groups[0].kept_path, "d0.py");
    assert_eq!(groups[0].dropped_paths, vec!["d1.py", "d2.py"]);
    assert_eq!(kept.files.len(), 31);
}

#[test]
fn dedup_is_idempotent() {
    let (once, _) = lsh_dedup(&fixture(), 0.85, 128, 42).unwrap();
    let (twice, groups) = lsh_dedup(&once, 0.85, 128, 42).unwrap();
    assert_eq!(once, twice);
    assert!(groups.is_empty());
}
