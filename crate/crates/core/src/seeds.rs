//! Seed derivation and stable hashing.
//!
//! Every random stream in the pipeline is derived from one global seed as
//! `derive(seed, stage, entity)`. The derivation hashes the stage and entity
//! labels with FNV-1a and mixes the result with the seed through SplitMix64,
//! so a stage can be reproduced without replaying the stages before it.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

/// 64-bit FNV-1a over raw bytes. Stable across platforms and releases.
pub fn fnv1a(bytes: &[u8]) -> u64 {
    fnv1a_extend(FNV_OFFSET, bytes)
}

pub(crate) fn fnv1a_extend(mut hash: u64, bytes: &[u8]) -> u64 {
    for &b in bytes {
        hash ^= u64::from(b);
        hash = hash.wrapping_mul(FNV_PRIME);
    }
    hash
}

/// SplitMix64 finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// `hash(seed, stage, entity)`.
pub fn derive(seed: u64, stage: &str, entity: &str) -> u64 {
    let mut h = fnv1a(stage.as_bytes());
    h = fnv1a_extend(h, &[0x1f]);
    h = fnv1a_extend(h, entity.as_bytes());
    mix64(seed ^ mix64(h))
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn derived_rng(seed: u64, stage: &str, entity: &str) -> ChaCha8Rng {
    rng(derive(seed, stage, entity))
}
