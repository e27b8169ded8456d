//! pass@k and the log-perplexity / compressed-size membership score.

use std::io::Write;

use flate2::write::DeflateEncoder;
use flate2::Compression;
use serde::{Deserialize, Serialize};

use crate::tinylm::{perplexity, tokenize, ModelParams};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PassAtKInput {
    pub n: u64,
    pub c: u64,
    pub k: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MembershipScore {
    pub log_ppl: f64,
    pub compressed_bytes: usize,
    pub ratio: f64,
}

/// `C(n, k)` if it fits in 128 bits.
fn binomial(n: u64, k: u64) -> Option<u128> {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) is divisible by (i + 1) at every step.
        acc = acc.checked_mul(u128::from(n - i))? / u128::from(i + 1);
    }
    Some(acc)
}

/// Unbiased pass@k: `1 - C(n-c, k) / C(n, k)`. Exact integer binomials are used
/// while they fit in 128 bits, the product `prod_{i=n-c+1}^{n} (1 - k/i)` beyond.
pub fn pass_at_k(input: PassAtKInput) -> Result<f64> {
    let PassAtKInput { n, c, k } = input;
    if n == 0 || c > n || k == 0 || k > n {
        return Err(Error::InvalidArgument(format!(
            "pass@k needs 1 <= k <= n and c <= n, got n={n} c={c} k={k}"
        )));
    }
    if n - c < k {
        return Ok(1.0);
    }
    if let (Some(fail), Some(total)) = (binomial(n - c, k), binomial(n, k)) {
        return Ok(1.0 - fail as f64 / total as f64);
    }
    let kf = k as f64;
    let prod: f64 = (n - c + 1..=n).map(|i| 1.0 - kf / i as f64).product();
    Ok(1.0 - prod)
}

/// Raw DEFLATE size in bytes at the default level.
pub fn compression_entropy(text: &str) -> Result<usize> {
    if text.is_empty() {
        return Err(Error::InvalidArgument("cannot compress empty text".into()));
    }
    let mut enc = DeflateEncoder::new(Vec::new(), Compression::default());
    enc.write_all(text.as_bytes())
        .and_then(|_| enc.finish())
        .map(|out| out.len())
        .map_err(|e| Error::InvalidArgument(format!("deflate failed: {e}")))
}

/// `ln(perplexity) / compressed bytes` for one text.
pub fn ppl_zlib_ratio(model: &ModelParams, text: &str) -> Result<MembershipScore> {
    let compressed_bytes = compression_entropy(text)?;
    let log_ppl = perplexity(model, &tokenize(text))?.ln();
    Ok(MembershipScore {
        log_ppl,
        compressed_bytes,
        ratio: log_ppl / compressed_bytes as f64,
    })
}
