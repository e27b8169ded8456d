//! Binary checkpoint format, all integers little-endian:
//!
//! ```text
//! magic        8 bytes  "CAUDIT01"
//! vocab_size   u32
//! context_len  u32
//! d_model      u32
//! n_heads      u32
//! n_layers     u32
//! ffn_mult     u32
//! seed         u64
//! param_count  u64
//! weights      param_count x f64
//! ```

use std::io::{Read, Write};

use super::{ArchConfig, ModelParams};
use crate::{Error, Result};

pub const CHECKPOINT_MAGIC: &[u8; 8] = b"CAUDIT01";

pub fn write_checkpoint(params: &ModelParams, mut w: impl Write) -> Result<()> {
    params.check()?;
    let io = |e| Error::Checkpoint(format!("write failed: {e}"));
    let a = &params.arch;
    let mut header = Vec::with_capacity(48);
    header.extend_from_slice(CHECKPOINT_MAGIC);
    for field in [
        a.vocab_size,
        a.context_len,
        a.d_model,
        a.n_heads,
        a.n_layers,
        a.ffn_mult,
    ] {
        let field =
            u32::try_from(field).map_err(|_| Error::Checkpoint("arch field exceeds u32".into()))?;
        header.extend_from_slice(&field.to_le_bytes());
    }
    header.extend_from_slice(&params.seed.to_le_bytes());
    header.extend_from_slice(&(params.param_count as u64).to_le_bytes());
    w.write_all(&header).map_err(io)?;
    let mut body = Vec::with_capacity(params.weights.len() * 8);
    for x in &params.weights {
        body.extend_from_slice(&x.to_le_bytes());
    }
    w.write_all(&body).map_err(io)?;
    Ok(())
}

pub fn read_checkpoint(mut r: impl Read) -> Result<ModelParams> {
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes)
        .map_err(|e| Error::Checkpoint(format!("read failed: {e}")))?;
    if bytes.len() < 48 || &bytes[..8] != CHECKPOINT_MAGIC {
        return Err(Error::Checkpoint("bad magic or truncated header".into()));
    }
    let u32_at = |i: usize| u32::from_le_bytes(bytes[i..i + 4].try_into().unwrap()) as usize;
    let u64_at = |i: usize| u64::from_le_bytes(bytes[i..i + 8].try_into().unwrap());
    let arch = ArchConfig {
        vocab_size: u32_at(8),
        context_len: u32_at(12),
        d_model: u32_at(16),
        n_heads: u32_at(20),
        n_layers: u32_at(24),
        ffn_mult: u32_at(28),
    };
    arch.validate()?;
    let seed = u64_at(32);
    let param_count = u64_at(40) as usize;
    if param_count != arch.param_count() {
        return Err(Error::Checkpoint(format!(
            "param_count {param_count} does not match architecture ({})",
            arch.param_count()
        )));
    }
    let body = &bytes[48..];
    if body.len() != param_count * 8 {
        return Err(Error::Checkpoint(format!(
            "expected {} weight bytes, found {}",
            param_count * 8,
            body.len()
        )));
    }
    let weights = body
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    Ok(ModelParams {
        arch,
        weights,
        param_count,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tinylm::init_model;

    #[test]
    fn bit_exact_round_trip() {
        let arch = ArchConfig {
            context_len: 8,
            d_model: 4,
            n_heads: 2,
            n_layers: 1,
            ffn_mult: 1,
            ..ArchConfig::default()
        };
        let mut params = init_model(&arch, 99).unwrap();
        params.weights[3] = -0.0;
        params.weights[4] = f64::MIN_POSITIVE / 3.0;
        let mut buf = Vec::new();
        write_checkpoint(&params, &mut buf).unwrap();
        assert_eq!(buf.len(), 48 + params.param_count * 8);
        let back = read_checkpoint(buf.as_slice()).unwrap();
        assert_eq!(back.arch, params.arch);
        assert_eq!(back.seed, 99);
        let bits = |p: &ModelParams| p.weights.iter().map(|w| w.to_bits()).collect::<Vec<_>>();
        assert_eq!(bits(&back), bits(&params));
    }

    #[test]
    fn truncated_checkpoint_is_rejected() {
        let params = init_model(
            &ArchConfig {
                context_len: 4,
                d_model: 2,
                n_heads: 1,
                n_layers: 1,
                ffn_mult: 1,
                ..ArchConfig::default()
            },
            1,
        )
        .unwrap();
        let mut buf = Vec::new();
        write_checkpoint(&params, &mut buf).unwrap();
        buf.pop();
        assert!(read_checkpoint(buf.as_slice()).is_err());
        assert!(read_checkpoint(&b"nope"[..]).is_err());
    }
}
