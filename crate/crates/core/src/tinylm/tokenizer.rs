use crate::corpus::OrgCorpus;

/// 256 byte ids plus end-of-text.
pub const VOCAB_SIZE: usize = 257;
pub const EOT: u32 = 256;

pub fn tokenize(text: &str) -> Vec<u32> {
    text.bytes().map(u32::from).collect()
}

/// Inverse of [`tokenize`]. End-of-text and out-of-range ids are dropped;
/// byte sequences that are not valid UTF-8 are replaced lossily.
pub fn detokenize(tokens: &[u32]) -> String {
    let bytes: Vec<u8> = tokens
        .iter()
        .filter(|&&t| t < 256)
        .map(|&t| t as u8)
        .collect();
    match String::from_utf8(bytes) {
        Ok(s) => s,
        Err(e) => String::from_utf8_lossy(e.as_bytes()).into_owned(),
    }
}

/// Token stream for a whole corpus: every file's bytes followed by end-of-text,
/// in corpus order.
pub fn tokenize_corpus(corpus: &OrgCorpus) -> Vec<u32> {
    let mut out = Vec::with_capacity(corpus.total_bytes() + corpus.files.len());
    for file in &corpus.files {
        out.extend(file.text.bytes().map(u32::from));
        out.push(EOT);
    }
    out
}
