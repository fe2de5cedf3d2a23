//! Labeled random streams split from a single 64-bit master seed.
//!
//! Each stream is a ChaCha20 generator keyed by
//! `SHA-256(master_seed_le || label || index_le)`, so streams with different
//! labels or indices are independent and identical on every platform.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use sha2::{Digest, Sha256};

/// Names a stream derived from a master seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StreamLabel {
    /// Signs of the outer diagonal `D`.
    Outer,
    /// Signs of the inner diagonal `D'`, applied before the Hadamard step.
    Inner,
    /// Per-trial master seeds in Monte Carlo experiments.
    Trial(u64),
    /// Input vectors drawn by experiments.
    Vector(u64),
    /// Probe directions for the 2->4 norm estimate.
    Probe,
    /// Gaussian draws for width estimation, one per partition.
    Gaussian(u64),
}

impl StreamLabel {
    fn tag(&self) -> (&'static [u8], u64) {
        match *self {
            StreamLabel::Outer => (b"D", 0),
            StreamLabel::Inner => (b"D'", 0),
            StreamLabel::Trial(i) => (b"trial", i),
            StreamLabel::Vector(i) => (b"vector", i),
            StreamLabel::Probe => (b"probe", 0),
            StreamLabel::Gaussian(i) => (b"gaussian", i),
        }
    }
}

pub fn stream_key(master_seed: u64, label: StreamLabel) -> [u8; 32] {
    let (name, index) = label.tag();
    let mut h = Sha256::new();
    h.update(master_seed.to_le_bytes());
    h.update((name.len() as u32).to_le_bytes());
    h.update(name);
    h.update(index.to_le_bytes());
    h.finalize().into()
}

pub fn stream_rng(master_seed: u64, label: StreamLabel) -> ChaCha20Rng {
    ChaCha20Rng::from_seed(stream_key(master_seed, label))
}

/// A fresh 64-bit master seed for trial `index`.
pub fn trial_seed(master_seed: u64, index: u64) -> u64 {
    let key = stream_key(master_seed, StreamLabel::Trial(index));
    u64::from_le_bytes(key[..8].try_into().unwrap())
}
