//! Proof-of-work admission control: a fresh identity must present a
//! `hash_uuid` whose numeric value does not exceed a network-wide threshold,
//! which makes bulk identity creation (Sybil attacks) expensive while
//! keeping verification a single hash.

use thiserror::Error;

use crate::hash::Hash256;

/// Maximum admissible numeric value for `hash_uuid`, as a 256-bit
/// big-endian integer.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct PowThreshold([u8; 32]);

impl PowThreshold {
    /// 2^256 − 1: every hash is admissible.
    pub const MAX: PowThreshold = PowThreshold([0xff; 32]);

    /// Only the all-zero hash is admissible.
    pub const MIN: PowThreshold = PowThreshold([0; 32]);

    /// Threshold 2^(256−bits), i.e. a hash passes with probability
    /// ~2^(−bits). `bits == 0` yields [`PowThreshold::MAX`].
    pub fn from_difficulty_bits(bits: u32) -> Self {
        if bits == 0 {
            return Self::MAX;
        }
        if bits > 256 {
            return Self::MIN;
        }
        let exp = 256 - bits; // bit position of the set bit, from LSB
        let mut raw = [0u8; 32];
        if exp == 256 {
            unreachable!("bits == 0 handled above");
        }
        raw[31 - (exp / 8) as usize] = 1 << (exp % 8);
        PowThreshold(raw)
    }

    pub fn from_bytes(raw: [u8; 32]) -> Self {
        PowThreshold(raw)
    }

    pub fn as_bytes(&self) -> &[u8; 32] {
        &self.0
    }

    /// Numeric comparison `hash <= threshold` (both big-endian).
    pub fn admits(&self, hash: &Hash256) -> bool {
        hash.as_bytes() <= &self.0
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PowError {
    /// No admissible nonce found; the caller may retry with a new seed.
    #[error("no admissible nonce within {0} iterations")]
    Exhausted(u64),
}

/// A successfully mined unique identifier: `seed ‖ nonce_le64`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinedUuid {
    pub uuid: Vec<u8>,
    pub nonce: u64,
}

impl MinedUuid {
    /// The `hash_uuid` that goes into the identity triple.
    pub fn hash(&self) -> Hash256 {
        Hash256::digest(&self.uuid)
    }
}

/// The hashed preimage: seed bytes followed by the nonce as 8 LE bytes.
pub fn uuid_preimage(seed: &[u8], nonce: u64) -> Vec<u8> {
    let mut out = Vec::with_capacity(seed.len() + 8);
    out.extend_from_slice(seed);
    out.extend_from_slice(&nonce.to_le_bytes());
    out
}

/// Search nonces 0, 1, 2, … until `hash(seed ‖ nonce) <= threshold`,
/// giving up after `max_iters` attempts. The returned nonce is the smallest
/// admissible one.
pub fn mine_uuid(
    seed: &[u8],
    threshold: PowThreshold,
    max_iters: u64,
) -> Result<MinedUuid, PowError> {
    for nonce in 0..max_iters {
        let uuid = uuid_preimage(seed, nonce);
        if threshold.admits(&Hash256::digest(&uuid)) {
            return Ok(MinedUuid { uuid, nonce });
        }
    }
    Err(PowError::Exhausted(max_iters))
}

/// One hash, regardless of threshold: recompute `hash(seed ‖ nonce)` and
/// check that it both matches the claimed `hash_uuid` and passes the
/// threshold.
pub fn verify_uuid(
    seed: &[u8],
    nonce: u64,
    claimed_hash_uuid: &Hash256,
    threshold: PowThreshold,
) -> bool {
    let actual = Hash256::digest(&uuid_preimage(seed, nonce));
    actual == *claimed_hash_uuid && threshold.admits(&actual)
}
