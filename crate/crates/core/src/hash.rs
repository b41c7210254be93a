//! The 32-byte hash value behind every `hash_*` field, backed by SHA-256.

use std::fmt;
use std::str::FromStr;

use sha2::{Digest, Sha256};
use thiserror::Error;

/// A 256-bit hash. Ordering compares the bytes big-endian, so `a <= b` is
/// the numeric comparison used by the proof-of-work threshold.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Hash256(pub [u8; 32]);

impl Hash256 {
    /// The all-zero hash, used as the previous-block link of block 0.
    pub const ZERO: Hash256 = Hash256([0; 32]);

    /// SHA-256 of `data`.
    pub fn digest(data: &[u8]) -> Self {
        let mut hasher = Sha256::new();
        hasher.update(data);
        Hash256(hasher.finalize().into())
    }

    /// SHA-256 over the concatenation of `parts`, in order.
    pub fn digest_parts(parts: &[&[u8]]) -> Self {
        let mut hasher = Sha256::new();
        for part in parts {
            hasher.update(part);
        }
        Hash256(hasher.finalize().into())
    }

    pub fn as_bytes(&self) -> &[u8; 32] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        hex::encode(self.0)
    }

    pub fn from_hex(s: &str) -> Result<Self, ParseHashError> {
        let bytes = hex::decode(s)?;
        let arr: [u8; 32] = bytes
            .as_slice()
            .try_into()
            .map_err(|_| ParseHashError::Length(bytes.len()))?;
        Ok(Hash256(arr))
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum ParseHashError {
    #[error("invalid hex: {0}")]
    Hex(#[from] hex::FromHexError),
    #[error("expected 32 bytes, got {0}")]
    Length(usize),
}

impl fmt::Display for Hash256 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl fmt::Debug for Hash256 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Hash256({}…)", hex::encode(&self.0[..4]))
    }
}

impl FromStr for Hash256 {
    type Err = ParseHashError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Hash256::from_hex(s)
    }
}

impl From<[u8; 32]> for Hash256 {
    fn from(bytes: [u8; 32]) -> Self {
        Hash256(bytes)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_matches_known_vector() {
        // SHA-256 of the empty string.
        assert_eq!(
            Hash256::digest(b"").to_hex(),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        );
    }

    #[test]
    fn hex_round_trip() {
        let h = Hash256::digest(b"round trip");
        assert_eq!(Hash256::from_hex(&h.to_hex()), Ok(h));
    }

    #[test]
    fn from_hex_rejects_bad_input() {
        assert!(matches!(
            Hash256::from_hex("abcd"),
            Err(ParseHashError::Length(2))
        ));
        assert!(matches!(
            Hash256::from_hex("zz"),
            Err(ParseHashError::Hex(_))
        ));
    }

    #[test]
    fn ordering_is_big_endian_numeric() {
        let mut small = [0u8; 32];
        small[31] = 0xff; // 255
        let mut big = [0u8; 32];
        big[0] = 1; // 2^248
        assert!(Hash256(small) < Hash256(big));
    }
}
