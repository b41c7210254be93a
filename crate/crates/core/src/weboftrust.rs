//! Peer endorsement of identities, PGP style: nodes vouch for each other
//! by signature, and an identity counts as validated once enough live
//! signers back it. Endorsements never expire on their own; they die with
//! the signer's master key.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::codec::Writer;
use crate::hash::Hash256;
use crate::identity::{IdentityRegistry, KeyRole};
use crate::Tick;

/// One signature of `subject`'s identity by `signer`. The signature is
/// simulated as a hash over the signed material.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Endorsement {
    pub signer: Hash256,
    pub subject: Hash256,
    pub at: Tick,
    pub signature_hash: Hash256,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ValidationStatus {
    Unvalidated,
    Validated,
}

impl ValidationStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            ValidationStatus::Unvalidated => "unvalidated",
            ValidationStatus::Validated => "validated",
        }
    }
}

/// Status report for one subject at one tick.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WotStatus {
    /// Endorsements whose signer is non-revoked at the queried tick.
    pub live_endorsements: usize,
    /// The threshold the count was compared against.
    pub threshold: u32,
    pub status: ValidationStatus,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WotError {
    #[error("an identity cannot endorse itself")]
    SelfEndorsement,
    #[error("signer or subject is not a live registered identity")]
    UnknownIdentity,
    #[error("signer's signing key is not valid at that tick")]
    SignerKeyInvalid,
    #[error("this signer already endorsed this subject")]
    DuplicateEndorsement,
}

/// The endorsement graph. At most one live endorsement per
/// (signer, subject) pair.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WebOfTrust {
    endorsements: BTreeMap<(Hash256, Hash256), Endorsement>,
}

impl WebOfTrust {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.endorsements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.endorsements.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Endorsement> {
        self.endorsements.values()
    }

    /// Record `signer`'s endorsement of `subject` at tick `at`. Both
    /// identities must be registered and not master-revoked, and the
    /// signer's signing key must be valid at `at`.
    pub fn endorse(
        &mut self,
        registry: &IdentityRegistry,
        signer: &Hash256,
        subject: &Hash256,
        at: Tick,
    ) -> Result<Endorsement, WotError> {
        if signer == subject {
            return Err(WotError::SelfEndorsement);
        }
        let signer_id = registry.get(signer).ok_or(WotError::UnknownIdentity)?;
        let subject_id = registry.get(subject).ok_or(WotError::UnknownIdentity)?;
        if signer_id.is_revoked() || subject_id.is_revoked() {
            return Err(WotError::UnknownIdentity);
        }
        if !registry.is_key_valid(signer, KeyRole::Signing, at) {
            return Err(WotError::SignerKeyInvalid);
        }
        if self.endorsements.contains_key(&(*signer, *subject)) {
            return Err(WotError::DuplicateEndorsement);
        }

        let mut w = Writer::new();
        w.put_hash(signer);
        w.put_hash(subject);
        w.put_hash(&subject_id.hash_uuid);
        w.put_u64(at);
        let endorsement = Endorsement {
            signer: *signer,
            subject: *subject,
            at,
            signature_hash: Hash256::digest(&w.finish()),
        };
        self.endorsements.insert((*signer, *subject), endorsement);
        Ok(endorsement)
    }

    /// Count endorsements of `subject` whose signer is non-revoked at
    /// `at`, and compare against the threshold `k`.
    pub fn validation_status(
        &self,
        registry: &IdentityRegistry,
        subject: &Hash256,
        at: Tick,
        k: u32,
    ) -> Result<WotStatus, WotError> {
        if registry.get(subject).is_none() {
            return Err(WotError::UnknownIdentity);
        }
        let live = self
            .endorsements
            .values()
            .filter(|e| e.subject == *subject)
            .filter(|e| signer_live_at(registry, &e.signer, at))
            .count();
        let status = if live >= k as usize {
            ValidationStatus::Validated
        } else {
            ValidationStatus::Unvalidated
        };
        Ok(WotStatus {
            live_endorsements: live,
            threshold: k,
            status,
        })
    }

    pub(crate) fn encode_state(&self, w: &mut Writer) {
        w.put_u32(self.endorsements.len() as u32);
        for e in self.endorsements.values() {
            w.put_hash(&e.signer);
            w.put_hash(&e.subject);
            w.put_u64(e.at);
            w.put_hash(&e.signature_hash);
        }
    }
}

fn signer_live_at(registry: &IdentityRegistry, signer: &Hash256, at: Tick) -> bool {
    registry
        .get(signer)
        .map_or(false, |id| id.master_revoked_at.map_or(true, |r| r > at))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::ContractConfig;
    use crate::identity::{IdentityDecl, KeyDecl, KeySet};
    use crate::sybilguard::mine_uuid;

    fn setup(names: &[&str]) -> (IdentityRegistry, Vec<Hash256>, ContractConfig) {
        let cfg = ContractConfig::default();
        let mut reg = IdentityRegistry::new();
        let mut hashes = Vec::new();
        for name in names {
            let hash_m = Hash256::digest(name.as_bytes());
            let mined = mine_uuid(hash_m.as_bytes(), cfg.pow_threshold, 1_000_000).unwrap();
            let decl = IdentityDecl {
                hash_m,
                hash_uuid: mined.hash(),
                hostname: name.to_string(),
                keys: KeySet::uniform(KeyDecl {
                    key_hash: Hash256::digest_parts(&[name.as_bytes(), b".k"]),
                    valid_from: 0,
                    valid_until: 1000,
                }),
            };
            reg.register(decl, mined.nonce, 0, &cfg).unwrap();
            hashes.push(hash_m);
        }
        (reg, hashes, cfg)
    }

    #[test]
    fn endorse_and_validate() {
        let (reg, ids, _) = setup(&["a", "b", "c"]);
        let mut wot = WebOfTrust::new();
        wot.endorse(&reg, &ids[0], &ids[2], 10).unwrap();
        wot.endorse(&reg, &ids[1], &ids[2], 11).unwrap();

        let st = wot.validation_status(&reg, &ids[2], 11, 2).unwrap();
        assert_eq!(st.live_endorsements, 2);
        assert_eq!(st.status, ValidationStatus::Validated);
    }

    #[test]
    fn no_endorsements_means_unvalidated() {
        let (reg, ids, _) = setup(&["a"]);
        let wot = WebOfTrust::new();
        let st = wot.validation_status(&reg, &ids[0], 0, 1).unwrap();
        assert_eq!(st.live_endorsements, 0);
        assert_eq!(st.status, ValidationStatus::Unvalidated);
    }

    #[test]
    fn self_endorsement_rejected() {
        let (reg, ids, _) = setup(&["a"]);
        let mut wot = WebOfTrust::new();
        assert_eq!(
            wot.endorse(&reg, &ids[0], &ids[0], 5),
            Err(WotError::SelfEndorsement)
        );
    }

    #[test]
    fn duplicate_pair_rejected() {
        let (reg, ids, _) = setup(&["a", "b"]);
        let mut wot = WebOfTrust::new();
        wot.endorse(&reg, &ids[0], &ids[1], 5).unwrap();
        assert_eq!(
            wot.endorse(&reg, &ids[0], &ids[1], 6),
            Err(WotError::DuplicateEndorsement)
        );
        // The reverse direction is a different pair.
        wot.endorse(&reg, &ids[1], &ids[0], 6).unwrap();
    }

    #[test]
    fn expired_signing_key_blocks_endorsement() {
        let (reg, ids, _) = setup(&["a", "b"]);
        let mut wot = WebOfTrust::new();
        // Keys are valid on [0, 1000); cross-check with is_key_valid.
        assert!(!reg.is_key_valid(&ids[0], KeyRole::Signing, 1000));
        assert_eq!(
            wot.endorse(&reg, &ids[0], &ids[1], 1000),
            Err(WotError::SignerKeyInvalid)
        );
    }

    #[test]
    fn revoking_a_signer_drops_its_endorsement_from_the_count() {
        let (mut reg, ids, _) = setup(&["a", "b", "c"]);
        let mut wot = WebOfTrust::new();
        wot.endorse(&reg, &ids[0], &ids[2], 10).unwrap();
        wot.endorse(&reg, &ids[1], &ids[2], 11).unwrap();
        reg.revoke_master(&ids[0], 20).unwrap();

        let st = wot.validation_status(&reg, &ids[2], 20, 2).unwrap();
        assert_eq!(st.live_endorsements, 1);
        assert_eq!(st.status, ValidationStatus::Unvalidated);

        // Brute-force oracle: filter the raw endorsement list.
        let brute = wot
            .iter()
            .filter(|e| e.subject == ids[2])
            .filter(|e| {
                reg.get(&e.signer)
                    .map_or(false, |s| s.master_revoked_at.map_or(true, |r| r > 20))
            })
            .count();
        assert_eq!(brute, st.live_endorsements);
    }

    #[test]
    fn validation_is_monotone_in_k() {
        let (reg, ids, _) = setup(&["a", "b", "c", "d"]);
        let mut wot = WebOfTrust::new();
        wot.endorse(&reg, &ids[0], &ids[3], 1).unwrap();
        wot.endorse(&reg, &ids[1], &ids[3], 2).unwrap();
        wot.endorse(&reg, &ids[2], &ids[3], 3).unwrap();

        let mut last_validated = true;
        for k in 1..=5u32 {
            let validated = wot
                .validation_status(&reg, &ids[3], 10, k)
                .unwrap()
                .status
                == ValidationStatus::Validated;
            // Validated at k implies validated at every smaller k.
            assert!(!validated || last_validated || k == 1);
            last_validated = validated;
        }
    }

    #[test]
    fn unknown_subject_errors() {
        let (reg, _, _) = setup(&["a"]);
        let wot = WebOfTrust::new();
        assert_eq!(
            wot.validation_status(&reg, &Hash256::digest(b"ghost"), 0, 1),
            Err(WotError::UnknownIdentity)
        );
    }
}
