//! Identity registration and per-identity key lifecycle.
//!
//! An identity is the triple `(hash_m, hash_uuid, hostname)` plus exactly
//! one secondary key per role (authentication, signing, encryption). Key
//! windows are half-open `[valid_from, valid_until)` and revocation at tick
//! `t` invalidates tick `t` itself. A revoked master key permanently kills
//! the identity; only its hostname becomes reusable.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::codec::Writer;
use crate::config::ContractConfig;
use crate::hash::Hash256;
use crate::sybilguard;
use crate::Tick;

/// Role of a secondary key. Exactly one active key exists per role.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum KeyRole {
    Authentication,
    Signing,
    Encryption,
}

impl KeyRole {
    pub const ALL: [KeyRole; 3] = [
        KeyRole::Authentication,
        KeyRole::Signing,
        KeyRole::Encryption,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            KeyRole::Authentication => "authentication",
            KeyRole::Signing => "signing",
            KeyRole::Encryption => "encryption",
        }
    }

    pub(crate) fn tag(self) -> u8 {
        match self {
            KeyRole::Authentication => 0,
            KeyRole::Signing => 1,
            KeyRole::Encryption => 2,
        }
    }

    pub(crate) fn from_tag(tag: u8) -> Option<KeyRole> {
        match tag {
            0 => Some(KeyRole::Authentication),
            1 => Some(KeyRole::Signing),
            2 => Some(KeyRole::Encryption),
            _ => None,
        }
    }

    fn index(self) -> usize {
        self.tag() as usize
    }
}

impl fmt::Display for KeyRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for KeyRole {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "authentication" | "auth" => Ok(KeyRole::Authentication),
            "signing" | "sign" => Ok(KeyRole::Signing),
            "encryption" | "enc" => Ok(KeyRole::Encryption),
            other => Err(format!("unknown key role `{other}`")),
        }
    }
}

/// A key as submitted at registration or rotation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KeyDecl {
    pub key_hash: Hash256,
    pub valid_from: Tick,
    pub valid_until: Tick,
}

/// The three secondary keys of an identity, one per role. Having a field
/// per role makes "exactly one key per role" true by construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KeySet {
    pub authentication: KeyDecl,
    pub signing: KeyDecl,
    pub encryption: KeyDecl,
}

impl KeySet {
    pub fn get(&self, role: KeyRole) -> &KeyDecl {
        match role {
            KeyRole::Authentication => &self.authentication,
            KeyRole::Signing => &self.signing,
            KeyRole::Encryption => &self.encryption,
        }
    }

    /// Same declaration for all three roles; convenient in tests and demos.
    pub fn uniform(decl: KeyDecl) -> Self {
        KeySet {
            authentication: decl,
            signing: decl,
            encryption: decl,
        }
    }
}

/// What a node submits to register: the identity triple and its keys.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityDecl {
    pub hash_m: Hash256,
    pub hash_uuid: Hash256,
    pub hostname: String,
    pub keys: KeySet,
}

/// One key record in an identity's history. A superseded record keeps its
/// revocation mark; its `valid_until` is clamped to the rotation tick.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SecondaryKeyRecord {
    pub role: KeyRole,
    pub key_hash: Hash256,
    pub valid_from: Tick,
    pub valid_until: Tick,
    pub revoked_at: Option<Tick>,
}

impl SecondaryKeyRecord {
    /// Window and revocation check only; master-key status is the
    /// identity's concern.
    fn valid_at(&self, at: Tick) -> bool {
        self.valid_from <= at
            && at < self.valid_until
            && self.revoked_at.map_or(true, |r| at < r)
    }
}

/// A registered identity and its full key history. The last record per
/// role is the active one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeIdentity {
    pub hash_m: Hash256,
    pub hash_uuid: Hash256,
    pub hostname: String,
    pub registered_at: Tick,
    pub master_revoked_at: Option<Tick>,
    key_history: [Vec<SecondaryKeyRecord>; 3],
}

impl NodeIdentity {
    pub fn is_revoked(&self) -> bool {
        self.master_revoked_at.is_some()
    }

    /// The currently active (most recent) record for `role`.
    pub fn active_key(&self, role: KeyRole) -> &SecondaryKeyRecord {
        self.key_history[role.index()]
            .last()
            .expect("every role has at least the registration record")
    }

    /// All records for `role`, oldest first.
    pub fn key_records(&self, role: KeyRole) -> &[SecondaryKeyRecord] {
        &self.key_history[role.index()]
    }
}

/// Issued on successful registration; carries the ids of the contract
/// instances emitted for the new identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegistrationReceipt {
    pub hash_m: Hash256,
    pub key_contract: Hash256,
    pub reputation_contract: Hash256,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum IdentityError {
    #[error("hostname is not a valid DNS label")]
    InvalidHostname,
    #[error("key window has valid_from >= valid_until")]
    BadWindow,
    #[error("key lifetime exceeds the configured maximum")]
    KeyLifetimeExceeded,
    #[error("identity already registered (master key hashes are unique over all history)")]
    DuplicateIdentity,
    #[error("hostname already in use by a live identity")]
    DuplicateHostname,
    #[error("proof of work on hash_uuid does not verify")]
    PowInvalid,
    #[error("identity is not registered")]
    UnknownIdentity,
    #[error("master key is revoked")]
    MasterRevoked,
    #[error("key is not active at that tick")]
    KeyNotActive,
    #[error("master key is already revoked")]
    AlreadyRevoked,
}

/// `a-z A-Z 0-9 -`, 1–63 chars, no leading or trailing hyphen.
pub fn validate_hostname(hostname: &str) -> Result<(), IdentityError> {
    let bytes = hostname.as_bytes();
    if bytes.is_empty() || bytes.len() > 63 {
        return Err(IdentityError::InvalidHostname);
    }
    if !bytes
        .iter()
        .all(|b| b.is_ascii_alphanumeric() || *b == b'-')
    {
        return Err(IdentityError::InvalidHostname);
    }
    if bytes[0] == b'-' || bytes[bytes.len() - 1] == b'-' {
        return Err(IdentityError::InvalidHostname);
    }
    Ok(())
}

/// The identity registry: every identity ever registered, keyed by its
/// master key hash. Revoked identities stay in the map so that master key
/// hashes are unique over all history.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IdentityRegistry {
    identities: BTreeMap<Hash256, NodeIdentity>,
}

impl IdentityRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, hash_m: &Hash256) -> Option<&NodeIdentity> {
        self.identities.get(hash_m)
    }

    /// The live (non-revoked) identity using `hostname`, if any. Hostnames
    /// are unique among live identities.
    pub fn by_hostname(&self, hostname: &str) -> Option<&NodeIdentity> {
        self.identities
            .values()
            .find(|id| !id.is_revoked() && id.hostname == hostname)
    }

    pub fn len(&self) -> usize {
        self.identities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.identities.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &NodeIdentity> {
        self.identities.values()
    }

    /// Register a new identity. Checks run in a fixed order so rejections
    /// are deterministic: hostname syntax, key windows (authentication,
    /// signing, encryption), duplicate master key, duplicate hostname,
    /// proof of work. The PoW seed is the master key hash bytes, binding
    /// the work to the identity.
    pub fn register(
        &mut self,
        decl: IdentityDecl,
        pow_nonce: u64,
        at: Tick,
        cfg: &ContractConfig,
    ) -> Result<RegistrationReceipt, IdentityError> {
        validate_hostname(&decl.hostname)?;
        for role in KeyRole::ALL {
            check_window(decl.keys.get(role), cfg)?;
        }
        if self.identities.contains_key(&decl.hash_m) {
            return Err(IdentityError::DuplicateIdentity);
        }
        if self.by_hostname(&decl.hostname).is_some() {
            return Err(IdentityError::DuplicateHostname);
        }
        if !sybilguard::verify_uuid(
            decl.hash_m.as_bytes(),
            pow_nonce,
            &decl.hash_uuid,
            cfg.pow_threshold,
        ) {
            return Err(IdentityError::PowInvalid);
        }

        let key_history = [
            vec![record_from(decl.keys.get(KeyRole::Authentication), KeyRole::Authentication)],
            vec![record_from(decl.keys.get(KeyRole::Signing), KeyRole::Signing)],
            vec![record_from(decl.keys.get(KeyRole::Encryption), KeyRole::Encryption)],
        ];
        let receipt = RegistrationReceipt {
            hash_m: decl.hash_m,
            key_contract: contract_id(b"batman.contract.keys", &decl.hash_m),
            reputation_contract: contract_id(b"batman.contract.reputation", &decl.hash_m),
        };
        self.identities.insert(
            decl.hash_m,
            NodeIdentity {
                hash_m: decl.hash_m,
                hash_uuid: decl.hash_uuid,
                hostname: decl.hostname,
                registered_at: at,
                master_revoked_at: None,
                key_history,
            },
        );
        Ok(receipt)
    }

    /// Replace the active key for `role`. The superseded record's
    /// `valid_until` is clamped to the rotation tick (the new key's
    /// `valid_from`) if it is still open; the clamp never moves it below
    /// the record's own `valid_from`, so backdated rotations leave an
    /// empty — never an inverted — window behind.
    pub fn rotate_key(
        &mut self,
        hash_m: &Hash256,
        role: KeyRole,
        new_key_hash: Hash256,
        valid_from: Tick,
        valid_until: Tick,
        cfg: &ContractConfig,
    ) -> Result<(), IdentityError> {
        let identity = self
            .identities
            .get_mut(hash_m)
            .ok_or(IdentityError::UnknownIdentity)?;
        if identity.is_revoked() {
            return Err(IdentityError::MasterRevoked);
        }
        let decl = KeyDecl {
            key_hash: new_key_hash,
            valid_from,
            valid_until,
        };
        check_window(&decl, cfg)?;

        let history = &mut identity.key_history[role.index()];
        let old = history.last_mut().expect("role always has a record");
        if old.valid_until > valid_from {
            old.valid_until = valid_from.max(old.valid_from);
        }
        history.push(record_from(&decl, role));
        Ok(())
    }

    /// Revoke the active key for `role` at tick `at`. The key must be
    /// valid at `at`: inside its window, not already revoked, and under a
    /// live master.
    pub fn revoke_key(
        &mut self,
        hash_m: &Hash256,
        role: KeyRole,
        at: Tick,
    ) -> Result<(), IdentityError> {
        let identity = self
            .identities
            .get_mut(hash_m)
            .ok_or(IdentityError::UnknownIdentity)?;
        if identity.is_revoked() {
            return Err(IdentityError::KeyNotActive);
        }
        let record = identity.key_history[role.index()]
            .last_mut()
            .expect("role always has a record");
        if record.revoked_at.is_some() || !record.valid_at(at) {
            return Err(IdentityError::KeyNotActive);
        }
        record.revoked_at = Some(at);
        Ok(())
    }

    /// Revoke the master key: the identity is dead from tick `at` onward
    /// and its hostname becomes reusable. Recovery requires a fresh
    /// `(hash_m, hash_uuid)` registration.
    pub fn revoke_master(&mut self, hash_m: &Hash256, at: Tick) -> Result<(), IdentityError> {
        let identity = self
            .identities
            .get_mut(hash_m)
            .ok_or(IdentityError::UnknownIdentity)?;
        if identity.is_revoked() {
            return Err(IdentityError::AlreadyRevoked);
        }
        identity.master_revoked_at = Some(at);
        Ok(())
    }

    /// True iff the identity is registered, its master is not revoked at
    /// `at`, and the active key for `role` has a window containing `at`
    /// with no revocation at or before `at`.
    pub fn is_key_valid(&self, hash_m: &Hash256, role: KeyRole, at: Tick) -> bool {
        let Some(identity) = self.identities.get(hash_m) else {
            return false;
        };
        if let Some(revoked) = identity.master_revoked_at {
            if at >= revoked {
                return false;
            }
        }
        identity.active_key(role).valid_at(at)
    }

    /// Canonical encoding of the whole registry, for state digests.
    pub(crate) fn encode_state(&self, w: &mut Writer) {
        w.put_u32(self.identities.len() as u32);
        for identity in self.identities.values() {
            w.put_hash(&identity.hash_m);
            w.put_hash(&identity.hash_uuid);
            w.put_bytes(identity.hostname.as_bytes());
            w.put_u64(identity.registered_at);
            w.put_opt_u64(identity.master_revoked_at);
            for role in KeyRole::ALL {
                let records = identity.key_records(role);
                w.put_u32(records.len() as u32);
                for r in records {
                    w.put_u8(r.role.tag());
                    w.put_hash(&r.key_hash);
                    w.put_u64(r.valid_from);
                    w.put_u64(r.valid_until);
                    w.put_opt_u64(r.revoked_at);
                }
            }
        }
    }
}

fn check_window(decl: &KeyDecl, cfg: &ContractConfig) -> Result<(), IdentityError> {
    if decl.valid_from >= decl.valid_until {
        return Err(IdentityError::BadWindow);
    }
    if decl.valid_until - decl.valid_from > cfg.max_key_lifetime {
        return Err(IdentityError::KeyLifetimeExceeded);
    }
    Ok(())
}

fn record_from(decl: &KeyDecl, role: KeyRole) -> SecondaryKeyRecord {
    SecondaryKeyRecord {
        role,
        key_hash: decl.key_hash,
        valid_from: decl.valid_from,
        valid_until: decl.valid_until,
        revoked_at: None,
    }
}

fn contract_id(domain: &[u8], hash_m: &Hash256) -> Hash256 {
    Hash256::digest_parts(&[domain, hash_m.as_bytes()])
}
