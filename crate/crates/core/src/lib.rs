//! Decentralized authentication and reputation on a simulated ledger.
//!
//! The crate models a wireless-sensor-network trust layer as a set of state
//! machines hosted on an append-only, hash-chained transaction log:
//!
//! * [`ledger`] — the chain itself; all derived state is a deterministic
//!   replay of the transaction log.
//! * [`identity`] — identity registration and per-role secondary-key
//!   lifecycle (rotation, revocation, expiry).
//! * [`sybilguard`] — proof-of-work admission control on new identities.
//! * [`weboftrust`] — peer endorsement of identities by signature and the
//!   resulting validation status.
//! * [`reputation`] — per-node event collection and four maximum-likelihood
//!   estimators of the probability that a node completes an action.
//! * [`sim`] — a seeded simulation harness that generates Bernoulli event
//!   streams and sweeps window parameters, reporting estimation error.
//!
//! With the default `parallel` feature, sweeps run data-parallel on rayon;
//! without it the same code paths run sequentially and produce identical
//! output.

pub mod codec;
pub mod config;
pub mod hash;
pub mod identity;
pub mod ledger;
pub mod reputation;
pub mod sim;
pub mod sybilguard;
pub mod weboftrust;

pub use config::ContractConfig;
pub use hash::Hash256;

/// Discrete simulation time unit shared by the ledger and the estimators.
pub type Tick = u64;
