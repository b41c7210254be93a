//! Network-wide contract parameters. These are constructor inputs, not
//! ledger state: replaying the same transactions under the same config is
//! what yields identical derived state.

use crate::sybilguard::PowThreshold;
use crate::Tick;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ContractConfig {
    /// Upper bound on `valid_until − valid_from` for any secondary key.
    pub max_key_lifetime: Tick,
    /// Proof-of-work threshold checked at identity registration.
    pub pow_threshold: PowThreshold,
    /// Live endorsements required for an identity to count as validated.
    pub endorsement_threshold: u32,
    /// Time-window size `s` (ticks) of per-identity reputation contracts.
    pub time_window: Tick,
    /// Event-window size `N_e` of per-identity reputation contracts.
    pub event_window: usize,
}

impl Default for ContractConfig {
    fn default() -> Self {
        ContractConfig {
            max_key_lifetime: 1_000_000,
            // Difficulty 1/16: registrations cost ~16 hashes.
            pow_threshold: PowThreshold::from_difficulty_bits(4),
            endorsement_threshold: 1,
            time_window: 150,
            event_window: 150,
        }
    }
}
