//! Deterministic, splittable randomness.
//!
//! Every run owns one root stream built from the configured seed. Robot-level
//! and slot-level draws come from child streams derived by key, so the draws a
//! robot sees never depend on how many draws other robots consumed.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RngStream {
    key: u64,
}

/// SplitMix64 finalizer.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        RngStream { key: mix(seed) }
    }

    /// Child stream identified by `label`.
    pub fn derive(&self, label: u64) -> Self {
        RngStream { key: mix(self.key ^ mix(label.wrapping_add(0x632b_e59b_d9b4_e019))) }
    }

    /// Child stream for a `(robot, slot)` pair.
    pub fn for_robot_slot(&self, robot: usize, slot: usize) -> Self {
        self.derive(robot as u64).derive(slot as u64)
    }

    /// Fresh generator positioned at the start of this stream.
    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.key)
    }
}
