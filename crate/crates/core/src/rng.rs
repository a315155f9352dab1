//! Seeded random streams.
//!
//! Every random quantity in a simulation comes from its own ChaCha8 stream.
//! A run seed is derived from `(base_seed, run)` and each stream seed from
//! `(run_seed, role, index)`, both by SplitMix64 mixing. Streams are pure
//! functions of those values, so results do not depend on how runs are
//! scheduled across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The generator used for every stream in this crate.
pub type RngStream = ChaCha8Rng;

/// What a stream is used for within one simulation run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StreamRole {
    /// Arm parameters. Shared by every policy evaluated in the run.
    Environment,
    /// Rewards of one arm (index = arm). Shared by every policy in the run.
    Rewards,
    /// Internal randomness of one policy (index = policy position).
    Policy,
}

impl StreamRole {
    fn tag(self) -> u64 {
        match self {
            StreamRole::Environment => 0x656e_7669,
            StreamRole::Rewards => 0x7277_6473,
            StreamRole::Policy => 0x706f_6c69,
        }
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of run `run` (0-based) under `base_seed`.
pub fn run_seed(base_seed: u64, run: u64) -> u64 {
    splitmix64(splitmix64(base_seed) ^ run)
}

/// Seed of stream `(role, index)` within the run seeded by `run_seed`.
pub fn stream_seed(run_seed: u64, role: StreamRole, index: u64) -> u64 {
    splitmix64(splitmix64(run_seed ^ role.tag()) ^ index)
}

pub fn stream(run_seed: u64, role: StreamRole, index: u64) -> RngStream {
    RngStream::seed_from_u64(stream_seed(run_seed, role, index))
}
