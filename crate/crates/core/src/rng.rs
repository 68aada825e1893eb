//! Seed derivation for independent, reproducible random substreams.
//!
//! Every random source in a simulation is keyed by a path of integers
//! (root seed, frame, node, slot, packet, ...). The path is folded through a
//! SplitMix64 finalizer into a 64-bit seed for a ChaCha8 generator, so two
//! sources never share a stream and evaluation order never matters.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Generator used for all simulation randomness.
pub type SimRng = ChaCha8Rng;

/// Stream tags keep the key spaces of different source kinds disjoint.
pub mod tag {
    pub const FRAME: u64 = 0x4652_414d;
    pub const INFO: u64 = 0x494e_464f;
    pub const NOISE: u64 = 0x4e4f_4953;
    pub const DECODER: u64 = 0x4445_4344;
    pub const VARIABLE: u64 = 0x5641_5220;
    pub const HELD: u64 = 0x484c_4420;
    pub const SUPERNODE: u64 = 0x5355_504e;
    pub const REGEN: u64 = 0x5245_474e;
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derives a child seed from a root seed and a key path.
pub fn derive_seed(root: u64, path: &[u64]) -> u64 {
    path.iter()
        .fold(splitmix64(root), |acc, &k| splitmix64(acc ^ splitmix64(k)))
}

/// Opens the substream addressed by `path` under `root`.
pub fn substream(root: u64, path: &[u64]) -> SimRng {
    SimRng::seed_from_u64(derive_seed(root, path))
}
