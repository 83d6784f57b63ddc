//! Seeded, streamable random number generators.
//!
//! Work item `i` of a run with master seed `s` always draws from the ChaCha8
//! stream `(s, i)`, so results do not depend on scheduling or thread count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

pub fn stream(master_seed: u64, index: u64) -> SimRng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(index);
    rng
}

/// Derives a sub-seed so that independent phases of one run (topology
/// sampling, R₀ sampling, bootstrap) never share a stream family.
pub fn derive_seed(master_seed: u64, label: &str) -> u64 {
    // FNV-1a over the label, folded into the seed
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in label.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    master_seed ^ h.rotate_left(17)
}
