//! Deterministic RNG streams.
//!
//! A single 64-bit seed expands into independent streams, one per phase:
//! the phase label is hashed (FNV-1a) into the ChaCha stream id. Work can
//! then run concurrently without any phase perturbing another's draws.

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

/// FNV-1a over the label bytes.
pub fn label_hash(label: &str) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for b in label.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

/// The RNG stream for `(seed, label)`.
pub fn phase_stream(seed: u64, label: &str) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(label_hash(label));
    rng
}
