//! Counter-based seed derivation for reproducible parallelism.
//!
//! Every independent unit of work (a tree, a replicate, a grid point) gets
//! its own stream index; the derived seed depends only on `(master, stream)`,
//! so units may run concurrently and still reproduce bit-identically.

/// SplitMix64 output function.
fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derive the seed for stream `stream` from `master`.
pub fn derive_seed(master: u64, stream: u64) -> u64 {
    splitmix64(master ^ splitmix64(stream))
}
