//! Reproducible random streams.
//!
//! Every stochastic component draws from [`SimRng`], which is ChaCha with 8
//! rounds as implemented by `rand_chacha`. Its output is fully specified and
//! independent of platform and thread scheduling. Seeds for independent
//! sub-streams (graph `g`, replicate `r`, bootstrap resample `b`, ...) are
//! derived from a master seed with SplitMix64 finalisation, so results never
//! depend on the order in which sub-streams are consumed.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

/// Stream tags used with [`derive_seed`].
pub mod stream {
    pub const GRAPH: u64 = 0x6772_6170_6800_0001;
    pub const INITIAL: u64 = 0x6963_0000_0000_0002;
    pub const DYNAMICS: u64 = 0x6479_6e00_0000_0003;
    pub const BOOTSTRAP: u64 = 0x626f_6f74_0000_0004;
    pub const MODULARITY: u64 = 0x6d6f_6400_0000_0005;
    pub const SPECTRAL: u64 = 0x7370_6563_0000_0006;
    pub const DESIGN: u64 = 0x6465_7369_676e_0007;
}

#[inline]
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of sub-stream `index` of kind `stream` under `master`.
pub fn derive_seed(master: u64, stream: u64, index: u64) -> u64 {
    splitmix64(splitmix64(master ^ splitmix64(stream)) ^ splitmix64(index.wrapping_add(stream)))
}

pub fn rng_from_seed(seed: u64) -> SimRng {
    ChaCha8Rng::seed_from_u64(seed)
}
