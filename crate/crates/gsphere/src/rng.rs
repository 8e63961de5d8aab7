//! Minimal deterministic PRNG for generic coordinates.
//!
//! A SplitMix64 stream is more than enough randomness for genericity
//! sampling, and hand-rolling it keeps seeded runs bit-identical across
//! platforms and dependency upgrades.

pub(crate) struct SplitMix64(u64);

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform integer in `[-2^30, 2^30]`, by rejection sampling.
    pub fn coordinate(&mut self) -> i64 {
        const RANGE: u64 = (1 << 31) + 1;
        const BOUND: u64 = u64::MAX - u64::MAX % RANGE;
        loop {
            let x = self.next_u64();
            if x < BOUND {
                return (x % RANGE) as i64 - (1 << 30);
            }
        }
    }
}
