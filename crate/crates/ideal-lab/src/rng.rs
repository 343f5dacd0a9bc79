//! Seeded, splittable pseudo-randomness.
//!
//! Every randomized routine in this crate draws from a [`Rng`] that is derived
//! from an explicit seed, so transcripts, factorizations and experiments replay
//! bit-exactly. Child streams are derived by label, which lets independent
//! repetitions run in any order without perturbing each other.

/// SplitMix64 generator. Small state, full 64-bit period, cheap to fork.
#[derive(Debug, Clone)]
pub struct Rng {
    state: u64,
}

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

#[inline]
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng { state: mix(seed ^ GOLDEN) }
    }

    /// Derives an independent child stream. The same (seed, label) pair always
    /// yields the same stream.
    pub fn child(&self, label: u64) -> Rng {
        Rng { state: mix(self.state ^ mix(label.wrapping_mul(GOLDEN) ^ 0xd1b5_4a32_d192_ed03)) }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN);
        mix(self.state)
    }

    pub fn next_u128(&mut self) -> u128 {
        ((self.next_u64() as u128) << 64) | self.next_u64() as u128
    }

    /// Uniform in `[0, bound)`. `bound` must be nonzero.
    pub fn below(&mut self, bound: u64) -> u64 {
        debug_assert!(bound > 0);
        // rejection sampling on the top multiple of `bound`
        let zone = u64::MAX - (u64::MAX % bound);
        loop {
            let v = self.next_u64();
            if v < zone {
                return v % bound;
            }
        }
    }

    /// Uniform in `[lo, hi]` inclusive.
    pub fn range_inclusive(&mut self, lo: i64, hi: i64) -> i64 {
        debug_assert!(lo <= hi);
        let span = (hi - lo) as u64 + 1;
        lo + self.below(span) as i64
    }

    pub fn bool(&mut self) -> bool {
        self.next_u64() & 1 == 1
    }
}
