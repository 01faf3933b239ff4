//! Reproducible pseudo-random coefficient vectors.
//!
//! The generator is the 64-bit linear congruential generator
//! `state <- 6364136223846793005 * state + 1442695040888963407 (mod 2^64)`,
//! seeded with `state = seed`. Each draw advances the state once and returns
//! `(state >> 33) mod q`. It is specified bit-for-bit so fixtures can be
//! reproduced by other implementations.

const MUL: u64 = 6_364_136_223_846_793_005;
const INC: u64 = 1_442_695_040_888_963_407;

#[derive(Debug, Clone)]
pub struct Lcg {
    state: u64,
}

impl Lcg {
    pub fn new(seed: u64) -> Self {
        Lcg { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_mul(MUL).wrapping_add(INC);
        self.state
    }

    /// A value in `[0, q)`.
    pub fn below(&mut self, q: u32) -> u32 {
        ((self.next_u64() >> 33) % q as u64) as u32
    }
}

/// The coefficient vector `(a_{d-1}, ..., a_{d-s})` for a given seed.
pub fn seeded_a(q: u32, s: usize, seed: u64) -> Vec<u32> {
    let mut rng = Lcg::new(seed);
    (0..s).map(|_| rng.below(q)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_stream() {
        let mut g = Lcg::new(0);
        assert_eq!(g.next_u64(), INC);
        assert_eq!(g.next_u64(), INC.wrapping_mul(MUL).wrapping_add(INC));
        assert_eq!(seeded_a(7, 3, 42), seeded_a(7, 3, 42));
        assert!(seeded_a(7, 50, 1).iter().all(|&v| v < 7));
    }
}
