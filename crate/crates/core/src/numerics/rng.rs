//! Seeded random numbers via splitmix64.
//!
//! The generator is fixed on purpose: experiment outputs are pinned by golden
//! tests, so the stream may never change between versions or platforms.
//! splitmix64 is a 64-bit counter generator (Steele, Lea, Flood 2014); each
//! draw adds the Weyl constant 0x9E3779B97F4A7C15 to the state and mixes.
//! Doubles take the top 53 bits, giving uniforms on [0, 1).

/// Deterministic RNG with a fixed algorithm and a 64-bit seed.
#[derive(Clone, Debug)]
pub struct SeededRng {
    state: u64,
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        SeededRng { state: seed }
    }

    fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Next uniform draw on [0, 1).
    pub fn next_unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Next uniform draw on [lo, hi]. Requires `lo <= hi`; a degenerate
    /// interval returns `lo` exactly (the state still advances).
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        assert!(lo <= hi, "uniform interval inverted: [{lo}, {hi}]");
        lo + (hi - lo) * self.next_unit()
    }
}
