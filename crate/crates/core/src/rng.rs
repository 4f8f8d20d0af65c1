//! The repository's pseudorandom generator.
//!
//! SplitMix64 (Steele, Lea and Flood): a 64-bit counter advanced by the golden
//! ratio increment and passed through a fixed avalanche mix. Output depends
//! only on the seed, so schedules, activations and samples are reproducible
//! across platforms and toolchains. Not suitable for anything security
//! related.

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitMix64 {
    state: u64,
}

/// Independent streams derived from one run seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Stream {
    Delays = 1,
    Activation = 2,
    Sampling = 3,
    Synthetic = 4,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    /// Generator for one named stream of a run seed. Streams are separated by
    /// mixing the stream id into the seed, so they never share a counter
    /// sequence.
    pub fn stream(seed: u64, stream: Stream) -> Self {
        let mut mixer = Self::new(seed ^ (stream as u64).wrapping_mul(0xD1B5_4A32_D192_ED03));
        Self::new(mixer.next_u64())
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform integer in `[0, bound)` by rejection, free of modulo bias.
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "bound must be positive");
        let zone = u64::MAX - (u64::MAX % bound);
        loop {
            let v = self.next_u64();
            if v < zone {
                return v % bound;
            }
        }
    }

    /// Uniform integer in the closed range `[lo, hi]`.
    pub fn range_inclusive(&mut self, lo: u64, hi: u64) -> u64 {
        assert!(lo <= hi);
        if hi - lo == u64::MAX {
            return self.next_u64();
        }
        lo + self.below(hi - lo + 1)
    }

    /// Uniform in `[0, 1)` with 53 bits of precision.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard normal deviate (Box-Muller, one output per call).
    pub fn standard_normal(&mut self) -> f64 {
        let u1 = 1.0 - self.next_f64();
        let u2 = self.next_f64();
        (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
    }

    /// Uniform point in the Euclidean ball of the given radius.
    pub fn in_ball(&mut self, dim: usize, radius: f64) -> Vec<f64> {
        let mut v: Vec<f64> = (0..dim).map(|_| self.standard_normal()).collect();
        let n = crate::linalg::norm(&v);
        let r = radius * self.next_f64().powf(1.0 / dim as f64);
        if n > 0.0 {
            v.iter_mut().for_each(|x| *x *= r / n);
        }
        v
    }

    /// `k` distinct indices from `0..n`, in sampled order (partial
    /// Fisher-Yates).
    pub fn sample_indices(&mut self, n: usize, k: usize) -> Vec<usize> {
        assert!(k <= n);
        let mut pool: Vec<usize> = (0..n).collect();
        for i in 0..k {
            let j = i + self.below((n - i) as u64) as usize;
            pool.swap(i, j);
        }
        pool.truncate(k);
        pool
    }
}
