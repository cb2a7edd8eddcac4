//! Counter-based 64-bit generator.
//!
//! Output `i` of a stream with key `k` is `mix64(k + (i + 1)·γ)`, the
//! SplitMix64 output function evaluated at a counter rather than a running
//! state, so any position is addressable in O(1). Streams are identified
//! by `(seed, unit, checkpoint)` and their keys are derived by chained
//! mixing:
//!
//! ```text
//! key = mix64(mix64(mix64(seed ^ SEED_TAG) ^ unit) ^ checkpoint)
//! ```
//!
//! where `unit` is a trial or path index. Distinct units therefore draw from
//! unrelated keys no matter how work is scheduled across threads.

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;
const SEED_TAG: u64 = 0x6871_6C61_6272_6E67;
const TWO_POW_NEG_53: f64 = 1.0 / (1u64 << 53) as f64;

#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of the stream belonging to `(unit, checkpoint)` under `seed`.
pub fn derive_seed(seed: u64, unit: u64, checkpoint: u64) -> u64 {
    mix64(mix64(mix64(seed ^ SEED_TAG) ^ unit) ^ checkpoint)
}

#[derive(Debug, Clone)]
pub struct CounterRng {
    key: u64,
    counter: u64,
    spare_normal: Option<f64>,
}

impl CounterRng {
    pub fn from_seed(seed: u64) -> Self {
        Self {
            key: mix64(seed ^ SEED_TAG),
            counter: 0,
            spare_normal: None,
        }
    }

    pub fn stream(seed: u64, unit: u64, checkpoint: u64) -> Self {
        Self::from_seed(derive_seed(seed, unit, checkpoint))
    }

    /// Value at an arbitrary counter position, without advancing.
    #[inline]
    pub fn at(&self, counter: u64) -> u64 {
        mix64(self.key.wrapping_add(counter.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA)))
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        let v = self.at(self.counter);
        self.counter = self.counter.wrapping_add(1);
        v
    }

    /// Uniform on `[0, 1)` with 53 random bits.
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * TWO_POW_NEG_53
    }

    /// Uniform on the open interval `(0, 1)`.
    #[inline]
    pub fn uniform_open(&mut self) -> f64 {
        ((self.next_u64() >> 11) as f64 + 0.5) * TWO_POW_NEG_53
    }

    /// Standard normal via Box-Muller; the second variate is cached.
    pub fn normal(&mut self) -> f64 {
        if let Some(z) = self.spare_normal.take() {
            return z;
        }
        let u1 = self.uniform_open();
        let u2 = self.uniform();
        let r = (-2.0 * u1.ln()).sqrt();
        let theta = std::f64::consts::TAU * u2;
        self.spare_normal = Some(r * theta.sin());
        r * theta.cos()
    }

    /// ±1 with equal probability.
    pub fn rademacher(&mut self) -> f64 {
        if self.next_u64() >> 63 == 1 {
            1.0
        } else {
            -1.0
        }
    }
}
