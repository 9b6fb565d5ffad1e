//! Deterministic random streams.
//!
//! A stream is keyed by `(seed, lane)` and positioned by `trial_index`
//! through ChaCha8's 64-bit stream id, so the bytes a trial sees depend only
//! on those three numbers and never on how many other trials ran before it.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone)]
pub struct TrialRng {
    seed: u64,
    trial_index: u64,
    lane: u64,
    inner: ChaCha8Rng,
}

impl TrialRng {
    /// Stream for trial 0 of `seed`.
    pub fn from_seed(seed: u64) -> Self {
        Self::substream(seed, 0)
    }

    /// Independent stream for one trial.
    pub fn substream(seed: u64, trial_index: u64) -> Self {
        Self::build(seed, trial_index, 0)
    }

    /// Independent stream for the same trial, distinguished by `lane`.
    /// Splitting does not consume from `self`.
    pub fn split(&self, lane: u64) -> Self {
        Self::build(self.seed, self.trial_index, lane)
    }

    fn build(seed: u64, trial_index: u64, lane: u64) -> Self {
        let mut key = [0u8; 32];
        key[..8].copy_from_slice(&seed.to_le_bytes());
        key[8..16].copy_from_slice(&lane.to_le_bytes());
        key[16..].copy_from_slice(b"mdiqkd-trial-key");
        let mut inner = ChaCha8Rng::from_seed(key);
        inner.set_stream(trial_index);
        Self {
            seed,
            trial_index,
            lane,
            inner,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn trial_index(&self) -> u64 {
        self.trial_index
    }

    pub fn lane(&self) -> u64 {
        self.lane
    }

    /// Fair coin.
    pub fn coin(&mut self) -> bool {
        self.inner.random_bool(0.5)
    }

    /// `true` with probability `p`; exact at `p = 0` and `p = 1`.
    pub fn bernoulli(&mut self, p: f64) -> bool {
        if p <= 0.0 {
            false
        } else if p >= 1.0 {
            true
        } else {
            self.inner.random_bool(p)
        }
    }

    /// Uniform in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.inner.random::<f64>()
    }
}

impl RngCore for TrialRng {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.inner.fill_bytes(dst)
    }
}
