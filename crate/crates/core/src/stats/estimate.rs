use serde::{Deserialize, Serialize};

/// Binomial proportion with its normal-approximation standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    #[serde(serialize_with = "super::sig::serialize")]
    pub value: f64,
    #[serde(serialize_with = "super::sig::serialize")]
    pub std_err: f64,
    pub successes: u64,
    pub trials: u64,
}

impl Estimate {
    /// `None` when there are no trials to estimate from.
    pub fn binomial(successes: u64, trials: u64) -> Option<Self> {
        if trials == 0 {
            return None;
        }
        let p = successes as f64 / trials as f64;
        Some(Self {
            value: p,
            std_err: (p * (1.0 - p) / trials as f64).sqrt(),
            successes,
            trials,
        })
    }
}
