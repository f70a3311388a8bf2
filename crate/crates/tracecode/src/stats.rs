//! Small statistical helpers shared by the estimators and the experiment
//! harness.

use serde::{Deserialize, Serialize};

/// A two-sided Wilson score interval for a binomial proportion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WilsonInterval {
    pub lo: f64,
    pub hi: f64,
}

/// Wilson score interval at confidence level given by the normal quantile
/// `z` (1.96 for 95%). `successes` counts the events whose rate is being
/// estimated out of `trials`.
///
/// Returns the degenerate interval [0, 1] when `trials == 0`.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> WilsonInterval {
    assert!(successes <= trials, "successes must not exceed trials");
    if trials == 0 {
        return WilsonInterval { lo: 0.0, hi: 1.0 };
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = p + z2 / (2.0 * n);
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    WilsonInterval {
        lo: ((center - half) / denom).max(0.0),
        hi: ((center + half) / denom).min(1.0),
    }
}
