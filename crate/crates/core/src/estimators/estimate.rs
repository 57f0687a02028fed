use serde::{Deserialize, Serialize};

use crate::stats::mean_stderr;

/// Monte Carlo point estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub stderr: f64,
    pub replicas: usize,
    pub master_seed: u64,
    /// Share of replicas whose stopping time hit the cap.
    pub censored_fraction: f64,
}

impl Estimate {
    pub fn from_samples(xs: &[f64], master_seed: u64) -> Self {
        let (value, stderr) = mean_stderr(xs);
        Estimate { value, stderr, replicas: xs.len(), master_seed, censored_fraction: 0.0 }
    }

    pub fn from_indicators(hits: usize, replicas: usize, master_seed: u64) -> Self {
        let value = hits as f64 / replicas as f64;
        let stderr = (value * (1.0 - value) / replicas as f64).sqrt();
        Estimate { value, stderr, replicas, master_seed, censored_fraction: 0.0 }
    }

    pub fn with_censoring(mut self, censored_fraction: f64) -> Self {
        self.censored_fraction = censored_fraction;
        self
    }

    /// Whether `target` lies within `k` standard errors.
    pub fn covers(&self, target: f64, k: f64) -> bool {
        (self.value - target).abs() <= k * self.stderr
    }
}

/// One row of a curve: an estimate at a time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub time: f64,
    #[serde(flatten)]
    pub estimate: Estimate,
}
