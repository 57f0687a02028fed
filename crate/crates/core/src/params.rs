use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Model parameters: `n` vertices of the complete graph, open probability
/// `p = lambda / n` and per-edge refresh rate `mu`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Params {
    n: usize,
    lambda: f64,
    mu: f64,
}

impl Params {
    pub fn new(n: usize, lambda: f64, mu: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParams(format!("n must be at least 2, got {n}")));
        }
        if !(lambda.is_finite() && lambda >= 0.0 && lambda <= n as f64) {
            return Err(Error::InvalidParams(format!(
                "lambda must lie in [0, n], got {lambda}"
            )));
        }
        if !(mu.is_finite() && mu >= 0.0) {
            return Err(Error::InvalidParams(format!("mu must be >= 0, got {mu}")));
        }
        Ok(Params { n, lambda, mu })
    }

    /// Build from the open probability directly.
    pub fn with_p(n: usize, p: f64, mu: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidParams(format!("p must lie in [0, 1], got {p}")));
        }
        Params::new(n, p * n as f64, mu)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn p(&self) -> f64 {
        (self.lambda / self.n as f64).clamp(0.0, 1.0)
    }

    /// Number of edges of the complete graph, `n(n-1)/2`.
    pub fn edge_count(&self) -> usize {
        self.n * (self.n - 1) / 2
    }

    /// Total refresh rate `mu * N`.
    pub fn refresh_rate(&self) -> f64 {
        self.mu * self.edge_count() as f64
    }

    /// Informational regime flag: `mu * n <= log(n)^-20`.
    pub fn slow_mu(&self) -> bool {
        let ln = (self.n as f64).ln();
        self.mu * self.n as f64 <= ln.powi(-20)
    }

    pub fn with_mu(&self, mu: f64) -> Result<Self> {
        Params::new(self.n, self.lambda, mu)
    }
}

/// Iterated natural logarithm `log_(m) x`, with `log_(1) x = ln x`.
pub fn iterated_log(x: f64, depth: usize) -> f64 {
    let mut v = x;
    for _ in 0..depth {
        v = v.ln();
    }
    v
}

/// Largest `M` with `log_(M) n >= 1`; zero when `ln n < 1`.
pub fn max_log_depth(n: usize) -> usize {
    let mut depth = 0;
    while iterated_log(n as f64, depth + 1) >= 1.0 {
        depth += 1;
    }
    depth
}
