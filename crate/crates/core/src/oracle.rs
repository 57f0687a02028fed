//! Exact transient and stationary laws of the full system for `n <= 5`.
//!
//! States are `x * 2^N + mask`, where bit `pair_index(u, v)` of `mask` is the
//! state of edge `(u, v)`. Transients use uniformization at rate
//! `mu * N + 1`: every state then leaves at exactly that total rate once
//! refreshes that keep the edge state and rings across closed edges are
//! counted as self-loops.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{pair_from_index, pair_index};
use crate::params::Params;

pub const ORACLE_MAX_N: usize = 5;
const TAIL_TOL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct GeneratorSpec {
    n: usize,
    edge_count: usize,
    p: f64,
    mu: f64,
    pairs: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StationarityReport {
    /// `max_s |(pi Q)_s|`.
    pub residual: f64,
    /// `max |pi(s) Q(s, s') - pi(s') Q(s', s)|` over distinct pairs.
    pub detailed_balance: f64,
}

impl GeneratorSpec {
    pub fn new(params: &Params) -> Result<Self> {
        let n = params.n();
        if n > ORACLE_MAX_N {
            return Err(Error::OracleTooLarge { got: n, max: ORACLE_MAX_N });
        }
        let edge_count = params.edge_count();
        let pairs = (0..edge_count).map(|k| pair_from_index(k, n)).collect();
        Ok(GeneratorSpec { n, edge_count, p: params.p(), mu: params.mu(), pairs })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn state_count(&self) -> usize {
        self.n << self.edge_count
    }

    pub fn state_index(&self, x: usize, mask: u64) -> usize {
        (x << self.edge_count) | mask as usize
    }

    pub fn decode(&self, s: usize) -> (usize, u64) {
        (s >> self.edge_count, (s & ((1 << self.edge_count) - 1)) as u64)
    }

    pub fn uniformization_rate(&self) -> f64 {
        self.mu * self.edge_count as f64 + 1.0
    }

    pub fn point_mass(&self, x: usize, mask: u64) -> Vec<f64> {
        let mut v = vec![0.0; self.state_count()];
        v[self.state_index(x, mask)] = 1.0;
        v
    }

    /// Uniform walker times the product Bernoulli(p) environment.
    pub fn stationary(&self) -> Vec<f64> {
        (0..self.state_count())
            .map(|s| {
                let (_, mask) = self.decode(s);
                let open = mask.count_ones() as i32;
                self.p.powi(open) * (1.0 - self.p).powi(self.edge_count as i32 - open) / self.n as f64
            })
            .collect()
    }

    /// Calls `f(target, rate)` for every jump out of `s`, self-loops included;
    /// the rates sum to `mu * N + 1`.
    fn for_each_jump<F: FnMut(usize, f64)>(&self, s: usize, mut f: F) {
        let (x, mask) = self.decode(s);
        for e in 0..self.edge_count {
            let bit = 1u64 << e;
            f(self.state_index(x, mask | bit), self.mu * self.p);
            f(self.state_index(x, mask & !bit), self.mu * (1.0 - self.p));
        }
        let ring = 1.0 / (self.n - 1) as f64;
        for y in (0..self.n).filter(|&y| y != x) {
            let open = mask & (1u64 << pair_index(x, y, self.n)) != 0;
            f(self.state_index(if open { y } else { x }, mask), ring);
        }
    }

    /// One step of the uniformized chain: `v P` with `P = I + Q / Lambda`.
    pub fn step(&self, v: &[f64]) -> Vec<f64> {
        let lambda = self.uniformization_rate();
        let mut out = vec![0.0; v.len()];
        for (s, &m) in v.iter().enumerate() {
            if m == 0.0 {
                continue;
            }
            self.for_each_jump(s, |t, r| out[t] += m * r / lambda);
        }
        out
    }

    /// Law at time `t` from the initial distribution.
    pub fn transient(&self, initial: &[f64], t: f64) -> Result<Vec<f64>> {
        if initial.len() != self.state_count() {
            return Err(Error::SizeMismatch(initial.len(), self.state_count()));
        }
        if !(t >= 0.0) {
            return Err(Error::Domain(format!("time must be nonnegative, got {t}")));
        }
        if t == 0.0 {
            return Ok(initial.to_vec());
        }
        let lt = self.uniformization_rate() * t;
        let mut out = vec![0.0; initial.len()];
        let mut v = initial.to_vec();
        let mut log_w = -lt;
        let mut k = 0usize;
        loop {
            let w = log_w.exp();
            if w > 0.0 {
                out.iter_mut().zip(&v).for_each(|(o, vi)| *o += w * vi);
            }
            // Tail after term k is at most w_{k+1} / (1 - lt / (k + 2)) once k + 2 > lt.
            let log_next = log_w + lt.ln() - ((k + 1) as f64).ln();
            if (k + 2) as f64 > lt {
                let tail = log_next.exp() / (1.0 - lt / (k + 2) as f64);
                if tail < TAIL_TOL {
                    break;
                }
            }
            v = self.step(&v);
            log_w = log_next;
            k += 1;
        }
        Ok(out)
    }

    /// Walker-position marginal of a distribution over states.
    pub fn walker_marginal(&self, dist: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        for (s, &m) in dist.iter().enumerate() {
            out[self.decode(s).0] += m;
        }
        out
    }

    pub fn residual_of(&self, pi: &[f64]) -> f64 {
        let lambda = self.uniformization_rate();
        let stepped = self.step(pi);
        stepped.iter().zip(pi).map(|(a, b)| (lambda * (a - b)).abs()).fold(0.0, f64::max)
    }

    /// Largest detailed-balance violation of `pi` over distinct state pairs.
    pub fn detailed_balance_error(&self, pi: &[f64]) -> f64 {
        let states = self.state_count();
        let mut worst: f64 = 0.0;
        for s in 0..states {
            let (x, mask) = self.decode(s);
            for e in 0..self.edge_count {
                let bit = 1u64 << e;
                let t = self.state_index(x, mask ^ bit);
                let forward = if mask & bit == 0 { self.mu * self.p } else { self.mu * (1.0 - self.p) };
                let backward = if mask & bit == 0 { self.mu * (1.0 - self.p) } else { self.mu * self.p };
                worst = worst.max((pi[s] * forward - pi[t] * backward).abs());
            }
            let ring = 1.0 / (self.n - 1) as f64;
            for y in (0..self.n).filter(|&y| y != x) {
                if mask & (1u64 << pair_index(x, y, self.n)) != 0 {
                    let t = self.state_index(y, mask);
                    worst = worst.max((pi[s] * ring - pi[t] * ring).abs());
                }
            }
        }
        worst
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }
}

pub fn stationarity_residual(spec: &GeneratorSpec) -> StationarityReport {
    let pi = spec.stationary();
    StationarityReport { residual: spec.residual_of(&pi), detailed_balance: spec.detailed_balance_error(&pi) }
}

/// Total variation distance between two distributions on the same space.
pub fn tv_distance(a: &[f64], b: &[f64]) -> f64 {
    0.5 * a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum::<f64>()
}

fn log_bernoulli_mass(k: u64, n: u64, q: f64) -> f64 {
    let term = |count: u64, prob: f64| if count == 0 { 0.0 } else { count as f64 * prob.ln() };
    term(k, q) + term(n - k, 1.0 - q)
}

/// TV between `Bernoulli(a)^N` and `Bernoulli(p)^N`, via the open count,
/// which is sufficient for both product measures.
pub fn exact_env_tv(edge_count: u64, p: f64, a: f64) -> f64 {
    let n = edge_count;
    let mut log_binom = 0.0;
    let mut total = 0.0;
    for k in 0..=n {
        if k > 0 {
            log_binom += ((n - k + 1) as f64).ln() - (k as f64).ln();
        }
        let x = (log_binom + log_bernoulli_mass(k, n, a)).exp();
        let y = (log_binom + log_bernoulli_mass(k, n, p)).exp();
        total += (x - y).abs();
    }
    (0.5 * total).min(1.0)
}

/// Open probability at time `t` of an edge that was open at time 0.
pub fn open_probability_from_open(p: f64, mu: f64, t: f64) -> f64 {
    p + (1.0 - p) * (-mu * t).exp()
}
