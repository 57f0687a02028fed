//! Environment whose edges are only materialized when a walker looks at them.
//!
//! Each edge evolves as an independent two-state chain, so the state of an
//! edge at time `t` given its last observed state `s` at time `t0` is open
//! with probability `p + (s - p) * exp(-mu * (t - t0))`. Sampling edges on
//! demand from that kernel gives the same joint law of walker trajectories as
//! simulating all `N` refresh clocks.

use std::collections::HashMap;

use rand::Rng;
use rand_distr::Exp1;

use crate::params::Params;
use crate::sim::system::uniform_other;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LazyStart {
    Stationary,
    AllOpen,
    AllClosed,
}

#[derive(Debug, Clone)]
pub struct LazyEnvironment {
    params: Params,
    start: LazyStart,
    observed: HashMap<(u32, u32), (bool, f64)>,
}

impl LazyEnvironment {
    pub fn new(params: Params, start: LazyStart) -> Self {
        LazyEnvironment { params, start, observed: HashMap::new() }
    }

    /// Starts from an explicit configuration, observed at time 0.
    pub fn from_open_edges(params: Params, open: &[(usize, usize)]) -> Self {
        let mut env = LazyEnvironment::new(params, LazyStart::AllClosed);
        for &(u, v) in open {
            env.observed.insert(key(u, v), (true, 0.0));
        }
        env
    }

    pub fn observed_edges(&self) -> usize {
        self.observed.len()
    }

    /// State of edge `(u, v)` at time `t`; queries must be nondecreasing in
    /// time per edge.
    pub fn state_at<R: Rng + ?Sized>(&mut self, u: usize, v: usize, t: f64, rng: &mut R) -> bool {
        let p = self.params.p();
        let mu = self.params.mu();
        let k = key(u, v);
        let prob_open = match self.observed.get(&k) {
            Some(&(state, t0)) => {
                debug_assert!(t >= t0);
                p + (state as u8 as f64 - p) * (-mu * (t - t0)).exp()
            }
            None => match self.start {
                LazyStart::Stationary => p,
                LazyStart::AllOpen => p + (1.0 - p) * (-mu * t).exp(),
                LazyStart::AllClosed => p - p * (-mu * t).exp(),
            },
        };
        let state = rng.random_bool(prob_open.clamp(0.0, 1.0));
        self.observed.insert(k, (state, t));
        state
    }
}

fn key(u: usize, v: usize) -> (u32, u32) {
    (u.min(v) as u32, u.max(v) as u32)
}

/// Positions at each of the ascending `times` of one walker started at `x0`
/// on a lazily sampled environment.
pub fn lazy_walk_positions<R: Rng + ?Sized>(
    env: &mut LazyEnvironment,
    x0: usize,
    times: &[f64],
    rng: &mut R,
) -> Vec<usize> {
    let n = env.params.n();
    let mut out = Vec::with_capacity(times.len());
    let mut x = x0;
    let mut next_ring: f64 = rng.sample(Exp1);
    for &t in times {
        while next_ring <= t {
            let y = uniform_other(n, x, rng);
            if env.state_at(x, y, next_ring, rng) {
                x = y;
            }
            next_ring += rng.sample::<f64, _>(Exp1);
        }
        out.push(x);
    }
    out
}
