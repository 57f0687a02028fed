use rand::seq::IndexedRandom;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::Params;
use crate::rng::SimRng;
use crate::sim::{Environment, InitMode};
use crate::structure::{components_and_giant, GoodGraphConstants, GoodnessChecker};

/// How often goodness is re-checked along a trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GoodnessConfig {
    pub constants: GoodGraphConstants,
    /// Check after every `cadence` refresh events (and at time 0).
    pub cadence: u64,
    pub with_isolated_clause: bool,
}

impl GoodnessConfig {
    /// Every refresh event up to `n = 500`, every 100th above.
    pub fn default_for(n: usize) -> Self {
        GoodnessConfig {
            constants: GoodGraphConstants::default(),
            cadence: if n <= 500 { 1 } else { 100 },
            with_isolated_clause: false,
        }
    }
}

/// Tracks the first time a snapshot failed the good-graph test.
pub struct GoodnessMonitor {
    checker: GoodnessChecker,
    cadence: u64,
    since_last: u64,
    pub first_bad: Option<f64>,
    pub checks: u64,
}

impl GoodnessMonitor {
    pub fn new(config: &GoodnessConfig) -> Self {
        let mut checker = GoodnessChecker::new(config.constants, config.with_isolated_clause);
        checker.spectral_tol = 1e-6;
        GoodnessMonitor { checker, cadence: config.cadence.max(1), since_last: 0, first_bad: None, checks: 0 }
    }

    pub fn check_now(&mut self, env: &Environment) {
        if self.first_bad.is_some() {
            return;
        }
        self.checks += 1;
        self.since_last = 0;
        if !self.checker.check(&env.to_graph()).is_good() {
            self.first_bad = Some(env.clock());
        }
    }

    /// Call after every refresh event.
    pub fn after_refresh(&mut self, env: &Environment) {
        self.since_last += 1;
        if self.since_last >= self.cadence {
            self.check_now(env);
        }
    }

    /// Good on `[0, t]` as far as the checks could tell.
    pub fn good_through(&self, t: f64) -> bool {
        self.first_bad.is_none_or(|b| b > t)
    }
}

/// Stationary environment conditioned on passing the good-graph test, with
/// `walkers` independent uniform vertices of its giant.
pub fn good_stationary_start(
    params: &Params,
    constants: &GoodGraphConstants,
    walkers: usize,
    max_tries: usize,
    rng: &mut SimRng,
) -> Result<(Environment, Vec<usize>)> {
    let mut checker = GoodnessChecker::new(*constants, false);
    for _ in 0..max_tries {
        let env = Environment::init(params, &InitMode::Stationary, rng)?;
        let graph = env.to_graph();
        if checker.check(&graph).is_good() {
            let (comps, giant) = components_and_giant(&graph)?;
            let pos = (0..walkers).map(|_| *comps[giant].choose(rng).expect("giant is nonempty")).collect();
            return Ok((env, pos));
        }
    }
    Err(Error::RetriesExhausted(max_tries))
}
