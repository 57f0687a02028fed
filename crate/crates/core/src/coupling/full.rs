//! Four-step coalescent coupling of two full systems `(X, eta)` and `(Y, xi)`.
//!
//! 1. Shared refreshes, independent walks, until `eta == xi`.
//! 2. Shared refreshes, independent walks, until `eta == xi` and both walkers
//!    are isolated, at `x'` and `y'`.
//! 3. Refreshes of edges at `x'` or `y'` that would open them act as a joint
//!    change clock. On a ring, with probability `1 / (2n - 3)` the edge
//!    `(x', y')` opens in both (failure, back to 2). Otherwise a uniform `z`
//!    is drawn and `eta` opens `(x', z)` or `(y', z)` with probability 1/2,
//!    `xi` the other one. Continue only if `z` was isolated and `eta` opened
//!    `(x', z)`; otherwise back to 2.
//! 4. `eta(x', z)` and `xi(y', z)` share a refresh clock, as do `eta(y', z)`
//!    and `xi(x', z)`; the walkers ring together, `Y` aiming at the image of
//!    `X`'s target under the swap `x' <-> y'`. The step ends at the first
//!    change of an edge at `x'`, `y'` or `z`. If that change is the shared
//!    closing of `eta(x', z)` and `xi(y', z)`, the systems coalesce when both
//!    walkers sit at `z` and go back to step 2 otherwise. Any other change
//!    sends the coupling back to step 1.
//!
//! After every event the systems are compared, and they run as one from the
//! first time they are equal.

use std::collections::BTreeSet;

use rand::Rng;
use rand_distr::{Distribution, Exp};
use serde::{Deserialize, Serialize};

use crate::coupling::hclose::h_close_diff;
use crate::error::{Error, Result};
use crate::params::Params;
use crate::rng::{rng_for, SimRng, Stream};
use crate::sim::{uniform_other, uniform_pair, Environment};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FailureReason {
    OpenedXY,
    ZNotIsolated,
    WrongEdgePattern,
    PrematureChange,
    WalkersNotAtZ,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FailureCounts {
    pub opened_xy: u32,
    pub z_not_isolated: u32,
    pub wrong_edge_pattern: u32,
    pub premature_change: u32,
    pub walkers_not_at_z: u32,
}

impl FailureCounts {
    fn record(&mut self, reason: FailureReason) {
        match reason {
            FailureReason::OpenedXY => self.opened_xy += 1,
            FailureReason::ZNotIsolated => self.z_not_isolated += 1,
            FailureReason::WrongEdgePattern => self.wrong_edge_pattern += 1,
            FailureReason::PrematureChange => self.premature_change += 1,
            FailureReason::WalkersNotAtZ => self.walkers_not_at_z += 1,
        }
    }

    pub fn total(&self) -> u32 {
        self.opened_xy + self.z_not_isolated + self.wrong_edge_pattern + self.premature_change + self.walkers_not_at_z
    }
}

/// Time spent in each step during one attempt. An attempt ends with a
/// failure, with coalescence, or at the time cap.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct AttemptRecord {
    pub step_i: f64,
    pub step_ii: f64,
    pub step_iii: f64,
    pub step_iv: f64,
    pub failure: Option<FailureReason>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CouplingRecord {
    /// Coalescence time, `None` when censored at `t_cap`.
    pub tau_c: Option<f64>,
    pub t_cap: f64,
    pub attempts: Vec<AttemptRecord>,
    pub failures: FailureCounts,
}

impl CouplingRecord {
    pub fn is_censored(&self) -> bool {
        self.tau_c.is_none()
    }

    /// Number of returns to step i or ii.
    pub fn retries(&self) -> u32 {
        self.failures.total()
    }
}

#[derive(Debug, Clone)]
pub struct CoupledSnapshot {
    pub time: f64,
    pub x: usize,
    pub eta: Environment,
    pub y: usize,
    pub xi: Environment,
}

#[derive(Debug, Clone)]
pub struct CouplingStart {
    pub x0: usize,
    pub eta0: Environment,
    pub y0: usize,
    pub xi0: Environment,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CouplingConfig {
    pub t_cap: f64,
    /// Ascending times at which the joint state is recorded.
    pub observe: Vec<f64>,
    /// Keep simulating the merged system after coalescence (needed for
    /// observations past `tau_c`).
    pub continue_after_coalescence: bool,
}

impl CouplingConfig {
    pub fn until(t_cap: f64) -> Self {
        CouplingConfig { t_cap, observe: Vec::new(), continue_after_coalescence: false }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Step {
    I,
    II,
    III { x: usize, y: usize },
    IV { x: usize, y: usize, z: usize },
    Coalesced,
}

/// Randomness for one coupled run, split by purpose.
pub struct CouplingStreams {
    pub environment: SimRng,
    pub walker_a: SimRng,
    pub walker_b: SimRng,
    pub coupling: SimRng,
}

impl CouplingStreams {
    pub fn for_replica(master: u64, replica: u64) -> Self {
        CouplingStreams {
            environment: rng_for(master, replica, Stream::Environment),
            walker_a: rng_for(master, replica, Stream::WalkerA),
            walker_b: rng_for(master, replica, Stream::WalkerB),
            coupling: rng_for(master, replica, Stream::Coupling),
        }
    }
}

struct Coupled<'a> {
    params: &'a Params,
    x: usize,
    y: usize,
    eta: Environment,
    xi: Environment,
    diff: BTreeSet<(usize, usize)>,
}

impl Coupled<'_> {
    fn refresh_diff(&mut self, u: usize, v: usize) {
        let key = (u.min(v), u.max(v));
        if self.eta.is_open(u, v) != self.xi.is_open(u, v) {
            self.diff.insert(key);
        } else {
            self.diff.remove(&key);
        }
    }

    fn set_both(&mut self, u: usize, v: usize, open: bool) -> bool {
        let a = self.eta.set_edge(u, v, open);
        let b = self.xi.set_edge(u, v, open);
        self.refresh_diff(u, v);
        a || b
    }

    fn equal(&self) -> bool {
        self.x == self.y && self.diff.is_empty()
    }

    fn assert_close(&self) {
        let diff: Vec<_> = self.diff.iter().copied().collect();
        assert!(h_close_diff(&diff, self.params.n()), "coupled environments left H_c: {diff:?}");
    }

    fn snapshot(&self, time: f64) -> CoupledSnapshot {
        CoupledSnapshot { time, x: self.x, eta: self.eta.clone(), y: self.y, xi: self.xi.clone() }
    }
}

/// Runs the coupling from the given starts up to `config.t_cap`.
pub fn run_full_coupling(
    params: &Params,
    start: &CouplingStart,
    config: &CouplingConfig,
    streams: &mut CouplingStreams,
) -> Result<(CouplingRecord, Vec<CoupledSnapshot>)> {
    let n = params.n();
    if start.eta0.n() != n || start.xi0.n() != n {
        return Err(Error::SizeMismatch(start.eta0.n().max(start.xi0.n()), n));
    }
    if start.x0 >= n || start.y0 >= n {
        return Err(Error::InvalidParams("walker start out of range".into()));
    }
    if config.observe.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidParams("observation times must be ascending".into()));
    }
    let mut sys = Coupled {
        params,
        x: start.x0,
        y: start.y0,
        eta: start.eta0.clone(),
        xi: start.xi0.clone(),
        diff: start.eta0.difference(&start.xi0).into_iter().collect(),
    };
    let refresh_rate = params.refresh_rate();
    let p = params.p();
    let mut record = CouplingRecord { tau_c: None, t_cap: config.t_cap, attempts: Vec::new(), failures: FailureCounts::default() };
    let mut attempt = AttemptRecord::default();
    let mut snapshots = Vec::with_capacity(config.observe.len());
    let mut next_obs = 0;
    let mut t = 0.0;
    let mut step = if sys.equal() {
        record.tau_c = Some(0.0);
        Step::Coalesced
    } else if sys.diff.is_empty() {
        Step::II
    } else {
        Step::I
    };
    if step == Step::II && sys.eta.is_isolated(sys.x) && sys.eta.is_isolated(sys.y) {
        step = Step::III { x: sys.x, y: sys.y };
    }

    loop {
        if step == Step::Coalesced && !config.continue_after_coalescence {
            break;
        }
        let walker_rate = match step {
            Step::I | Step::II | Step::III { .. } => 2.0,
            Step::IV { .. } | Step::Coalesced => 1.0,
        };
        let rate = refresh_rate + walker_rate;
        let dt = Exp::new(rate).expect("positive rate").sample(&mut streams.environment);
        let t_next = (t + dt).min(config.t_cap);
        while next_obs < config.observe.len() && config.observe[next_obs] < t_next {
            snapshots.push(sys.snapshot(config.observe[next_obs]));
            next_obs += 1;
        }
        let elapsed = t_next - t;
        match step {
            Step::I => attempt.step_i += elapsed,
            Step::II => attempt.step_ii += elapsed,
            Step::III { .. } => attempt.step_iii += elapsed,
            Step::IV { .. } => attempt.step_iv += elapsed,
            Step::Coalesced => {}
        }
        if t + dt > config.t_cap {
            t = config.t_cap;
            break;
        }
        t += dt;

        let is_refresh = streams.environment.random::<f64>() * rate < refresh_rate;
        let mut failure = None;
        if is_refresh {
            let (u, v) = uniform_pair(n, &mut streams.environment);
            let open = streams.environment.random_bool(p);
            match step {
                Step::I | Step::II | Step::Coalesced => {
                    sys.set_both(u, v, open);
                }
                Step::III { x, y } => {
                    if u == x || u == y || v == x || v == y {
                        // Edges at x', y' are closed in both; only openings ring.
                        if open {
                            let (next, fail) = change_clock(&mut sys, x, y, &mut streams.coupling);
                            step = next;
                            failure = fail;
                        }
                    } else {
                        sys.set_both(u, v, open);
                    }
                }
                Step::IV { x, y, z } => {
                    let touches = [x, y, z].contains(&u) || [x, y, z].contains(&v);
                    let pair = (u.min(v), u.max(v));
                    if pair == (x.min(z), x.max(z)) {
                        // eta(x', z) with xi(y', z): both open now.
                        if !open {
                            sys.eta.set_edge(x, z, false);
                            sys.xi.set_edge(y, z, false);
                            sys.refresh_diff(x, z);
                            sys.refresh_diff(y, z);
                            if sys.x == z && sys.y == z {
                                step = Step::Coalesced;
                            } else {
                                debug_assert!(sys.x == x && sys.y == y);
                                failure = Some(FailureReason::WalkersNotAtZ);
                                step = Step::II;
                            }
                        }
                    } else if pair == (y.min(z), y.max(z)) {
                        // eta(y', z) with xi(x', z): both closed now.
                        if open {
                            sys.eta.set_edge(y, z, true);
                            sys.xi.set_edge(x, z, true);
                            sys.refresh_diff(y, z);
                            sys.refresh_diff(x, z);
                            failure = Some(FailureReason::PrematureChange);
                            step = Step::I;
                        }
                    } else if sys.set_both(u, v, open) && touches {
                        failure = Some(FailureReason::PrematureChange);
                        step = Step::I;
                    }
                }
            }
        } else {
            let swap_pair = if let Step::IV { x, y, .. } = step { Some((x, y)) } else { None };
            match step {
                Step::IV { .. } | Step::Coalesced => {
                    let target = uniform_other(n, sys.x, &mut streams.walker_a);
                    let target_y = match swap_pair {
                        Some((x, y)) if target == x => y,
                        Some((x, y)) if target == y => x,
                        _ => target,
                    };
                    let moved_x = sys.eta.is_open(sys.x, target);
                    let moved_y = sys.xi.is_open(sys.y, target_y);
                    debug_assert_eq!(moved_x, moved_y);
                    if moved_x {
                        sys.x = target;
                    }
                    if moved_y {
                        sys.y = target_y;
                    }
                }
                _ => {
                    // Independent walkers, each ringing at rate 1.
                    if streams.environment.random_bool(0.5) {
                        let target = uniform_other(n, sys.x, &mut streams.walker_a);
                        if sys.eta.is_open(sys.x, target) {
                            sys.x = target;
                        }
                    } else {
                        let target = uniform_other(n, sys.y, &mut streams.walker_b);
                        if sys.xi.is_open(sys.y, target) {
                            sys.y = target;
                        }
                    }
                }
            }
        }

        if let Some(reason) = failure {
            sys.assert_close();
            record.failures.record(reason);
            attempt.failure = Some(reason);
            record.attempts.push(attempt);
            attempt = AttemptRecord::default();
        }
        if step != Step::Coalesced && sys.equal() {
            step = Step::Coalesced;
        }
        if step == Step::Coalesced {
            if record.tau_c.is_none() {
                record.tau_c = Some(t);
                record.attempts.push(attempt);
                attempt = AttemptRecord::default();
            }
            continue;
        }
        if step == Step::I && sys.diff.is_empty() {
            step = Step::II;
        }
        if step == Step::II && sys.diff.is_empty() && sys.eta.is_isolated(sys.x) && sys.xi.is_isolated(sys.y) {
            step = Step::III { x: sys.x, y: sys.y };
        }
    }
    while next_obs < config.observe.len() && config.observe[next_obs] <= t {
        snapshots.push(sys.snapshot(config.observe[next_obs]));
        next_obs += 1;
    }
    if record.tau_c.is_none() {
        record.attempts.push(attempt);
    }
    Ok((record, snapshots))
}

/// Step iii change-clock ring at isolated `x != y` with equal environments.
fn change_clock(sys: &mut Coupled, x: usize, y: usize, rng: &mut SimRng) -> (Step, Option<FailureReason>) {
    let n = sys.params.n();
    if rng.random_range(0..(2 * n - 3)) == 0 {
        sys.set_both(x, y, true);
        return (Step::II, Some(FailureReason::OpenedXY));
    }
    let z = loop {
        let z = rng.random_range(0..n);
        if z != x && z != y {
            break z;
        }
    };
    let z_isolated = sys.eta.is_isolated(z);
    let eta_takes_x = rng.random_bool(0.5);
    let (eta_end, xi_end) = if eta_takes_x { (x, y) } else { (y, x) };
    sys.eta.set_edge(eta_end, z, true);
    sys.xi.set_edge(xi_end, z, true);
    sys.refresh_diff(x, z);
    sys.refresh_diff(y, z);
    if !z_isolated {
        (Step::II, Some(FailureReason::ZNotIsolated))
    } else if !eta_takes_x {
        (Step::II, Some(FailureReason::WrongEdgePattern))
    } else {
        (Step::IV { x, y, z }, None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from_seed;
    use crate::sim::InitMode;

    fn stationary(params: &Params, seed: u64) -> Environment {
        Environment::init(params, &InitMode::Stationary, &mut rng_from_seed(seed)).unwrap()
    }

    #[test]
    fn identical_starts_coalesce_at_zero() {
        let params = Params::new(6, 2.0, 0.5).unwrap();
        let env = stationary(&params, 1);
        let start = CouplingStart { x0: 2, eta0: env.clone(), y0: 2, xi0: env };
        let (rec, _) =
            run_full_coupling(&params, &start, &CouplingConfig::until(10.0), &mut CouplingStreams::for_replica(1, 0))
                .unwrap();
        assert_eq!(rec.tau_c, Some(0.0));
        assert_eq!(rec.retries(), 0);
    }

    #[test]
    fn small_systems_coalesce_and_stay_equal() {
        let params = Params::new(4, 2.0, 0.5).unwrap();
        let mut coalesced = 0;
        for r in 0..200 {
            let start =
                CouplingStart { x0: 0, eta0: stationary(&params, 2 * r), y0: 3, xi0: stationary(&params, 2 * r + 1) };
            let config = CouplingConfig { t_cap: 200.0, observe: vec![50.0, 100.0, 150.0, 199.0], continue_after_coalescence: true };
            let (rec, snaps) = run_full_coupling(&params, &start, &config, &mut CouplingStreams::for_replica(9, r)).unwrap();
            assert_eq!(snaps.len(), 4);
            if let Some(tau) = rec.tau_c {
                coalesced += 1;
                for s in snaps.iter().filter(|s| s.time >= tau) {
                    assert_eq!(s.x, s.y);
                    assert!(s.eta.same_edges(&s.xi));
                }
            }
            for a in &rec.attempts {
                assert!(a.step_i >= 0.0 && a.step_ii >= 0.0 && a.step_iii >= 0.0 && a.step_iv >= 0.0);
            }
        }
        assert!(coalesced > 190, "{coalesced}");
    }

    #[test]
    fn observations_must_ascend() {
        let params = Params::new(4, 2.0, 0.5).unwrap();
        let env = stationary(&params, 1);
        let start = CouplingStart { x0: 0, eta0: env.clone(), y0: 1, xi0: env };
        let config = CouplingConfig { t_cap: 5.0, observe: vec![2.0, 1.0], continue_after_coalescence: true };
        assert!(run_full_coupling(&params, &start, &config, &mut CouplingStreams::for_replica(1, 0)).is_err());
    }
}
