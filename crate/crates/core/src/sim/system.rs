use rand::Rng;
use rand_distr::{Distribution, Exp};

use crate::error::{Error, Result};
use crate::params::Params;
use crate::rng::SimRng;
use crate::sim::environment::Environment;
use crate::sim::log::{Event, EventLog};
use crate::structure::components_and_giant;

/// Stopping conditions for [`System::run_until`].
pub enum Predicate<'a> {
    WalkerIsolated(usize),
    /// Walkers 0 and 1 both sit on isolated vertices.
    BothIsolated,
    WalkerInGiant(usize),
    WalkerOutOfGiant(usize),
    /// Environment has the same open-edge set as the reference.
    EnvironmentEquals(&'a Environment),
    Custom(Box<dyn FnMut(&System) -> bool + 'a>),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StopOutcome {
    Stopped(f64),
    Censored(f64),
}

impl StopOutcome {
    pub fn time(&self) -> f64 {
        match *self {
            StopOutcome::Stopped(t) | StopOutcome::Censored(t) => t,
        }
    }

    pub fn is_censored(&self) -> bool {
        matches!(self, StopOutcome::Censored(_))
    }
}

/// Uniform unordered pair `u != v`, returned with `u < v`.
pub fn uniform_pair<R: Rng + ?Sized>(n: usize, rng: &mut R) -> (usize, usize) {
    let u = rng.random_range(0..n);
    let v = uniform_other(n, u, rng);
    (u.min(v), u.max(v))
}

/// Uniform vertex different from `x`.
pub fn uniform_other<R: Rng + ?Sized>(n: usize, x: usize, rng: &mut R) -> usize {
    let v = rng.random_range(0..n - 1);
    if v >= x {
        v + 1
    } else {
        v
    }
}

/// Environment plus walkers driven by one merged Poisson clock of rate
/// `mu * N + walkers`.
pub struct System {
    params: Params,
    env: Environment,
    walkers: Vec<usize>,
    rng: SimRng,
    log: Option<EventLog>,
    giant: Option<Vec<bool>>,
    refresh_events: u64,
    walker_events: u64,
}

impl System {
    pub fn new(params: Params, env: Environment, walkers: Vec<usize>, rng: SimRng) -> Result<Self> {
        if env.n() != params.n() {
            return Err(Error::SizeMismatch(env.n(), params.n()));
        }
        if let Some(&w) = walkers.iter().find(|&&w| w >= params.n()) {
            return Err(Error::InvalidParams(format!("walker position {w} out of range")));
        }
        Ok(System { params, env, walkers, rng, log: None, giant: None, refresh_events: 0, walker_events: 0 })
    }

    /// Start recording every applied event.
    pub fn enable_log(&mut self) {
        self.log = Some(EventLog::new());
    }

    pub fn take_log(&mut self) -> Option<EventLog> {
        self.log.take()
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn env(&self) -> &Environment {
        &self.env
    }

    pub fn walkers(&self) -> &[usize] {
        &self.walkers
    }

    pub fn clock(&self) -> f64 {
        self.env.clock()
    }

    pub fn refresh_events(&self) -> u64 {
        self.refresh_events
    }

    pub fn walker_events(&self) -> u64 {
        self.walker_events
    }

    pub fn rng(&mut self) -> &mut SimRng {
        &mut self.rng
    }

    fn total_rate(&self) -> f64 {
        self.params.refresh_rate() + self.walkers.len() as f64
    }

    /// Applies the next event if it happens no later than `t_end`; otherwise
    /// moves the clock to `t_end` and returns `None`.
    pub fn next_event(&mut self, t_end: f64) -> Result<Option<Event>> {
        let clock = self.env.clock();
        if t_end < clock {
            return Err(Error::TimeReversal { t_end, clock });
        }
        let rate = self.total_rate();
        if rate <= 0.0 {
            self.env.set_clock(t_end);
            return Ok(None);
        }
        let dt = Exp::new(rate).expect("positive rate").sample(&mut self.rng);
        let t = clock + dt;
        if t > t_end {
            self.env.set_clock(t_end);
            return Ok(None);
        }
        let refresh_rate = self.params.refresh_rate();
        let event = if self.rng.random::<f64>() * rate < refresh_rate {
            let (u, v) = uniform_pair(self.params.n(), &mut self.rng);
            let open = self.rng.random_bool(self.params.p());
            if self.env.set_edge(u, v, open) {
                self.giant = None;
            }
            self.refresh_events += 1;
            Event::EdgeRefresh { u, v, open }
        } else {
            let walker = self.rng.random_range(0..self.walkers.len());
            let from = self.walkers[walker];
            let target = uniform_other(self.params.n(), from, &mut self.rng);
            let moved = self.env.is_open(from, target);
            if moved {
                self.walkers[walker] = target;
            }
            self.walker_events += 1;
            Event::WalkerRing { walker, target, moved }
        };
        self.env.set_clock(t);
        if let Some(log) = self.log.as_mut() {
            log.push(t, event);
        }
        Ok(Some(event))
    }

    pub fn advance(&mut self, t_end: f64) -> Result<()> {
        while self.next_event(t_end)?.is_some() {}
        Ok(())
    }

    /// Membership mask of the current giant, recomputed only after an edge
    /// changed state.
    pub fn giant_mask(&mut self) -> &[bool] {
        if self.giant.is_none() {
            let (comps, giant) = components_and_giant(&self.env).expect("n >= 2");
            let mut mask = vec![false; self.env.n()];
            for &v in &comps[giant] {
                mask[v] = true;
            }
            self.giant = Some(mask);
        }
        self.giant.as_deref().unwrap()
    }

    fn check_arity(&self, predicate: &Predicate) -> Result<()> {
        let needed = match predicate {
            Predicate::WalkerIsolated(i) | Predicate::WalkerInGiant(i) | Predicate::WalkerOutOfGiant(i) => i + 1,
            Predicate::BothIsolated => 2,
            Predicate::EnvironmentEquals(reference) => {
                if reference.n() != self.env.n() {
                    return Err(Error::SizeMismatch(reference.n(), self.env.n()));
                }
                0
            }
            Predicate::Custom(_) => 0,
        };
        if needed > self.walkers.len() || (matches!(predicate, Predicate::BothIsolated) && self.walkers.len() != 2) {
            return Err(Error::PredicateArity { needed, registered: self.walkers.len() });
        }
        Ok(())
    }

    pub fn holds(&mut self, predicate: &mut Predicate) -> bool {
        match predicate {
            Predicate::WalkerIsolated(i) => self.env.is_isolated(self.walkers[*i]),
            Predicate::BothIsolated => self.env.is_isolated(self.walkers[0]) && self.env.is_isolated(self.walkers[1]),
            Predicate::WalkerInGiant(i) => {
                let x = self.walkers[*i];
                self.giant_mask()[x]
            }
            Predicate::WalkerOutOfGiant(i) => {
                let x = self.walkers[*i];
                !self.giant_mask()[x]
            }
            Predicate::EnvironmentEquals(reference) => self.env.same_edges(reference),
            Predicate::Custom(f) => f(self),
        }
    }

    /// Runs until the predicate holds (checked now and after every event) or
    /// the clock reaches `t_cap`.
    pub fn run_until(&mut self, mut predicate: Predicate, t_cap: f64) -> Result<StopOutcome> {
        self.check_arity(&predicate)?;
        if t_cap < self.clock() {
            return Err(Error::TimeReversal { t_end: t_cap, clock: self.clock() });
        }
        if self.holds(&mut predicate) {
            return Ok(StopOutcome::Stopped(self.clock()));
        }
        while self.next_event(t_cap)?.is_some() {
            if self.holds(&mut predicate) {
                return Ok(StopOutcome::Stopped(self.clock()));
            }
        }
        Ok(StopOutcome::Censored(t_cap))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from_seed;
    use crate::sim::environment::InitMode;

    fn system(n: usize, lambda: f64, mu: f64, mode: InitMode, walkers: Vec<usize>, seed: u64) -> System {
        let params = Params::new(n, lambda, mu).unwrap();
        let mut rng = rng_from_seed(seed);
        let env = Environment::init(&params, &mode, &mut rng).unwrap();
        System::new(params, env, walkers, rng).unwrap()
    }

    #[test]
    fn zero_refresh_keeps_environment() {
        let mut sys = system(30, 3.0, 0.0, InitMode::Stationary, vec![0], 3);
        let before = sys.env().clone();
        sys.advance(50.0).unwrap();
        assert!(sys.env().same_edges(&before));
        assert_eq!(sys.refresh_events(), 0);
        assert!(sys.walker_events() > 0);
        assert_eq!(sys.clock(), 50.0);
    }

    #[test]
    fn closed_environment_freezes_walker() {
        let mut sys = system(10, 2.0, 0.0, InitMode::AllClosed, vec![4], 1);
        sys.advance(100.0).unwrap();
        assert_eq!(sys.walkers(), &[4]);
    }

    #[test]
    fn time_reversal_rejected() {
        let mut sys = system(10, 2.0, 1.0, InitMode::Stationary, vec![0], 1);
        sys.advance(2.0).unwrap();
        assert_eq!(sys.advance(1.0).unwrap_err(), Error::TimeReversal { t_end: 1.0, clock: 2.0 });
    }

    #[test]
    fn isolated_start_stops_immediately() {
        let mut sys = system(10, 2.0, 1.0, InitMode::AllClosed, vec![3], 1);
        assert_eq!(sys.run_until(Predicate::WalkerIsolated(0), 10.0).unwrap(), StopOutcome::Stopped(0.0));
    }

    #[test]
    fn both_isolated_needs_two_walkers() {
        let mut sys = system(10, 2.0, 1.0, InitMode::AllClosed, vec![3], 1);
        assert_eq!(
            sys.run_until(Predicate::BothIsolated, 1.0).unwrap_err(),
            Error::PredicateArity { needed: 2, registered: 1 }
        );
    }

    #[test]
    fn log_replays_to_final_state() {
        let mut sys = system(12, 2.0, 0.3, InitMode::Stationary, vec![0, 5], 9);
        let initial = sys.env().clone();
        sys.enable_log();
        sys.advance(40.0).unwrap();
        let log = sys.take_log().unwrap();
        assert!(log.times_increasing());
        let (env, walkers) = log.replay(&initial, &[0, 5]).unwrap();
        assert!(env.same_edges(sys.env()));
        assert_eq!(walkers, sys.walkers());
        assert!(sys.env().check_invariants());
    }

    #[test]
    fn same_seed_same_log() {
        let run = |seed| {
            let mut sys = system(12, 2.0, 0.3, InitMode::Stationary, vec![0], seed);
            sys.enable_log();
            sys.advance(20.0).unwrap();
            sys.take_log().unwrap()
        };
        assert_eq!(run(4), run(4));
        assert_ne!(run(4), run(5));
    }

    #[test]
    fn giant_predicate_in_frozen_graph() {
        let params = Params::new(6, 1.0, 0.0).unwrap();
        let env = Environment::from_edges(6, &[(0, 1), (1, 2), (3, 4)]).unwrap();
        let mut sys = System::new(params, env, vec![3], rng_from_seed(1)).unwrap();
        assert!(sys.run_until(Predicate::WalkerInGiant(0), 20.0).unwrap().is_censored());
        assert_eq!(sys.run_until(Predicate::WalkerOutOfGiant(0), 30.0).unwrap(), StopOutcome::Stopped(20.0));
    }
}
