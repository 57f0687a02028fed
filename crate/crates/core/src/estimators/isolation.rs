use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimators::estimate::{CurvePoint, Estimate};
use crate::estimators::monitor::{GoodnessConfig, GoodnessMonitor};
use crate::params::Params;
use crate::rng::{rng_for, SimRng, Stream};
use crate::sim::{Environment, Event, Predicate, StopOutcome, System};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IsolationMode {
    /// One walker; stop when its vertex is isolated.
    Single,
    /// Two independent walkers on one environment; stop when both sit on
    /// isolated vertices at the same time.
    Dual,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GiantTime {
    /// First time the walker is in the giant.
    Hit,
    /// First time the walker is outside the giant.
    Exit,
}

/// A stopping time together with the goodness record along the way.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StoppingSample {
    pub time: f64,
    pub censored: bool,
    /// First failed goodness check, if any, before the stopping time.
    pub first_bad: Option<f64>,
    pub checks: u64,
}

impl StoppingSample {
    pub fn stayed_good(&self) -> bool {
        self.first_bad.is_none()
    }
}

pub type StartSampler<'a> = dyn Fn(&mut SimRng) -> Result<(Environment, Vec<usize>)> + Sync + 'a;

fn run_stopping(
    params: &Params,
    env: Environment,
    walkers: Vec<usize>,
    mut predicate: Predicate,
    t_cap: f64,
    rng: SimRng,
    goodness: &GoodnessConfig,
) -> Result<StoppingSample> {
    let mut sys = System::new(*params, env, walkers, rng)?;
    let mut monitor = GoodnessMonitor::new(goodness);
    monitor.check_now(sys.env());
    let outcome = if sys.holds(&mut predicate) {
        StopOutcome::Stopped(0.0)
    } else {
        loop {
            match sys.next_event(t_cap)? {
                None => break StopOutcome::Censored(t_cap),
                Some(event) => {
                    if let Event::EdgeRefresh { .. } = event {
                        monitor.after_refresh(sys.env());
                    }
                    if sys.holds(&mut predicate) {
                        break StopOutcome::Stopped(sys.clock());
                    }
                }
            }
        }
    };
    Ok(StoppingSample {
        time: outcome.time(),
        censored: outcome.is_censored(),
        first_bad: monitor.first_bad,
        checks: monitor.checks,
    })
}

fn ensemble<F>(replicas: usize, f: F) -> Result<Vec<StoppingSample>>
where
    F: Fn(u64) -> Result<StoppingSample> + Sync + Send,
{
    if replicas == 0 {
        return Err(Error::InvalidParams("replicas must be positive".into()));
    }
    (0..replicas as u64).into_par_iter().map(f).collect()
}

/// Isolation times of one or two walkers.
pub fn isolation_samples(
    params: &Params,
    mode: IsolationMode,
    start_sampler: &StartSampler,
    t_cap: f64,
    replicas: usize,
    seed: u64,
    goodness: &GoodnessConfig,
) -> Result<Vec<StoppingSample>> {
    ensemble(replicas, |r| {
        let (env, walkers) = start_sampler(&mut rng_for(seed, r, Stream::Start))?;
        let predicate = match mode {
            IsolationMode::Single => Predicate::WalkerIsolated(0),
            IsolationMode::Dual => Predicate::BothIsolated,
        };
        run_stopping(params, env, walkers, predicate, t_cap, rng_for(seed, r, Stream::Main), goodness)
    })
}

/// Hitting or exit times of the giant for one walker.
pub fn giant_hit_exit_samples(
    params: &Params,
    which: GiantTime,
    start_sampler: &StartSampler,
    t_cap: f64,
    replicas: usize,
    seed: u64,
    goodness: &GoodnessConfig,
) -> Result<Vec<StoppingSample>> {
    ensemble(replicas, |r| {
        let (env, walkers) = start_sampler(&mut rng_for(seed, r, Stream::Start))?;
        let predicate = match which {
            GiantTime::Hit => Predicate::WalkerInGiant(0),
            GiantTime::Exit => Predicate::WalkerOutOfGiant(0),
        };
        run_stopping(params, env, walkers, predicate, t_cap, rng_for(seed, r, Stream::Main), goodness)
    })
}

/// `P(tau > t, good on [0, t])` at each time.
pub fn survival_while_good(samples: &[StoppingSample], times: &[f64], seed: u64) -> Vec<CurvePoint> {
    let censored = samples.iter().filter(|s| s.censored).count() as f64 / samples.len() as f64;
    times
        .iter()
        .map(|&t| {
            let hits = samples
                .iter()
                .filter(|s| (s.censored || s.time > t) && s.first_bad.is_none_or(|b| b > t))
                .count();
            CurvePoint { time: t, estimate: Estimate::from_indicators(hits, samples.len(), seed).with_censoring(censored) }
        })
        .collect()
}

/// `P(tau <= t)` at each time (censored samples count as `> t_cap`).
pub fn cdf(samples: &[StoppingSample], times: &[f64], seed: u64) -> Vec<CurvePoint> {
    let censored = samples.iter().filter(|s| s.censored).count() as f64 / samples.len() as f64;
    times
        .iter()
        .map(|&t| {
            let hits = samples.iter().filter(|s| !s.censored && s.time <= t).count();
            CurvePoint { time: t, estimate: Estimate::from_indicators(hits, samples.len(), seed).with_censoring(censored) }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::InitMode;

    fn closed_start(n: usize, walkers: Vec<usize>) -> impl Fn(&mut SimRng) -> Result<(Environment, Vec<usize>)> + Sync {
        move |_rng: &mut SimRng| Ok((Environment::empty(n), walkers.clone()))
    }

    #[test]
    fn isolated_starts_stop_at_zero() {
        let params = Params::new(20, 2.0, 0.1).unwrap();
        let cfg = GoodnessConfig::default_for(20);
        let single = isolation_samples(&params, IsolationMode::Single, &closed_start(20, vec![3]), 10.0, 5, 1, &cfg).unwrap();
        assert!(single.iter().all(|s| s.time == 0.0 && !s.censored));
        let dual = isolation_samples(&params, IsolationMode::Dual, &closed_start(20, vec![3, 4]), 10.0, 5, 1, &cfg).unwrap();
        assert!(dual.iter().all(|s| s.time == 0.0));
    }

    #[test]
    fn frozen_outside_giant_is_censored() {
        let params = Params::new(8, 1.0, 0.0).unwrap();
        let start = |_: &mut SimRng| Ok((Environment::from_edges(8, &[(0, 1), (1, 2), (3, 4)])?, vec![4]));
        let cfg = GoodnessConfig::default_for(8);
        let s = giant_hit_exit_samples(&params, GiantTime::Hit, &start, 50.0, 3, 2, &cfg).unwrap();
        assert!(s.iter().all(|x| x.censored));
        let start = |_: &mut SimRng| Ok((Environment::from_edges(8, &[(0, 1), (1, 2)])?, vec![1]));
        let s = giant_hit_exit_samples(&params, GiantTime::Hit, &start, 50.0, 3, 2, &cfg).unwrap();
        assert!(s.iter().all(|x| x.time == 0.0));
    }

    #[test]
    fn censoring_shrinks_with_longer_cap() {
        let params = Params::new(30, 2.0, 0.05).unwrap();
        let start = |rng: &mut SimRng| {
            let p = Params::new(30, 2.0, 0.05)?;
            Ok((Environment::init(&p, &InitMode::Stationary, rng)?, vec![0]))
        };
        let cfg = GoodnessConfig { cadence: u64::MAX, ..GoodnessConfig::default_for(30) };
        let frac = |cap: f64| {
            let s = isolation_samples(&params, IsolationMode::Single, &start, cap, 200, 5, &cfg).unwrap();
            s.iter().filter(|x| x.censored).count()
        };
        assert!(frac(5.0) >= frac(50.0));
        assert!(frac(50.0) >= frac(500.0));
    }
}
