use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimators::estimate::{CurvePoint, Estimate};
use crate::estimators::tv::{env_count_tv, tv_plugin_against};
use crate::oracle::{GeneratorSpec, ORACLE_MAX_N};
use crate::params::Params;
use crate::rng::{rng_for, Stream};
use crate::sim::{lazy_walk_positions, Environment, InitMode, LazyEnvironment, LazyStart, System};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MixingTarget {
    /// Law of the walker position against uniform.
    Walk,
    /// Law of `(X_t, eta_t)` against uniform times the product measure.
    FullSystem,
    /// Law of the open-edge count against Binomial(N, p).
    EnvironmentCount,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WalkerStart {
    Vertex(usize),
    Uniform,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnvStart {
    Stationary,
    AllOpen,
    AllClosed,
}

impl EnvStart {
    fn init_mode(self) -> InitMode {
        match self {
            EnvStart::Stationary => InitMode::Stationary,
            EnvStart::AllOpen => InitMode::AllOpen,
            EnvStart::AllClosed => InitMode::AllClosed,
        }
    }

    fn lazy(self) -> LazyStart {
        match self {
            EnvStart::Stationary => LazyStart::Stationary,
            EnvStart::AllOpen => LazyStart::AllOpen,
            EnvStart::AllClosed => LazyStart::AllClosed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MixingStart {
    pub walker: WalkerStart,
    pub env: EnvStart,
}

fn check_times(times: &[f64], replicas: usize) -> Result<()> {
    if replicas < 2 {
        return Err(Error::InvalidParams("need at least two replicas".into()));
    }
    if times.iter().any(|t| !(*t >= 0.0)) || times.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidParams("times must be nonnegative and ascending".into()));
    }
    Ok(())
}

fn start_vertex<R: Rng>(start: WalkerStart, n: usize, rng: &mut R) -> Result<usize> {
    match start {
        WalkerStart::Vertex(v) if v < n => Ok(v),
        WalkerStart::Vertex(v) => Err(Error::InvalidParams(format!("start vertex {v} out of range"))),
        WalkerStart::Uniform => Ok(rng.random_range(0..n)),
    }
}

/// Walker positions at each time, one row per replica. Edges are sampled
/// lazily, which is exact for the walk.
pub fn walk_positions(params: &Params, start: MixingStart, times: &[f64], replicas: usize, seed: u64) -> Result<Vec<Vec<usize>>> {
    check_times(times, replicas)?;
    (0..replicas as u64)
        .into_par_iter()
        .map(|r| {
            let mut rng = rng_for(seed, r, Stream::Main);
            let x0 = start_vertex(start.walker, params.n(), &mut rng)?;
            let mut env = LazyEnvironment::new(*params, start.env.lazy());
            Ok(lazy_walk_positions(&mut env, x0, times, &mut rng))
        })
        .collect()
}

/// TV distance to equilibrium along `times`.
pub fn mixing_curve(
    params: &Params,
    target: MixingTarget,
    start: MixingStart,
    times: &[f64],
    replicas: usize,
    seed: u64,
) -> Result<Vec<CurvePoint>> {
    check_times(times, replicas)?;
    let n = params.n();
    let per_time: Vec<(f64, f64)> = match target {
        MixingTarget::Walk => {
            let rows = walk_positions(params, start, times, replicas, seed)?;
            let uniform = vec![1.0 / n as f64; n];
            (0..times.len())
                .map(|i| {
                    let col: Vec<usize> = rows.iter().map(|row| row[i]).collect();
                    tv_plugin_against(&col, &uniform)
                })
                .collect::<Result<_>>()?
        }
        MixingTarget::FullSystem => {
            if n > ORACLE_MAX_N {
                return Err(Error::Domain(format!(
                    "full-system plug-in TV needs n <= {ORACLE_MAX_N}; use the coalescence tail curve as an upper bound"
                )));
            }
            let spec = GeneratorSpec::new(params)?;
            let rows = full_state_samples(params, start, times, replicas, seed)?;
            let target = spec.stationary();
            (0..times.len())
                .map(|i| {
                    let col: Vec<usize> = rows.iter().map(|row| row[i]).collect();
                    tv_plugin_against(&col, &target)
                })
                .collect::<Result<_>>()?
        }
        MixingTarget::EnvironmentCount => {
            let rows = open_count_samples(params, start.env, times, replicas, seed)?;
            (0..times.len())
                .map(|i| {
                    let col: Vec<usize> = rows.iter().map(|row| row[i]).collect();
                    env_count_tv(&col, params.edge_count(), params.p())
                })
                .collect::<Result<_>>()?
        }
    };
    Ok(times
        .iter()
        .zip(per_time)
        .map(|(&time, (value, stderr))| CurvePoint {
            time,
            estimate: Estimate { value, stderr, replicas, master_seed: seed, censored_fraction: 0.0 },
        })
        .collect())
}

/// Oracle state indices `x * 2^N + mask` at each time (`n <= 5`).
pub fn full_state_samples(params: &Params, start: MixingStart, times: &[f64], replicas: usize, seed: u64) -> Result<Vec<Vec<usize>>> {
    let spec = GeneratorSpec::new(params)?;
    (0..replicas as u64)
        .into_par_iter()
        .map(|r| {
            let mut rng = rng_for(seed, r, Stream::Main);
            let x0 = start_vertex(start.walker, params.n(), &mut rng)?;
            let env = Environment::init(params, &start.env.init_mode(), &mut rng)?;
            let mut sys = System::new(*params, env, vec![x0], rng)?;
            times
                .iter()
                .map(|&t| {
                    sys.advance(t)?;
                    Ok(spec.state_index(sys.walkers()[0], sys.env().edge_mask()))
                })
                .collect()
        })
        .collect()
}

/// Open-edge counts at each time, from full environment simulations.
pub fn open_count_samples(params: &Params, env_start: EnvStart, times: &[f64], replicas: usize, seed: u64) -> Result<Vec<Vec<usize>>> {
    (0..replicas as u64)
        .into_par_iter()
        .map(|r| {
            let mut rng = rng_for(seed, r, Stream::Environment);
            let env = Environment::init(params, &env_start.init_mode(), &mut rng)?;
            let mut sys = System::new(*params, env, Vec::new(), rng)?;
            times
                .iter()
                .map(|&t| {
                    sys.advance(t)?;
                    Ok(sys.env().open_count())
                })
                .collect()
        })
        .collect()
}

/// Walk TV from a fixed start vertex on a stationary environment, using
/// that all other vertices are exchangeable: `TV = |P(X_t = x0) - 1/n|`.
pub fn walk_tv_symmetric(params: &Params, x0: usize, times: &[f64], replicas: usize, seed: u64) -> Result<Vec<CurvePoint>> {
    let start = MixingStart { walker: WalkerStart::Vertex(x0), env: EnvStart::Stationary };
    let rows = walk_positions(params, start, times, replicas, seed)?;
    let n = params.n() as f64;
    Ok(times
        .iter()
        .enumerate()
        .map(|(i, &time)| {
            let home = rows.iter().filter(|row| row[i] == x0).count();
            let est = Estimate::from_indicators(home, replicas, seed);
            CurvePoint { time, estimate: Estimate { value: (est.value - 1.0 / n).abs(), ..est } }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn walk_starts_far_from_uniform() {
        let params = Params::new(20, 2.0, 0.5).unwrap();
        let start = MixingStart { walker: WalkerStart::Vertex(0), env: EnvStart::Stationary };
        let curve = mixing_curve(&params, MixingTarget::Walk, start, &[0.0], 100, 1).unwrap();
        assert!((curve[0].estimate.value - 0.95).abs() < 1e-12);
    }

    #[test]
    fn full_system_rejects_large_n() {
        let params = Params::new(6, 2.0, 0.5).unwrap();
        let start = MixingStart { walker: WalkerStart::Vertex(0), env: EnvStart::Stationary };
        assert!(matches!(
            mixing_curve(&params, MixingTarget::FullSystem, start, &[1.0], 10, 1),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn walk_mixes_eventually() {
        let params = Params::new(10, 2.0, 1.0).unwrap();
        let curve = walk_tv_symmetric(&params, 0, &[200.0], 4000, 3).unwrap();
        assert!(curve[0].estimate.value < 4.0 * curve[0].estimate.stderr + 0.01);
    }
}
