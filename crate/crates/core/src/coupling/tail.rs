use rayon::prelude::*;

use crate::coupling::full::{run_full_coupling, CouplingConfig, CouplingRecord, CouplingStart, CouplingStreams};
use crate::error::{Error, Result};
use crate::estimators::estimate::{CurvePoint, Estimate};
use crate::params::Params;
use crate::rng::{rng_for, SimRng, Stream};

/// Coupling records for `replicas` independent starts drawn by `start_sampler`.
pub fn coupling_ensemble<F>(params: &Params, start_sampler: F, t_cap: f64, replicas: usize, seed: u64) -> Result<Vec<CouplingRecord>>
where
    F: Fn(&mut SimRng) -> Result<CouplingStart> + Sync,
{
    if replicas == 0 {
        return Err(Error::InvalidParams("replicas must be positive".into()));
    }
    (0..replicas as u64)
        .into_par_iter()
        .map(|r| {
            let start = start_sampler(&mut rng_for(seed, r, Stream::Start))?;
            let mut streams = CouplingStreams::for_replica(seed, r);
            run_full_coupling(params, &start, &CouplingConfig::until(t_cap), &mut streams).map(|(rec, _)| rec)
        })
        .collect()
}

/// Empirical `P(tau_c > t)` at each of the ascending `times`.
pub fn coalescence_tail_curve<F>(
    params: &Params,
    start_sampler: F,
    times: &[f64],
    replicas: usize,
    seed: u64,
) -> Result<Vec<CurvePoint>>
where
    F: Fn(&mut SimRng) -> Result<CouplingStart> + Sync,
{
    if times.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidParams("times must be ascending".into()));
    }
    let t_cap = times.last().copied().unwrap_or(0.0);
    let records = coupling_ensemble(params, start_sampler, t_cap, replicas, seed)?;
    Ok(tail_from_records(&records, times, seed))
}

pub fn tail_from_records(records: &[CouplingRecord], times: &[f64], seed: u64) -> Vec<CurvePoint> {
    let censored = records.iter().filter(|r| r.is_censored()).count() as f64 / records.len() as f64;
    times
        .iter()
        .map(|&t| {
            let alive = records.iter().filter(|r| r.tau_c.is_none_or(|tau| tau > t)).count();
            CurvePoint { time: t, estimate: Estimate::from_indicators(alive, records.len(), seed).with_censoring(censored) }
        })
        .collect()
}
