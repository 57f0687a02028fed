use rayon::prelude::*;

use crate::error::Result;
use crate::estimators::estimate::Estimate;
use crate::estimators::monitor::{GoodnessConfig, GoodnessMonitor};
use crate::params::Params;
use crate::rng::{rng_for, Stream};
use crate::sim::{Environment, System};

/// Probability that the environment started from `eta0` fails a goodness
/// check before `horizon`. An `eta0` that is not good gives 1.
pub fn goodness_persistence(
    params: &Params,
    eta0: &Environment,
    horizon: f64,
    replicas: usize,
    seed: u64,
    goodness: &GoodnessConfig,
) -> Result<Estimate> {
    let flags: Vec<bool> = (0..replicas as u64)
        .into_par_iter()
        .map(|r| -> Result<bool> {
            let mut monitor = GoodnessMonitor::new(goodness);
            monitor.check_now(eta0);
            if monitor.first_bad.is_some() {
                return Ok(true);
            }
            let mut sys = System::new(*params, eta0.clone(), Vec::new(), rng_for(seed, r, Stream::Environment))?;
            while sys.next_event(horizon)?.is_some() {
                monitor.after_refresh(sys.env());
                if monitor.first_bad.is_some() {
                    return Ok(true);
                }
            }
            Ok(false)
        })
        .collect::<Result<_>>()?;
    let hits = flags.iter().filter(|&&b| b).count();
    Ok(Estimate::from_indicators(hits, replicas, seed))
}
