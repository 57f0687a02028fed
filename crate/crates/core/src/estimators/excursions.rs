//! Isolation excursions of a single vertex and the walker trapped on it.

use rand::Rng;
use rand_distr::{Distribution, Exp1};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimators::estimate::Estimate;
use crate::params::Params;
use crate::rng::{rng_for, Stream};
use crate::sim::{uniform_other, LazyEnvironment, LazyStart};

/// Excursion times of vertex 0, started from a stationary environment with
/// the walker at vertex 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsolationExcursionRecord {
    /// `sigma[k]`: the k-th time vertex 0 becomes isolated (possibly 0).
    pub sigma: Vec<f64>,
    /// `sigma_prime[k]`: first time after `sigma[k]` that vertex 0 gains an
    /// edge; shorter than `sigma` by at most one when the run was cut.
    pub sigma_prime: Vec<f64>,
    /// `sigma_dblprime[k]`: start of the degree-1 stretch ending at `sigma[k]`.
    pub sigma_dblprime: Vec<f64>,
    pub walker_at_one: Vec<bool>,
}

impl IsolationExcursionRecord {
    pub fn check_invariants(&self) -> bool {
        let ordered = self.sigma.windows(2).enumerate().all(|(k, w)| {
            self.sigma_prime.get(k).is_some_and(|&sp| w[0] < sp && sp < w[1])
        });
        let dbl = self.sigma.iter().zip(&self.sigma_dblprime).all(|(s, d)| d <= s);
        ordered && dbl && self.sigma.len() == self.walker_at_one.len()
    }

    /// Walker flags at the strictly positive isolation times.
    pub fn positive_flags(&self) -> impl Iterator<Item = bool> + '_ {
        self.sigma.iter().zip(&self.walker_at_one).filter(|(s, _)| **s > 0.0).map(|(_, &w)| w)
    }
}

/// Runs until `k_max` strictly positive isolation times are seen or `t_cap`.
///
/// Vertex 0's edges are simulated event by event; every other edge is
/// sampled lazily when the walker tries to cross it.
pub fn excursion_samples(
    params: &Params,
    k_max: usize,
    t_cap: f64,
    replicas: usize,
    seed: u64,
) -> Result<Vec<IsolationExcursionRecord>> {
    let n = params.n();
    if n < 3 {
        return Err(Error::InvalidParams("excursions need n >= 3".into()));
    }
    let (p, mu) = (params.p(), params.mu());
    let records = (0..replicas as u64)
        .into_par_iter()
        .map(|r| {
            let mut rng = rng_for(seed, r, Stream::Main);
            let mut lazy = LazyEnvironment::new(*params, LazyStart::Stationary);
            // star[v] for v in 1..n: edge (0, v).
            let mut star: Vec<bool> = (0..n).map(|v| v > 0 && rng.random_bool(p)).collect();
            let mut degree = star.iter().filter(|&&b| b).count();
            let mut rec = IsolationExcursionRecord {
                sigma: Vec::new(),
                sigma_prime: Vec::new(),
                sigma_dblprime: Vec::new(),
                walker_at_one: Vec::new(),
            };
            let mut x = 0usize;
            let mut deg1_since = 0.0;
            if degree == 0 {
                rec.sigma.push(0.0);
                rec.sigma_dblprime.push(0.0);
                rec.walker_at_one.push(true);
            }
            let star_rate = mu * (n - 1) as f64;
            let total = star_rate + 1.0;
            let mut t = 0.0;
            let mut positive = 0;
            while positive < k_max {
                let dt: f64 = Exp1.sample(&mut rng);
                t += dt / total;
                if t > t_cap {
                    break;
                }
                if rng.random::<f64>() * total < star_rate {
                    let v = rng.random_range(1..n);
                    let open = rng.random_bool(p);
                    if open == star[v] {
                        continue;
                    }
                    star[v] = open;
                    let before = degree;
                    if open { degree += 1 } else { degree -= 1 }
                    if degree == 1 {
                        deg1_since = t;
                    }
                    if before == 0 {
                        rec.sigma_prime.push(t);
                    }
                    if degree == 0 {
                        rec.sigma.push(t);
                        rec.sigma_dblprime.push(deg1_since);
                        rec.walker_at_one.push(x == 0);
                        positive += 1;
                    }
                } else {
                    let y = uniform_other(n, x, &mut rng);
                    let open = if x == 0 {
                        star[y]
                    } else if y == 0 {
                        star[x]
                    } else {
                        lazy.state_at(x, y, t, &mut rng)
                    };
                    if open {
                        x = y;
                    }
                }
            }
            rec
        })
        .collect();
    Ok(records)
}

/// `P(walker at 0 at the k-th positive isolation | at 0 at all earlier
/// ones)` for `k = 1..=k_max`.
pub fn conditional_trap_probabilities(records: &[IsolationExcursionRecord], k_max: usize, seed: u64) -> Vec<Estimate> {
    (0..k_max)
        .map(|k| {
            let mut trials = 0;
            let mut hits = 0;
            for rec in records {
                let flags: Vec<bool> = rec.positive_flags().take(k + 1).collect();
                if flags.len() == k + 1 && flags[..k].iter().all(|&b| b) {
                    trials += 1;
                    hits += flags[k] as usize;
                }
            }
            if trials == 0 {
                Estimate { value: f64::NAN, stderr: f64::NAN, replicas: 0, master_seed: seed, censored_fraction: 1.0 }
            } else {
                Estimate::from_indicators(hits, trials, seed)
            }
        })
        .collect()
}

/// Fraction of runs in which a walker on two vertices, jumping at rate
/// `1/(n-1)`, is back at its start after time `(n-1) zeta`.
pub fn parity_simulation(n: usize, zeta: f64, replicas: usize, seed: u64) -> Estimate {
    let rate = 1.0 / (n as f64 - 1.0);
    let horizon = (n as f64 - 1.0) * zeta;
    let hits = (0..replicas as u64)
        .into_par_iter()
        .filter(|&r| {
            let mut rng = rng_for(seed, r, Stream::Aux);
            let mut t = 0.0;
            let mut home = true;
            loop {
                let dt: f64 = Exp1.sample(&mut rng);
                t += dt / rate;
                if t > horizon {
                    return home;
                }
                home = !home;
            }
        })
        .count();
    Estimate::from_indicators(hits, replicas, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimators::bounds::poisson_even_probability;

    #[test]
    fn records_satisfy_ordering() {
        let params = Params::new(50, 2.0, 0.05).unwrap();
        let recs = excursion_samples(&params, 4, 1e4, 50, 3).unwrap();
        for r in &recs {
            assert!(r.check_invariants(), "{r:?}");
        }
        assert!(recs.iter().any(|r| r.positive_flags().count() == 4));
    }

    #[test]
    fn isolated_start_is_trivially_trapped() {
        let params = Params::with_p(20, 0.0, 1.0).unwrap();
        let recs = excursion_samples(&params, 1, 10.0, 5, 1).unwrap();
        for r in recs {
            assert_eq!(r.sigma, vec![0.0]);
            assert_eq!(r.walker_at_one, vec![true]);
        }
    }

    #[test]
    fn parity_matches_closed_form() {
        let e = parity_simulation(50, 1.0, 20_000, 7);
        assert!(e.covers(poisson_even_probability(1.0), 4.0));
    }
}
