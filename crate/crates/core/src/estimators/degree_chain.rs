//! Birth-death chain of a single vertex degree.

use rand::Rng;
use rand_distr::{Distribution, Exp1};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::Params;
use crate::rng::{rng_for, Stream};
use crate::stats::binomial_pmf;

#[derive(Debug, Clone, Serialize)]
pub struct DegreeChainAnalysis {
    /// `Binomial(n-1, p)`.
    pub stationary: Vec<f64>,
    pub up_rates: Vec<f64>,
    pub down_rates: Vec<f64>,
    /// `m[j]`: expected time to go from `j` to `j-1` (entry 0 unused).
    pub step_down: Vec<f64>,
    /// Expected hitting time of 0 from the stationary law.
    pub mean_hit_zero: f64,
}

/// Exact first-passage analysis of the degree chain.
pub fn degree_chain_analysis(params: &Params) -> Result<DegreeChainAnalysis> {
    let n = params.n();
    if n < 2 {
        return Err(Error::InvalidParams("degree chain needs n >= 2".into()));
    }
    let (p, mu) = (params.p(), params.mu());
    let k_max = n - 1;
    let stationary = binomial_pmf(k_max as u64, p);
    let up_rates: Vec<f64> = (0..=k_max).map(|k| (k_max - k) as f64 * p * mu).collect();
    let down_rates: Vec<f64> = (0..=k_max).map(|k| k as f64 * (1.0 - p) * mu).collect();
    // s[j] = sum_{i >= j} pi(i) / pi(j), by the backward recursion.
    let mut step_down = vec![0.0; k_max + 1];
    let mut s = 1.0;
    for j in (1..=k_max).rev() {
        if j < k_max {
            s = 1.0 + up_rates[j] / down_rates[j + 1] * s;
        }
        step_down[j] = s / down_rates[j];
    }
    let mut mean = 0.0;
    let mut cumulative = 0.0;
    for k in 1..=k_max {
        cumulative += step_down[k];
        if stationary[k] > 0.0 {
            mean += stationary[k] * cumulative;
        }
    }
    Ok(DegreeChainAnalysis { stationary, up_rates, down_rates, step_down, mean_hit_zero: mean })
}

/// Hitting times of degree 0 for vertex 0, simulating only its `n-1`
/// incident edges from stationarity.
pub fn simulate_hit_zero(params: &Params, t_cap: f64, replicas: usize, seed: u64) -> Vec<Option<f64>> {
    let (n, p, mu) = (params.n(), params.p(), params.mu());
    (0..replicas as u64)
        .into_par_iter()
        .map(|r| {
            let mut rng = rng_for(seed, r, Stream::Environment);
            let mut edges: Vec<bool> = (0..n - 1).map(|_| rng.random_bool(p)).collect();
            let mut degree = edges.iter().filter(|&&b| b).count();
            let rate = mu * (n - 1) as f64;
            let mut t = 0.0;
            while degree > 0 {
                if rate <= 0.0 {
                    return None;
                }
                let dt: f64 = Exp1.sample(&mut rng);
                t += dt / rate;
                if t > t_cap {
                    return None;
                }
                let e = rng.random_range(0..n - 1);
                let open = rng.random_bool(p);
                if open != edges[e] {
                    edges[e] = open;
                    if open { degree += 1 } else { degree -= 1 }
                }
            }
            Some(t)
        })
        .collect()
}

/// Degree of vertex 0 at time `t`, all its edges closed at time 0.
pub fn simulate_degree_from_closed(params: &Params, t: f64, replicas: usize, seed: u64) -> Vec<usize> {
    let (n, p, mu) = (params.n(), params.p(), params.mu());
    let rate = mu * (n - 1) as f64;
    (0..replicas as u64)
        .into_par_iter()
        .map(|r| {
            let mut rng = rng_for(seed, r, Stream::Environment);
            let mut edges = vec![false; n - 1];
            let mut degree = 0usize;
            let mut clock = 0.0;
            loop {
                let dt: f64 = Exp1.sample(&mut rng);
                clock += dt / rate;
                if !(clock <= t) {
                    return degree;
                }
                let e = rng.random_range(0..n - 1);
                let open = rng.random_bool(p);
                if open != edges[e] {
                    edges[e] = open;
                    if open { degree += 1 } else { degree -= 1 }
                }
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use nalgebra::{DMatrix, DVector};

    /// Hitting times from the generator restricted to {1..n-1}: Q h = -1.
    fn linear_solve(params: &Params) -> Vec<f64> {
        let a = degree_chain_analysis(params).unwrap();
        let k = params.n() - 1;
        let mut q = DMatrix::<f64>::zeros(k, k);
        for i in 1..=k {
            let (up, down) = (a.up_rates[i], a.down_rates[i]);
            q[(i - 1, i - 1)] = -(up + down);
            if i < k {
                q[(i - 1, i)] = up;
            }
            if i > 1 {
                q[(i - 1, i - 2)] = down;
            }
        }
        let h = q.lu().solve(&DVector::from_element(k, -1.0)).unwrap();
        std::iter::once(0.0).chain(h.iter().copied()).collect()
    }

    #[test]
    fn passage_sum_matches_linear_solve() {
        let params = Params::new(12, 2.5, 0.3).unwrap();
        let a = degree_chain_analysis(&params).unwrap();
        let h = linear_solve(&params);
        let expect: f64 = a.stationary.iter().zip(&h).map(|(pi, h)| pi * h).sum();
        assert_relative_eq!(a.mean_hit_zero, expect, max_relative = 1e-9);
    }

    #[test]
    fn degree_from_closed_is_binomial_in_mean() {
        let params = Params::new(40, 2.0, 1.0).unwrap();
        let ds = simulate_degree_from_closed(&params, 20.0, 5000, 3);
        let xs: Vec<f64> = ds.iter().map(|&d| d as f64).collect();
        let (m, se) = crate::stats::mean_stderr(&xs);
        assert!((m - 39.0 * params.p()).abs() < 4.0 * se);
        assert!(simulate_degree_from_closed(&params, 0.0, 10, 3).iter().all(|&d| d == 0));
    }

    #[test]
    fn simulation_agrees_with_exact_mean() {
        let params = Params::new(30, 2.0, 0.5).unwrap();
        let a = degree_chain_analysis(&params).unwrap();
        let s = simulate_hit_zero(&params, f64::INFINITY, 4000, 9);
        let xs: Vec<f64> = s.into_iter().map(|x| x.unwrap()).collect();
        let (m, se) = crate::stats::mean_stderr(&xs);
        assert!((m - a.mean_hit_zero).abs() < 4.0 * se, "{m} vs {}", a.mean_hit_zero);
    }
}
