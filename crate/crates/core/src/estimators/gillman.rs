//! Visits of a static simple random walk to the degree-1 vertices of a
//! connected graph.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::estimators::bounds::gillman_half_deviation_bound;
use crate::estimators::estimate::Estimate;
use crate::graph::Graph;
use crate::rng::{rng_for, Stream};
use crate::structure::{components_and_giant, spectral_gap, NeighborAccess};

#[derive(Debug, Clone, Serialize)]
pub struct VisitReport {
    pub m: u64,
    /// Stationary mass of the degree-1 set.
    pub pi_a: f64,
    pub pi_min: f64,
    pub gamma: f64,
    /// Mean of `N_m / m` over runs.
    pub ratio: Estimate,
    /// Fraction of runs with `N_m <= pi_a m / 2`.
    pub failure_frequency: f64,
    pub bound: f64,
}

/// Counts visits to degree-1 vertices in `m` steps of the simple random walk
/// on the largest component of `g`, started from its stationary law.
pub fn degree_one_visits(g: &Graph, m: u64, runs: usize, seed: u64) -> Result<VisitReport> {
    let (comps, giant) = components_and_giant(g)?;
    let (h, _) = g.induced(&comps[giant]);
    if h.edge_count() == 0 {
        return Err(Error::Domain("the largest component has no edges".into()));
    }
    let adj: Vec<Vec<usize>> = (0..h.n())
        .map(|v| {
            let mut nb = Vec::new();
            h.for_each_neighbor(v, |w| nb.push(w));
            nb
        })
        .collect();
    let volume: usize = adj.iter().map(Vec::len).sum();
    let deg1: Vec<bool> = adj.iter().map(|nb| nb.len() == 1).collect();
    let pi_a = deg1.iter().filter(|&&b| b).count() as f64 / volume as f64;
    let pi_min = adj.iter().map(Vec::len).min().unwrap_or(1) as f64 / volume as f64;
    let gamma = spectral_gap(&h)?.gamma;
    // Endpoint of a uniform edge slot is a stationary start.
    let slots: Vec<usize> = adj.iter().enumerate().flat_map(|(v, nb)| std::iter::repeat_n(v, nb.len())).collect();
    let counts: Vec<u64> = (0..runs as u64)
        .into_par_iter()
        .map(|r| {
            let mut rng = rng_for(seed, r, Stream::Main);
            let mut x = slots[rng.random_range(0..slots.len())];
            let mut visits = 0;
            for _ in 0..m {
                let nb = &adj[x];
                x = nb[rng.random_range(0..nb.len())];
                visits += deg1[x] as u64;
            }
            visits
        })
        .collect();
    let ratios: Vec<f64> = counts.iter().map(|&c| c as f64 / m as f64).collect();
    let failures = counts.iter().filter(|&&c| c as f64 <= 0.5 * pi_a * m as f64).count();
    Ok(VisitReport {
        m,
        pi_a,
        pi_min,
        gamma,
        ratio: Estimate::from_samples(&ratios, seed),
        failure_frequency: failures as f64 / runs as f64,
        bound: gillman_half_deviation_bound(pi_min, gamma, pi_a, m as f64)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn star_alternates_between_center_and_leaves() {
        let g = Graph::from_edges(5, [(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        let rep = degree_one_visits(&g, 1000, 20, 1).unwrap();
        assert_eq!(rep.pi_a, 0.5);
        assert!((rep.ratio.value - 0.5).abs() <= 0.001);
    }

    #[test]
    fn path_ratio_near_stationary_mass() {
        let edges: Vec<(usize, usize)> = (0..9).map(|i| (i, i + 1)).collect();
        let g = Graph::from_edges(10, edges).unwrap();
        let rep = degree_one_visits(&g, 20_000, 50, 2).unwrap();
        assert!((rep.pi_a - 2.0 / 18.0).abs() < 1e-12);
        assert!(rep.ratio.covers(rep.pi_a, 4.0));
    }
}
