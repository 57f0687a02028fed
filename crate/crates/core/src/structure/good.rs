use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::params::{iterated_log, max_log_depth};
use crate::structure::expansion::{cheeger_interval, isoperimetric_exact, Phi, PhiMethod, SpectralOptions};
use crate::structure::{components_and_giant, removal_edge_counts, spectral_gap_with, SpectralGap, EXACT_PHI_MAX_VERTICES};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GoodGraphConstants {
    pub c_star: f64,
    pub big_c_star: f64,
    /// Deepest iterated log used by the far-from-core clause; `None` means
    /// the largest `M` with `log_(M) n >= 1`.
    pub omega_star: Option<usize>,
}

impl Default for GoodGraphConstants {
    fn default() -> Self {
        GoodGraphConstants { c_star: 0.05, big_c_star: 20.0, omega_star: None }
    }
}

impl GoodGraphConstants {
    pub fn validate(&self) -> Result<()> {
        if !(self.c_star > 0.0 && self.c_star <= self.big_c_star && self.big_c_star.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "need 0 < c_star <= C_star, got {} and {}",
                self.c_star, self.big_c_star
            )));
        }
        Ok(())
    }

    pub fn omega(&self, n: usize) -> usize {
        self.omega_star.unwrap_or_else(|| max_log_depth(n)).min(max_log_depth(n))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FarProfileEntry {
    pub m: usize,
    /// `C_star * log_(M) n`.
    pub threshold: f64,
    /// Fraction of giant vertices with `R(x)` above the threshold.
    pub fraction: f64,
}

/// Per-clause outcome of the good-graph test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GoodVerdict {
    pub unique_large_component: bool,
    pub giant_size: bool,
    pub max_degree: bool,
    pub giant_edges: bool,
    pub deg1_in_giant: bool,
    pub removal_counts: bool,
    pub far_profile: bool,
    pub isoperimetric: bool,
    pub spectral_gap: bool,
    pub isolated_fraction: Option<bool>,
}

impl GoodVerdict {
    pub fn is_good(&self) -> bool {
        self.unique_large_component
            && self.giant_size
            && self.max_degree
            && self.giant_edges
            && self.deg1_in_giant
            && self.removal_counts
            && self.far_profile
            && self.isoperimetric
            && self.spectral_gap
            && self.isolated_fraction.unwrap_or(true)
    }

    fn failed() -> Self {
        GoodVerdict {
            unique_large_component: false,
            giant_size: false,
            max_degree: false,
            giant_edges: false,
            deg1_in_giant: false,
            removal_counts: false,
            far_profile: false,
            isoperimetric: false,
            spectral_gap: false,
            isolated_fraction: None,
        }
    }
}

/// Far-from-core fraction of a set of removal counts at depth `m`.
pub fn far_fraction(counts: &[usize], n: usize, big_c_star: f64, m: usize) -> Result<FarProfileEntry> {
    let log_m = iterated_log(n as f64, m);
    if m == 0 || !(log_m >= 1.0) {
        return Err(Error::InvalidLogDepth { depth: m, n });
    }
    let threshold = big_c_star * log_m;
    let far = counts.iter().filter(|&&r| r as f64 > threshold).count();
    let fraction = if counts.is_empty() { 0.0 } else { far as f64 / counts.len() as f64 };
    Ok(FarProfileEntry { m, threshold, fraction })
}

/// `|G \ W^M| / |G|` for every `1 <= M <= omega`, where `W^M` holds the giant
/// vertices with `R(x) <= C_star log_(M) n`.
pub fn far_from_core_profile(g: &Graph, constants: &GoodGraphConstants) -> Result<Vec<FarProfileEntry>> {
    constants.validate()?;
    let (comps, giant) = components_and_giant(g)?;
    let removal = removal_edge_counts(g);
    let counts: Vec<usize> = comps[giant].iter().map(|&v| removal[v]).collect();
    (1..=constants.omega(g.n())).map(|m| far_fraction(&counts, g.n(), constants.big_c_star, m)).collect()
}

/// Everything computed while testing goodness, for reuse in reports.
#[derive(Debug, Clone)]
pub struct GoodEvaluation {
    pub verdict: GoodVerdict,
    pub giant: Vec<usize>,
    pub removal_counts: Vec<usize>,
    pub far_profile: Vec<FarProfileEntry>,
    pub phi: Option<Phi>,
    pub gap: Option<SpectralGap>,
}

/// Repeated good-graph tests that reuse the previous second eigenvector as a
/// warm start for the spectral gap.
#[derive(Debug, Clone)]
pub struct GoodnessChecker {
    pub constants: GoodGraphConstants,
    pub with_isolated_clause: bool,
    pub spectral_tol: f64,
    warm: Vec<f64>,
}

impl GoodnessChecker {
    pub fn new(constants: GoodGraphConstants, with_isolated_clause: bool) -> Self {
        GoodnessChecker { constants, with_isolated_clause, spectral_tol: 1e-9, warm: Vec::new() }
    }

    pub fn check(&mut self, g: &Graph) -> GoodVerdict {
        self.evaluate(g).map(|e| e.verdict).unwrap_or_else(|_| GoodVerdict::failed())
    }

    pub fn evaluate(&mut self, g: &Graph) -> Result<GoodEvaluation> {
        self.constants.validate()?;
        let n = g.n();
        let ln = (n as f64).ln();
        let (c, big_c) = (self.constants.c_star, self.constants.big_c_star);
        let (comps, giant_idx) = components_and_giant(g)?;
        let giant = comps[giant_idx].clone();
        let large = comps.iter().filter(|comp| comp.len() as f64 >= big_c * ln).count();
        let removal_all = removal_edge_counts(g);
        let mut removal = vec![0usize; n];
        for &v in &giant {
            removal[v] = removal_all[v];
        }
        let giant_counts: Vec<usize> = giant.iter().map(|&v| removal_all[v]).collect();
        let far_profile: Vec<FarProfileEntry> = (1..=self.constants.omega(n))
            .map(|m| far_fraction(&giant_counts, n, big_c, m))
            .collect::<Result<_>>()?;
        let far_ok = far_profile
            .iter()
            .filter(|e| e.m >= 2)
            .all(|e| e.fraction <= iterated_log(n as f64, e.m - 1).powi(-4));

        let mut in_giant = vec![false; n];
        giant.iter().for_each(|&v| in_giant[v] = true);
        let giant_edges = g.edges().iter().filter(|&&(u, _)| in_giant[u]).count();
        let deg1 = giant.iter().filter(|&&v| g.degree(v) == 1).count();
        let max_degree = (0..n).map(|v| g.degree(v)).max().unwrap_or(0);

        let (phi, gap) = if giant_edges > 0 {
            let (sub, _) = g.induced(&giant);
            let start = if self.warm.len() == n { Some(giant.iter().map(|&v| self.warm[v]).collect()) } else { None };
            let opts = SpectralOptions { tol: self.spectral_tol, max_iter: 100_000, start };
            let gap = spectral_gap_with(&sub, &opts)?;
            self.warm = vec![0.0; n];
            for (i, &v) in giant.iter().enumerate() {
                self.warm[v] = gap.vector[i];
            }
            let phi = if giant.len() <= EXACT_PHI_MAX_VERTICES {
                let v = isoperimetric_exact(&sub)?;
                Phi { lower: v, upper: v, method: PhiMethod::Exact }
            } else {
                cheeger_interval(gap.gamma)
            };
            (Some(phi), Some(gap))
        } else {
            (None, None)
        };

        let verdict = GoodVerdict {
            unique_large_component: large == 1 && giant.len() as f64 >= big_c * ln,
            giant_size: giant.len() as f64 >= c * n as f64,
            max_degree: max_degree as f64 <= big_c * ln,
            giant_edges: giant_edges as f64 <= big_c * n as f64,
            deg1_in_giant: deg1 as f64 >= c * n as f64,
            removal_counts: giant_counts.iter().all(|&r| r as f64 <= big_c * ln),
            far_profile: far_ok,
            isoperimetric: phi.is_some_and(|p| p.value() >= c * ln.powi(-2)),
            spectral_gap: gap.as_ref().is_some_and(|g| g.gamma >= c * ln.powi(-4)),
            isolated_fraction: self
                .with_isolated_clause
                .then(|| (0..n).filter(|&v| g.degree(v) == 0).count() as f64 >= c * n as f64),
        };
        Ok(GoodEvaluation { verdict, giant, removal_counts: removal, far_profile, phi, gap })
    }
}

pub fn good_graph_check(g: &Graph, constants: &GoodGraphConstants, with_isolated_clause: bool) -> GoodVerdict {
    GoodnessChecker::new(*constants, with_isolated_clause).check(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_graph_is_not_good() {
        let v = good_graph_check(&Graph::new(50), &GoodGraphConstants::default(), false);
        assert!(!v.is_good());
        assert!(!v.unique_large_component);
    }

    #[test]
    fn complete_graph_fails_max_degree() {
        let n = 100;
        let g = Graph::from_edges(n, (0..n).flat_map(|u| ((u + 1)..n).map(move |v| (u, v)))).unwrap();
        let v = good_graph_check(&g, &GoodGraphConstants::default(), false);
        assert!(!v.max_degree);
        assert!(!v.is_good());
    }

    #[test]
    fn far_fraction_of_path() {
        let g = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let counts = removal_edge_counts(&g);
        let n = 1000;
        let big_c = 0.5 / (n as f64).ln();
        let e = far_fraction(&counts, n, big_c, 1).unwrap();
        assert!((e.threshold - 0.5).abs() < 1e-12);
        assert!((e.fraction - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn depth_guard() {
        assert_eq!(far_fraction(&[0], 1000, 20.0, 3).unwrap_err(), Error::InvalidLogDepth { depth: 3, n: 1000 });
        assert!(far_fraction(&[0], 1000, 20.0, 0).is_err());
    }

    #[test]
    fn zero_counts_give_zero_profile() {
        let g = Graph::from_edges(5, (0..5).map(|i| (i, (i + 1) % 5))).unwrap();
        let profile = far_from_core_profile(&g, &GoodGraphConstants::default()).unwrap();
        assert!(profile.iter().all(|e| e.fraction == 0.0));
    }
}
