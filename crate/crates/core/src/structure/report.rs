use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::graph::Graph;
use crate::structure::core::{core_mask, decoration_stats, kernel_of};
use crate::structure::expansion::Phi;
use crate::structure::good::{FarProfileEntry, GoodGraphConstants, GoodVerdict, GoodnessChecker};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapSummary {
    pub gamma: f64,
    pub residual: f64,
    pub converged: bool,
}

/// Snapshot summary. Core, kernel and decorations describe the giant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StructureReport {
    pub n: usize,
    pub edge_count: usize,
    pub giant_vertices: Vec<usize>,
    pub giant_size: usize,
    /// `degree_histogram[k]` vertices of degree `k`.
    pub degree_histogram: Vec<usize>,
    pub isolated_count: usize,
    pub deg1_in_giant: usize,
    /// `R(x)` on the giant, zero elsewhere.
    pub removal_counts: Vec<usize>,
    pub core_size: usize,
    pub kernel_size: usize,
    pub kernel_edge_multiset: Vec<(usize, usize)>,
    pub max_decoration: usize,
    pub far_profile: Vec<FarProfileEntry>,
    pub phi: Option<Phi>,
    pub gamma: Option<GapSummary>,
    pub constants: GoodGraphConstants,
    pub good: GoodVerdict,
    pub is_good: bool,
}

pub fn analyze(g: &Graph, constants: &GoodGraphConstants, with_isolated_clause: bool) -> Result<StructureReport> {
    let eval = GoodnessChecker::new(*constants, with_isolated_clause).evaluate(g)?;
    let degrees = g.degrees();
    let mut degree_histogram = vec![0usize; degrees.iter().copied().max().unwrap_or(0) + 1];
    degrees.iter().for_each(|&d| degree_histogram[d] += 1);
    let (giant_graph, map) = g.induced(&eval.giant);
    let core_size = core_mask(&giant_graph).iter().filter(|&&b| b).count();
    let kernel = kernel_of(&giant_graph);
    let mut kernel_edge_multiset: Vec<(usize, usize)> =
        kernel.edge_multiset().into_iter().map(|(a, b)| (map[a], map[b])).collect();
    kernel_edge_multiset.sort_unstable();
    Ok(StructureReport {
        n: g.n(),
        edge_count: g.edge_count(),
        giant_size: eval.giant.len(),
        deg1_in_giant: eval.giant.iter().filter(|&&v| degrees[v] == 1).count(),
        giant_vertices: eval.giant,
        isolated_count: degree_histogram[0],
        degree_histogram,
        removal_counts: eval.removal_counts,
        core_size,
        kernel_size: kernel.size(),
        kernel_edge_multiset,
        max_decoration: decoration_stats(&giant_graph).max,
        far_profile: eval.far_profile,
        phi: eval.phi,
        gamma: eval.gap.map(|g| GapSummary { gamma: g.gamma, residual: g.residual, converged: g.converged }),
        constants: *constants,
        is_good: eval.verdict.is_good(),
        good: eval.verdict,
    })
}
