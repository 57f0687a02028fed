//! Static analysis of graph snapshots.

pub mod bridges;
pub mod components;
pub mod core;
pub mod expansion;
pub mod good;
pub mod report;

pub use self::bridges::removal_edge_counts;
pub use self::components::{components_and_giant, giant_vertices};
pub use self::core::{core_mask, core_of, decoration_stats, kernel_of, DecorationStats, Kernel};
pub use self::expansion::{
    isoperimetric_constant, isoperimetric_exact, spectral_gap, spectral_gap_with, Phi, PhiMethod, SpectralGap,
    SpectralOptions, EXACT_PHI_MAX_VERTICES,
};
pub use self::good::{far_from_core_profile, good_graph_check, GoodGraphConstants, GoodVerdict, GoodnessChecker};
pub use self::report::{analyze, StructureReport};

use crate::graph::Graph;

/// Read access to the neighbour lists of a graph-like snapshot.
pub trait NeighborAccess {
    fn vertex_count(&self) -> usize;
    fn for_each_neighbor<F: FnMut(usize)>(&self, v: usize, f: F);
}

impl NeighborAccess for Graph {
    fn vertex_count(&self) -> usize {
        self.n()
    }

    fn for_each_neighbor<F: FnMut(usize)>(&self, v: usize, mut f: F) {
        for &(w, _) in self.incident(v) {
            f(w);
        }
    }
}
