pub mod bounds;
pub mod degree_chain;
pub mod estimate;
pub mod excursions;
pub mod gillman;
pub mod isolation;
pub mod mixing;
pub mod monitor;
pub mod persistence;
pub mod tv;

pub use bounds::*;
pub use degree_chain::{degree_chain_analysis, simulate_degree_from_closed, simulate_hit_zero, DegreeChainAnalysis};
pub use estimate::{CurvePoint, Estimate};
pub use excursions::{conditional_trap_probabilities, excursion_samples, parity_simulation, IsolationExcursionRecord};
pub use gillman::{degree_one_visits, VisitReport};
pub use isolation::{
    cdf, giant_hit_exit_samples, isolation_samples, survival_while_good, GiantTime, IsolationMode, StartSampler,
    StoppingSample,
};
pub use mixing::*;
pub use monitor::{good_stationary_start, GoodnessConfig, GoodnessMonitor};
pub use persistence::goodness_persistence;
pub use tv::*;
