//! Couplings of walks and of full systems.

pub mod full;
pub mod hclose;
pub mod static_dynamic;
pub mod tail;

pub use full::{
    run_full_coupling, AttemptRecord, CoupledSnapshot, CouplingConfig, CouplingRecord, CouplingStart, CouplingStreams,
    FailureCounts, FailureReason,
};
pub use hclose::{h_close, h_close_diff};
pub use static_dynamic::{run_static_dynamic, StaticDynamicRun};
pub use tail::{coalescence_tail_curve, coupling_ensemble, tail_from_records};
