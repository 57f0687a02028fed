//! Event-driven simulation of the environment and walkers.

pub mod environment;
pub mod lazy;
pub mod log;
pub mod system;

pub use environment::{Environment, InitMode};
pub use lazy::{lazy_walk_positions, LazyEnvironment, LazyStart};
pub use log::{Event, EventLog};
pub use system::{uniform_other, uniform_pair, Predicate, StopOutcome, System};
