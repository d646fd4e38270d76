//! Scheduling-side model: instances, cost oracles, EDF, exhaustive optimum.

pub mod cost;
pub mod edf;
pub mod instance;
pub mod opt;

pub use cost::{CostError, CostFunction, Time};
pub use edf::{deadline_feasible, edf_schedule, Schedule, Segment};
pub use instance::{horizon_for_bound, Diagnostics, GspInstance, Job};
