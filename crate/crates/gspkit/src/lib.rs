//! gspkit: preemptive single-machine scheduling with job-dependent,
//! nondecreasing completion costs, solved through a reduction to a
//! prefix-constrained rectangle covering problem.
//!
//! The crate is organized around that reduction:
//!
//! - [`gsp`] — instances, cost oracles, EDF scheduling, the window
//!   feasibility condition, and an exhaustive optimum for small instances;
//! - [`rcp`] — the covering model with exact solvers (full enumeration, a
//!   lane DP, a width-1 dynamic program) and preprocessing;
//! - [`reduction`] — milestones, block slicing, instance construction, and
//!   the bidirectional solution mappings, plus the end-to-end driver
//!   [`reduction::solve_gsp`];
//! - [`approx`] — the recursive strip decomposition with oracle-guided and
//!   capped-exhaustive guessing and run-time inequality certificates;
//! - [`tardiness`] — the tighter recursion for dyadically structured
//!   instances arising from tardiness costs;
//! - [`harness`] — generators, verification, benchmarking, SVG rendering.
//!
//! Every cost computation uses exact rational arithmetic ([`ratio`]); the
//! approximation-factor certificates are checked exactly, never with floats.
//!
//! See the `examples/` directory for one runnable example per capability:
//!
//! ```bash
//! cargo run --example solve_small
//! cargo run --example rcp_exact
//! ```

pub mod approx;
pub mod gsp;
pub mod harness;
pub mod ratio;
pub mod rcp;
pub mod reduction;
pub mod tardiness;

pub use gsp::{CostFunction, GspInstance, Job, Schedule};
pub use ratio::{CostVal, Rat};
pub use rcp::{RcpInstance, Selection};
pub use reduction::{solve_gsp, RcpMode};
