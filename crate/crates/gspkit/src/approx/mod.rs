//! Recursive strip decomposition for the covering problem, with oracle-guided
//! and capped-exhaustive guessing.

pub mod classify;
pub mod split;
pub mod splus;
pub mod solve;
pub mod stepfn;

pub use classify::{auxiliary_cost, auxiliary_cost_in, classify_row, classify_rows, RowClass};
pub use solve::{solve_exhaustive, solve_oracle, ApproxError, Caps, Ctx, NodeCert};
pub use split::{assemble_children, combine_children, route_rows};
pub use splus::{augment_reference, check_augmented, group_rows, Augmented, FilledRow, Group, GroupKey, GroupSide};
pub use stepfn::{build_step_function, check_sandwich, BandGroup, Step, StepFunction};
