//! From scheduling to covering and back: milestones, block slicing, instance
//! construction, solution lifting, and the end-to-end driver.

pub mod build;
pub mod lift;
pub mod milestones;
pub mod solve;
pub mod tau;

pub use build::{build_rcp, check_instance_bounds, BuildError, JobMap, RayOrigin, RectOrigin, StepFate, VarMap};
pub use lift::{
    completions_to_selection, padded_cost_with_base, prepad_cost_with_base,
    selection_to_completions, LiftError,
};
pub use milestones::{
    build_milestones, build_milestones_tardiness, check_milestones, is_inverse_power_of_two,
    MilestoneCheck, MilestoneSequence,
};
pub use solve::{
    forward_padded_costs, milestones_for, reduce_at_offset, reduction_loss_factor, solve_gsp,
    GspSolveReport, OffsetReport, RcpMode, SolveError,
};
pub use tau::{block_span, build_block_starts, check_block_starts, BlockStarts};
