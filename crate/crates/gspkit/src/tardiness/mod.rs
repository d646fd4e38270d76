//! The tighter pipeline for tardiness costs: dyadically structured covering
//! instances solved by grouped greedy selection and a plain recursive split.

pub mod groups;
pub mod pipeline;
pub mod preprocess;
pub mod solve;

pub use groups::{
    check_group, greedy_group_select, group_count_bound, group_cross_rows, guess_from_reference,
    CrossGroup, CrossGroupKey, GroupGuess,
};
pub use pipeline::solve_weighted_tardiness;
pub use preprocess::{ratio_budget, tardiness_preprocess, TardinessCandidate};
pub use solve::{
    solve_tardiness_exhaustive, solve_tardiness_oracle, split_tardiness, TardinessCtx,
    TardinessError, TardinessNodeCert,
};
