//! Rectangle covering: model, validation, exact solvers, preprocessing.

pub mod base_dp;
pub mod brute;
pub mod exact;
pub mod instance;
pub mod preprocess;
pub mod structure;
pub mod subproblem;

pub use base_dp::base_case_dp;
pub use brute::{brute_force, prefix_space, BruteError, BruteOutcome};
pub use exact::{exact_solve, ExactError, DEFAULT_LANE_CAP};
pub use instance::{
    coverage, is_feasible, is_prefix_valid, prefix_closure, RcpDiagnostics, RcpInstance, RcpStats,
    Ray, Rect, RectId, Row, Selection,
};
pub use preprocess::{map_back, round_costs, strip_compress, CoordMap, RoundedInstance};
pub use structure::{check_well_structured, StructureReport};
pub use subproblem::{Area, SubRect, SubRow, Subproblem};
