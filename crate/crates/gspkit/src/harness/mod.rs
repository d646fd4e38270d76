//! Instance generation, verification, benchmarking, rendering.

pub mod bench;
pub mod gen;
pub mod svg;
pub mod verify;

pub use bench::{run_bench, BenchConfig, BenchReport, BenchRow};
pub use gen::{gen_instance, gen_rcp, gen_spanning_rows, GenSpec, MixWeights, RcpGenSpec};
pub use svg::render_svg;
pub use verify::{verify_schedule, verify_selection, VerifyOutcome};
