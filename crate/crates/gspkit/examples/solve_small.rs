//! Solve a small mixed-objective instance end to end and compare against the
//! exhaustive optimum.
//!
//! ```bash
//! cargo run --example solve_small
//! ```

use gspkit::gsp::opt::exhaustive_optimum;
use gspkit::ratio::rat_frac;
use gspkit::reduction::solve::{reduction_loss_factor, solve_gsp, RcpMode};
use gspkit::{CostFunction, GspInstance, Job};

fn main() {
    let (inst, diag) = GspInstance::normalized(vec![
        Job { id: 0, r: 0, p: 2, cost: CostFunction::Tardiness { w: 1, d: 2 } },
        Job { id: 1, r: 1, p: 1, cost: CostFunction::Tardiness { w: 2, d: 1 } },
        Job { id: 2, r: 0, p: 1, cost: CostFunction::Flow { w: 1, r: 0 } },
        Job { id: 3, r: 2, p: 2, cost: CostFunction::HardDeadline { d: 8 } },
    ]);
    assert!(diag.ok(), "{diag:?}");

    let eps = rat_frac(1, 2);
    let report = solve_gsp(&inst, &eps, RcpMode::Exact).expect("solvable");
    println!("schedule cost: {}", report.cost);
    for seg in &report.schedule.segments {
        println!("  job {} runs [{}, {})", seg.job, seg.start, seg.end);
    }

    let (opt, _) = exhaustive_optimum(&inst).expect("finite optimum");
    println!("exhaustive optimum: {opt}");
    let bound = opt.scale(&reduction_loss_factor(&eps));
    println!("loss bound (1+e)(1+6e)(1+e)^2 * OPT = {bound}");
    assert!(report.cost <= bound);
    println!("within bound: yes");
}
