//! Exact covering solvers: full enumeration versus the lane DP.
//!
//! ```bash
//! cargo run --example rcp_exact
//! ```

use gspkit::harness::gen::{gen_rcp, RcpGenSpec};
use gspkit::rcp::brute::{brute_force, BruteOutcome};
use gspkit::rcp::exact::{exact_solve, DEFAULT_LANE_CAP};

fn main() {
    for seed in 0..5 {
        let inst = gen_rcp(&RcpGenSpec { rows: 4, seed, ..Default::default() });
        let brute = brute_force(&inst, 1 << 24).unwrap();
        let dp = exact_solve(&inst, DEFAULT_LANE_CAP).unwrap();
        match (&brute, &dp) {
            (
                BruteOutcome::Optimal { cost: cb, .. },
                BruteOutcome::Optimal { cost: cd, selection },
            ) => {
                assert_eq!(cb, cd);
                println!(
                    "seed {seed}: optimum {} with {} rectangles (both solvers agree)",
                    gspkit::ratio::format_rat(cd),
                    selection.len()
                );
            }
            (BruteOutcome::Infeasible, BruteOutcome::Infeasible) => {
                println!("seed {seed}: infeasible (both solvers agree)");
            }
            other => panic!("solver disagreement: {other:?}"),
        }
    }
}
