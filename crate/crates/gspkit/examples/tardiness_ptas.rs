//! The tardiness pipeline: dyadic milestones, a structured covering
//! instance, and the (1+5eps) recursion.
//!
//! ```bash
//! cargo run --example tardiness_ptas
//! ```

use gspkit::gsp::opt::exhaustive_optimum;
use gspkit::harness::gen::{gen_instance, GenSpec, MixWeights};
use gspkit::ratio::{rat_frac, rat_u64};
use gspkit::reduction::solve::{reduction_loss_factor, solve_gsp, RcpMode};

fn main() {
    let eps = rat_frac(1, 4);
    for seed in 0..5 {
        let inst = gen_instance(&GenSpec {
            n: 4,
            p_max: 3,
            r_max: 3,
            mix: MixWeights::tardiness_only(),
            w_max: 3,
            d_max: 6,
            seed,
        });
        let report = solve_gsp(&inst, &eps, RcpMode::Tardiness { preprocess: false }).unwrap();
        let (opt, _) = exhaustive_optimum(&inst).unwrap();
        let factor =
            reduction_loss_factor(&eps) * (rat_u64(1) + rat_u64(5) * eps.clone());
        let bound = opt.scale(&factor);
        println!(
            "seed {seed}: cost {} vs optimum {} (bound {})",
            report.cost, opt, bound
        );
        assert!(report.cost <= bound);
    }
}
