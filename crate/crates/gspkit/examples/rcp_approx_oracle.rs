//! The recursive strip solver in oracle mode, with its per-node inequality
//! certificates.
//!
//! ```bash
//! cargo run --example rcp_approx_oracle
//! ```

use gspkit::approx::{solve_oracle, Ctx};
use gspkit::harness::gen::{gen_rcp, RcpGenSpec};
use gspkit::ratio::{rat_frac, rat_u64};
use gspkit::rcp::brute::{brute_force, BruteOutcome};
use gspkit::rcp::subproblem::Subproblem;

fn main() {
    let eps = rat_frac(1, 4);
    let inst = gen_rcp(&RcpGenSpec { rows: 4, seed: 11, ..Default::default() });
    let BruteOutcome::Optimal { selection: reference, cost: opt } =
        brute_force(&inst, 1 << 24).unwrap()
    else {
        panic!("pick a feasible seed");
    };
    let root = Subproblem::root(&inst);
    let stats = inst.validate().stats;
    let mut ctx = Ctx::new(eps.clone(), stats.k_ratio, root.area.width().trailing_zeros() as u64);

    let sel = solve_oracle(&root, &reference, &mut ctx).unwrap();
    let cost = root.selection_cost(&sel);
    println!("optimum        : {}", gspkit::ratio::format_rat(&opt));
    println!("oracle output  : {}", gspkit::ratio::format_rat(&cost));
    let bound = (rat_u64(2) + rat_u64(2) * eps) * opt;
    println!("(2+2eps) bound : {}", gspkit::ratio::format_rat(&bound));
    assert!(cost <= bound);

    println!("{} recursion nodes:", ctx.certs.len());
    for cert in &ctx.certs {
        println!(
            "  area [{}, {}): feasible={} ratio={} decomposition={} combine={} child-refs={}",
            cert.area.0,
            cert.area.1,
            cert.output_feasible,
            cert.ratio_ok,
            cert.decomposition_ok,
            cert.combine_ok,
            cert.child_refs_feasible,
        );
        assert!(cert.all_ok());
    }
}
