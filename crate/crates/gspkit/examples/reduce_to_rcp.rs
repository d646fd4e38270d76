//! Inspect the reduction: milestones, block slicing, the covering instance,
//! and a round trip through the solution mappings.
//!
//! ```bash
//! cargo run --example reduce_to_rcp
//! ```

use gspkit::ratio::rat_frac;
use gspkit::reduction::lift::{completions_to_selection, selection_to_completions};
use gspkit::reduction::solve::{milestones_for, reduce_at_offset};
use gspkit::{CostFunction, GspInstance, Job};

fn main() {
    let (inst, _) = GspInstance::normalized(vec![
        Job { id: 0, r: 0, p: 2, cost: CostFunction::Tardiness { w: 1, d: 2 } },
        Job { id: 1, r: 1, p: 1, cost: CostFunction::Tardiness { w: 2, d: 1 } },
    ]);
    let eps = rat_frac(1, 2);
    let horizon = inst.horizon();
    println!("horizon T = {horizon}");

    let milestones = milestones_for(&inst, &eps, horizon, false);
    for seq in &milestones {
        println!("job {} milestones: {:?}", seq.job, seq.times);
    }

    let (rcp, vm) = reduce_at_offset(&inst, &eps, horizon, &milestones, 1).unwrap();
    println!("base (forced) cost: {}", gspkit::ratio::format_rat(&vm.base_cost));
    for row in &rcp.rows {
        let spans: Vec<String> = row
            .rects
            .iter()
            .map(|r| format!("[{},{}) c={} p={}", r.a, r.b, gspkit::ratio::format_rat(&r.c), r.p))
            .collect();
        println!("row {}: {}", row.j, spans.join("  "));
    }
    for ray in &rcp.rays {
        println!("ray at x={} topping row {}: demand {}", ray.t, ray.s, ray.d);
    }

    // project the optimal completions and lift them back
    let (_, completions) = gspkit::gsp::opt::exhaustive_optimum(&inst).unwrap();
    println!("optimal completions: {completions:?}");
    let sel = completions_to_selection(&vm, &completions);
    println!("projected selection: {:?}", sel.sorted_ids());
    let lifted = selection_to_completions(&vm, &rcp, &sel).unwrap();
    println!("lifted deadlines:    {lifted:?}");
    assert!(lifted.iter().zip(&completions).all(|(l, c)| l >= c));
}
