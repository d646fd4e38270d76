//! Render a covering instance and its optimum as SVG.
//!
//! ```bash
//! cargo run --example render_instance
//! ```

use gspkit::harness::gen::{gen_rcp, RcpGenSpec};
use gspkit::harness::svg::render_svg;
use gspkit::rcp::brute::{brute_force, BruteOutcome};

fn main() {
    let inst = gen_rcp(&RcpGenSpec { rows: 5, seed: 3, ..Default::default() });
    let selection = match brute_force(&inst, 1 << 24).unwrap() {
        BruteOutcome::Optimal { selection, .. } => Some(selection),
        BruteOutcome::Infeasible => None,
    };
    let svg = render_svg(&inst, selection.as_ref());
    let path = std::env::temp_dir().join("gspkit_instance.svg");
    std::fs::write(&path, &svg).unwrap();
    println!("wrote {} ({} bytes)", path.display(), svg.len());
}
