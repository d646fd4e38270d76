//! Run a small benchmark batch and print the deterministic CSV.
//!
//! ```bash
//! cargo run --example bench_small
//! ```

use gspkit::harness::bench::{run_bench, BenchConfig};

fn main() {
    let config = BenchConfig {
        instances: 8,
        seed: 7,
        n: 4,
        p_max: 3,
        r_max: 3,
        w_max: 3,
        d_max: 6,
        objective: "mixed".into(),
        epsilon: "1/2".into(),
        modes: vec!["exact".into()],
        brute_budget: 1 << 22,
    };
    let report = run_bench(&config);
    print!("{}", report.to_csv());
    let failures: usize = report.rows.iter().map(|r| r.certificates_failed).sum();
    println!("# certificate failures: {failures}");
    assert_eq!(failures, 0);
}
