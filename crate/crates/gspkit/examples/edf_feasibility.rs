//! The window feasibility condition and EDF scheduling.
//!
//! ```bash
//! cargo run --example edf_feasibility
//! ```

use gspkit::gsp::edf::{deadline_feasible, edf_schedule};
use gspkit::{CostFunction, GspInstance, Job};

fn main() {
    let (inst, _) = GspInstance::normalized(vec![
        Job { id: 0, r: 0, p: 2, cost: CostFunction::Tardiness { w: 1, d: 4 } },
        Job { id: 1, r: 1, p: 1, cost: CostFunction::Tardiness { w: 1, d: 2 } },
    ]);

    for deadlines in [vec![4u64, 2u64], vec![2, 2], vec![3, 2]] {
        let ok = deadline_feasible(&inst, &deadlines);
        println!("deadlines {deadlines:?}: window condition {}", if ok { "holds" } else { "fails" });
        match edf_schedule(&inst, &deadlines) {
            Some(s) => {
                assert!(ok);
                println!("  EDF completions: {:?}", s.completions);
                for seg in &s.segments {
                    println!("  job {}: [{}, {})", seg.job, seg.start, seg.end);
                }
            }
            None => {
                assert!(!ok);
                println!("  EDF misses a deadline, as the condition predicts");
            }
        }
    }
}
