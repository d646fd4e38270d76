//! Verification of solution artifacts against their instances.

use crate::gsp::edf::Schedule;
use crate::gsp::instance::GspInstance;
use crate::rcp::instance::{coverage, is_prefix_valid, RcpInstance, Selection};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyOutcome {
    pub ok: bool,
    pub diagnostics: Vec<String>,
}

pub fn verify_selection(inst: &RcpInstance, sel: &Selection) -> VerifyOutcome {
    let mut diagnostics = Vec::new();
    let diag = inst.validate();
    diagnostics.extend(diag.errors.iter().map(|e| format!("instance: {e}")));
    if !is_prefix_valid(inst, sel) {
        let mut id = 0;
        for row in &inst.rows {
            let mut gap = false;
            for (i, _rect) in row.rects.iter().enumerate() {
                if sel.contains(id) && gap {
                    diagnostics.push(format!(
                        "row {}: rectangle {} selected without its predecessor (position {})",
                        row.j, id, i
                    ));
                }
                if !sel.contains(id) {
                    gap = true;
                }
                id += 1;
            }
        }
    }
    for ray in &inst.rays {
        if ray.d > 0 {
            let cov = coverage(inst, sel, ray);
            if cov < ray.d {
                diagnostics.push(format!(
                    "ray(s={},t={}): covered {} of demand {}",
                    ray.s, ray.t, cov, ray.d
                ));
            }
        }
    }
    VerifyOutcome { ok: diagnostics.is_empty(), diagnostics }
}

pub fn verify_schedule(inst: &GspInstance, schedule: &Schedule) -> VerifyOutcome {
    let mut diagnostics = Vec::new();
    let diag = inst.validate();
    diagnostics.extend(diag.errors.iter().map(|e| format!("instance: {e}")));
    if let Err(e) = schedule.validate(inst) {
        diagnostics.push(e);
    }
    VerifyOutcome { ok: diagnostics.is_empty(), diagnostics }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gsp::cost::CostFunction;
    use crate::gsp::edf::Segment;
    use crate::gsp::instance::Job;
    use crate::rcp::instance::r1_instance;

    #[test]
    fn valid_pair_passes() {
        let out = verify_selection(&r1_instance(), &Selection::from_ids([0, 1, 2]));
        assert!(out.ok, "{:?}", out.diagnostics);
    }

    #[test]
    fn prefix_violation_names_the_row() {
        let out = verify_selection(&r1_instance(), &Selection::from_ids([1, 2]));
        assert!(!out.ok);
        assert!(out.diagnostics.iter().any(|d| d.starts_with("row 0")));
    }

    #[test]
    fn overlapping_segments_are_caught() {
        let (inst, _) = GspInstance::normalized(vec![
            Job { id: 0, r: 0, p: 2, cost: CostFunction::Tardiness { w: 1, d: 2 } },
            Job { id: 1, r: 0, p: 1, cost: CostFunction::Tardiness { w: 1, d: 2 } },
        ]);
        let schedule = Schedule {
            segments: vec![
                Segment { job: 0, start: 0, end: 2 },
                Segment { job: 1, start: 1, end: 2 },
            ],
            completions: vec![2, 2],
        };
        let out = verify_schedule(&inst, &schedule);
        assert!(!out.ok);
        assert!(out.diagnostics.iter().any(|d| d.contains("overlap")));
    }
}
