//! GSP instances: jobs with release times, processing times, and completion
//! cost functions. Instances are normalized on construction so that every
//! job's cost at its release time is zero; the stripped constant is kept in
//! `cost_offset`.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::gsp::cost::{CostFunction, Time};
use crate::ratio::{rat_serde, rat_u64, CostVal, Rat};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Job {
    pub id: usize,
    pub r: Time,
    pub p: Time,
    pub cost: CostFunction,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GspInstance {
    pub jobs: Vec<Job>,
    /// Sum of the pre-normalization values cost_j(r_j).
    #[serde(with = "rat_serde", default = "Rat::zero")]
    pub cost_offset: Rat,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub errors: Vec<String>,
    pub warnings: Vec<String>,
}

impl Diagnostics {
    pub fn ok(&self) -> bool {
        self.errors.is_empty()
    }
}

impl GspInstance {
    /// Build an instance from raw jobs, normalizing cost functions so that
    /// cost_j(r_j) = 0 and recording the stripped offset. Returns diagnostics
    /// alongside; errors leave the offending job untouched.
    pub fn normalized(raw_jobs: Vec<Job>) -> (GspInstance, Diagnostics) {
        let mut errors = Vec::new();
        let mut warnings = Vec::new();
        let mut offset = Rat::zero();
        let mut jobs = Vec::with_capacity(raw_jobs.len());
        for mut job in raw_jobs {
            if job.p == 0 {
                errors.push(format!("job {}: processing time must be positive", job.id));
            }
            let r = job.r;
            match &job.cost {
                CostFunction::Completion { w } => {
                    if r > 0 {
                        offset += rat_u64(*w) * rat_u64(r);
                        warnings.push(format!(
                            "job {}: completion cost re-anchored at release (offset {})",
                            job.id,
                            *w as u128 * r as u128
                        ));
                    }
                    job.cost = CostFunction::Flow { w: *w, r };
                }
                CostFunction::Flow { w, r: anchor } => {
                    if *anchor < r {
                        offset += rat_u64(*w) * rat_u64(r - *anchor);
                        warnings.push(format!("job {}: flow anchor moved to release", job.id));
                        job.cost = CostFunction::Flow { w: *w, r };
                    }
                }
                CostFunction::Tardiness { w, d } => {
                    if *d < r {
                        offset += rat_u64(*w) * rat_u64(r - *d);
                        warnings.push(format!(
                            "job {}: due date {} clamped to release {}",
                            job.id, d, r
                        ));
                        job.cost = CostFunction::Tardiness { w: *w, d: r };
                    }
                }
                CostFunction::WeightOfTardy { w, d } => {
                    if *d < r {
                        offset += rat_u64(*w);
                        warnings.push(format!(
                            "job {}: already tardy at release; weight folded into offset",
                            job.id
                        ));
                        job.cost = CostFunction::WeightOfTardy { w: 0, d: *d };
                    }
                }
                CostFunction::HardDeadline { d } => {
                    if *d < r + job.p.max(1) {
                        errors.push(format!(
                            "job {}: hard deadline {} unreachable from release {} with p={}",
                            job.id, d, r, job.p
                        ));
                    }
                }
                CostFunction::PiecewiseStep { points } => {
                    if points.is_empty() {
                        errors.push(format!("job {}: step function has no breakpoints", job.id));
                    } else if job.cost.domain_start() > r {
                        errors.push(format!(
                            "job {}: cost domain starts after release",
                            job.id
                        ));
                    } else {
                        match job.cost.cost_at(r).unwrap() {
                            CostVal::Infinite => errors.push(format!(
                                "job {}: cost already infinite at release",
                                job.id
                            )),
                            CostVal::Finite(v) => {
                                if !v.is_zero() {
                                    offset += v.clone();
                                    warnings
                                        .push(format!("job {}: step costs shifted by {}", job.id, v));
                                    job.cost = job.cost.shifted_down(&v);
                                }
                            }
                        }
                    }
                }
            }
            jobs.push(job);
        }
        let inst = GspInstance {
            jobs,
            cost_offset: offset,
        };
        let mut diag = inst.validate();
        diag.errors.splice(0..0, errors);
        diag.warnings.splice(0..0, warnings);
        (inst, diag)
    }

    /// Check type invariants; reports, never panics.
    pub fn validate(&self) -> Diagnostics {
        let mut errors = Vec::new();
        let warnings = Vec::new();
        let n = self.jobs.len();
        let mut seen = vec![false; n];
        for job in &self.jobs {
            if job.id >= n || seen[job.id] {
                errors.push(format!("job ids must be unique and dense 0..{n} (got {})", job.id));
            } else {
                seen[job.id] = true;
            }
            if job.p == 0 {
                errors.push(format!("job {}: processing time must be positive", job.id));
            }
            match job.cost.cost_at(job.r) {
                Err(e) => errors.push(format!("job {}: {e}", job.id)),
                Ok(v) => {
                    if !v.is_zero() {
                        errors.push(format!(
                            "job {}: cost at release is {v}, expected 0 after normalization",
                            job.id
                        ));
                    }
                }
            }
            if let CostFunction::Tardiness { d, .. } = &job.cost {
                if *d < job.r {
                    errors.push(format!("job {}: due date below release", job.id));
                }
            }
            if let CostFunction::PiecewiseStep { points } = &job.cost {
                let mut prev: Option<&(Time, CostVal)> = None;
                for pt in points {
                    if let Some(pr) = prev {
                        if pt.0 <= pr.0 {
                            errors.push(format!("job {}: breakpoint times must increase", job.id));
                        }
                        if pt.1 < pr.1 {
                            errors.push(format!("job {}: step costs must be nondecreasing", job.id));
                        }
                    }
                    prev = Some(pt);
                }
            }
        }
        Diagnostics { errors, warnings }
    }

    pub fn total_processing(&self) -> Time {
        self.jobs.iter().map(|j| j.p).sum()
    }

    pub fn max_release(&self) -> Time {
        self.jobs.iter().map(|j| j.r).max().unwrap_or(0)
    }

    /// Σ_j cost_j(C_j). Infinity-absorbing.
    pub fn total_cost(&self, completions: &[Time]) -> CostVal {
        let mut total = CostVal::zero();
        for job in &self.jobs {
            let c = completions[job.id];
            debug_assert!(c >= job.r + job.p, "completion before release + processing");
            total += job.cost.cost_at(c).expect("completion in cost domain");
        }
        total
    }

    /// The horizon T = 2^{k+1} with 2^k <= max_j r_j + Σ_j p_j < 2^{k+1}.
    /// Requires the instance to be gap-free (see `split_by_release_gaps`);
    /// panics otherwise since downstream index structures assume it.
    pub fn horizon(&self) -> Time {
        assert!(
            self.split_by_release_gaps().len() <= 1,
            "instance splits at a release gap; solve the pieces independently"
        );
        let bound = self.max_release() + self.total_processing();
        horizon_for_bound(bound)
    }

    /// Split at release gaps larger than the total processing time of all jobs
    /// released so far: everything earlier finishes before the gap ends in any
    /// schedule without needless idling, so the pieces are independent.
    /// Job ids are re-densified per piece; `piece_job_maps` gives original ids.
    pub fn split_by_release_gaps(&self) -> Vec<(GspInstance, Vec<usize>)> {
        if self.jobs.is_empty() {
            return vec![(self.clone(), Vec::new())];
        }
        let mut order: Vec<&Job> = self.jobs.iter().collect();
        order.sort_by_key(|j| (j.r, j.id));
        let mut pieces: Vec<Vec<&Job>> = Vec::new();
        let mut cur: Vec<&Job> = vec![order[0]];
        let mut work: Time = order[0].p;
        let mut last_r = order[0].r;
        for job in &order[1..] {
            if job.r > last_r && job.r - last_r > work {
                pieces.push(std::mem::take(&mut cur));
                work = 0;
            }
            cur.push(job);
            work += job.p;
            last_r = job.r;
        }
        pieces.push(cur);
        let offset_share = self.cost_offset.clone();
        let mut out = Vec::new();
        for (i, piece) in pieces.iter().enumerate() {
            let map: Vec<usize> = piece.iter().map(|j| j.id).collect();
            let jobs = piece
                .iter()
                .enumerate()
                .map(|(new_id, j)| Job {
                    id: new_id,
                    ..(*j).clone()
                })
                .collect();
            let inst = GspInstance {
                jobs,
                cost_offset: if i == 0 { offset_share.clone() } else { Rat::zero() },
            };
            out.push((inst, map));
        }
        out
    }
}

pub fn horizon_for_bound(bound: Time) -> Time {
    let bound = bound.max(1);
    let mut t = 1u64;
    while t <= bound {
        t *= 2;
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn tard(id: usize, r: Time, p: Time, w: u64, d: Time) -> Job {
        Job {
            id,
            r,
            p,
            cost: CostFunction::Tardiness { w, d },
        }
    }

    fn g1() -> GspInstance {
        let (inst, diag) = GspInstance::normalized(vec![tard(0, 0, 2, 1, 2), tard(1, 1, 1, 2, 1)]);
        assert!(diag.ok(), "{diag:?}");
        inst
    }

    #[test]
    fn total_cost_examples() {
        let inst = g1();
        assert_eq!(inst.total_cost(&[3, 2]), CostVal::from_u64(3));
        assert_eq!(inst.total_cost(&[2, 3]), CostVal::from_u64(4));
    }

    #[test]
    fn horizon_examples() {
        assert_eq!(g1().horizon(), 8);
        let (single, diag) = GspInstance::normalized(vec![tard(0, 0, 1, 1, 0)]);
        assert!(diag.ok());
        assert_eq!(single.horizon(), 2);
    }

    #[test]
    fn gap_split_example() {
        let (inst, _) = GspInstance::normalized(vec![tard(0, 0, 1, 1, 0), tard(1, 10, 1, 1, 10)]);
        let pieces = inst.split_by_release_gaps();
        assert_eq!(pieces.len(), 2);
        assert_eq!(pieces[0].1, vec![0]);
        assert_eq!(pieces[1].1, vec![1]);
    }

    #[test]
    fn validate_flags_zero_processing() {
        let (_, diag) = GspInstance::normalized(vec![Job {
            id: 0,
            r: 0,
            p: 0,
            cost: CostFunction::Tardiness { w: 1, d: 0 },
        }]);
        assert!(diag.errors.iter().any(|e| e.contains("positive")));
    }

    #[test]
    fn offset_telescopes_to_the_raw_objective() {
        use crate::ratio::CostVal;
        // raw costs are nonzero at the releases; the offset makes up the gap
        let raw = vec![
            Job { id: 0, r: 2, p: 1, cost: CostFunction::Completion { w: 3 } },
            Job { id: 1, r: 1, p: 2, cost: CostFunction::Tardiness { w: 2, d: 0 } },
        ];
        let raw_cost_at = |c: &[Time]| -> CostVal {
            let mut total = CostVal::zero();
            for j in &raw {
                total += j.cost.cost_at(c[j.id]).unwrap();
            }
            total
        };
        let (inst, diag) = GspInstance::normalized(raw.clone());
        assert!(diag.ok());
        for completions in [vec![3u64, 5u64], vec![6, 3], vec![4, 4]] {
            let normalized = inst.total_cost(&completions);
            let shifted = normalized + CostVal::Finite(inst.cost_offset.clone());
            assert_eq!(shifted, raw_cost_at(&completions));
        }
    }

    #[test]
    fn normalization_clamps_due_date_with_warning() {
        let (inst, diag) = GspInstance::normalized(vec![tard(0, 3, 1, 2, 1)]);
        assert!(diag.ok());
        assert!(diag.warnings.iter().any(|w| w.contains("clamped")));
        assert_eq!(inst.cost_offset, crate::ratio::rat_int(4));
        assert_eq!(
            inst.jobs[0].cost,
            CostFunction::Tardiness { w: 2, d: 3 }
        );
    }
}
