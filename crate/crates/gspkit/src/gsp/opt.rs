//! Exhaustive optimum for small GSP instances: any feasible completion vector
//! is dominated componentwise by the one produced by priority scheduling in
//! its completion order, so minimizing over the n! orders is exact.

use crate::gsp::cost::Time;
use crate::gsp::edf::{edf_schedule, Schedule};
use crate::gsp::instance::GspInstance;
use crate::ratio::CostVal;

pub const MAX_EXHAUSTIVE_JOBS: usize = 8;

/// Completions of the preemptive priority schedule where `order[k]` has the
/// k-th highest priority: at each unit step, run the released unfinished job
/// that appears earliest in `order`.
fn priority_completions(inst: &GspInstance, order: &[usize]) -> Vec<Time> {
    let n = inst.jobs.len();
    let mut remaining: Vec<Time> = inst.jobs.iter().map(|j| j.p).collect();
    let mut completions = vec![0u64; n];
    let mut rank = vec![0usize; n];
    for (k, &j) in order.iter().enumerate() {
        rank[j] = k;
    }
    let mut t: Time = inst.jobs.iter().map(|j| j.r).min().unwrap_or(0);
    let mut done = 0usize;
    while done < n {
        let mut pick: Option<usize> = None;
        for job in &inst.jobs {
            if remaining[job.id] > 0 && job.r <= t {
                let better = match pick {
                    None => true,
                    Some(cur) => rank[job.id] < rank[cur],
                };
                if better {
                    pick = Some(job.id);
                }
            }
        }
        match pick {
            Some(j) => {
                remaining[j] -= 1;
                t += 1;
                if remaining[j] == 0 {
                    completions[j] = t;
                    done += 1;
                }
            }
            None => {
                t = inst
                    .jobs
                    .iter()
                    .filter(|j| remaining[j.id] > 0)
                    .map(|j| j.r)
                    .min()
                    .expect("unfinished job exists");
            }
        }
    }
    completions
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = Vec::new();
    let mut used = vec![false; n];
    fn rec(n: usize, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for j in 0..n {
            if !used[j] {
                used[j] = true;
                cur.push(j);
                rec(n, cur, used, out);
                cur.pop();
                used[j] = false;
            }
        }
    }
    rec(n, &mut cur, &mut used, &mut out);
    out
}

/// Exact optimum (cost, completions) by exhaustive completion-order search.
/// Returns None when some order is forced through an infinite cost for every
/// order, i.e. the instance has no finite-cost schedule.
pub fn exhaustive_optimum(inst: &GspInstance) -> Option<(CostVal, Vec<Time>)> {
    let n = inst.jobs.len();
    assert!(n <= MAX_EXHAUSTIVE_JOBS, "instance too large for exhaustive search");
    if n == 0 {
        return Some((CostVal::zero(), Vec::new()));
    }
    let mut best: Option<(CostVal, Vec<Time>)> = None;
    for order in permutations(n) {
        let completions = priority_completions(inst, &order);
        let cost = inst.total_cost(&completions);
        let better = match &best {
            None => true,
            Some((bc, bv)) => cost < *bc || (cost == *bc && completions < *bv),
        };
        if better {
            best = Some((cost, completions));
        }
    }
    best.filter(|(c, _)| c.is_finite())
}

/// Exact optimum as a full schedule: recover via EDF on the optimal
/// completion vector taken as deadlines.
pub fn exhaustive_optimum_schedule(inst: &GspInstance) -> Option<(CostVal, Schedule)> {
    let (cost, completions) = exhaustive_optimum(inst)?;
    let schedule = edf_schedule(inst, &completions).expect("optimal completions are feasible");
    // EDF may finish earlier than the target completions; cost only improves.
    let final_cost = inst.total_cost(&schedule.completions);
    debug_assert!(final_cost <= cost);
    Some((final_cost, schedule))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gsp::cost::CostFunction;
    use crate::gsp::instance::Job;

    #[test]
    fn g1_optimum_is_three() {
        let (inst, _) = GspInstance::normalized(vec![
            Job { id: 0, r: 0, p: 2, cost: CostFunction::Tardiness { w: 1, d: 2 } },
            Job { id: 1, r: 1, p: 1, cost: CostFunction::Tardiness { w: 2, d: 1 } },
        ]);
        let (cost, _) = exhaustive_optimum(&inst).unwrap();
        assert_eq!(cost, CostVal::from_u64(3));
    }

    #[test]
    fn single_job_completes_at_release_plus_processing() {
        let (inst, _) = GspInstance::normalized(vec![Job {
            id: 0,
            r: 2,
            p: 3,
            cost: CostFunction::Completion { w: 1 },
        }]);
        let (cost, completions) = exhaustive_optimum(&inst).unwrap();
        assert_eq!(completions, vec![5]);
        assert_eq!(cost, CostVal::from_u64(3)); // normalized flow cost
    }

    #[test]
    fn infeasible_hard_deadlines_return_none() {
        let (inst, diag) = GspInstance::normalized(vec![
            Job { id: 0, r: 0, p: 2, cost: CostFunction::HardDeadline { d: 2 } },
            Job { id: 1, r: 0, p: 2, cost: CostFunction::HardDeadline { d: 2 } },
        ]);
        assert!(diag.ok());
        assert!(exhaustive_optimum(&inst).is_none());
    }
}
