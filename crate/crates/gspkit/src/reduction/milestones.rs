//! Milestones: per-job times at which the completion cost has grown by
//! roughly a (1+eps) factor since the previous milestone. Rectangles in the
//! covering instance take their x-extents from consecutive milestones.

use num_traits::{One, Signed, Zero};

use crate::gsp::cost::Time;
use crate::gsp::instance::Job;
use crate::ratio::{log_floor, rat_ceil_u64, rat_int, rat_pow, rat_u64, CostVal, Rat};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MilestoneSequence {
    pub job: usize,
    pub times: Vec<Time>,
}

impl MilestoneSequence {
    pub fn last_index(&self) -> usize {
        self.times.len() - 1
    }

    pub fn cost_at(&self, job: &Job, i: usize) -> CostVal {
        job.cost.cost_at(self.times[i]).expect("milestone in domain")
    }
}

/// General construction: m_0 = r_j, then each next milestone is the largest
/// time whose cost stays within (1+eps) of the cost just after the previous
/// one; the sequence ends at the horizon.
pub fn build_milestones(job: &Job, eps: &Rat, horizon: Time) -> MilestoneSequence {
    assert!(eps > &Rat::zero() && eps <= &Rat::one());
    assert!(horizon >= job.r + job.p);
    let mut times = vec![job.r];
    loop {
        let prev = *times.last().unwrap();
        if prev >= horizon {
            break;
        }
        let at_next = job.cost.cost_at(prev + 1).expect("cost domain");
        let bound = at_next.scale(&(Rat::one() + eps.clone()));
        let next = job.cost.last_time_at_most(&bound, prev + 1, horizon);
        times.push(next);
    }
    MilestoneSequence { job: job.id, times }
}

/// Tardiness construction on the dyadic grid: m_1 = d_j, and each later
/// milestone is the first integer at or past the second-smallest multiple of
/// (eps/2) * 2^h' beyond the previous one, where 2^h' <= m_i - d_j < 2^{h'+1}.
/// When d_j = r_j the zero-width first step is merged: m_1 = d_j + 1.
pub fn build_milestones_tardiness(job: &Job, eps: &Rat, horizon: Time) -> MilestoneSequence {
    let (w, d) = match &job.cost {
        crate::gsp::cost::CostFunction::Tardiness { w, d } => (*w, *d),
        other => panic!("tardiness milestones need a tardiness cost, got {other:?}"),
    };
    assert!(is_inverse_power_of_two(eps), "eps must be 2^-k");
    assert!(d >= job.r, "due date must be pre-normalized to >= release");
    if w == 0 {
        // constant-zero cost: nothing ever grows, two milestones suffice
        return MilestoneSequence { job: job.id, times: vec![job.r, horizon] };
    }
    let mut times = vec![job.r];
    let first = if d == job.r { d + 1 } else { d };
    let first = first.min(horizon);
    times.push(first);
    loop {
        let prev = *times.last().unwrap();
        if prev >= horizon {
            break;
        }
        let gap = prev - d; // >= 0; zero only when m_1 = d
        let next = if gap == 0 {
            prev + 1
        } else {
            let h = log_floor(&rat_int(2), &rat_u64(gap));
            let grid = eps.clone() / rat_int(2) * rat_pow(&rat_int(2), h);
            // second smallest multiple of `grid` strictly past prev
            let k1 = (rat_u64(prev) / grid.clone()).floor() + Rat::one();
            let second = (k1 + Rat::one()) * grid;
            rat_ceil_u64(&second).max(prev + 1)
        };
        times.push(next.min(horizon));
    }
    MilestoneSequence { job: job.id, times }
}

pub fn is_inverse_power_of_two(eps: &Rat) -> bool {
    if eps > &Rat::one() || !eps.is_positive() {
        return false;
    }
    let inv = eps.recip();
    inv.is_integer() && {
        let n = inv.to_integer();
        let mut n = n;
        while (n.clone() % 2u8).is_zero() {
            n /= 2u8;
        }
        n.is_one()
    }
}

/// Runtime certificate for the milestone invariants. `tardiness_grid` adds
/// the dyadic grid property for steps beyond the first.
#[derive(Debug, Clone, Default)]
pub struct MilestoneCheck {
    pub violations: Vec<String>,
}

pub fn check_milestones(
    job: &Job,
    eps: &Rat,
    horizon: Time,
    seq: &MilestoneSequence,
    tardiness_grid: bool,
) -> MilestoneCheck {
    let mut v = Vec::new();
    let times = &seq.times;
    let f = seq.last_index();
    if times[0] != job.r {
        v.push("sequence must start at the release".into());
    }
    if times[f] != horizon {
        v.push("sequence must end at the horizon".into());
    }
    for w in times.windows(2) {
        if w[1] <= w[0] {
            v.push(format!("not strictly increasing at {}", w[0]));
        }
    }
    let one_eps = Rat::one() + eps.clone();
    let one_eps4 = Rat::one() + eps.clone() / rat_int(4);
    for i in 0..f {
        let next = seq.cost_at(job, i + 1);
        let after_prev = job.cost.cost_at(times[i] + 1).unwrap();
        if next > after_prev.scale(&one_eps) {
            v.push(format!("growth bound violated at step {i}"));
        }
        if i + 1 < f {
            let next_plus = job.cost.cost_at(times[i + 1] + 1).unwrap();
            if next_plus <= after_prev.scale(&one_eps4) {
                v.push(format!("separation bound violated at step {i}"));
            }
        }
    }
    if tardiness_grid {
        let (w, d) = match &job.cost {
            crate::gsp::cost::CostFunction::Tardiness { w, d } => (*w, *d),
            _ => unreachable!(),
        };
        let expected_first = if d == job.r { d + 1 } else { d };
        if w > 0 && times.len() > 1 && times[1] != expected_first.min(horizon) {
            v.push("first milestone must sit at the due date".into());
        }
        let delta = eps.clone() / rat_int(32);
        for i in 1..f {
            let width = times[i + 1] - times[i];
            let h = log_floor(&rat_int(2), &rat_u64(width));
            let grid = delta.clone() * rat_pow(&rat_int(2), h);
            for x in [times[i], times[i + 1]] {
                if !(rat_u64(x) / grid.clone()).is_integer() {
                    v.push(format!("milestone {x} off the dyadic grid (step {i})"));
                }
            }
        }
    }
    MilestoneCheck { violations: v }
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::gsp::cost::CostFunction;
    use crate::ratio::rat_frac;

    fn job(cost: CostFunction, r: Time, p: Time) -> Job {
        Job { id: 0, r, p, cost }
    }

    #[test]
    fn general_construction_matches_hand_computation() {
        // tardiness r=0, d=0, w=1, eps=1, T=16
        let j = job(CostFunction::Tardiness { w: 1, d: 0 }, 0, 1);
        let seq = build_milestones(&j, &rat_int(1), 16);
        assert_eq!(seq.times, vec![0, 2, 6, 14, 16]);
        assert!(check_milestones(&j, &rat_int(1), 16, &seq, false)
            .violations
            .is_empty());
    }

    #[test]
    fn hard_deadline_milestones() {
        let j = job(CostFunction::HardDeadline { d: 5 }, 0, 2);
        let seq = build_milestones(&j, &rat_frac(1, 2), 16);
        assert_eq!(seq.times, vec![0, 5, 16]);
    }

    #[test]
    fn constant_zero_cost_collapses() {
        let j = job(CostFunction::Tardiness { w: 0, d: 0 }, 0, 1);
        let seq = build_milestones(&j, &rat_frac(1, 2), 8);
        assert_eq!(seq.times, vec![0, 8]);
    }

    #[test]
    fn tardiness_construction_matches_hand_computation() {
        // r=0, d=0, w=1, eps=1/2, T=16; d=r merges the zero-width step
        let j = job(CostFunction::Tardiness { w: 1, d: 0 }, 0, 1);
        let seq = build_milestones_tardiness(&j, &rat_frac(1, 2), 16);
        assert_eq!(seq.times, vec![0, 1, 2, 3, 4, 6, 8, 12, 16]);
        assert!(check_milestones(&j, &rat_frac(1, 2), 16, &seq, true)
            .violations
            .is_empty());
    }

    #[test]
    fn tardiness_construction_translates_with_due_date() {
        let j = job(CostFunction::Tardiness { w: 3, d: 5 }, 0, 1);
        let seq = build_milestones_tardiness(&j, &rat_frac(1, 2), 32);
        // hand-computed by the grid rule: second multiple of (1/4)*2^h' past
        // the previous milestone, h' from the gap to the due date
        assert_eq!(seq.times, vec![0, 5, 6, 7, 8, 9, 11, 13, 16, 20, 24, 32]);
        assert!(check_milestones(&j, &rat_frac(1, 2), 32, &seq, true)
            .violations
            .is_empty());
    }

    #[test]
    fn due_date_at_horizon_gives_two_milestones() {
        let j = job(CostFunction::Tardiness { w: 2, d: 16 }, 0, 1);
        let seq = build_milestones_tardiness(&j, &rat_frac(1, 2), 16);
        assert_eq!(seq.times, vec![0, 16]);
    }
}
