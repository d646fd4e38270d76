//! Per-job completion-cost functions with a value oracle and an inverse oracle.

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ratio::{rat_u64, CostVal, Rat};

pub type Time = u64;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CostError {
    #[error("time {t} is below the domain start {start}")]
    BelowDomain { t: Time, start: Time },
}

/// A nondecreasing completion-cost function. Values are exact rationals, with
/// infinity as a distinguished sentinel (hard deadlines, step functions).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CostFunction {
    /// w * t
    #[serde(alias = "weighted-completion")]
    Completion { w: u64 },
    /// w * (t - r); anchored at the job's release.
    #[serde(alias = "weighted-flow")]
    Flow { w: u64, r: Time },
    /// w * max(t - d, 0)
    #[serde(alias = "weighted-tardiness")]
    Tardiness { w: u64, d: Time },
    /// 0 while t <= d, then w.
    #[serde(alias = "tardy-weight")]
    WeightOfTardy { w: u64, d: Time },
    /// 0 while t <= d, then infinity.
    #[serde(alias = "deadline")]
    HardDeadline { d: Time },
    /// Explicit breakpoints (time, cost), sorted by time with nondecreasing
    /// cost; value at t is the cost of the last breakpoint with time <= t.
    #[serde(alias = "step")]
    PiecewiseStep { points: Vec<(Time, CostVal)> },
}

impl CostFunction {
    /// Earliest time at which the function is defined.
    pub fn domain_start(&self) -> Time {
        match self {
            CostFunction::PiecewiseStep { points } => points.first().map(|p| p.0).unwrap_or(0),
            _ => 0,
        }
    }

    pub fn is_tardiness(&self) -> bool {
        matches!(self, CostFunction::Tardiness { .. })
    }

    /// Value oracle.
    pub fn cost_at(&self, t: Time) -> Result<CostVal, CostError> {
        let start = self.domain_start();
        if t < start {
            return Err(CostError::BelowDomain { t, start });
        }
        Ok(match self {
            CostFunction::Completion { w } => CostVal::Finite(rat_u64(*w) * rat_u64(t)),
            CostFunction::Flow { w, r } => CostVal::Finite(rat_u64(*w) * rat_u64(t.saturating_sub(*r))),
            CostFunction::Tardiness { w, d } => {
                CostVal::Finite(rat_u64(*w) * rat_u64(t.saturating_sub(*d)))
            }
            CostFunction::WeightOfTardy { w, d } => {
                if t <= *d {
                    CostVal::zero()
                } else {
                    CostVal::from_u64(*w)
                }
            }
            CostFunction::HardDeadline { d } => {
                if t <= *d {
                    CostVal::zero()
                } else {
                    CostVal::Infinite
                }
            }
            CostFunction::PiecewiseStep { points } => {
                let mut val = CostVal::zero();
                for (bt, bv) in points {
                    if *bt <= t {
                        val = bv.clone();
                    } else {
                        break;
                    }
                }
                val
            }
        })
    }

    /// Inverse oracle: the smallest integer t with cost_at(t) >= q, searched in
    /// [domain_start, horizon]. None if the function stays below q on that range.
    pub fn time_for_cost(&self, q: &CostVal, horizon: Time) -> Option<Time> {
        let start = self.domain_start();
        if &self.cost_at(start).unwrap() >= q {
            return Some(start);
        }
        if &self.cost_at(horizon).unwrap() < q {
            return None;
        }
        // invariant: cost(lo) < q <= cost(hi)
        let (mut lo, mut hi) = (start, horizon);
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if &self.cost_at(mid).unwrap() >= q {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Some(hi)
    }

    /// Largest integer t in [lo, hi] with cost_at(t) <= bound. The caller
    /// guarantees cost_at(lo) <= bound.
    pub fn last_time_at_most(&self, bound: &CostVal, lo: Time, hi: Time) -> Time {
        debug_assert!(&self.cost_at(lo).unwrap() <= bound);
        if &self.cost_at(hi).unwrap() <= bound {
            return hi;
        }
        // invariant: cost(lo) <= bound < cost(hi)
        let (mut lo, mut hi) = (lo, hi);
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if &self.cost_at(mid).unwrap() <= bound {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }

    /// Subtract a constant from the whole function (used to normalize
    /// cost(r_j) = 0). Only valid for a finite shift not exceeding the
    /// function's minimum on its domain.
    pub fn shifted_down(&self, shift: &Rat) -> CostFunction {
        if shift.is_zero() {
            return self.clone();
        }
        match self {
            CostFunction::PiecewiseStep { points } => CostFunction::PiecewiseStep {
                points: points
                    .iter()
                    .map(|(t, v)| (*t, v.sub_clamped(shift)))
                    .collect(),
            },
            // The parametric kinds are all zero at their anchor, so a nonzero
            // shift can only come from Completion/Flow evaluated past the
            // anchor; represent the result as an explicit anchored form.
            CostFunction::Completion { .. }
            | CostFunction::Flow { .. }
            | CostFunction::Tardiness { .. }
            | CostFunction::WeightOfTardy { .. }
            | CostFunction::HardDeadline { .. } => {
                unreachable!("parametric kinds are normalized via their anchor")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio::rat_int;

    #[test]
    fn tardiness_value_oracle() {
        let f = CostFunction::Tardiness { w: 2, d: 3 };
        assert_eq!(f.cost_at(5).unwrap(), CostVal::from_u64(4));
        assert_eq!(f.cost_at(3).unwrap(), CostVal::zero());
    }

    #[test]
    fn hard_deadline_past_due_is_infinite() {
        let f = CostFunction::HardDeadline { d: 4 };
        assert_eq!(f.cost_at(5).unwrap(), CostVal::Infinite);
        assert_eq!(f.cost_at(4).unwrap(), CostVal::zero());
    }

    #[test]
    fn inverse_oracle_matches_examples() {
        let f = CostFunction::Tardiness { w: 2, d: 3 };
        assert_eq!(f.time_for_cost(&CostVal::from_u64(4), 100), Some(5));
        assert_eq!(f.time_for_cost(&CostVal::zero(), 100), Some(0));

        let step = CostFunction::PiecewiseStep {
            points: vec![(0, CostVal::zero()), (4, CostVal::from_u64(7))],
        };
        assert_eq!(step.time_for_cost(&CostVal::from_u64(5), 100), Some(4));
    }

    #[test]
    fn oracles_are_mutually_consistent() {
        let f = CostFunction::Completion { w: 3 };
        for t in 0..20 {
            let q = f.cost_at(t).unwrap();
            let back = f.time_for_cost(&q, 100).unwrap();
            assert!(back <= t);
            assert_eq!(f.cost_at(back).unwrap(), q);
        }
    }

    #[test]
    fn below_domain_is_an_error() {
        let step = CostFunction::PiecewiseStep {
            points: vec![(2, CostVal::zero())],
        };
        assert_eq!(
            step.cost_at(1),
            Err(CostError::BelowDomain { t: 1, start: 2 })
        );
    }

    #[test]
    fn last_time_at_most_is_maximal() {
        let f = CostFunction::Tardiness { w: 1, d: 0 };
        let t = f.last_time_at_most(&CostVal::from_u64(6), 0, 16);
        assert_eq!(t, 6);
        let t = f.last_time_at_most(&CostVal::Finite(rat_int(100)), 0, 16);
        assert_eq!(t, 16);
    }
}
