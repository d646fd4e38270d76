//! Exhaustive reference solver: enumerate every per-row prefix vector.

use num_traits::Zero;
use thiserror::Error;

use crate::ratio::Rat;
use crate::rcp::instance::{coverage, RcpInstance, Selection};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BruteError {
    #[error("prefix-vector space {space} exceeds budget {budget}")]
    BudgetExceeded { space: u128, budget: u128 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BruteOutcome {
    Optimal { selection: Selection, cost: Rat },
    Infeasible,
}

pub fn prefix_space(inst: &RcpInstance) -> u128 {
    inst.rows
        .iter()
        .map(|w| w.rects.len() as u128 + 1)
        .product()
}

/// Minimum-cost feasible selection by full enumeration, ties broken toward
/// the lexicographically smallest prefix vector.
pub fn brute_force(inst: &RcpInstance, budget: u128) -> Result<BruteOutcome, BruteError> {
    let space = prefix_space(inst);
    if space > budget {
        return Err(BruteError::BudgetExceeded { space, budget });
    }
    let m = inst.rows.len();
    let base = inst.row_base_ids();
    let mut prefix = vec![0usize; m];
    let mut best: Option<(Rat, Vec<usize>)> = None;
    loop {
        let sel = selection_of(&base, &prefix);
        let ok = inst
            .rays
            .iter()
            .all(|ray| ray.d == 0 || coverage(inst, &sel, ray) >= ray.d);
        if ok {
            let mut cost = Rat::zero();
            for (wi, row) in inst.rows.iter().enumerate() {
                for rect in &row.rects[..prefix[wi]] {
                    cost += rect.c.clone();
                }
            }
            let better = match &best {
                None => true,
                Some((bc, bp)) => cost < *bc || (cost == *bc && prefix < *bp),
            };
            if better {
                best = Some((cost, prefix.clone()));
            }
        }
        // next prefix vector in lexicographic order
        let mut i = m;
        loop {
            if i == 0 {
                return Ok(match best {
                    Some((cost, pv)) => BruteOutcome::Optimal {
                        selection: selection_of(&base, &pv),
                        cost,
                    },
                    None => BruteOutcome::Infeasible,
                });
            }
            i -= 1;
            if prefix[i] < inst.rows[i].rects.len() {
                prefix[i] += 1;
                for p in prefix.iter_mut().skip(i + 1) {
                    *p = 0;
                }
                break;
            }
        }
    }
}

fn selection_of(base: &[usize], prefix: &[usize]) -> Selection {
    let mut ids = Vec::new();
    for (wi, &len) in prefix.iter().enumerate() {
        for k in 0..len {
            ids.push(base[wi] + k);
        }
    }
    Selection::from_ids(ids)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio::rat_int;
    use crate::rcp::instance::r1_instance;

    #[test]
    fn r1_optimum() {
        match brute_force(&r1_instance(), 1 << 20).unwrap() {
            BruteOutcome::Optimal { selection, cost } => {
                assert_eq!(selection, Selection::from_ids([0, 1, 2]));
                assert_eq!(cost, rat_int(4));
            }
            BruteOutcome::Infeasible => panic!("feasible"),
        }
    }

    #[test]
    fn zero_demand_selects_nothing() {
        let mut inst = r1_instance();
        inst.rays[0].d = 0;
        match brute_force(&inst, 1 << 20).unwrap() {
            BruteOutcome::Optimal { selection, cost } => {
                assert!(selection.is_empty());
                assert_eq!(cost, rat_int(0));
            }
            _ => panic!(),
        }
    }

    #[test]
    fn unsatisfiable_demand_is_infeasible() {
        let mut inst = r1_instance();
        inst.rays[0].d = 100;
        assert_eq!(brute_force(&inst, 1 << 20).unwrap(), BruteOutcome::Infeasible);
    }

    #[test]
    fn budget_is_enforced() {
        assert!(matches!(
            brute_force(&r1_instance(), 2),
            Err(BruteError::BudgetExceeded { .. })
        ));
    }
}
