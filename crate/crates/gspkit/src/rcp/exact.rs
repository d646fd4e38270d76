//! Exact RCP solver that scales past brute force: rows are packed into lanes
//! of pairwise x-disjoint rows, and a right-to-left column sweep tracks one
//! covering bit per lane. A row's prefix choice is committed at the first
//! column left of the prefix's right edge, so at any column the bit says
//! whether the lane's active row covers that column.

use std::collections::HashMap;

use num_traits::Zero;
use thiserror::Error;

use crate::ratio::Rat;
use crate::rcp::brute::BruteOutcome;
use crate::rcp::instance::{RcpInstance, Selection};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExactError {
    #[error("instance needs {lanes} lanes, exceeding the cap {cap}")]
    TooManyLanes { lanes: usize, cap: usize },
}

struct LaneRow {
    row_idx: usize,
    left: u64,
    right: u64,
    j: u64,
    p: u64,
    /// (cut x-coordinate, prefix length, prefix cost), increasing by cut.
    cuts: Vec<(u64, usize, Rat)>,
}

#[derive(Clone)]
struct Entry {
    cost: Rat,
    rect_count: usize,
    prev_state: u64,
    commits: Vec<(usize, usize)>, // (row index, prefix length) made at this column
}

fn better(a: &Entry, b: &Entry) -> bool {
    (&a.cost, a.rect_count, &a.commits) < (&b.cost, b.rect_count, &b.commits)
}

pub const DEFAULT_LANE_CAP: usize = 16;

/// Exact minimum-cost selection, or `Infeasible`.
pub fn exact_solve(inst: &RcpInstance, lane_cap: usize) -> Result<BruteOutcome, ExactError> {
    let base_ids = inst.row_base_ids();
    // Pack rows into lanes greedily after sorting by left edge.
    let mut order: Vec<usize> = (0..inst.rows.len()).collect();
    order.sort_by_key(|&wi| (inst.rows[wi].rects[0].a, inst.rows[wi].j));
    let mut lanes: Vec<Vec<LaneRow>> = Vec::new();
    for wi in order {
        let row = &inst.rows[wi];
        let left = row.rects[0].a;
        let right = row.rects.last().unwrap().b;
        let mut cuts = Vec::with_capacity(row.rects.len());
        let mut acc = Rat::zero();
        for (i, rect) in row.rects.iter().enumerate() {
            acc += rect.c.clone();
            cuts.push((rect.b, i + 1, acc.clone()));
        }
        let lane_row = LaneRow {
            row_idx: wi,
            left,
            right,
            j: row.j,
            p: row.rects[0].p,
            cuts,
        };
        match lanes
            .iter_mut()
            .find(|lane| lane.last().is_none_or(|lr| lr.right <= left))
        {
            Some(lane) => lane.push(lane_row),
            None => lanes.push(vec![lane_row]),
        }
    }
    if lanes.len() > lane_cap.min(60) {
        return Err(ExactError::TooManyLanes {
            lanes: lanes.len(),
            cap: lane_cap.min(60),
        });
    }

    // Column positions: every rectangle edge and every positive-demand ray.
    let mut columns: Vec<u64> = Vec::new();
    for row in &inst.rows {
        for rect in &row.rects {
            columns.push(rect.a);
            columns.push(rect.b);
        }
    }
    for ray in &inst.rays {
        if ray.d > 0 {
            columns.push(ray.t);
        }
    }
    columns.sort_unstable();
    columns.dedup();
    columns.reverse();

    if columns.is_empty() {
        return Ok(if inst.rays.iter().all(|r| r.d == 0) {
            BruteOutcome::Optimal {
                selection: Selection::empty(),
                cost: Rat::zero(),
            }
        } else {
            BruteOutcome::Infeasible
        });
    }

    let mut rays_at: HashMap<u64, Vec<(u64, u64)>> = HashMap::new();
    for ray in &inst.rays {
        if ray.d > 0 {
            rays_at.entry(ray.t).or_default().push((ray.s, ray.d));
        }
    }

    // active row in a lane at column t (rows x-disjoint within a lane)
    let active = |lane: &[LaneRow], t: u64| -> Option<usize> {
        lane.iter().position(|lr| lr.left <= t && t < lr.right)
    };

    let mut states: HashMap<u64, Entry> = HashMap::new();
    states.insert(
        0,
        Entry {
            cost: Rat::zero(),
            rect_count: 0,
            prev_state: 0,
            commits: Vec::new(),
        },
    );
    // per column: the surviving states with back-pointers into the previous column
    let mut trail: Vec<HashMap<u64, Entry>> = Vec::new();
    let mut prev_col: Option<u64> = None;

    for &t in &columns {
        // 1. resets: leaving a row clears the lane bit
        let mut next: HashMap<u64, Entry> = HashMap::new();
        for (state, entry) in &states {
            let mut s = *state;
            for (li, lane) in lanes.iter().enumerate() {
                let now = active(lane, t);
                let before = prev_col.and_then(|pc| active(lane, pc));
                if now != before {
                    s &= !(1u64 << li);
                }
            }
            let e = Entry {
                cost: entry.cost.clone(),
                rect_count: entry.rect_count,
                prev_state: *state,
                commits: Vec::new(),
            };
            match next.get(&s) {
                Some(old) if !better(&e, old) => {}
                _ => {
                    next.insert(s, e);
                }
            }
        }
        let mut cur = next;

        // 2. commit events: cuts whose right edge is the previous column
        if let Some(pc) = prev_col {
            for (li, lane) in lanes.iter().enumerate() {
                if let Some(ri) = active(lane, t) {
                    let lr = &lane[ri];
                    for (cut, plen, pcost) in &lr.cuts {
                        if *cut == pc {
                            let mut expanded: HashMap<u64, Entry> = HashMap::new();
                            for (state, entry) in &cur {
                                // keep as-is
                                match expanded.get(state) {
                                    Some(old) if !better(entry, old) => {}
                                    _ => {
                                        expanded.insert(*state, entry.clone());
                                    }
                                }
                                // commit the prefix if the lane is off
                                if state & (1u64 << li) == 0 {
                                    let s2 = state | (1u64 << li);
                                    let mut commits = entry.commits.clone();
                                    commits.push((lr.row_idx, *plen));
                                    let e2 = Entry {
                                        cost: entry.cost.clone() + pcost.clone(),
                                        rect_count: entry.rect_count + plen,
                                        prev_state: entry.prev_state,
                                        commits,
                                    };
                                    match expanded.get(&s2) {
                                        Some(old) if !better(&e2, old) => {}
                                        _ => {
                                            expanded.insert(s2, e2);
                                        }
                                    }
                                }
                            }
                            cur = expanded;
                        }
                    }
                }
            }
        }

        // 3. ray checks at this column
        if let Some(checks) = rays_at.get(&t) {
            cur.retain(|state, _| {
                checks.iter().all(|&(s_ray, d)| {
                    let mut cov = 0u64;
                    for (li, lane) in lanes.iter().enumerate() {
                        if state & (1u64 << li) != 0 {
                            if let Some(ri) = active(lane, t) {
                                if lane[ri].j <= s_ray {
                                    cov += lane[ri].p;
                                }
                            }
                        }
                    }
                    cov >= d
                })
            });
        }

        if cur.is_empty() {
            return Ok(BruteOutcome::Infeasible);
        }
        trail.push(cur.clone());
        states = cur;
        prev_col = Some(t);
    }

    // pick the best terminal state and walk the trail back
    let (mut state, mut best) = states
        .iter()
        .min_by(|a, b| {
            (&a.1.cost, a.1.rect_count, &a.1.commits, a.0)
                .cmp(&(&b.1.cost, b.1.rect_count, &b.1.commits, b.0))
        })
        .map(|(s, e)| (*s, e.clone()))
        .unwrap();
    let total_cost = best.cost.clone();
    let mut chosen: Vec<(usize, usize)> = Vec::new();
    for ci in (0..trail.len()).rev() {
        let entry = trail[ci].get(&state).expect("trail state");
        debug_assert_eq!(entry.cost, best.cost);
        chosen.extend(entry.commits.iter().copied());
        state = entry.prev_state;
        if ci > 0 {
            best = trail[ci - 1].get(&state).expect("parent state").clone();
        }
    }
    let mut ids = Vec::new();
    for (row_idx, plen) in chosen {
        for k in 0..plen {
            ids.push(base_ids[row_idx] + k);
        }
    }
    Ok(BruteOutcome::Optimal {
        selection: Selection::from_ids(ids),
        cost: total_cost,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio::rat_int;
    use crate::rcp::brute::{brute_force, BruteOutcome};
    use crate::rcp::instance::r1_instance;

    #[test]
    fn matches_brute_on_r1() {
        let inst = r1_instance();
        let exact = exact_solve(&inst, DEFAULT_LANE_CAP).unwrap();
        let brute = brute_force(&inst, 1 << 20).unwrap();
        match (exact, brute) {
            (
                BruteOutcome::Optimal { cost: ce, selection: se },
                BruteOutcome::Optimal { cost: cb, .. },
            ) => {
                assert_eq!(ce, cb);
                assert_eq!(se.cost(&inst), rat_int(4));
            }
            _ => panic!("both should be feasible"),
        }
    }

    #[test]
    fn infeasible_detected() {
        let mut inst = r1_instance();
        inst.rays[0].d = 100;
        assert_eq!(
            exact_solve(&inst, DEFAULT_LANE_CAP).unwrap(),
            BruteOutcome::Infeasible
        );
    }
}
