//! Recursive solver for dyadically structured instances: group the
//! mid-crossing rows, select greedily per group, reduce the ray demands, and
//! recurse on the two halves. No artificial rays are needed; cross-row
//! leftovers are discarded.


use crate::ratio::{rat_u64, Rat};
use crate::rcp::instance::{Ray, Selection};
use crate::rcp::subproblem::{SubRow, Subproblem};

use super::groups::{
    greedy_group_select, group_cross_rows, group_count_bound, guess_from_reference, check_group,
    CrossGroup, GroupGuess,
};

#[derive(Debug, thiserror::Error)]
pub enum TardinessError {
    #[error("no feasible solution at node [{0},{1})")]
    Infeasible(u64, u64),
    #[error("guess caps exhausted: {0}")]
    CapsExhausted(String),
}

#[derive(Debug, Clone)]
pub struct TardinessNodeCert {
    pub area: (u64, u64),
    pub output_feasible: bool,
    pub ratio_ok: bool,
    pub group_violations: Vec<String>,
    pub child_refs_feasible: bool,
    pub group_count_ok: bool,
}

impl TardinessNodeCert {
    pub fn all_ok(&self) -> bool {
        self.output_feasible
            && self.ratio_ok
            && self.group_violations.is_empty()
            && self.child_refs_feasible
            && self.group_count_ok
    }
}

pub struct TardinessCtx {
    pub eps: Rat,
    pub certs: Vec<TardinessNodeCert>,
}

/// Route rows wholly inside a half to that child; reduce ray demands by the
/// selected coverage. Cross rows do not descend.
pub fn split_tardiness(sub: &Subproblem, selected: &Selection) -> (Subproblem, Subproblem) {
    let mid = sub.area.mid();
    let mut left_rows: Vec<SubRow> = Vec::new();
    let mut right_rows: Vec<SubRow> = Vec::new();
    let mut next_left = 0usize;
    let mut next_right = 0usize;
    for row in &sub.rows {
        if row.right() <= mid {
            let mut rects = row.rects.clone();
            for r in &mut rects {
                r.parent = Some(r.id);
                r.id = next_left;
                next_left += 1;
            }
            left_rows.push(SubRow { y: row.y, rects });
        } else if row.left() >= mid {
            let mut rects = row.rects.clone();
            for r in &mut rects {
                r.parent = Some(r.id);
                r.id = next_right;
                next_right += 1;
            }
            right_rows.push(SubRow { y: row.y, rects });
        }
    }
    let mut left_rays = Vec::new();
    let mut right_rays = Vec::new();
    for ray in &sub.rays {
        let cov = sub.coverage(selected, ray);
        let d = ray.d.saturating_sub(cov);
        if ray.t < mid {
            left_rays.push(Ray { s: ray.s, t: ray.t, d });
        } else {
            right_rays.push(Ray { s: ray.s, t: ray.t, d });
        }
    }
    (
        Subproblem { area: sub.area.left_half(), rows: left_rows, rays: left_rays },
        Subproblem { area: sub.area.right_half(), rows: right_rows, rays: right_rays },
    )
}

fn child_reference(child: &Subproblem, parent_sel: &Selection) -> Selection {
    let mut ids = Vec::new();
    for row in &child.rows {
        for rect in &row.rects {
            if parent_sel.contains(rect.parent.unwrap()) {
                ids.push(rect.id);
            }
        }
    }
    Selection::from_ids(ids)
}

fn lift_child(child: &Subproblem, sel: &Selection) -> Vec<usize> {
    let mut ids = Vec::new();
    for row in &child.rows {
        for rect in &row.rects {
            if sel.contains(rect.id) {
                ids.push(rect.parent.unwrap());
            }
        }
    }
    ids
}

/// Oracle-mode recursion with a feasible reference.
pub fn solve_tardiness_oracle(
    sub: &Subproblem,
    reference: &Selection,
    ctx: &mut TardinessCtx,
) -> Result<Selection, TardinessError> {
    debug_assert!(sub.is_feasible(reference), "reference must be feasible");
    let groups = group_cross_rows(sub, &ctx.eps);
    let mut apx = Selection::empty();
    let mut group_violations = Vec::new();
    for group in &groups {
        let guess = guess_from_reference(sub, group, reference, &ctx.eps);
        let sel = greedy_group_select(sub, group, &guess, &ctx.eps)
            .map_err(|e| TardinessError::CapsExhausted(e.to_string()))?;
        group_violations.extend(check_group(sub, group, &sel, reference, &ctx.eps));
        apx = apx.union(&sel);
    }
    let group_count_ok = (groups.len() as u64) <= group_count_bound(sub, &groups);

    let result = if sub.area.width() == 1 {
        // no recursion: the leftover demand must vanish
        let ok = sub
            .rays
            .iter()
            .all(|ray| ray.d == 0 || sub.coverage(&apx, ray) >= ray.d);
        if ok {
            Ok(apx.clone())
        } else {
            Err(TardinessError::Infeasible(sub.area.left, sub.area.right))
        }
    } else {
        let (left, right) = split_tardiness(sub, &apx);
        let left_ref = child_reference(&left, reference);
        let right_ref = child_reference(&right, reference);
        let child_refs_ok = left.is_feasible(&left_ref) && right.is_feasible(&right_ref);
        let ls = solve_tardiness_oracle(&left, &left_ref, ctx)?;
        let rs = solve_tardiness_oracle(&right, &right_ref, ctx)?;
        let mut ids = apx.sorted_ids();
        ids.extend(lift_child(&left, &ls));
        ids.extend(lift_child(&right, &rs));
        let combined = Selection::from_ids(ids);
        let ratio_ok = {
            let out = sub.selection_cost(&combined);
            let r = sub.selection_cost(reference);
            out <= r.clone() + rat_u64(5) * ctx.eps.clone() * r
        };
        ctx.certs.push(TardinessNodeCert {
            area: (sub.area.left, sub.area.right),
            output_feasible: sub.is_feasible(&combined),
            ratio_ok,
            group_violations: std::mem::take(&mut group_violations),
            child_refs_feasible: child_refs_ok,
            group_count_ok,
        });
        return Ok(combined);
    };

    if let Ok(sel) = &result {
        let ratio_ok = {
            let out = sub.selection_cost(sel);
            let r = sub.selection_cost(reference);
            out <= r.clone() + rat_u64(5) * ctx.eps.clone() * r
        };
        ctx.certs.push(TardinessNodeCert {
            area: (sub.area.left, sub.area.right),
            output_feasible: true,
            ratio_ok,
            group_violations,
            child_refs_feasible: true,
            group_count_ok,
        });
    }
    result
}

/// Exhaustive mode: enumerate per-group count vectors and small-row subsets
/// under a global budget; keep the cheapest feasible candidate.
pub fn solve_tardiness_exhaustive(
    sub: &Subproblem,
    ctx: &mut TardinessCtx,
    budget: &mut u64,
) -> Result<(Selection, Rat), TardinessError> {
    let groups = group_cross_rows(sub, &ctx.eps);
    let mut guess_sets: Vec<Vec<GroupGuess>> = Vec::new();
    for group in &groups {
        let guesses = enumerate_group_guesses(group, &ctx.eps, budget)?;
        guess_sets.push(guesses);
    }
    let mut pick = vec![0usize; groups.len()];
    let mut best: Option<(Selection, Rat)> = None;
    loop {
        if *budget == 0 {
            return Err(TardinessError::CapsExhausted("guess budget".into()));
        }
        *budget -= 1;
        let mut apx = Selection::empty();
        let mut ok = true;
        for (gi, group) in groups.iter().enumerate() {
            match greedy_group_select(sub, group, &guess_sets[gi][pick[gi]], &ctx.eps) {
                Ok(sel) => apx = apx.union(&sel),
                Err(_) => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            let candidate = (|| -> Result<(Selection, Rat), TardinessError> {
                if sub.area.width() == 1 {
                    let covered = sub
                        .rays
                        .iter()
                        .all(|ray| ray.d == 0 || sub.coverage(&apx, ray) >= ray.d);
                    if !covered {
                        return Err(TardinessError::Infeasible(sub.area.left, sub.area.right));
                    }
                    let cost = sub.selection_cost(&apx);
                    return Ok((apx.clone(), cost));
                }
                let (left, right) = split_tardiness(sub, &apx);
                let (ls, _) = solve_tardiness_exhaustive(&left, ctx, budget)?;
                let (rs, _) = solve_tardiness_exhaustive(&right, ctx, budget)?;
                let mut ids = apx.sorted_ids();
                ids.extend(lift_child(&left, &ls));
                ids.extend(lift_child(&right, &rs));
                let combined = Selection::from_ids(ids);
                if !sub.is_feasible(&combined) {
                    return Err(TardinessError::Infeasible(sub.area.left, sub.area.right));
                }
                let cost = sub.selection_cost(&combined);
                Ok((combined, cost))
            })();
            match candidate {
                Ok((sel, cost)) => {
                    let better = match &best {
                        None => true,
                        Some((_, bc)) => cost < *bc,
                    };
                    if better {
                        best = Some((sel, cost));
                    }
                }
                Err(TardinessError::Infeasible(..)) => {}
                Err(e) => return Err(e),
            }
        }
        // advance
        let mut i = pick.len();
        let done = loop {
            if i == 0 {
                break true;
            }
            i -= 1;
            if pick[i] + 1 < guess_sets[i].len() {
                pick[i] += 1;
                for p in pick.iter_mut().skip(i + 1) {
                    *p = 0;
                }
                break false;
            }
            pick[i] = 0;
        };
        if done {
            return best.ok_or(TardinessError::Infeasible(sub.area.left, sub.area.right));
        }
        if groups.is_empty() {
            return best.ok_or(TardinessError::Infeasible(sub.area.left, sub.area.right));
        }
    }
}

/// Enumerate the group's guesses via per-row prefix assignments, deduplicated
/// to their (counts, small rows) signature.
fn enumerate_group_guesses(
    group: &CrossGroup,
    eps: &Rat,
    budget: &mut u64,
) -> Result<Vec<GroupGuess>, TardinessError> {
    let k = group.key.cost_exps.len();
    let m = group.rows.len();
    let inv_eps = crate::ratio::rat_floor_u64(&eps.clone().recip());
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    let mut assign = vec![0usize; m];
    loop {
        if *budget == 0 {
            return Err(TardinessError::CapsExhausted("guess budget".into()));
        }
        *budget -= 1;
        let mut counts = vec![0u64; k];
        let mut members: Vec<Vec<usize>> = vec![Vec::new(); k];
        for (gi, &len) in assign.iter().enumerate() {
            if len > 0 {
                counts[len - 1] += 1;
                members[len - 1].push(gi);
            }
        }
        let small_rows: Vec<Vec<usize>> = members
            .iter()
            .enumerate()
            .map(|(i, rows)| if counts[i] <= inv_eps { rows.clone() } else { Vec::new() })
            .collect();
        if seen.insert(format!("{counts:?}|{small_rows:?}")) {
            out.push(GroupGuess { counts, small_rows });
        }
        let mut i = m;
        let done = loop {
            if i == 0 {
                break true;
            }
            i -= 1;
            if assign[i] < k {
                assign[i] += 1;
                for a in assign.iter_mut().skip(i + 1) {
                    *a = 0;
                }
                break false;
            }
            assign[i] = 0;
        };
        if done {
            break;
        }
    }
    Ok(out)
}
