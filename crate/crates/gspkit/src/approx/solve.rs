//! The recursive strip solver. Oracle mode derives every guess from a
//! feasible reference solution, exactly as the analysis constructs them, and
//! certifies the per-level inequalities at run time. Exhaustive mode
//! enumerates guesses over instance-derived candidates under caps.

use thiserror::Error;

use crate::ratio::{rat_u64, Rat};
use crate::rcp::brute::BruteOutcome;
use crate::rcp::instance::Selection;
use crate::rcp::subproblem::Subproblem;

use super::classify::auxiliary_cost;
use super::splus::{augment_reference, check_augmented, group_rows, FilledRow, GroupSide};
use super::split::{assemble_children, combine_children, route_rows};
use super::stepfn::{build_step_function, check_sandwich, BandGroup, StepFunction};

#[derive(Debug, Error)]
pub enum ApproxError {
    #[error("node has no feasible solution")]
    Infeasible,
    #[error("guess caps exhausted: {0}")]
    CapsExhausted(String),
}

#[derive(Debug, Clone)]
pub struct NodeCert {
    pub area: (u64, u64),
    pub output_feasible: bool,
    pub ratio_ok: bool,
    pub augment_violations: Vec<String>,
    pub decomposition_ok: bool,
    pub combine_ok: bool,
    pub child_refs_feasible: bool,
    pub sandwich_violations: Vec<String>,
    pub artificial_count: usize,
    pub artificial_bound: u64,
}

impl NodeCert {
    pub fn all_ok(&self) -> bool {
        self.output_feasible
            && self.ratio_ok
            && self.augment_violations.is_empty()
            && self.decomposition_ok
            && self.combine_ok
            && self.child_refs_feasible
            && self.sandwich_violations.is_empty()
            && self.artificial_count as u64 <= self.artificial_bound
    }
}

pub struct Ctx {
    pub eps: Rat,
    pub k_root: Rat,
    pub log_t: u64,
    pub check_sandwich: bool,
    pub certs: Vec<NodeCert>,
}

impl Ctx {
    pub fn new(eps: Rat, k_root: Rat, log_t: u64) -> Ctx {
        Ctx {
            eps,
            k_root,
            log_t: log_t.max(1),
            check_sandwich: true,
            certs: Vec::new(),
        }
    }
}

fn log2_of(width: u64) -> u64 {
    debug_assert!(width.is_power_of_two());
    width.trailing_zeros() as u64
}

/// The mid selection: in small groups, the reference's own rectangles; in
/// big groups, the line-crossing prefix from the filled row down.
fn mid_selection(
    sub: &Subproblem,
    aug: &super::splus::Augmented,
) -> Selection {
    let mut ids = Vec::new();
    for group in &aug.groups {
        if !group.big {
            for &ri in &group.rows {
                for rect in &sub.rows[ri].rects {
                    if aug.selection.contains(rect.id) {
                        ids.push(rect.id);
                    }
                }
            }
            continue;
        }
        let line_x = match group.key.side {
            GroupSide::Left => sub.area.left,
            _ => sub.area.mid(),
        };
        let until = match group.filled {
            Some(FilledRow::AboveAll) => group.rows.len(),
            Some(FilledRow::Row(gi)) => gi + 1,
            None => 0,
        };
        for &ri in &group.rows[..until] {
            let row = &sub.rows[ri];
            if let Some(line_rect) = row.rects.iter().find(|r| r.a <= line_x && line_x < r.b) {
                for rect in &row.rects {
                    if rect.a < line_rect.b {
                        ids.push(rect.id);
                    }
                }
            }
        }
    }
    Selection::from_ids(ids)
}

/// Step functions from the big groups' rows above their filled rows.
fn oracle_step_functions(
    sub: &Subproblem,
    aug: &super::splus::Augmented,
    ctx: &Ctx,
) -> (StepFunction, StepFunction, usize, u64, Vec<String>) {
    let mut sandwich = Vec::new();
    let per_side = |side: GroupSide| -> (StepFunction, u64, Vec<String>) {
        let area = match side {
            GroupSide::Left => sub.area.left_half(),
            _ => sub.area.right_half(),
        };
        let mut groups: Vec<BandGroup<'_>> = Vec::new();
        for group in &aug.groups {
            if group.key.side != side || !group.big {
                continue;
            }
            let from = match group.filled {
                Some(FilledRow::AboveAll) => group.rows.len(),
                Some(FilledRow::Row(gi)) => gi + 1,
                None => 0,
            };
            let rows: Vec<&crate::rcp::subproblem::SubRow> =
                group.rows[from..].iter().map(|&ri| &sub.rows[ri]).collect();
            if rows.is_empty() {
                continue;
            }
            let n_bar = rows
                .iter()
                .filter(|row| {
                    row.rects.iter().any(|r| {
                        aug.selection.contains(r.id) && r.a < area.right && r.b > area.left
                    })
                })
                .count() as u64;
            groups.push(BandGroup {
                value_exp: group.value_exp,
                rows,
                n_bar,
            });
        }
        if groups.is_empty() {
            return (StepFunction::zero(), 0, Vec::new());
        }
        let built = build_step_function(&area, &groups, &aug.selection, &ctx.eps, &ctx.k_root, ctx.log_t);
        let viol = if ctx.check_sandwich {
            check_sandwich(&area, &groups, &aug.selection, &built)
        } else {
            Vec::new()
        };
        (built.f, built.step_bound, viol)
    };
    let (f_left, bl, vl) = per_side(GroupSide::Left);
    let (f_r, br, vr) = per_side(GroupSide::Right);
    let (f_s, bs, vs) = per_side(GroupSide::Span);
    sandwich.extend(vl);
    sandwich.extend(vr);
    sandwich.extend(vs);
    let f_right = f_r.sum(&f_s);
    let count = f_left.steps.len() + f_right.steps.len();
    let bound = bl + br.max(1) * bs.max(1) + br + bs;
    (f_left, f_right, count, bound.max(1), sandwich)
}

/// Oracle-mode recursion. `reference` must be feasible for `sub`.
pub fn solve_oracle(
    sub: &Subproblem,
    reference: &Selection,
    ctx: &mut Ctx,
) -> Result<Selection, ApproxError> {
    debug_assert!(sub.is_feasible(reference), "oracle reference must be feasible");
    let width = sub.area.width();
    if width == 1 {
        return match crate::rcp::base_dp::base_case_dp(sub) {
            BruteOutcome::Optimal { selection, cost } => {
                let aux = auxiliary_cost(sub, reference);
                ctx.certs.push(NodeCert {
                    area: (sub.area.left, sub.area.right),
                    output_feasible: sub.is_feasible(&selection),
                    ratio_ok: cost <= aux,
                    augment_violations: Vec::new(),
                    decomposition_ok: true,
                    combine_ok: true,
                    child_refs_feasible: true,
                    sandwich_violations: Vec::new(),
                    artificial_count: 0,
                    artificial_bound: 1,
                });
                Ok(selection)
            }
            BruteOutcome::Infeasible => Err(ApproxError::Infeasible),
        };
    }

    let aug = augment_reference(sub, reference, &ctx.eps, &ctx.k_root, ctx.log_t);
    let aug_viol = check_augmented(sub, reference, &aug, &ctx.eps, ctx.log_t);
    let mid = mid_selection(sub, &aug);
    let (f_left, f_right, art_count, art_bound, sandwich_viol) =
        oracle_step_functions(sub, &aug, ctx);

    let routed = route_rows(sub, &mid);
    // child references: pieces of augmented rectangles
    let child_ref = |rows: &[crate::rcp::subproblem::SubRow]| -> Selection {
        let mut ids = Vec::new();
        for row in rows {
            for rect in &row.rects {
                if aug.selection.contains(rect.parent.unwrap()) {
                    ids.push(rect.id);
                }
            }
        }
        Selection::from_ids(ids)
    };
    let left_ref = child_ref(&routed.left_rows);
    let right_ref = child_ref(&routed.right_rows);

    // guessed outside demands: what the left reference covers on each ray
    let mut out_left = Vec::new();
    for ray in &sub.rays {
        if !sub.area.contains_x(ray.t) {
            let mut cov = 0u64;
            for row in &routed.left_rows {
                if row.y > ray.s {
                    continue;
                }
                for rect in &row.rects {
                    if left_ref.contains(rect.id) && rect.contains_x(ray.t) {
                        cov += rect.value;
                    }
                }
            }
            out_left.push(cov);
        }
    }

    let split = assemble_children(sub, routed, &mid, &f_left, &f_right, &out_left);
    let left_ref_ok = split.left.is_feasible(&left_ref);
    let right_ref_ok = split.right.is_feasible(&right_ref);

    let left_sel = solve_oracle(&split.left, &left_ref, ctx)?;
    let right_sel = solve_oracle(&split.right, &right_ref, ctx)?;
    let combined = combine_children(sub, &mid, &split.left, &left_sel, &split.right, &right_sel);

    // per-level inequalities
    let out_cost = sub.selection_cost(&combined);
    let aux_ref = auxiliary_cost(sub, reference);
    let ratio_bound = aux_ref.clone()
        + aux_ref.clone() * ctx.eps.clone() * rat_u64(log2_of(width)) / rat_u64(ctx.log_t);
    let decomposition_ok = {
        let lhs = auxiliary_cost(sub, &aug.selection);
        let rhs = auxiliary_cost(&split.left, &left_ref)
            + auxiliary_cost(&split.right, &right_ref)
            + sub.selection_cost(&mid);
        lhs >= rhs
    };
    let combine_ok = {
        let parts = split.left.selection_cost(&left_sel)
            + split.right.selection_cost(&right_sel)
            + sub.selection_cost(&mid);
        out_cost <= parts
    };
    ctx.certs.push(NodeCert {
        area: (sub.area.left, sub.area.right),
        output_feasible: sub.is_feasible(&combined),
        ratio_ok: out_cost <= ratio_bound,
        augment_violations: aug_viol,
        decomposition_ok,
        combine_ok,
        child_refs_feasible: left_ref_ok && right_ref_ok,
        sandwich_violations: sandwich_viol,
        artificial_count: art_count,
        artificial_bound: art_bound,
    });
    Ok(combined)
}

#[derive(Debug, Clone, Copy)]
pub struct Caps {
    pub guesses: u64,
    pub depth: u64,
}

/// Exhaustive-mode recursion: every per-row prefix of the mid-crossing group
/// rows, the zero step function, and every achievable outside split. Groups
/// large enough to cross the reference threshold cannot arise here; if one
/// could, the caps are declared exhausted.
pub fn solve_exhaustive(
    sub: &Subproblem,
    ctx: &mut Ctx,
    caps: Caps,
    budget: &mut u64,
) -> Result<(Selection, Rat), ApproxError> {
    if caps.depth == 0 {
        return Err(ApproxError::CapsExhausted("depth".into()));
    }
    let width = sub.area.width();
    if width == 1 {
        return match crate::rcp::base_dp::base_case_dp(sub) {
            BruteOutcome::Optimal { selection, cost } => Ok((selection, cost)),
            BruteOutcome::Infeasible => Err(ApproxError::Infeasible),
        };
    }
    let threshold = rat_u64(2) * ctx.k_root.clone() * rat_u64(ctx.log_t) / ctx.eps.clone();
    let groups = group_rows(sub, &ctx.eps);
    for rows in groups.values() {
        if rat_u64(rows.len() as u64) >= threshold {
            return Err(ApproxError::CapsExhausted(
                "a group could cross the augmentation threshold".into(),
            ));
        }
    }
    // candidate mid selections: per-row prefixes over group rows
    let group_row_ids: Vec<usize> = groups.values().flatten().copied().collect();
    let mut prefix_caps: Vec<usize> = Vec::new();
    for &ri in &group_row_ids {
        prefix_caps.push(sub.rows[ri].rects.len());
    }
    // candidate outside splits
    let out_rays: Vec<crate::rcp::instance::Ray> = sub.out_rays().cloned().collect();
    let mut out_candidates: Vec<Vec<u64>> = Vec::new();
    for ray in &out_rays {
        let mut sums = std::collections::BTreeSet::new();
        sums.insert(0u64);
        for row in &sub.rows {
            if row.y <= ray.s && row.rects.iter().any(|r| r.contains_x(ray.t)) {
                let adds: Vec<u64> = sums.iter().map(|s| s + row.value()).collect();
                sums.extend(adds);
            }
        }
        out_candidates.push(sums.into_iter().collect());
    }

    fn advance(odometer: &mut [usize], max_inclusive: &[usize]) -> bool {
        for i in (0..odometer.len()).rev() {
            if odometer[i] < max_inclusive[i] {
                odometer[i] += 1;
                for d in odometer.iter_mut().skip(i + 1) {
                    *d = 0;
                }
                return true;
            }
        }
        false
    }
    let out_max: Vec<usize> = out_candidates.iter().map(|c| c.len() - 1).collect();

    let mut best: Option<(Selection, Rat)> = None;
    let mut prefix = vec![0usize; group_row_ids.len()];
    let f_zero = StepFunction::zero();
    loop {
        let mut out_pick = vec![0usize; out_rays.len()];
        loop {
            if *budget == 0 {
                return Err(ApproxError::CapsExhausted("guess budget".into()));
            }
            *budget -= 1;
            let mut ids = Vec::new();
            for (k, &ri) in group_row_ids.iter().enumerate() {
                for rect in &sub.rows[ri].rects[..prefix[k]] {
                    ids.push(rect.id);
                }
            }
            let mid = Selection::from_ids(ids);
            let out_left: Vec<u64> = out_pick
                .iter()
                .zip(&out_candidates)
                .map(|(&k, cands)| cands[k])
                .collect();
            let routed = route_rows(sub, &mid);
            let split = assemble_children(sub, routed, &mid, &f_zero, &f_zero, &out_left);
            let attempt = (|| -> Result<(Selection, Rat), ApproxError> {
                let (ls, _) = solve_exhaustive(
                    &split.left,
                    ctx,
                    Caps { guesses: caps.guesses, depth: caps.depth - 1 },
                    budget,
                )?;
                let (rs, _) = solve_exhaustive(
                    &split.right,
                    ctx,
                    Caps { guesses: caps.guesses, depth: caps.depth - 1 },
                    budget,
                )?;
                let combined = combine_children(sub, &mid, &split.left, &ls, &split.right, &rs);
                if !sub.is_feasible(&combined) {
                    return Err(ApproxError::Infeasible);
                }
                let cost = sub.selection_cost(&combined);
                Ok((combined, cost))
            })();
            match attempt {
                Ok((sel, cost)) => {
                    let better = match &best {
                        None => true,
                        Some((bsel, bcost)) => {
                            cost < *bcost || (cost == *bcost && sel.sorted_ids() < bsel.sorted_ids())
                        }
                    };
                    if better {
                        best = Some((sel, cost));
                    }
                }
                Err(ApproxError::Infeasible) => {}
                Err(e) => return Err(e),
            }
            if !advance(&mut out_pick, &out_max) {
                break;
            }
        }
        if !advance(&mut prefix, &prefix_caps) {
            return best.ok_or(ApproxError::Infeasible);
        }
    }
}
