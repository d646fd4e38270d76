//! Mid-crossing row groups for dyadically structured instances: rows whose
//! rectangles are exact vertical translates with matching cost and value
//! buckets, selectable greedily from the bottom.

use std::collections::BTreeMap;


use crate::ratio::{log_floor, rat_floor_u64, rat_u64, Rat};
use crate::rcp::instance::Selection;
use crate::rcp::subproblem::Subproblem;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct CrossGroupKey {
    /// Per-position cost exponents: (1+eps)^c <= cost < (1+eps)^{c+1}.
    pub cost_exps: Vec<i64>,
    /// Value bucket of the row value.
    pub value_exp: i64,
    /// Absolute x-coordinates t_0 < ... < t_k shared by every member.
    pub coords: Vec<u64>,
}

#[derive(Debug, Clone)]
pub struct CrossGroup {
    pub key: CrossGroupKey,
    /// Row indices into the subproblem, bottom-up by y.
    pub rows: Vec<usize>,
}

/// True when the row has rectangles meeting both halves. For width-1 areas
/// the midline is half-integral and every row crosses it.
pub fn is_cross_row(sub: &Subproblem, row_idx: usize) -> bool {
    let row = &sub.rows[row_idx];
    if sub.area.width() == 1 {
        return true;
    }
    let mid = sub.area.mid();
    row.left() < mid && row.right() > mid
}

pub fn group_cross_rows(sub: &Subproblem, eps: &Rat) -> Vec<CrossGroup> {
    let base = Rat::from_integer(1.into()) + eps.clone();
    let mut map: BTreeMap<CrossGroupKey, Vec<usize>> = BTreeMap::new();
    for ri in 0..sub.rows.len() {
        if !is_cross_row(sub, ri) {
            continue;
        }
        let row = &sub.rows[ri];
        let mut coords = vec![row.rects[0].a];
        let mut cost_exps = Vec::with_capacity(row.rects.len());
        for rect in &row.rects {
            coords.push(rect.b);
            cost_exps.push(log_floor(&base, &rect.cost));
        }
        let key = CrossGroupKey {
            cost_exps,
            value_exp: log_floor(&base, &rat_u64(row.value())),
            coords,
        };
        map.entry(key).or_default().push(ri);
    }
    let mut groups: Vec<CrossGroup> = map
        .into_iter()
        .map(|(key, mut rows)| {
            rows.sort_by_key(|&ri| sub.rows[ri].y);
            CrossGroup { key, rows }
        })
        .collect();
    groups.sort_by(|a, b| a.key.cmp(&b.key));
    groups
}

/// Concrete form of the group-count budget: a key is determined by which of
/// its (at most k) rectangles crosses the midline, that rectangle's left
/// coordinate, all k widths, the k cost buckets, and the value bucket.
pub fn group_count_bound(sub: &Subproblem, groups: &[CrossGroup]) -> u64 {
    let mid = sub.area.left + sub.area.width() / 2;
    let mut k_max = 1u64;
    let mut cost_exps = std::collections::BTreeSet::new();
    let mut value_exps = std::collections::BTreeSet::new();
    let mut widths = std::collections::BTreeSet::new();
    let mut cross_lefts = std::collections::BTreeSet::new();
    for g in groups {
        k_max = k_max.max(g.key.cost_exps.len() as u64);
        cost_exps.extend(g.key.cost_exps.iter().copied());
        value_exps.insert(g.key.value_exp);
        for w in g.key.coords.windows(2) {
            widths.insert(w[1] - w[0]);
            if w[0] <= mid && mid < w[1] {
                cross_lefts.insert(w[0]);
            }
        }
        cross_lefts.insert(g.key.coords[0]);
    }
    let c = cost_exps.len().max(1) as u64;
    let p = value_exps.len().max(1) as u64;
    let w = widths.len().max(1) as u64;
    let m = cross_lefts.len().max(1) as u64;
    k_max * k_max * c.pow(k_max as u32) * p * w.pow(k_max as u32) * m
}

/// One guess for a group: how many rows take exactly i rectangles, and which
/// rows when the count is small.
#[derive(Debug, Clone, Default)]
pub struct GroupGuess {
    /// counts[i-1] = number of rows from which exactly i rectangles are taken.
    pub counts: Vec<u64>,
    /// For small counts: the exact rows (indices into the group's row list).
    pub small_rows: Vec<Vec<usize>>,
}

pub fn guess_from_reference(
    sub: &Subproblem,
    group: &CrossGroup,
    reference: &Selection,
    eps: &Rat,
) -> GroupGuess {
    let k = group.key.cost_exps.len();
    let inv_eps = rat_floor_u64(&eps.clone().recip());
    let mut counts = vec![0u64; k];
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); k];
    for (gi, &ri) in group.rows.iter().enumerate() {
        let taken = sub.rows[ri]
            .rects
            .iter()
            .take_while(|r| reference.contains(r.id))
            .count();
        if taken > 0 {
            counts[taken - 1] += 1;
            members[taken - 1].push(gi);
        }
    }
    let small_rows = members
        .iter()
        .enumerate()
        .map(|(idx, rows)| {
            if counts[idx] <= inv_eps {
                rows.clone()
            } else {
                Vec::new()
            }
        })
        .collect();
    GroupGuess { counts, small_rows }
}

#[derive(Debug, thiserror::Error)]
pub enum GreedyError {
    #[error("guessed counts exceed the available rows")]
    CountsExceedRows,
}

/// Select rectangles per the guess: small counts take the guessed rows
/// verbatim; larger counts take the bottom-most floor((1+2eps) n) unused
/// rows, walking i from the widest prefix down.
pub fn greedy_group_select(
    sub: &Subproblem,
    group: &CrossGroup,
    guess: &GroupGuess,
    eps: &Rat,
) -> Result<Selection, GreedyError> {
    let k = group.key.cost_exps.len();
    let inv_eps = rat_floor_u64(&eps.clone().recip());
    let mut used = vec![false; group.rows.len()];
    let mut ids = Vec::new();
    let take = |gi: usize, prefix: usize, used: &mut [bool], ids: &mut Vec<usize>| {
        used[gi] = true;
        for rect in &sub.rows[group.rows[gi]].rects[..prefix] {
            ids.push(rect.id);
        }
    };
    // exact small guesses first
    for i in (1..=k).rev() {
        if guess.counts[i - 1] > 0 && guess.counts[i - 1] <= inv_eps {
            if guess.small_rows[i - 1].len() as u64 != guess.counts[i - 1] {
                return Err(GreedyError::CountsExceedRows);
            }
            for &gi in &guess.small_rows[i - 1] {
                if used[gi] {
                    return Err(GreedyError::CountsExceedRows);
                }
                take(gi, i, &mut used, &mut ids);
            }
        }
    }
    // inflated bottom-up fills, widest prefixes first
    let one2 = Rat::from_integer(1.into()) + rat_u64(2) * eps.clone();
    for i in (1..=k).rev() {
        let n = guess.counts[i - 1];
        if n > inv_eps {
            let want = rat_floor_u64(&(one2.clone() * rat_u64(n)));
            let mut taken = 0u64;
            for gi in 0..group.rows.len() {
                if taken == want {
                    break;
                }
                if !used[gi] {
                    take(gi, i, &mut used, &mut ids);
                    taken += 1;
                }
            }
            if taken < want && taken < n {
                return Err(GreedyError::CountsExceedRows);
            }
        }
    }
    Ok(Selection::from_ids(ids))
}

/// Certificates for one group against the reference: the greedy cost stays
/// within (1+5eps) of the reference's, and on every ray the greedy covers at
/// least as much.
pub fn check_group(
    sub: &Subproblem,
    group: &CrossGroup,
    apx: &Selection,
    reference: &Selection,
    eps: &Rat,
) -> Vec<String> {
    let mut v = Vec::new();
    let group_rect_ids: std::collections::BTreeSet<usize> = group
        .rows
        .iter()
        .flat_map(|&ri| sub.rows[ri].rects.iter().map(|r| r.id))
        .collect();
    let restrict = |sel: &Selection| -> Selection {
        Selection::from_ids(sel.ids.intersection(&group_rect_ids).copied())
    };
    let apx_g = restrict(apx);
    let ref_g = restrict(reference);
    let c_apx = sub.selection_cost(&apx_g);
    let c_ref = sub.selection_cost(&ref_g);
    let bound = c_ref.clone() + rat_u64(5) * eps.clone() * c_ref.clone();
    if c_apx > bound {
        v.push(format!(
            "greedy group cost {} exceeds (1+5eps) * {}",
            c_apx, c_ref
        ));
    }
    for ray in &sub.rays {
        let a = sub.coverage(&apx_g, ray);
        let r = sub.coverage(&ref_g, ray);
        if a < r {
            v.push(format!(
                "greedy coverage {a} below reference {r} on ray(s={},t={})",
                ray.s, ray.t
            ));
        }
    }
    v
}
