//! Reference-solution augmentation: group the mid-crossing rows by class,
//! first-rectangle cost and value bucket; in large groups, add whole bottom
//! rows that the reference skipped, creating coverage slack that later lets
//! a single "filled row" guess stand in for everything below it.

use std::collections::BTreeMap;


use crate::ratio::{format_rat, log_floor, rat_floor_u64, rat_u64, Rat};
use crate::rcp::instance::Selection;
use crate::rcp::subproblem::{SubRow, Subproblem};

use super::classify::{classify_row, RowClass};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum GroupSide {
    Left,
    Right,
    Span,
}

impl GroupSide {
    pub fn of(class: RowClass) -> Option<GroupSide> {
        match class {
            RowClass::LeftStickingIn => Some(GroupSide::Left),
            RowClass::RightStickingIn => Some(GroupSide::Right),
            RowClass::Spanning => Some(GroupSide::Span),
            RowClass::Centered => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct GroupKey {
    pub side: GroupSide,
    /// Exact cost of the row's leftmost rectangle.
    pub first_cost: String,
    /// Value bucket: (1+eps)^p <= row value < (1+eps)^{p+1}.
    pub value_exp: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FilledRow {
    /// Index into the group's bottom-up row list.
    Row(usize),
    /// Every row qualifies; a virtual row above the whole group.
    AboveAll,
}

#[derive(Debug, Clone)]
pub struct Group {
    pub key: GroupKey,
    pub value_exp: i64,
    /// Row indices into the subproblem, bottom-up by y.
    pub rows: Vec<usize>,
    /// Rows from which the reference selects a rectangle meeting the strip.
    pub n_selected: u64,
    pub big: bool,
    pub quota: u64,
    /// Rows (indices into `rows`) whose rectangles were all added.
    pub added: Vec<usize>,
    pub filled: Option<FilledRow>,
}

#[derive(Debug, Clone)]
pub struct Augmented {
    pub selection: Selection,
    pub groups: Vec<Group>,
}

fn straddles_mid(row: &SubRow, mid: u64) -> bool {
    row.rects.iter().any(|r| r.a < mid && mid <= r.b)
}

/// The qualifier used for additions and filled-tracking: left-side groups ask
/// for a selected rectangle meeting the strip; right/span groups ask for a
/// selected rectangle containing the mid line.
fn qualifies(side: GroupSide, sub: &Subproblem, row: &SubRow, sel: &Selection) -> bool {
    let area = &sub.area;
    let mid = area.mid();
    row.rects.iter().any(|r| {
        sel.contains(r.id)
            && match side {
                GroupSide::Left => r.a < area.right && r.b > area.left,
                GroupSide::Right | GroupSide::Span => r.a <= mid && mid < r.b,
            }
    })
}

/// Partition the mid-crossing class rows into groups, bottom-up within each.
pub fn group_rows(sub: &Subproblem, eps: &Rat) -> BTreeMap<GroupKey, Vec<usize>> {
    let mid = sub.area.mid();
    let base = Rat::from_integer(1.into()) + eps.clone();
    let mut out: BTreeMap<GroupKey, Vec<usize>> = BTreeMap::new();
    for (ri, row) in sub.rows.iter().enumerate() {
        let class = classify_row(row, &sub.area);
        let Some(side) = GroupSide::of(class) else { continue };
        if !straddles_mid(row, mid) {
            continue;
        }
        let key = GroupKey {
            side,
            first_cost: format_rat(&row.rects[0].cost),
            value_exp: log_floor(&base, &rat_u64(row.value())),
        };
        out.entry(key).or_default().push(ri);
    }
    for rows in out.values_mut() {
        rows.sort_by_key(|&ri| sub.rows[ri].y);
    }
    out
}

/// Grow the reference into its structured superset. `k_root` and `log_t` are
/// the root-level constants (row-cost ratio bound, log2 of the root width).
pub fn augment_reference(
    sub: &Subproblem,
    reference: &Selection,
    eps: &Rat,
    k_root: &Rat,
    log_t: u64,
) -> Augmented {
    let threshold = rat_u64(2) * k_root.clone() * rat_u64(log_t.max(1)) / eps.clone();
    let mut selection = reference.clone();
    let mut groups = Vec::new();
    for (key, rows) in group_rows(sub, eps) {
        let side = key.side;
        let n_selected = rows
            .iter()
            .filter(|&&ri| {
                sub.rows[ri].rects.iter().any(|r| {
                    reference.contains(r.id) && r.a < sub.area.right && r.b > sub.area.left
                })
            })
            .count() as u64;
        let big = rat_u64(n_selected) >= threshold;
        let mut added = Vec::new();
        let mut quota = 0;
        if big {
            quota = rat_floor_u64(
                &(eps.clone() * rat_u64(n_selected) / (rat_u64(2) * k_root.clone() * rat_u64(log_t.max(1)))),
            );
            let mut budget = quota;
            for (gi, &ri) in rows.iter().enumerate() {
                if budget == 0 {
                    break;
                }
                if !qualifies(side, sub, &sub.rows[ri], reference) {
                    for rect in &sub.rows[ri].rects {
                        selection.ids.insert(rect.id);
                    }
                    added.push(gi);
                    budget -= 1;
                }
            }
        }
        let filled = if big {
            let mut top_of_prefix: Option<usize> = None;
            for (gi, &ri) in rows.iter().enumerate() {
                if qualifies(side, sub, &sub.rows[ri], &selection) {
                    top_of_prefix = Some(gi);
                } else {
                    break;
                }
            }
            Some(match top_of_prefix {
                Some(gi) if gi + 1 == rows.len() => FilledRow::AboveAll,
                Some(gi) => FilledRow::Row(gi),
                None => FilledRow::Row(0), // quota >= 1 forces the bottom row
            })
        } else {
            None
        };
        groups.push(Group {
            value_exp: key.value_exp,
            key,
            rows,
            n_selected,
            big,
            quota,
            added,
            filled,
        });
    }
    Augmented { selection, groups }
}

/// Certificates for the augmentation invariants. Returns violation strings.
pub fn check_augmented(
    sub: &Subproblem,
    reference: &Selection,
    aug: &Augmented,
    eps: &Rat,
    log_t: u64,
) -> Vec<String> {
    let mut v = Vec::new();
    let base_cost = sub.selection_cost(reference);
    let plus_cost = sub.selection_cost(&aug.selection);
    let budget = base_cost.clone()
        + base_cost * eps.clone() / rat_u64(log_t.max(1));
    if plus_cost > budget {
        v.push("augmented reference exceeds its cost budget".into());
    }
    if !sub.is_prefix_valid(&aug.selection) {
        v.push("augmented reference is not prefix-valid".into());
    }
    if !reference.ids.is_subset(&aug.selection.ids) {
        v.push("reference not contained in its augmentation".into());
    }
    let one_eps = Rat::from_integer(1.into()) + eps.clone();
    for group in &aug.groups {
        if !group.big {
            continue;
        }
        // line rectangles present from the filled row down
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
            let has = row.rects.iter().any(|r| {
                aug.selection.contains(r.id) && r.a <= line_x && line_x < r.b
            });
            if !has {
                v.push(format!(
                    "row y={} below the filled row misses its line rectangle",
                    row.y
                ));
            }
        }
        // coverage surplus on rays hitting rows above the filled row
        let value_floor = crate::ratio::rat_pow(&one_eps, group.value_exp);
        let surplus = value_floor * rat_u64(group.quota);
        for ray in &sub.rays {
            let in_half = match group.key.side {
                GroupSide::Left => sub.area.left <= ray.t && ray.t < sub.area.mid(),
                _ => sub.area.mid() <= ray.t && ray.t < sub.area.right,
            };
            if !in_half {
                continue;
            }
            let hits_top = group.rows[until..].iter().any(|&ri| {
                let row = &sub.rows[ri];
                row.y <= ray.s && row.rects.iter().any(|r| r.contains_x(ray.t))
            });
            if !hits_top {
                continue;
            }
            let group_rects = |sel: &Selection| -> u64 {
                let mut total = 0;
                for &ri in &group.rows {
                    let row = &sub.rows[ri];
                    if row.y > ray.s {
                        continue;
                    }
                    for r in &row.rects {
                        if sel.contains(r.id) && r.contains_x(ray.t) {
                            total += r.value;
                        }
                    }
                }
                total
            };
            let with = rat_u64(group_rects(&aug.selection));
            let without = rat_u64(group_rects(reference));
            if with < without + surplus.clone() {
                v.push(format!(
                    "coverage surplus fails on ray(s={},t={})",
                    ray.s, ray.t
                ));
            }
        }
    }
    v
}
