//! Splitting a node at its vertical midline: route rows to the children with
//! the midline rectangle halved and costs reassigned so that selecting a
//! right part pays for the left parts it drags in; reduce interior ray
//! demands by the guessed step function and the mid selection; spawn the
//! artificial rays; split the outside rays by a guessed left share.


use crate::ratio::Rat;
use crate::rcp::instance::{Ray, Selection};
use crate::rcp::subproblem::{SubRect, SubRow, Subproblem};

use super::classify::{classify_row, RowClass};
use super::stepfn::StepFunction;

#[derive(Debug, Clone)]
pub struct RoutedRows {
    pub left_rows: Vec<SubRow>,
    pub right_rows: Vec<SubRow>,
    /// (parent node rect id, added cost) for reassigned leftmost costs.
    pub cost_increases: Vec<(usize, Rat)>,
}

fn fresh_row(y: u64, rects: Vec<SubRect>) -> Option<SubRow> {
    if rects.is_empty() {
        None
    } else {
        Some(SubRow { y, rects })
    }
}

/// Route the rectangles outside the mid selection into the two halves.
pub fn route_rows(sub: &Subproblem, mid_selection: &Selection) -> RoutedRows {
    let area = &sub.area;
    let mid = area.mid();
    let mut left_rows = Vec::new();
    let mut right_rows = Vec::new();
    let mut cost_increases = Vec::new();
    let mut next_id = 0usize;
    let mut alloc = |parent: usize, a: u64, b: u64, cost: Rat, value: u64| -> SubRect {
        let r = SubRect { id: next_id, parent: Some(parent), a, b, cost, value };
        next_id += 1;
        r
    };

    for row in &sub.rows {
        let class = classify_row(row, area);
        let rem: Vec<&SubRect> = row
            .rects
            .iter()
            .filter(|r| !mid_selection.contains(r.id))
            .collect();
        debug_assert!(
            {
                let taken = row.rects.iter().take_while(|r| mid_selection.contains(r.id)).count();
                row.rects.iter().filter(|r| mid_selection.contains(r.id)).count() == taken
            },
            "mid selection must take a per-row prefix"
        );
        if rem.is_empty() {
            continue;
        }
        let centered_treatment =
            |rem: &[&SubRect],
             alloc: &mut dyn FnMut(usize, u64, u64, Rat, u64) -> SubRect,
             left_rows: &mut Vec<SubRow>,
             right_rows: &mut Vec<SubRow>,
             cost_increases: &mut Vec<(usize, Rat)>| {
                if rem.iter().all(|r| r.b <= mid) {
                    let rects = rem
                        .iter()
                        .map(|r| alloc(r.id, r.a, r.b, r.cost.clone(), r.value))
                        .collect();
                    left_rows.extend(fresh_row(row.y, rects));
                } else if rem.iter().all(|r| r.a >= mid) {
                    let rects = rem
                        .iter()
                        .map(|r| alloc(r.id, r.a, r.b, r.cost.clone(), r.value))
                        .collect();
                    right_rows.extend(fresh_row(row.y, rects));
                } else if let Some(k) = rem.iter().position(|r| r.a < mid && mid < r.b) {
                    let w_left_cost: Rat = rem[..k].iter().map(|r| r.cost.clone()).sum();
                    let straddler = rem[k];
                    let mut lrects: Vec<SubRect> = rem[..k]
                        .iter()
                        .map(|r| alloc(r.id, r.a, r.b, r.cost.clone(), r.value))
                        .collect();
                    lrects.push(alloc(straddler.id, straddler.a, mid, straddler.cost.clone(), straddler.value));
                    left_rows.extend(fresh_row(row.y, lrects));
                    let right_cost = w_left_cost.clone() + straddler.cost.clone();
                    cost_increases.push((straddler.id, w_left_cost));
                    let mut rrects: Vec<SubRect> =
                        vec![alloc(straddler.id, mid, straddler.b, right_cost, straddler.value)];
                    rrects.extend(
                        rem[k + 1..]
                            .iter()
                            .map(|r| alloc(r.id, r.a, r.b, r.cost.clone(), r.value)),
                    );
                    right_rows.extend(fresh_row(row.y, rrects));
                } else {
                    let k = rem.iter().position(|r| r.a >= mid).expect("boundary split");
                    let w_left_cost: Rat = rem[..k].iter().map(|r| r.cost.clone()).sum();
                    let lrects: Vec<SubRect> = rem[..k]
                        .iter()
                        .map(|r| alloc(r.id, r.a, r.b, r.cost.clone(), r.value))
                        .collect();
                    left_rows.extend(fresh_row(row.y, lrects));
                    let mut rrects: Vec<SubRect> = Vec::new();
                    for (i, r) in rem[k..].iter().enumerate() {
                        let cost = if i == 0 {
                            cost_increases.push((r.id, w_left_cost.clone()));
                            r.cost.clone() + w_left_cost.clone()
                        } else {
                            r.cost.clone()
                        };
                        rrects.push(alloc(r.id, r.a, r.b, cost, r.value));
                    }
                    right_rows.extend(fresh_row(row.y, rrects));
                }
            };

        match class {
            RowClass::Centered => centered_treatment(
                &rem,
                &mut alloc,
                &mut left_rows,
                &mut right_rows,
                &mut cost_increases,
            ),
            RowClass::RightStickingIn | RowClass::Spanning => {
                let rects: Vec<SubRect> = rem
                    .iter()
                    .map(|r| alloc(r.id, r.a, r.b, r.cost.clone(), r.value))
                    .collect();
                if rem.iter().all(|r| r.a >= mid) {
                    right_rows.extend(fresh_row(row.y, rects));
                } else {
                    left_rows.extend(fresh_row(row.y, rects));
                }
            }
            RowClass::LeftStickingIn => {
                if rem.iter().all(|r| r.a > area.left) {
                    centered_treatment(
                        &rem,
                        &mut alloc,
                        &mut left_rows,
                        &mut right_rows,
                        &mut cost_increases,
                    );
                } else {
                    let rects: Vec<SubRect> = rem
                        .iter()
                        .map(|r| alloc(r.id, r.a, r.b, r.cost.clone(), r.value))
                        .collect();
                    if rem.iter().all(|r| r.b <= mid) {
                        left_rows.extend(fresh_row(row.y, rects));
                    } else {
                        right_rows.extend(fresh_row(row.y, rects));
                    }
                }
            }
        }
    }
    // child rect ids must be unique per child; re-assign contiguously
    let reassign = |rows: &mut Vec<SubRow>| {
        let mut id = 0;
        for row in rows.iter_mut() {
            for rect in &mut row.rects {
                rect.id = id;
                id += 1;
            }
        }
    };
    reassign(&mut left_rows);
    reassign(&mut right_rows);
    RoutedRows {
        left_rows,
        right_rows,
        cost_increases,
    }
}

pub struct AssembledSplit {
    pub left: Subproblem,
    pub right: Subproblem,
    pub left_artificial: usize,
    pub right_artificial: usize,
}

/// Attach the ray sets: reduced interior rays per half, artificial rays from
/// the opposite half's step function, and the guessed split of outside rays.
pub fn assemble_children(
    sub: &Subproblem,
    routed: RoutedRows,
    mid_selection: &Selection,
    f_left: &StepFunction,
    f_right: &StepFunction,
    out_left_demand: &[u64],
) -> AssembledSplit {
    let area = &sub.area;
    let mid = area.mid();
    let mut left_rays = Vec::new();
    let mut right_rays = Vec::new();
    let mut out_idx = 0usize;
    for ray in &sub.rays {
        if area.contains_x(ray.t) {
            let midcov = sub.coverage(mid_selection, ray);
            if ray.t < mid {
                let f = f_left.value_at(ray.t, ray.s);
                let d = ray.d.saturating_sub(f).saturating_sub(midcov);
                left_rays.push(Ray { s: ray.s, t: ray.t, d });
            } else {
                let f = f_right.value_at(ray.t, ray.s);
                let d = ray.d.saturating_sub(f).saturating_sub(midcov);
                right_rays.push(Ray { s: ray.s, t: ray.t, d });
            }
        } else {
            let midcov = sub.coverage(mid_selection, ray);
            let d_left = out_left_demand[out_idx];
            out_idx += 1;
            left_rays.push(Ray { s: ray.s, t: ray.t, d: d_left });
            right_rays.push(Ray {
                s: ray.s,
                t: ray.t,
                d: ray.d.saturating_sub(d_left).saturating_sub(midcov),
            });
        }
    }
    let art_right = f_right.artificial_rays();
    let art_left = f_left.artificial_rays();
    let right_artificial = art_left.len();
    let left_artificial = art_right.len();
    // steps over the right half constrain rows routed left, and vice versa
    left_rays.extend(art_right);
    right_rays.extend(art_left);
    AssembledSplit {
        left: Subproblem {
            area: area.left_half(),
            rows: routed.left_rows,
            rays: left_rays,
        },
        right: Subproblem {
            area: area.right_half(),
            rows: routed.right_rows,
            rays: right_rays,
        },
        left_artificial,
        right_artificial,
    }
}

/// Map child selections back to node rectangles and close under prefixes,
/// together with the mid selection.
pub fn combine_children(
    sub: &Subproblem,
    mid_selection: &Selection,
    left: &Subproblem,
    left_sel: &Selection,
    right: &Subproblem,
    right_sel: &Selection,
) -> Selection {
    let mut ids: Vec<usize> = mid_selection.sorted_ids();
    for (child, sel) in [(left, left_sel), (right, right_sel)] {
        for row in &child.rows {
            for rect in &row.rects {
                if sel.contains(rect.id) {
                    ids.push(rect.parent.expect("child rects link to the node"));
                }
            }
        }
    }
    sub.prefix_closure(&Selection::from_ids(ids))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio::rat_int;
    use crate::rcp::subproblem::Area;

    fn sub_with_row(area: Area, spans: &[(u64, u64, i64)]) -> Subproblem {
        let rects = spans
            .iter()
            .enumerate()
            .map(|(i, &(a, b, c))| SubRect {
                id: i,
                parent: Some(i),
                a,
                b,
                cost: rat_int(c),
                value: 1,
            })
            .collect();
        Subproblem {
            area,
            rows: vec![SubRow { y: 0, rects }],
            rays: vec![],
        }
    }

    #[test]
    fn straddler_is_halved_with_cost_reassignment() {
        let sub = sub_with_row(Area { left: 0, right: 4 }, &[(1, 3, 3)]);
        let routed = route_rows(&sub, &Selection::empty());
        assert_eq!(routed.left_rows.len(), 1);
        assert_eq!(routed.right_rows.len(), 1);
        let l = &routed.left_rows[0].rects[0];
        let r = &routed.right_rows[0].rects[0];
        assert_eq!((l.a, l.b), (1, 2));
        assert_eq!(l.cost, rat_int(3));
        assert_eq!((r.a, r.b), (2, 3));
        assert_eq!(r.cost, rat_int(3)); // empty left part adds nothing
    }

    #[test]
    fn boundary_split_moves_left_cost_to_the_right_head() {
        let sub = sub_with_row(Area { left: 0, right: 4 }, &[(1, 2, 2), (2, 3, 5)]);
        let routed = route_rows(&sub, &Selection::empty());
        let l = &routed.left_rows[0].rects[0];
        let r = &routed.right_rows[0].rects[0];
        assert_eq!(l.cost, rat_int(2));
        assert_eq!(r.cost, rat_int(7));
        assert_eq!(routed.cost_increases, vec![(1, rat_int(2))]);
    }

    #[test]
    fn interior_ray_demand_subtracts_function_and_mid() {
        let mut sub = sub_with_row(Area { left: 0, right: 4 }, &[(0, 1, 1), (1, 2, 1)]);
        sub.rays.push(Ray { s: 5, t: 1, d: 9 });
        let mut f_left = StepFunction::zero();
        f_left.steps.push(super::super::stepfn::Step {
            x_l: 0,
            x_r: 2,
            y_b: 0,
            y_t: None,
            value: 4,
        });
        // rect 1 spans [1,2) and contributes the mid coverage at t=1
        let mid_sel2 = Selection::from_ids([0, 1]);
        let routed = route_rows(&sub, &mid_sel2);
        let split = assemble_children(
            &sub,
            routed,
            &mid_sel2,
            &f_left,
            &StepFunction::zero(),
            &[],
        );
        let child_ray = split.left.rays.iter().find(|r| r.t == 1).unwrap();
        // 9 - f(4) - mid coverage(1 from rect [1,2)) = 4
        assert_eq!(child_ray.d, 4);
    }
}
