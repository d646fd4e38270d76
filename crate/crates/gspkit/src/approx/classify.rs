//! Row position relative to a strip, and the auxiliary cost that charges
//! twice the rows that may be paid on both sides of a split.

use num_traits::Zero;

use crate::ratio::{rat_int, Rat};
use crate::rcp::instance::Selection;
use crate::rcp::subproblem::{Area, SubRow, Subproblem};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowClass {
    Centered,
    RightStickingIn,
    LeftStickingIn,
    Spanning,
}

pub fn classify_row(row: &SubRow, area: &Area) -> RowClass {
    let reaches_left = row.rects.iter().any(|r| r.a <= area.left);
    let reaches_right = row.rects.iter().any(|r| r.b >= area.right);
    match (reaches_left, reaches_right) {
        (false, false) => RowClass::Centered,
        (false, true) => RowClass::RightStickingIn,
        (true, false) => RowClass::LeftStickingIn,
        (true, true) => RowClass::Spanning,
    }
}

pub fn classify_rows(sub: &Subproblem) -> Vec<RowClass> {
    sub.rows
        .iter()
        .map(|row| classify_row(row, &sub.area))
        .collect()
}

/// Charge 2x for centered rectangles and for left-sticking rectangles lying
/// strictly inside the strip; 1x for everything else.
pub fn auxiliary_cost(sub: &Subproblem, sel: &Selection) -> Rat {
    auxiliary_cost_in(sub, &sub.area, sel)
}

/// Same, but classified against an explicit area (children are evaluated
/// against their own halves).
pub fn auxiliary_cost_in(sub: &Subproblem, area: &Area, sel: &Selection) -> Rat {
    let mut total = Rat::zero();
    let two = rat_int(2);
    for row in &sub.rows {
        let class = classify_row(row, area);
        for rect in &row.rects {
            if !sel.contains(rect.id) {
                continue;
            }
            let coef = match class {
                RowClass::Centered => &two,
                RowClass::RightStickingIn | RowClass::Spanning => &Rat::from_integer(1.into()),
                RowClass::LeftStickingIn => {
                    if rect.a <= area.left {
                        &Rat::from_integer(1.into())
                    } else {
                        &two
                    }
                }
            };
            total += coef.clone() * rect.cost.clone();
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rcp::subproblem::SubRect;

    fn row(y: u64, spans: &[(u64, u64, i64)]) -> SubRow {
        SubRow {
            y,
            rects: spans
                .iter()
                .enumerate()
                .map(|(i, &(a, b, c))| SubRect {
                    id: y as usize * 100 + i,
                    parent: None,
                    a,
                    b,
                    cost: rat_int(c),
                    value: 1,
                })
                .collect(),
        }
    }

    #[test]
    fn classification_examples() {
        let area = Area { left: 0, right: 8 };
        assert_eq!(classify_row(&row(0, &[(1, 3, 1), (3, 5, 1)]), &area), RowClass::Centered);
        assert_eq!(classify_row(&row(0, &[(0, 4, 1), (4, 9, 1)]), &area), RowClass::Spanning);
        assert_eq!(
            classify_row(&row(0, &[(2, 6, 1), (6, 9, 1)]), &area),
            RowClass::RightStickingIn
        );
        assert_eq!(
            classify_row(&row(0, &[(0, 3, 1)]), &area),
            RowClass::LeftStickingIn
        );
    }

    #[test]
    fn auxiliary_cost_examples() {
        let area = Area { left: 0, right: 8 };
        // centered cost 3 -> doubled
        let sub = Subproblem {
            area,
            rows: vec![row(0, &[(1, 3, 3)])],
            rays: vec![],
        };
        let sel = Selection::from_ids([0]);
        assert_eq!(auxiliary_cost(&sub, &sel), rat_int(6));

        // spanning 2 + left-sticking at-boundary 1 -> 3
        let sub = Subproblem {
            area,
            rows: vec![row(0, &[(0, 9, 2)]), row(1, &[(0, 3, 1)])],
            rays: vec![],
        };
        let sel = Selection::from_ids([0, 100]);
        assert_eq!(auxiliary_cost(&sub, &sel), rat_int(3));

        // mixed: centered 3, span 2, left-stick at-boundary 1, left-stick interior 1
        let sub = Subproblem {
            area,
            rows: vec![
                row(0, &[(1, 3, 3)]),
                row(1, &[(0, 9, 2)]),
                row(2, &[(0, 2, 1), (2, 4, 1)]),
            ],
            rays: vec![],
        };
        let sel = Selection::from_ids([0, 100, 200, 201]);
        assert_eq!(auxiliary_cost(&sub, &sel), rat_int(11));
    }
}
