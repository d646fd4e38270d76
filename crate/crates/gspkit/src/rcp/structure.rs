//! Dyadic grid structure check: a rectangle of width in [2^h, 2^{h+1}) must
//! have both x-endpoints on the delta * 2^h grid.

use num_traits::Zero;

use crate::ratio::{log_floor, rat_int, rat_pow, rat_u64, Rat};
use crate::rcp::instance::RcpInstance;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureReport {
    pub ok: bool,
    pub violations: Vec<String>,
}

fn on_grid(x: u64, grid: &Rat) -> bool {
    (rat_u64(x) / grid).is_integer()
}

pub fn check_well_structured(inst: &RcpInstance, delta: &Rat) -> StructureReport {
    let mut violations = Vec::new();
    assert!(delta > &Rat::zero());
    for row in &inst.rows {
        for rect in &row.rects {
            let width = rect.width();
            debug_assert!(width >= 1);
            let h = log_floor(&rat_int(2), &rat_u64(width));
            let grid = delta.clone() * rat_pow(&rat_int(2), h);
            for x in [rect.a, rect.b] {
                if !on_grid(x, &grid) {
                    violations.push(format!(
                        "row {}: endpoint {} of [{},{}) not a multiple of {} (h={})",
                        row.j,
                        x,
                        rect.a,
                        rect.b,
                        crate::ratio::format_rat(&grid),
                        h
                    ));
                }
            }
        }
    }
    StructureReport {
        ok: violations.is_empty(),
        violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio::rat_frac;
    use crate::rcp::instance::{Rect, Row};

    fn single(a: u64, b: u64) -> RcpInstance {
        RcpInstance {
            rows: vec![Row {
                j: 0,
                rects: vec![Rect { a, b, c: rat_int(1), p: 1 }],
            }],
            rays: vec![],
        }
    }

    #[test]
    fn width_two_on_unit_grid() {
        // [4,6): h=1, grid = 1/2 * 2 = 1; both endpoints integral
        let rep = check_well_structured(&single(4, 6), &rat_frac(1, 2));
        assert!(rep.ok);
    }

    #[test]
    fn misaligned_wide_rect_flagged() {
        // [3,8): h=2, grid = 2; 3 is not a multiple of 2
        let rep = check_well_structured(&single(3, 8), &rat_frac(1, 2));
        assert!(!rep.ok);
        assert_eq!(rep.violations.len(), 1);
    }

    #[test]
    fn unit_width_always_fine_for_submultiples_of_one() {
        let rep = check_well_structured(&single(7, 8), &rat_frac(1, 32));
        assert!(rep.ok);
    }
}
