//! Instance preprocessing: empty-strip compression and cost rounding against
//! a guessed most-expensive rectangle.

use num_traits::{One, Zero};

use crate::ratio::{log_floor, rat_pow, rat_u64, Rat};
use crate::rcp::instance::{coverage, RcpInstance, Ray, RectId, Selection};

/// Shift map produced by strip compression. Each cut is recorded in the
/// coordinate system current at the time it was applied, so the forward map
/// replays them in order.
#[derive(Debug, Clone, Default)]
pub struct CoordMap {
    /// (threshold, width): coordinates at or past the threshold move down.
    pub cuts: Vec<(u64, u64)>,
}

impl CoordMap {
    pub fn forward(&self, x: u64) -> u64 {
        let mut x = x;
        for &(at, by) in &self.cuts {
            if x >= at {
                x -= by;
            }
        }
        x
    }
}

/// Repeatedly delete maximal vertical strips containing no ray and no
/// rectangle endpoint, as long as some rectangle ends at or after the strip.
/// Feasible solutions are in cost-preserving bijection with the original.
pub fn strip_compress(inst: &RcpInstance) -> (RcpInstance, CoordMap) {
    let mut out = inst.clone();
    let mut map = CoordMap::default();
    loop {
        let mut marks: Vec<u64> = Vec::new();
        let mut max_right = 0u64;
        for row in &out.rows {
            for rect in &row.rects {
                marks.push(rect.a);
                marks.push(rect.b);
                max_right = max_right.max(rect.b);
            }
        }
        for ray in &out.rays {
            marks.push(ray.t);
        }
        if marks.is_empty() {
            return (out, map);
        }
        marks.sort_unstable();
        marks.dedup();
        // candidate strips: [0, first mark) and [m+1, next mark) between marks
        let mut strip: Option<(u64, u64)> = None;
        if marks[0] > 0 && max_right >= marks[0] {
            strip = Some((0, marks[0]));
        } else {
            for win in marks.windows(2) {
                let (lo, hi) = (win[0] + 1, win[1]);
                if hi > lo && max_right >= hi {
                    strip = Some((lo, hi));
                    break;
                }
            }
        }
        let Some((a, b)) = strip else {
            return (out, map);
        };
        let w = b - a;
        for row in &mut out.rows {
            for rect in &mut row.rects {
                if rect.a >= b {
                    rect.a -= w;
                }
                if rect.b >= b {
                    rect.b -= w;
                }
            }
        }
        for ray in &mut out.rays {
            if ray.t >= b {
                ray.t -= w;
            }
        }
        map.cuts.push((b, w));
    }
}

/// Output of `round_costs`: the reduced instance, the rows force-selected as
/// uniformly cheap (with their original ids and cost), the id map from new
/// rectangles to original ids, and the discarded ids.
#[derive(Debug, Clone)]
pub struct RoundedInstance {
    pub instance: RcpInstance,
    pub forced: Selection,
    pub forced_cost: Rat,
    pub id_map: Vec<RectId>,
    pub discarded: Vec<RectId>,
    pub distinct_rounded_costs: usize,
}

/// Round costs relative to the guessed most-expensive rectangle of a
/// reference optimum: discard costlier rectangles (and their right
/// neighbors), force-select rows that are cheap throughout, then round the
/// rest to scaled powers of (1+eps), ceiled to integers.
pub fn round_costs(inst: &RcpInstance, eps: &Rat, r_max: RectId) -> RoundedInstance {
    let n_rects = rat_u64(inst.rect_count() as u64);
    let c_max = inst.rect(r_max).1.c.clone();
    let diag = inst.validate();
    let k_ratio = diag.stats.k_ratio;
    let cheap_threshold = eps.clone() * c_max.clone() / n_rects.clone();

    let mut forced_ids: Vec<RectId> = Vec::new();
    let mut forced_cost = Rat::zero();
    let mut discarded: Vec<RectId> = Vec::new();
    let mut id_map: Vec<RectId> = Vec::new();
    let mut new_rows = Vec::new();
    let mut distinct: std::collections::BTreeSet<String> = std::collections::BTreeSet::new();

    let scale = n_rects.clone() * k_ratio / (eps.clone() * eps.clone() * c_max.clone());
    let base = Rat::one() + eps.clone();

    let mut id = 0;
    for row in &inst.rows {
        let keep: Vec<(RectId, &crate::rcp::instance::Rect)> = {
            let mut v = Vec::new();
            let mut cut = false;
            for (i, rect) in row.rects.iter().enumerate() {
                let gid = id + i;
                if cut || rect.c > c_max {
                    cut = true;
                    discarded.push(gid);
                } else {
                    v.push((gid, rect));
                }
            }
            v
        };
        let all_cheap = !keep.is_empty() && keep.iter().all(|(_, r)| r.c <= cheap_threshold);
        if all_cheap {
            for (gid, r) in &keep {
                forced_ids.push(*gid);
                forced_cost += r.c.clone();
            }
        } else if !keep.is_empty() {
            let rects = keep
                .iter()
                .map(|(gid, r)| {
                    // smallest power of (1+eps) at or above the cost
                    let e = log_floor(&base, &r.c);
                    let mut tilde = rat_pow(&base, e);
                    if tilde < r.c {
                        tilde = rat_pow(&base, e + 1);
                    }
                    let rounded = (scale.clone() * tilde).ceil();
                    distinct.insert(crate::ratio::format_rat(&rounded));
                    id_map.push(*gid);
                    crate::rcp::instance::Rect {
                        a: r.a,
                        b: r.b,
                        c: rounded,
                        p: r.p,
                    }
                })
                .collect();
            new_rows.push(crate::rcp::instance::Row { j: row.j, rects });
        }
        id += row.rects.len();
    }

    let forced = Selection::from_ids(forced_ids);
    let rays: Vec<Ray> = inst
        .rays
        .iter()
        .map(|ray| Ray {
            s: ray.s,
            t: ray.t,
            d: ray.d.saturating_sub(coverage(inst, &forced, ray)),
        })
        .collect();

    RoundedInstance {
        instance: RcpInstance {
            rows: new_rows,
            rays,
        },
        forced,
        forced_cost,
        id_map,
        discarded,
        distinct_rounded_costs: distinct.len(),
    }
}

/// Map a selection on the rounded instance back to original ids and add the
/// forced set.
pub fn map_back(rounded: &RoundedInstance, sel: &Selection) -> Selection {
    let ids = sel.sorted_ids().into_iter().map(|i| rounded.id_map[i]);
    Selection::from_ids(ids).union(&rounded.forced)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio::{rat_frac, rat_int};
    use crate::rcp::brute::{brute_force, BruteOutcome};
    use crate::rcp::instance::{Rect, Row};

    #[test]
    fn gap_before_content_is_collapsed() {
        let inst = RcpInstance {
            rows: vec![Row {
                j: 0,
                rects: vec![Rect { a: 100, b: 102, c: rat_int(1), p: 1 }],
            }],
            rays: vec![Ray { s: 0, t: 101, d: 1 }],
        };
        let (out, map) = strip_compress(&inst);
        assert_eq!(out.rows[0].rects[0].a, 0);
        assert_eq!(out.rows[0].rects[0].b, 2);
        assert_eq!(out.rays[0].t, 1);
        assert_eq!(map.forward(100), 0);
        assert_eq!(map.forward(101), 1);
    }

    #[test]
    fn dense_instance_is_untouched() {
        let inst = crate::rcp::instance::r1_instance();
        let (out, _) = strip_compress(&inst);
        assert_eq!(out, inst);
    }

    #[test]
    fn compression_preserves_optimum() {
        let inst = RcpInstance {
            rows: vec![
                Row {
                    j: 0,
                    rects: vec![
                        Rect { a: 0, b: 2, c: rat_int(1), p: 2 },
                        Rect { a: 2, b: 4, c: rat_int(2), p: 2 },
                    ],
                },
                Row {
                    j: 1,
                    rects: vec![Rect { a: 40, b: 44, c: rat_int(3), p: 1 }],
                },
            ],
            rays: vec![Ray { s: 1, t: 1, d: 2 }, Ray { s: 1, t: 42, d: 1 }],
        };
        let (out, _) = strip_compress(&inst);
        let before = brute_force(&inst, 1 << 20).unwrap();
        let after = brute_force(&out, 1 << 20).unwrap();
        match (before, after) {
            (BruteOutcome::Optimal { cost: cb, .. }, BruteOutcome::Optimal { cost: ca, .. }) => {
                assert_eq!(cb, ca)
            }
            _ => panic!("both feasible"),
        }
        assert!(out.validate().errors.is_empty());
    }

    #[test]
    fn cheap_rows_are_forced() {
        // costs {1, 3, 50} in 3 rows; threshold eps*c_max/|R| = 25/3
        let inst = RcpInstance {
            rows: vec![
                Row { j: 0, rects: vec![Rect { a: 0, b: 1, c: rat_int(1), p: 1 }] },
                Row { j: 1, rects: vec![Rect { a: 0, b: 1, c: rat_int(3), p: 1 }] },
                Row { j: 2, rects: vec![Rect { a: 0, b: 1, c: rat_int(50), p: 1 }] },
            ],
            rays: vec![Ray { s: 2, t: 0, d: 2 }],
        };
        let rounded = round_costs(&inst, &rat_frac(1, 2), 2);
        assert_eq!(rounded.forced.len(), 2);
        assert_eq!(rounded.forced_cost, rat_int(4));
        assert_eq!(rounded.instance.rays[0].d, 0);
        assert_eq!(rounded.instance.rows.len(), 1);
    }

    #[test]
    fn equal_costs_round_to_one_value() {
        let inst = crate::rcp::instance::r1_instance();
        let mut eq = inst.clone();
        for row in &mut eq.rows {
            for r in &mut row.rects {
                r.c = rat_int(5);
            }
        }
        let rounded = round_costs(&eq, &rat_frac(1, 2), 0);
        assert_eq!(rounded.distinct_rounded_costs, 1);
    }
}
