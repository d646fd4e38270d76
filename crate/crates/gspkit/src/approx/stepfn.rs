//! Piecewise-constant under-approximation of the reference's per-ray coverage
//! over one half of the strip. The horizontal bands cut between rows so that
//! few selected rows sit inside a band; within a band the x-cuts bound the
//! coverage drop. Each step spawns an artificial ray at its bottom-right
//! integer point carrying the step value.

use num_traits::Zero;

use crate::ratio::{rat_floor_u64, rat_pow, rat_u64, Rat};
use crate::rcp::instance::{Ray, Selection};
use crate::rcp::subproblem::{Area, SubRow};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub x_l: u64,
    pub x_r: u64,
    pub y_b: u64,
    /// None = unbounded above.
    pub y_t: Option<u64>,
    pub value: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StepFunction {
    pub area: Option<Area>,
    pub steps: Vec<Step>,
}

impl StepFunction {
    pub fn zero() -> StepFunction {
        StepFunction::default()
    }

    pub fn value_at(&self, t: u64, s: u64) -> u64 {
        for step in &self.steps {
            if step.x_l <= t && t < step.x_r && step.y_b <= s && step.y_t.is_none_or(|y| s < y) {
                return step.value;
            }
        }
        0
    }

    /// Pointwise sum; steps become pairwise intersections.
    pub fn sum(&self, other: &StepFunction) -> StepFunction {
        if self.steps.is_empty() {
            return other.clone();
        }
        if other.steps.is_empty() {
            return self.clone();
        }
        let mut steps = Vec::new();
        for a in &self.steps {
            for b in &other.steps {
                let x_l = a.x_l.max(b.x_l);
                let x_r = a.x_r.min(b.x_r);
                let y_b = a.y_b.max(b.y_b);
                let y_t = match (a.y_t, b.y_t) {
                    (None, o) | (o, None) => o,
                    (Some(x), Some(y)) => Some(x.min(y)),
                };
                if x_l < x_r && y_t.is_none_or(|y| y_b < y) {
                    steps.push(Step { x_l, x_r, y_b, y_t, value: a.value + b.value });
                }
            }
        }
        StepFunction { area: self.area, steps }
    }

    /// One artificial ray per step, at the bottom-right integer point.
    pub fn artificial_rays(&self) -> Vec<Ray> {
        self.steps
            .iter()
            .map(|q| Ray { s: q.y_b, t: q.x_r - 1, d: q.value })
            .collect()
    }
}

/// One group of spanning rows feeding the construction.
pub struct BandGroup<'a> {
    pub value_exp: i64,
    /// Bottom-up rows, all spanning the area.
    pub rows: Vec<&'a SubRow>,
    /// Number of rows with a selected rectangle meeting the area.
    pub n_bar: u64,
}

/// Coverage of the downward ray at (s, t) by selected rectangles of the given
/// rows.
pub fn coverage_g(groups: &[BandGroup<'_>], sel: &Selection, t: u64, s: u64) -> u64 {
    let mut total = 0;
    for group in groups {
        for row in &group.rows {
            if row.y > s {
                continue;
            }
            for rect in &row.rects {
                if sel.contains(rect.id) && rect.contains_x(t) {
                    total += rect.value;
                }
            }
        }
    }
    total
}

pub struct BuiltStepFunction {
    pub f: StepFunction,
    /// The concrete step-count bound computed from the inputs.
    pub step_bound: u64,
    /// Per-group sandwich slack (1+eps)^{p} * floor(eps * n / (2 K logT)).
    pub slack: Vec<(i64, Rat)>,
}

/// Construct the step function for one side. `sel` is the augmented
/// reference restricted by the caller to the intended rows.
pub fn build_step_function(
    area: &Area,
    groups: &[BandGroup<'_>],
    sel: &Selection,
    eps: &Rat,
    k_root: &Rat,
    log_t: u64,
) -> BuiltStepFunction {
    let one_eps = Rat::from_integer(1.into()) + eps.clone();
    let log_t = log_t.max(1);
    let x_bound = rat_u64(8) * k_root.clone() * rat_u64(log_t) / eps.clone();

    // band boundaries: per group, picks limiting the selected rows between
    // consecutive picks to n_bar / X
    let mut picks: Vec<u64> = Vec::new();
    for group in groups {
        if group.rows.is_empty() {
            continue;
        }
        let selected_budget = rat_u64(group.n_bar) / x_bound.clone();
        let selected_in = |row: &SubRow| -> bool {
            row.rects
                .iter()
                .any(|r| sel.contains(r.id) && r.a < area.right && r.b > area.left)
        };
        if rat_u64(group.rows.len() as u64) <= x_bound {
            picks.extend(group.rows.iter().map(|w| w.y));
            continue;
        }
        let mut cur = 0usize;
        picks.push(group.rows[0].y);
        while cur + 1 < group.rows.len() {
            // furthest next pick with few selected rows strictly in between
            let mut best = cur + 1;
            let mut between = 0u64;
            for cand in (cur + 1)..group.rows.len() {
                if rat_u64(between) <= selected_budget {
                    best = cand;
                } else {
                    break;
                }
                if selected_in(group.rows[cand]) {
                    between += 1;
                }
            }
            picks.push(group.rows[best].y);
            cur = best;
        }
    }
    picks.sort_unstable();
    picks.dedup();

    let g_count = groups.len() as u64;
    let mut slack = Vec::new();
    for group in groups {
        let q = rat_floor_u64(
            &(eps.clone() * rat_u64(group.n_bar) / (rat_u64(2) * k_root.clone() * rat_u64(log_t))),
        );
        slack.push((group.value_exp, rat_pow(&one_eps, group.value_exp) * rat_u64(q)));
    }

    let mut steps = Vec::new();
    // band below all picked rows: coverage is zero there
    let mut bands: Vec<(u64, Option<u64>)> = Vec::new();
    if let Some(&first) = picks.first() {
        if first > 0 {
            bands.push((0, Some(first)));
        }
        for w in picks.windows(2) {
            bands.push((w[0], Some(w[1])));
        }
        bands.push((*picks.last().unwrap(), None));
    } else {
        bands.push((0, None));
    }

    for &(y_b, y_t) in &bands {
        let s_ref = y_b;
        // drop budget: sum over groups with a row at or below the band floor
        let mut budget = Rat::zero();
        for group in groups {
            if group.rows.iter().any(|w| w.y <= s_ref) {
                let per_band = (rat_u64(group.n_bar) / x_bound.clone()).floor();
                budget += rat_pow(&one_eps, group.value_exp + 1) * per_band;
            }
        }
        let g_at = |t: u64| -> u64 { coverage_g(groups, sel, t, s_ref) };
        let mut cuts: Vec<u64> = vec![area.left];
        if rat_u64(area.width()) <= x_bound {
            cuts.extend((area.left + 1)..=area.right);
        } else {
            let mut cur = area.left;
            while cur < area.right {
                let g_cur = g_at(cur);
                let mut t = cur + 1;
                let mut best = cur + 1;
                while t <= area.right {
                    if rat_u64(g_cur.saturating_sub(g_at(t - 1))) <= budget {
                        best = t;
                        t += 1;
                    } else {
                        break;
                    }
                }
                cuts.push(best);
                cur = best;
            }
        }
        cuts.dedup();
        for w in cuts.windows(2) {
            let (x_l, x_r) = (w[0], w[1]);
            steps.push(Step {
                x_l,
                x_r,
                y_b,
                y_t,
                value: g_at(x_r - 1),
            });
        }
    }

    // concrete bound: bands * cuts, from the pick and drop counting
    let x_ceil = crate::ratio::rat_ceil_u64(&x_bound);
    let step_bound = ((x_ceil + 2) * (g_count + 1) + 2) * (x_ceil * (g_count + 1) + 2);
    BuiltStepFunction {
        f: StepFunction {
            area: Some(*area),
            steps,
        },
        step_bound,
        slack,
    }
}

/// The sandwich certificate: at every integer point of the area (up to the
/// tallest row plus one), f <= g <= f + sum of slacks of groups with a
/// rectangle meeting the ray.
pub fn check_sandwich(
    area: &Area,
    groups: &[BandGroup<'_>],
    sel: &Selection,
    built: &BuiltStepFunction,
) -> Vec<String> {
    let mut v = Vec::new();
    let y_max = groups
        .iter()
        .flat_map(|g| g.rows.iter().map(|w| w.y))
        .max()
        .unwrap_or(0);
    for t in area.left..area.right {
        for s in 0..=(y_max + 1) {
            let g = coverage_g(groups, sel, t, s);
            let f = built.f.value_at(t, s);
            if f > g {
                v.push(format!("f({t},{s})={f} exceeds coverage {g}"));
                continue;
            }
            let mut allowance = Rat::zero();
            for (gi, group) in groups.iter().enumerate() {
                let hit = group.rows.iter().any(|w| {
                    w.y <= s && w.rects.iter().any(|r| r.contains_x(t))
                });
                if hit {
                    allowance += built.slack[gi].1.clone();
                }
            }
            if rat_u64(g) > rat_u64(f) + allowance {
                v.push(format!("coverage at ({t},{s}) escapes the sandwich"));
            }
        }
    }
    if built.f.steps.len() as u64 > built.step_bound {
        v.push(format!(
            "step count {} exceeds the computed bound {}",
            built.f.steps.len(),
            built.step_bound
        ));
    }
    v
}
