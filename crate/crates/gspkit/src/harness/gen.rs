//! Deterministic instance generators for tests and benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::gsp::cost::{CostFunction, Time};
use crate::gsp::instance::{GspInstance, Job};
use crate::ratio::{rat_int, CostVal, Rat};
use crate::rcp::instance::{coverage, RcpInstance, Ray, Rect, Row, Selection};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GenSpec {
    pub n: usize,
    pub p_max: Time,
    pub r_max: Time,
    /// Per-kind weights; kinds with zero weight never appear.
    pub mix: MixWeights,
    pub w_max: u64,
    pub d_max: Time,
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MixWeights {
    #[serde(default)]
    pub completion: u32,
    #[serde(default)]
    pub flow: u32,
    #[serde(default)]
    pub tardiness: u32,
    #[serde(default)]
    pub weight_of_tardy: u32,
    #[serde(default)]
    pub hard_deadline: u32,
    #[serde(default)]
    pub step: u32,
}

impl Default for MixWeights {
    fn default() -> Self {
        MixWeights {
            completion: 1,
            flow: 1,
            tardiness: 2,
            weight_of_tardy: 1,
            hard_deadline: 1,
            step: 1,
        }
    }
}

impl MixWeights {
    pub fn tardiness_only() -> Self {
        MixWeights {
            completion: 0,
            flow: 0,
            tardiness: 1,
            weight_of_tardy: 0,
            hard_deadline: 0,
            step: 0,
        }
    }
}

pub fn gen_instance(spec: &GenSpec) -> GspInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut jobs = Vec::with_capacity(spec.n);
    let weights = [
        ("completion", spec.mix.completion),
        ("flow", spec.mix.flow),
        ("tardiness", spec.mix.tardiness),
        ("weight-of-tardy", spec.mix.weight_of_tardy),
        ("hard-deadline", spec.mix.hard_deadline),
        ("step", spec.mix.step),
    ];
    let total: u32 = weights.iter().map(|w| w.1).sum();
    assert!(total > 0, "objective mix must have positive weight");
    // total work bound for safe hard deadlines
    let work_bound: Time = spec.p_max * spec.n as u64 + spec.r_max;
    for id in 0..spec.n {
        let r = rng.gen_range(0..=spec.r_max);
        let p = rng.gen_range(1..=spec.p_max);
        let w = rng.gen_range(1..=spec.w_max.max(1));
        let mut pick = rng.gen_range(0..total);
        let mut kind = "tardiness";
        for (name, weight) in weights {
            if pick < weight {
                kind = name;
                break;
            }
            pick -= weight;
        }
        let cost = match kind {
            "completion" => CostFunction::Completion { w },
            "flow" => CostFunction::Flow { w, r },
            "tardiness" => CostFunction::Tardiness { w, d: rng.gen_range(0..=spec.d_max) },
            "weight-of-tardy" => CostFunction::WeightOfTardy { w, d: rng.gen_range(0..=spec.d_max) },
            // leave room so the instance stays feasible
            "hard-deadline" => CostFunction::HardDeadline { d: work_bound + rng.gen_range(0..=spec.d_max) },
            _ => {
                let mut t = r;
                let mut level = 0i64;
                let mut points: Vec<(Time, CostVal)> = vec![(0, CostVal::zero())];
                for _ in 0..rng.gen_range(1..=3) {
                    t += rng.gen_range(1..=3);
                    level += rng.gen_range(1..=4);
                    points.push((t, CostVal::Finite(rat_int(level))));
                }
                CostFunction::PiecewiseStep { points }
            }
        };
        jobs.push(Job { id, r, p, cost });
    }
    let (inst, diag) = GspInstance::normalized(jobs);
    debug_assert!(diag.ok(), "{diag:?}");
    inst
}

#[derive(Debug, Clone)]
pub struct RcpGenSpec {
    pub rows: usize,
    pub max_rects_per_row: usize,
    pub max_width: u64,
    pub x_extent: u64,
    pub max_cost: i64,
    pub max_value: u64,
    pub rays: usize,
    pub max_demand: u64,
    /// Clamp demands so the full selection is feasible.
    pub feasible: bool,
    pub seed: u64,
}

impl Default for RcpGenSpec {
    fn default() -> Self {
        RcpGenSpec {
            rows: 3,
            max_rects_per_row: 3,
            max_width: 4,
            x_extent: 12,
            max_cost: 9,
            max_value: 3,
            rays: 3,
            max_demand: 6,
            feasible: true,
            seed: 0,
        }
    }
}

pub fn gen_rcp(spec: &RcpGenSpec) -> RcpInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed ^ 0x9e3779b97f4a7c15);
    let mut rows = Vec::new();
    for j in 0..spec.rows {
        let count = rng.gen_range(1..=spec.max_rects_per_row);
        let mut a = rng.gen_range(0..spec.x_extent.max(1));
        let value = rng.gen_range(1..=spec.max_value);
        let mut rects = Vec::with_capacity(count);
        for _ in 0..count {
            let b = a + rng.gen_range(1..=spec.max_width);
            rects.push(Rect {
                a,
                b,
                c: rat_int(rng.gen_range(1..=spec.max_cost)),
                p: value,
            });
            a = b;
        }
        rows.push(Row { j: j as u64, rects });
    }
    let all = Selection::from_ids(0..rows.iter().map(|w| w.rects.len()).sum::<usize>());
    let probe = RcpInstance { rows: rows.clone(), rays: Vec::new() };
    let mut rays = Vec::new();
    for _ in 0..spec.rays {
        let s = rng.gen_range(0..spec.rows.max(1)) as u64;
        let t = rng.gen_range(0..spec.x_extent.max(1) + spec.max_width);
        let mut d = rng.gen_range(0..=spec.max_demand);
        if spec.feasible {
            let cap = coverage(&probe, &all, &Ray { s, t, d: 0 });
            d = d.min(cap);
        }
        rays.push(Ray { s, t, d });
    }
    RcpInstance { rows, rays }
}

/// A generator variant whose rows all span a given strip; used by the
/// step-function checks.
pub fn gen_spanning_rows(
    area_left: u64,
    area_right: u64,
    rows: usize,
    max_rects: usize,
    seed: u64,
) -> RcpInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xabcdef);
    let mut out_rows = Vec::new();
    for j in 0..rows {
        let count = rng.gen_range(1..=max_rects.max(1));
        let width = area_right - area_left;
        // pick interior cut points so the row tiles [left-slack, right+slack)
        let mut cuts: Vec<u64> = (0..count - 1)
            .map(|_| area_left + 1 + rng.gen_range(0..width.max(2) - 1))
            .collect();
        cuts.sort_unstable();
        cuts.dedup();
        let start = area_left.saturating_sub(rng.gen_range(0..=1));
        let end = area_right + rng.gen_range(0..=1);
        let mut xs = vec![start];
        xs.extend(cuts);
        xs.push(end);
        xs.dedup();
        let value = rng.gen_range(1..=3);
        let rects = xs
            .windows(2)
            .map(|w| Rect {
                a: w[0],
                b: w[1],
                c: rat_int(rng.gen_range(1..=5)),
                p: value,
            })
            .collect();
        out_rows.push(Row { j: j as u64, rects });
    }
    RcpInstance { rows: out_rows, rays: Vec::new() }
}

pub fn eps_from_str(s: &str) -> Option<Rat> {
    crate::ratio::parse_rat(s).filter(|r| {
        use num_traits::Signed;
        r.is_positive()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generation_is_deterministic() {
        let spec = GenSpec {
            n: 4,
            p_max: 3,
            r_max: 3,
            mix: MixWeights::default(),
            w_max: 3,
            d_max: 6,
            seed: 1,
        };
        assert_eq!(gen_instance(&spec), gen_instance(&spec));
    }

    #[test]
    fn tardiness_only_mix() {
        let spec = GenSpec {
            n: 5,
            p_max: 3,
            r_max: 3,
            mix: MixWeights::tardiness_only(),
            w_max: 3,
            d_max: 6,
            seed: 7,
        };
        let inst = gen_instance(&spec);
        assert!(inst.jobs.iter().all(|j| j.cost.is_tardiness()));
    }

    #[test]
    fn empty_instance_is_fine() {
        let spec = GenSpec {
            n: 0,
            p_max: 3,
            r_max: 3,
            mix: MixWeights::default(),
            w_max: 3,
            d_max: 6,
            seed: 0,
        };
        let inst = gen_instance(&spec);
        assert!(inst.jobs.is_empty());
    }

    #[test]
    fn feasible_rcp_generation_is_feasible() {
        for seed in 0..20 {
            let inst = gen_rcp(&RcpGenSpec { seed, ..Default::default() });
            assert!(inst.validate().errors.is_empty(), "seed {seed}");
            let all = Selection::from_ids(0..inst.rect_count());
            assert!(crate::rcp::instance::is_feasible(&inst, &all), "seed {seed}");
        }
    }
}
