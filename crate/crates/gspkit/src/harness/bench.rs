//! Benchmark harness: generate instances, run the configured solver modes,
//! check the inequality certificates, and emit a JSON report plus a
//! deterministic CSV (wall times live in the JSON only).

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::gsp::opt::{exhaustive_optimum, MAX_EXHAUSTIVE_JOBS};
use crate::harness::gen::{gen_instance, GenSpec, MixWeights};
use crate::ratio::{format_rat, parse_rat, CostVal, Rat};
use crate::reduction::solve::{
    forward_padded_costs, reduction_loss_factor, solve_gsp, RcpMode,
};
use crate::reduction::{check_milestones, milestones_for};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BenchConfig {
    pub instances: usize,
    pub seed: u64,
    pub n: usize,
    pub p_max: u64,
    pub r_max: u64,
    pub w_max: u64,
    pub d_max: u64,
    /// "mixed" or "tardiness"
    #[serde(default = "default_mix")]
    pub objective: String,
    /// rationals as strings, e.g. "1/2"
    pub epsilon: String,
    #[serde(default = "default_modes")]
    pub modes: Vec<String>,
    #[serde(default = "default_budget")]
    pub brute_budget: u128,
}

fn default_mix() -> String {
    "mixed".into()
}

fn default_modes() -> Vec<String> {
    vec!["exact".into()]
}

fn default_budget() -> u128 {
    1 << 22
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchRow {
    pub id: usize,
    pub n: usize,
    pub optimum: Option<String>,
    pub mode_costs: Vec<(String, Option<String>)>,
    pub ratios: Vec<(String, Option<String>)>,
    pub certificates_passed: usize,
    pub certificates_failed: usize,
    pub failures: Vec<String>,
    pub wall_ms: u128,
}

#[derive(Debug, Serialize)]
pub struct BenchReport {
    pub config: BenchConfig,
    pub rows: Vec<BenchRow>,
}

impl BenchReport {
    /// Deterministic CSV: no wall times.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str("id,n,optimum");
        for mode in &self.config.modes {
            out.push_str(&format!(",cost_{mode},ratio_{mode}"));
        }
        out.push_str(",certs_passed,certs_failed\n");
        for row in &self.rows {
            out.push_str(&format!(
                "{},{},{}",
                row.id,
                row.n,
                row.optimum.clone().unwrap_or_default()
            ));
            for mode in &self.config.modes {
                let cost = row
                    .mode_costs
                    .iter()
                    .find(|(m, _)| m == mode)
                    .and_then(|(_, c)| c.clone())
                    .unwrap_or_default();
                let ratio = row
                    .ratios
                    .iter()
                    .find(|(m, _)| m == mode)
                    .and_then(|(_, c)| c.clone())
                    .unwrap_or_default();
                out.push_str(&format!(",{cost},{ratio}"));
            }
            out.push_str(&format!(",{},{}\n", row.certificates_passed, row.certificates_failed));
        }
        out
    }
}

fn parse_mode(name: &str) -> Option<RcpMode> {
    match name {
        "exact" => Some(RcpMode::Exact),
        "approx-oracle" => Some(RcpMode::ApproxOracle),
        "approx-exhaustive" => Some(RcpMode::ApproxExhaustive {
            cap_guesses: 200_000,
            cap_depth: 12,
        }),
        "tardiness" => Some(RcpMode::Tardiness { preprocess: false }),
        _ => None,
    }
}

pub fn run_bench(config: &BenchConfig) -> BenchReport {
    let eps: Rat = parse_rat(&config.epsilon).expect("epsilon parses");
    let rows: Vec<BenchRow> = (0..config.instances)
        .into_par_iter()
        .map(|id| {
            let start = Instant::now();
            let mix = if config.objective == "tardiness" {
                MixWeights::tardiness_only()
            } else {
                MixWeights::default()
            };
            let spec = GenSpec {
                n: config.n,
                p_max: config.p_max,
                r_max: config.r_max,
                mix,
                w_max: config.w_max,
                d_max: config.d_max,
                seed: config.seed.wrapping_add(id as u64),
            };
            let inst = gen_instance(&spec);
            let mut failures: Vec<String> = Vec::new();
            let mut passed = 0usize;

            let optimum = if inst.jobs.len() <= MAX_EXHAUSTIVE_JOBS {
                exhaustive_optimum(&inst)
            } else {
                None
            };

            // milestone certificates on every job, both constructions
            let tardiness_only = inst.jobs.iter().all(|j| j.cost.is_tardiness());
            if !inst.jobs.is_empty() && inst.split_by_release_gaps().len() == 1 {
                let horizon = inst.horizon();
                for variant in [false, true] {
                    if variant && !tardiness_only {
                        continue;
                    }
                    let ms = milestones_for(&inst, &eps, horizon, variant);
                    for job in &inst.jobs {
                        let check = check_milestones(job, &eps, horizon, &ms[job.id], variant);
                        if check.violations.is_empty() {
                            passed += 1;
                        } else {
                            failures
                                .extend(check.violations.iter().map(|v| format!("job {}: {v}", job.id)));
                        }
                    }
                }
                // forward loss bound when the optimum is known
                if let Some((opt, completions)) = &optimum {
                    if let Ok(costs) = forward_padded_costs(&inst, &eps, completions, false) {
                        let min = costs.iter().min().cloned();
                        if let Some(min) = min {
                            let bound = opt.scale(&reduction_loss_factor(&eps));
                            if CostVal::Finite(min) <= bound {
                                passed += 1;
                            } else {
                                failures.push("forward loss bound violated".into());
                            }
                        }
                    }
                }
            }

            let mut mode_costs = Vec::new();
            let mut ratios = Vec::new();
            for mode_name in &config.modes {
                let Some(mode) = parse_mode(mode_name) else {
                    failures.push(format!("unknown mode {mode_name}"));
                    continue;
                };
                if matches!(mode, RcpMode::Tardiness { .. }) && !tardiness_only {
                    mode_costs.push((mode_name.clone(), None));
                    ratios.push((mode_name.clone(), None));
                    continue;
                }
                match solve_gsp(&inst, &eps, mode) {
                    Ok(report) => {
                        mode_costs.push((mode_name.clone(), Some(format!("{}", report.cost))));
                        let ratio = optimum.as_ref().and_then(|(opt, _)| {
                            match (&report.cost, opt) {
                                (CostVal::Finite(c), CostVal::Finite(o)) if !num_traits::Zero::is_zero(o) => {
                                    Some(format_rat(&(c.clone() / o.clone())))
                                }
                                _ => None,
                            }
                        });
                        if let (Some((opt, _)), CostVal::Finite(_)) = (&optimum, &report.cost) {
                            if report.cost >= *opt {
                                passed += 1;
                            } else {
                                failures.push(format!("{mode_name}: cost below the optimum"));
                            }
                        }
                        ratios.push((mode_name.clone(), ratio));
                    }
                    Err(e) => {
                        mode_costs.push((mode_name.clone(), None));
                        ratios.push((mode_name.clone(), None));
                        if optimum.is_some() {
                            failures.push(format!("{mode_name}: {e}"));
                        }
                    }
                }
            }
            BenchRow {
                id,
                n: inst.jobs.len(),
                optimum: optimum.as_ref().map(|(c, _)| format!("{c}")),
                mode_costs,
                ratios,
                certificates_passed: passed,
                certificates_failed: failures.len(),
                failures,
                wall_ms: start.elapsed().as_millis(),
            }
        })
        .collect();
    let mut rows = rows;
    rows.sort_by_key(|r| r.id);
    BenchReport {
        config: config.clone(),
        rows,
    }
}
