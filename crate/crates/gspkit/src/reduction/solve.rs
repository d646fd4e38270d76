//! End-to-end solving: enumerate the block offsets, build the covering
//! instance for each, solve it with the chosen back end, lift the selection
//! to deadlines, and schedule with EDF. The cheapest schedule across offsets
//! wins.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::gsp::cost::Time;
use crate::gsp::edf::{edf_schedule, Schedule, Segment};
use crate::gsp::instance::GspInstance;
use crate::ratio::{format_rat, rat_u64, CostVal, Rat};
use crate::rcp::brute::{brute_force, BruteOutcome};
use crate::rcp::exact::{exact_solve, ExactError};
use crate::rcp::instance::{RcpInstance, Selection};
use crate::rcp::structure::check_well_structured;
use crate::rcp::subproblem::Subproblem;
use crate::reduction::build::{build_rcp, BuildError, VarMap};
use crate::reduction::lift::{
    padded_cost_with_base, selection_to_completions,
};
use crate::reduction::milestones::{
    build_milestones, build_milestones_tardiness, is_inverse_power_of_two, MilestoneSequence,
};
use crate::reduction::tau::{block_span, build_block_starts};

#[derive(Debug, Clone)]
pub enum RcpMode {
    Exact,
    ApproxOracle,
    ApproxExhaustive { cap_guesses: u64, cap_depth: u64 },
    Tardiness { preprocess: bool },
}

impl RcpMode {
    pub fn name(&self) -> &'static str {
        match self {
            RcpMode::Exact => "exact",
            RcpMode::ApproxOracle => "approx-oracle",
            RcpMode::ApproxExhaustive { .. } => "approx-exhaustive",
            RcpMode::Tardiness { .. } => "tardiness",
        }
    }
}

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("invalid instance: {0}")]
    Invalid(String),
    #[error("instance admits no finite-cost schedule")]
    Infeasible,
    #[error("budget or caps exhausted: {0}")]
    Budget(String),
}

#[derive(Debug, Clone, Serialize)]
pub struct OffsetReport {
    pub offset: u64,
    pub rcp_selected: usize,
    pub rcp_padded_cost: String,
    pub base_cost: String,
    pub lifted_cost: String,
    pub feasible: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct GspSolveReport {
    pub mode: String,
    pub epsilon: String,
    pub cost: CostVal,
    pub cost_with_offset: CostVal,
    pub completions: Vec<Time>,
    #[serde(skip)]
    pub schedule: Schedule,
    pub pieces: usize,
    pub offsets: Vec<OffsetReport>,
}

/// Milestones for every job under the mode's construction.
pub fn milestones_for(
    inst: &GspInstance,
    eps: &Rat,
    horizon: Time,
    tardiness: bool,
) -> Vec<MilestoneSequence> {
    inst.jobs
        .iter()
        .map(|j| {
            if tardiness {
                build_milestones_tardiness(j, eps, horizon)
            } else {
                build_milestones(j, eps, horizon)
            }
        })
        .collect()
}

/// Build the covering instance for one offset.
pub fn reduce_at_offset(
    inst: &GspInstance,
    eps: &Rat,
    horizon: Time,
    milestones: &[MilestoneSequence],
    offset: u64,
) -> Result<(RcpInstance, VarMap), BuildError> {
    let starts: Vec<_> = inst
        .jobs
        .iter()
        .map(|j| build_block_starts(j, &milestones[j.id], offset, eps))
        .collect();
    build_rcp(inst, eps, horizon, milestones, &starts, offset)
}

fn solve_rcp_with_mode(
    rcp: &RcpInstance,
    eps: &Rat,
    mode: &RcpMode,
    lane_cap: usize,
    brute_budget: u128,
) -> Result<Option<Selection>, SolveError> {
    let exact = |rcp: &RcpInstance| -> Result<Option<Selection>, SolveError> {
        match exact_solve(rcp, lane_cap) {
            Ok(BruteOutcome::Optimal { selection, .. }) => Ok(Some(selection)),
            Ok(BruteOutcome::Infeasible) => Ok(None),
            Err(ExactError::TooManyLanes { .. }) => match brute_force(rcp, brute_budget) {
                Ok(BruteOutcome::Optimal { selection, .. }) => Ok(Some(selection)),
                Ok(BruteOutcome::Infeasible) => Ok(None),
                Err(e) => Err(SolveError::Budget(e.to_string())),
            },
        }
    };
    match mode {
        RcpMode::Exact => exact(rcp),
        RcpMode::ApproxOracle => {
            let Some(reference) = exact(rcp)? else {
                return Ok(None);
            };
            let root = Subproblem::root(rcp);
            let stats = rcp.validate().stats;
            let mut ctx = crate::approx::Ctx::new(
                eps.clone(),
                stats.k_ratio,
                log2_width(&root),
            );
            ctx.check_sandwich = false;
            match crate::approx::solve_oracle(&root, &reference, &mut ctx) {
                Ok(sel) => Ok(Some(sel)),
                Err(crate::approx::ApproxError::Infeasible) => Ok(None),
                Err(e) => Err(SolveError::Budget(e.to_string())),
            }
        }
        RcpMode::ApproxExhaustive { cap_guesses, cap_depth } => {
            let root = Subproblem::root(rcp);
            let stats = rcp.validate().stats;
            let mut ctx = crate::approx::Ctx::new(
                eps.clone(),
                stats.k_ratio,
                log2_width(&root),
            );
            let mut budget = *cap_guesses;
            match crate::approx::solve_exhaustive(
                &root,
                &mut ctx,
                crate::approx::Caps { guesses: *cap_guesses, depth: *cap_depth },
                &mut budget,
            ) {
                Ok((sel, _)) => Ok(Some(sel)),
                Err(crate::approx::ApproxError::Infeasible) => Ok(None),
                Err(e) => Err(SolveError::Budget(e.to_string())),
            }
        }
        RcpMode::Tardiness { preprocess } => {
            let delta = eps.clone() / rat_u64(32);
            let report = check_well_structured(rcp, &delta);
            if !report.ok {
                return Err(SolveError::Invalid(format!(
                    "tardiness mode needs a dyadically structured instance: {}",
                    report.violations.join("; ")
                )));
            }
            let solve_structured = |inst: &RcpInstance| -> Result<Option<Selection>, SolveError> {
                let Some(reference) = exact(inst)? else {
                    return Ok(None);
                };
                let root = Subproblem::root(inst);
                let mut ctx = crate::tardiness::TardinessCtx {
                    eps: eps.clone(),
                    certs: Vec::new(),
                };
                match crate::tardiness::solve_tardiness_oracle(&root, &reference, &mut ctx) {
                    Ok(sel) => Ok(Some(sel)),
                    Err(crate::tardiness::TardinessError::Infeasible(..)) => Ok(None),
                    Err(e) => Err(SolveError::Budget(e.to_string())),
                }
            };
            if !preprocess {
                return solve_structured(rcp);
            }
            let mut best: Option<(Rat, Selection)> = None;
            for cand in crate::tardiness::tardiness_preprocess(rcp, eps) {
                if let Some(sel) = solve_structured(&cand.instance)? {
                    let mapped = Selection::from_ids(
                        sel.sorted_ids().into_iter().map(|i| cand.id_map[i]),
                    )
                    .union(&cand.forced);
                    let cost = mapped.cost(rcp);
                    let better = best.as_ref().is_none_or(|(bc, _)| cost < *bc);
                    if better {
                        best = Some((cost, mapped));
                    }
                }
            }
            Ok(best.map(|(_, s)| s))
        }
    }
}

fn log2_width(root: &Subproblem) -> u64 {
    root.area.width().trailing_zeros() as u64
}

fn solve_piece(
    inst: &GspInstance,
    eps: &Rat,
    mode: &RcpMode,
) -> Result<(Vec<Time>, Vec<OffsetReport>), SolveError> {
    if inst.jobs.is_empty() {
        return Ok((Vec::new(), Vec::new()));
    }
    let tardiness = matches!(mode, RcpMode::Tardiness { .. });
    if tardiness {
        if !inst.jobs.iter().all(|j| j.cost.is_tardiness()) {
            return Err(SolveError::Invalid(
                "tardiness mode requires all jobs to carry tardiness costs".into(),
            ));
        }
        if !is_inverse_power_of_two(eps) {
            return Err(SolveError::Invalid("tardiness mode requires eps = 2^-k".into()));
        }
    }
    let horizon = inst.horizon();
    let milestones = milestones_for(inst, eps, horizon, tardiness);
    let span = block_span(eps);
    // the per-offset solves are independent
    let per_offset: Vec<Result<(OffsetReport, Option<(CostVal, Vec<Time>)>), SolveError>> =
        (1..=span)
            .into_par_iter()
            .map(|offset| {
                let (rcp, vm) = reduce_at_offset(inst, eps, horizon, &milestones, offset)
                    .map_err(|e| SolveError::Invalid(e.to_string()))?;
                let solved = solve_rcp_with_mode(&rcp, eps, mode, 16, 1u128 << 24)?;
                match solved {
                    None => Ok((
                        OffsetReport {
                            offset,
                            rcp_selected: 0,
                            rcp_padded_cost: "-".into(),
                            base_cost: format_rat(&vm.base_cost),
                            lifted_cost: "-".into(),
                            feasible: false,
                        },
                        None,
                    )),
                    Some(sel) => {
                        let deadlines = selection_to_completions(&vm, &rcp, &sel)
                            .map_err(|e| SolveError::Invalid(e.to_string()))?;
                        let Some(schedule) = edf_schedule(inst, &deadlines) else {
                            return Err(SolveError::Invalid(
                                "lifted deadlines are not schedulable".into(),
                            ));
                        };
                        let cost = inst.total_cost(&schedule.completions);
                        Ok((
                            OffsetReport {
                                offset,
                                rcp_selected: sel.len(),
                                rcp_padded_cost: format_rat(&padded_cost_with_base(&vm, &rcp, &sel)),
                                base_cost: format_rat(&vm.base_cost),
                                lifted_cost: format!("{cost}"),
                                feasible: true,
                            },
                            Some((cost, schedule.completions)),
                        ))
                    }
                }
            })
            .collect();
    let mut best: Option<(CostVal, Vec<Time>)> = None;
    let mut reports = Vec::new();
    for item in per_offset {
        let (report, outcome) = item?;
        reports.push(report);
        if let Some((cost, completions)) = outcome {
            let better = match &best {
                None => true,
                Some((bc, _)) => cost < *bc,
            };
            if better {
                best = Some((cost, completions));
            }
        }
    }
    match best {
        Some((_, completions)) => Ok((completions, reports)),
        None => Err(SolveError::Infeasible),
    }
}

/// Solve a full instance: validate, split at release gaps, solve the pieces,
/// and reassemble the schedule.
pub fn solve_gsp(inst: &GspInstance, eps: &Rat, mode: RcpMode) -> Result<GspSolveReport, SolveError> {
    let diag = inst.validate();
    if !diag.ok() {
        return Err(SolveError::Invalid(diag.errors.join("; ")));
    }
    let n = inst.jobs.len();
    let mut completions = vec![0u64; n];
    let mut reports = Vec::new();
    let pieces = inst.split_by_release_gaps();
    let piece_count = pieces.len();
    for (piece, map) in &pieces {
        let (piece_completions, piece_reports) = solve_piece(piece, eps, &mode)?;
        for (local, &orig) in map.iter().enumerate() {
            completions[orig] = piece_completions[local];
        }
        reports.extend(piece_reports);
    }
    let schedule = if n == 0 {
        Schedule { segments: Vec::new(), completions: Vec::new() }
    } else {
        
        edf_schedule(inst, &completions)
            .expect("per-piece schedules are jointly feasible")
    };
    let cost = inst.total_cost(&schedule.completions);
    let cost_with_offset = cost.clone() + CostVal::Finite(inst.cost_offset.clone());
    Ok(GspSolveReport {
        mode: mode.name().into(),
        epsilon: format_rat(eps),
        cost,
        cost_with_offset,
        completions: schedule.completions.clone(),
        schedule,
        pieces: piece_count,
        offsets: reports,
    })
}

/// Forward-chain costs used by the loss-bound certificates: for each offset,
/// the padded cost (plus base) of the selection projected from the given
/// completion vector.
pub fn forward_padded_costs(
    inst: &GspInstance,
    eps: &Rat,
    completions: &[Time],
    tardiness: bool,
) -> Result<Vec<Rat>, SolveError> {
    let horizon = inst.horizon();
    let milestones = milestones_for(inst, eps, horizon, tardiness);
    let span = block_span(eps);
    let mut out = Vec::new();
    for offset in 1..=span {
        let (rcp, vm) = reduce_at_offset(inst, eps, horizon, &milestones, offset)
            .map_err(|e| SolveError::Invalid(e.to_string()))?;
        let sel = crate::reduction::lift::completions_to_selection(&vm, completions);
        debug_assert!(crate::rcp::instance::is_feasible(&rcp, &sel));
        out.push(padded_cost_with_base(&vm, &rcp, &sel));
    }
    Ok(out)
}

/// The factor (1+eps)(1+6eps)(1+eps)^2 of the reduction loss bound.
pub fn reduction_loss_factor(eps: &Rat) -> Rat {
    let one = Rat::from_integer(1.into());
    (one.clone() + eps.clone())
        * (one.clone() + rat_u64(6) * eps.clone())
        * (one.clone() + eps.clone())
        * (one + eps.clone())
}

/// Re-sort segments of independent pieces; used when assembling bench output.
pub fn merge_segments(mut segments: Vec<Segment>) -> Vec<Segment> {
    segments.sort_by_key(|s| s.start);
    segments
}
