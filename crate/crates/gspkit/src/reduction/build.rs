//! Building the covering instance from a scheduling instance: one row per
//! (job, block), rectangles spanning consecutive milestones, rays carrying
//! the window demands. Jobs released later sit in lower row bands so a
//! downward ray can address "all jobs released at or after s".

use std::collections::BTreeSet;

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gsp::cost::Time;
use crate::gsp::instance::GspInstance;
use crate::ratio::{rat_serde, rat_u64, CostVal, Rat};
use crate::rcp::instance::{RcpInstance, Ray, Rect, RectId, Row};
use crate::reduction::milestones::MilestoneSequence;
use crate::reduction::tau::BlockStarts;

#[derive(Debug, Error)]
pub enum BuildError {
    #[error("job {0} has no finite-cost completion time")]
    NoFiniteCompletion(usize),
}

/// What became of milestone step i of a job.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum StepFate {
    /// Materialized as this rectangle.
    Rect { id: RectId },
    /// Zero-increment step merged into an earlier rectangle.
    Merged { id: RectId },
    /// Force-selected and removed; its cost (zero unless it is step 0) sits
    /// in the instance base cost and intersecting ray demands were reduced.
    Forced,
    /// Infinite cost; never selectable.
    Dropped,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JobMap {
    pub job: usize,
    pub release: Time,
    pub processing: Time,
    pub milestones: Vec<Time>,
    pub block_starts: Vec<usize>,
    pub steps: Vec<StepFate>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RectOrigin {
    pub job: usize,
    /// Inclusive milestone-step range covered by this rectangle.
    pub first_step: usize,
    pub last_step: usize,
    /// Cost before the per-row padding.
    #[serde(with = "rat_serde")]
    pub prepad_cost: Rat,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RayOrigin {
    /// Earliest-released job of the band the ray tops at.
    pub s_job: usize,
    pub window_start: Time,
    pub t: Time,
    pub raw_demand: u64,
    pub reduced_by: u64,
}

/// The bidirectional bookkeeping for one (instance, offset) reduction.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VarMap {
    #[serde(with = "rat_serde")]
    pub eps: Rat,
    pub horizon: Time,
    pub offset: u64,
    /// Cost of all force-selected pieces (the unavoidable first steps).
    #[serde(with = "rat_serde")]
    pub base_cost: Rat,
    pub jobs: Vec<JobMap>,
    pub rect_origins: Vec<RectOrigin>,
    pub ray_origins: Vec<RayOrigin>,
}

impl VarMap {
    pub fn milestones_of(&self, job: usize) -> &[Time] {
        &self.jobs[job].milestones
    }
}

struct PendingRect {
    job: usize,
    first_step: usize,
    last_step: usize,
    cost: Rat,
    a: Time,
    b: Time,
    value: u64,
}

/// Build the covering instance for one block offset. `milestones` and
/// `starts` are indexed by job id.
pub fn build_rcp(
    inst: &GspInstance,
    eps: &Rat,
    horizon: Time,
    milestones: &[MilestoneSequence],
    starts: &[BlockStarts],
    offset: u64,
) -> Result<(RcpInstance, VarMap), BuildError> {
    let n = inst.jobs.len();
    // ascending release labels; bands assigned bottom-up in reverse order
    let mut labels: Vec<usize> = (0..n).collect();
    labels.sort_by_key(|&j| (inst.jobs[j].r, j));
    let blocks_of = |j: usize| starts[j].starts.len() + 1;
    let mut band_base = vec![0u64; n];
    let mut next_y = 0u64;
    for &j in labels.iter().rev() {
        band_base[j] = next_y;
        next_y += blocks_of(j) as u64;
    }
    let band_top = |j: usize| band_base[j] + blocks_of(j) as u64 - 1;

    let mut base_cost = Rat::zero();
    let mut job_maps: Vec<JobMap> = Vec::with_capacity(n);
    let mut pending_rows: Vec<(u64, Vec<PendingRect>)> = Vec::new();

    for job in &inst.jobs {
        let seq = &milestones[job.id];
        let f = seq.last_index();
        let mut fates: Vec<StepFate> = Vec::with_capacity(f);
        // block boundaries: implicit block {0}, then the listed starts
        let mut heads: Vec<usize> = vec![0];
        heads.extend(starts[job.id].starts.iter().copied());
        for (bi, &head) in heads.iter().enumerate() {
            if head >= f {
                continue;
            }
            let end = heads.get(bi + 1).copied().unwrap_or(f).min(f);
            let row_y = band_base[job.id] + bi as u64;
            let mut rects: Vec<PendingRect> = Vec::new();
            let mut truncated = false;
            for i in head..end {
                if truncated {
                    fates.push(StepFate::Dropped);
                    continue;
                }
                let step_cost = if i == head {
                    seq.cost_at(job, i + 1)
                } else {
                    match (seq.cost_at(job, i + 1), seq.cost_at(job, i)) {
                        (CostVal::Finite(hi), CostVal::Finite(lo)) => CostVal::Finite(hi - lo),
                        _ => CostVal::Infinite,
                    }
                };
                match step_cost {
                    CostVal::Infinite => {
                        if i == 0 {
                            return Err(BuildError::NoFiniteCompletion(job.id));
                        }
                        truncated = true;
                        fates.push(StepFate::Dropped);
                    }
                    CostVal::Finite(c) => {
                        if c.is_zero() {
                            if let Some(last) = rects.last_mut() {
                                last.b = seq.times[i + 1];
                                last.last_step = i;
                                fates.push(StepFate::Merged { id: usize::MAX });
                            } else {
                                base_cost += c;
                                fates.push(StepFate::Forced);
                            }
                        } else if i == 0 {
                            // the unavoidable first step: forced into the base
                            base_cost += c;
                            fates.push(StepFate::Forced);
                        } else {
                            rects.push(PendingRect {
                                job: job.id,
                                first_step: i,
                                last_step: i,
                                cost: c,
                                a: seq.times[i],
                                b: seq.times[i + 1],
                                value: job.p,
                            });
                            fates.push(StepFate::Rect { id: usize::MAX });
                        }
                    }
                }
            }
            if !rects.is_empty() {
                pending_rows.push((row_y, rects));
            }
        }
        debug_assert_eq!(fates.len(), f);
        job_maps.push(JobMap {
            job: job.id,
            release: job.r,
            processing: job.p,
            milestones: seq.times.clone(),
            block_starts: starts[job.id].starts.clone(),
            steps: fates,
        });
    }
    job_maps.sort_by_key(|m| m.job);

    // deterministic order, global ids, per-row padding
    pending_rows.sort_by_key(|(y, _)| *y);
    let mut rows: Vec<Row> = Vec::new();
    let mut rect_origins: Vec<RectOrigin> = Vec::new();
    let mut next_id: RectId = 0;
    for (y, rects) in &pending_rows {
        let w = rects.len() as u64;
        let pad = eps.clone() / rat_u64(w) * rects[0].cost.clone();
        let mut out = Vec::with_capacity(rects.len());
        for pr in rects {
            for step in pr.first_step..=pr.last_step {
                let fate = &mut job_maps[pr.job].steps[step];
                match fate {
                    StepFate::Rect { id } if step == pr.first_step => *id = next_id,
                    StepFate::Merged { id } => *id = next_id,
                    StepFate::Rect { .. } => unreachable!("inner steps are merges"),
                    _ => unreachable!("materialized step has rect fate"),
                }
            }
            rect_origins.push(RectOrigin {
                job: pr.job,
                first_step: pr.first_step,
                last_step: pr.last_step,
                prepad_cost: pr.cost.clone(),
            });
            out.push(Rect {
                a: pr.a,
                b: pr.b,
                c: pr.cost.clone() + pad.clone(),
                p: pr.value,
            });
            next_id += 1;
        }
        rows.push(Row { j: *y, rects: out });
    }

    // rays: windows start at releases, end at milestone/release breakpoints
    let mut t_candidates: BTreeSet<Time> = BTreeSet::new();
    for seq in milestones {
        t_candidates.extend(seq.times.iter().copied());
    }
    for job in &inst.jobs {
        t_candidates.insert(job.r);
        t_candidates.insert(job.r + 1);
    }
    let mut s_candidates: Vec<Time> = inst.jobs.iter().map(|j| j.r).collect();
    s_candidates.sort_unstable();
    s_candidates.dedup();

    let mut rays: Vec<Ray> = Vec::new();
    let mut ray_origins: Vec<RayOrigin> = Vec::new();
    for &s in &s_candidates {
        let j_min = *labels
            .iter()
            .find(|&&j| inst.jobs[j].r >= s)
            .expect("s is a release");
        let top = band_top(j_min);
        for &t in t_candidates.range((s + 1)..=horizon) {
            let mut work: i128 = 0;
            for job in &inst.jobs {
                if s <= job.r && job.r < t {
                    work += job.p as i128;
                }
            }
            let raw = work - (t - s) as i128;
            if raw <= 0 {
                continue;
            }
            let raw = raw as u64;
            // forced pieces covering t stand in for their jobs
            let mut reduced = 0u64;
            for job in &inst.jobs {
                if s <= job.r && job.r < t {
                    let jm = &job_maps[job.id];
                    for (i, fate) in jm.steps.iter().enumerate() {
                        if matches!(fate, StepFate::Forced)
                            && jm.milestones[i] <= t
                            && t < jm.milestones[i + 1]
                        {
                            reduced += job.p;
                        }
                    }
                }
            }
            let d = raw.saturating_sub(reduced);
            rays.push(Ray { s: top, t, d });
            ray_origins.push(RayOrigin {
                s_job: j_min,
                window_start: s,
                t,
                raw_demand: raw,
                reduced_by: reduced,
            });
        }
    }
    let mut order: Vec<usize> = (0..rays.len()).collect();
    order.sort_by_key(|&i| (rays[i].s, rays[i].t));
    let rays = order.iter().map(|&i| rays[i].clone()).collect();
    let ray_origins = order.iter().map(|&i| ray_origins[i].clone()).collect();

    Ok((
        RcpInstance { rows, rays },
        VarMap {
            eps: eps.clone(),
            horizon,
            offset,
            base_cost,
            jobs: job_maps,
            rect_origins,
            ray_origins,
        },
    ))
}

/// Concrete forms of the structural bounds on a built instance: per-row size
/// at most 2*(1/eps)^3 and per-row cost ratio within the padded bound.
pub fn check_instance_bounds(inst: &RcpInstance, eps: &Rat) -> Vec<String> {
    use crate::ratio::rat_pow;
    let mut v = Vec::new();
    let span = crate::reduction::tau::block_span(eps);
    for row in &inst.rows {
        let w = row.rects.len() as u64;
        if w > 2 * span {
            v.push(format!("row {} has {} rectangles > 2*(1/eps)^3", row.j, w));
        }
        let total: Rat = row.rects.iter().map(|r| r.c.clone()).sum();
        let min = row.rects.iter().map(|r| r.c.clone()).min().unwrap();
        let ratio = total / min;
        let inv = eps.clone().recip();
        let w_rat = rat_u64(w);
        let bound = w_rat.clone() * (rat_pow(&inv, w as i64) + eps.clone() / w_rat.clone())
            / (eps.clone() / w_rat);
        if ratio > bound {
            v.push(format!("row {} cost ratio exceeds the K bound", row.j));
        }
    }
    v
}
