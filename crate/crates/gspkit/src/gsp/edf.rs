//! Earliest-deadline-first scheduling and the window feasibility condition:
//! a deadline vector is schedulable iff for all s < t the work released in
//! [s, t) and due by t fits in t - s.

use serde::{Deserialize, Serialize};

use crate::gsp::cost::Time;
use crate::gsp::instance::GspInstance;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Segment {
    pub job: usize,
    pub start: Time,
    pub end: Time,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Schedule {
    pub segments: Vec<Segment>,
    pub completions: Vec<Time>,
}

impl Schedule {
    /// Full structural validation against the instance: per-job work totals,
    /// release respect, disjointness, completion bookkeeping.
    pub fn validate(&self, inst: &GspInstance) -> Result<(), String> {
        let n = inst.jobs.len();
        if self.completions.len() != n {
            return Err("completion vector length mismatch".into());
        }
        let mut work = vec![0u64; n];
        let mut last_end = vec![0u64; n];
        let mut prev_end: Option<Time> = None;
        for seg in &self.segments {
            if seg.job >= n {
                return Err(format!("segment names unknown job {}", seg.job));
            }
            if seg.end <= seg.start {
                return Err(format!("empty or reversed segment for job {}", seg.job));
            }
            if seg.start < inst.jobs[seg.job].r {
                return Err(format!("job {} runs before its release", seg.job));
            }
            if let Some(pe) = prev_end {
                if seg.start < pe {
                    return Err(format!(
                        "segments overlap at time {} (job {})",
                        seg.start, seg.job
                    ));
                }
            }
            prev_end = Some(seg.end);
            work[seg.job] += seg.end - seg.start;
            last_end[seg.job] = seg.end;
        }
        for job in &inst.jobs {
            if work[job.id] != job.p {
                return Err(format!(
                    "job {} scheduled for {} units, expected {}",
                    job.id, work[job.id], job.p
                ));
            }
            if self.completions[job.id] != last_end[job.id] {
                return Err(format!("job {} completion does not match last segment", job.id));
            }
        }
        Ok(())
    }
}

/// The classical deadline-feasibility condition, with s restricted to
/// release times and t to deadlines (all other windows are dominated).
/// A deadline equal to the release is reported infeasible upfront: the window
/// condition quantifies s < t and cannot see zero-length windows.
pub fn deadline_feasible(inst: &GspInstance, deadlines: &[Time]) -> bool {
    for job in &inst.jobs {
        debug_assert!(deadlines[job.id] >= job.r, "deadline below release");
        if deadlines[job.id] <= job.r {
            return false;
        }
    }
    let mut starts: Vec<Time> = inst.jobs.iter().map(|j| j.r).collect();
    starts.sort_unstable();
    starts.dedup();
    let mut ends: Vec<Time> = deadlines.to_vec();
    ends.sort_unstable();
    ends.dedup();
    for &s in &starts {
        for &t in &ends {
            if s >= t {
                continue;
            }
            let mut demand: u64 = 0;
            for job in &inst.jobs {
                if s <= job.r && deadlines[job.id] <= t {
                    demand += job.p;
                }
            }
            if demand > t - s {
                return false;
            }
        }
    }
    true
}

/// Unit-step EDF simulation with the (deadline, job id) tie-break. Returns the
/// schedule when every job meets its deadline, None otherwise. Preemptions and
/// completions happen at integral times only.
pub fn edf_schedule(inst: &GspInstance, deadlines: &[Time]) -> Option<Schedule> {
    let n = inst.jobs.len();
    for job in &inst.jobs {
        if deadlines[job.id] <= job.r {
            return None;
        }
    }
    if n == 0 {
        return Some(Schedule {
            segments: Vec::new(),
            completions: Vec::new(),
        });
    }
    let end_bound = inst.max_release() + inst.total_processing();
    let mut remaining: Vec<Time> = inst.jobs.iter().map(|j| j.p).collect();
    let mut completions = vec![0u64; n];
    let mut units: Vec<(usize, Time)> = Vec::new();
    let mut done = 0usize;
    let mut t: Time = inst.jobs.iter().map(|j| j.r).min().unwrap_or(0);
    while done < n && t < end_bound {
        let mut pick: Option<usize> = None;
        for job in &inst.jobs {
            if remaining[job.id] > 0 && job.r <= t {
                let better = match pick {
                    None => true,
                    Some(cur) => {
                        (deadlines[job.id], job.id) < (deadlines[cur], cur)
                    }
                };
                if better {
                    pick = Some(job.id);
                }
            }
        }
        match pick {
            Some(j) => {
                units.push((j, t));
                remaining[j] -= 1;
                t += 1;
                if remaining[j] == 0 {
                    completions[j] = t;
                    if t > deadlines[j] {
                        return None;
                    }
                    done += 1;
                }
            }
            None => {
                // idle until the next release
                let next = inst
                    .jobs
                    .iter()
                    .filter(|j| remaining[j.id] > 0 && j.r > t)
                    .map(|j| j.r)
                    .min()?;
                t = next;
            }
        }
    }
    if done < n {
        return None;
    }
    let mut segments: Vec<Segment> = Vec::new();
    for (job, start) in units {
        match segments.last_mut() {
            Some(seg) if seg.job == job && seg.end == start => seg.end = start + 1,
            _ => segments.push(Segment {
                job,
                start,
                end: start + 1,
            }),
        }
    }
    Some(Schedule {
        segments,
        completions,
    })
}
