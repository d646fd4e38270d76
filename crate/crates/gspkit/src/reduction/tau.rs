//! Block starts: each job's milestone indices are sliced into blocks of
//! length at most (1/eps)^3, with an offset shifting the slice boundaries and
//! every large cost jump forced to start its own block.

use crate::gsp::instance::Job;
use crate::ratio::{CostVal, Rat};
use crate::reduction::milestones::MilestoneSequence;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockStarts {
    pub job: usize,
    /// Strictly increasing, starts at 1; indices of milestone steps that head
    /// a block. Index 0 forms its own implicit block.
    pub starts: Vec<usize>,
}

/// (1/eps)^3 as an integer; eps must be a unit fraction.
pub fn block_span(eps: &Rat) -> u64 {
    let inv = eps.recip();
    assert!(inv.is_integer(), "eps must be 1/k");
    let v = inv.to_integer();
    let v: u64 = v.try_into().expect("1/eps fits u64");
    v * v * v
}

/// True if step i of the milestone sequence is a large jump: the cost at the
/// next milestone exceeds 1/eps times the cost at this one. Infinite next
/// cost counts as a jump unless the current cost is already infinite.
fn is_large_jump(job: &Job, seq: &MilestoneSequence, i: usize, eps: &Rat) -> bool {
    let cur = seq.cost_at(job, i);
    let next = seq.cost_at(job, i + 1);
    match (cur, next) {
        (CostVal::Infinite, _) => false,
        (CostVal::Finite(_), CostVal::Infinite) => true,
        (CostVal::Finite(c), CostVal::Finite(n)) => n > c * eps.clone().recip(),
    }
}

pub fn build_block_starts(
    job: &Job,
    seq: &MilestoneSequence,
    offset: u64,
    eps: &Rat,
) -> BlockStarts {
    let span = block_span(eps);
    assert!(offset >= 1 && offset <= span, "offset in 1..=(1/eps)^3");
    let f = seq.last_index();
    let mut starts: Vec<usize> = vec![1];
    let mut k = 2u64;
    loop {
        let v = offset + (k - 1) * span;
        if v as usize > f {
            break;
        }
        starts.push(v as usize);
        k += 1;
    }
    for i in 1..f {
        if is_large_jump(job, seq, i, eps) && !starts.contains(&i) {
            starts.push(i);
        }
    }
    starts.sort_unstable();
    starts.dedup();
    starts.retain(|&s| s <= f);
    BlockStarts { job: job.id, starts }
}

/// Runtime certificate: starts increasing from 1, gaps at most 2*(1/eps)^3,
/// and every large jump present.
pub fn check_block_starts(
    job: &Job,
    seq: &MilestoneSequence,
    starts: &BlockStarts,
    eps: &Rat,
) -> Vec<String> {
    let mut v = Vec::new();
    let span = block_span(eps);
    if starts.starts.first() != Some(&1) {
        v.push("block starts must begin at 1".into());
    }
    for w in starts.starts.windows(2) {
        if w[1] <= w[0] {
            v.push("block starts must increase".into());
        }
        if (w[1] - w[0]) as u64 > 2 * span {
            v.push(format!("gap {} exceeds 2*(1/eps)^3", w[1] - w[0]));
        }
    }
    let f = seq.last_index();
    for i in 1..f {
        if is_large_jump(job, seq, i, eps) && !starts.starts.contains(&i) {
            v.push(format!("large jump at step {i} missing"));
        }
    }
    v
}
