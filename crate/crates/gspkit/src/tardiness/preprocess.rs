//! Cost-ratio control for dyadically structured instances: guess the most
//! expensive rectangle of the optimum, discard what no solution can take,
//! and force-select every row containing a very cheap rectangle.

use num_traits::Zero;

use crate::ratio::{rat_u64, Rat};
use crate::rcp::instance::{coverage, RcpInstance, Ray, RectId, Row, Selection};

#[derive(Debug, Clone)]
pub struct TardinessCandidate {
    pub r_max: RectId,
    pub instance: RcpInstance,
    pub forced: Selection,
    pub forced_cost: Rat,
    pub id_map: Vec<RectId>,
    /// max cost / min cost of the reduced instance (1 when empty).
    pub cost_ratio: Rat,
}

/// One candidate per distinct guessed maximal cost.
pub fn tardiness_preprocess(inst: &RcpInstance, eps: &Rat) -> Vec<TardinessCandidate> {
    let diag = inst.validate();
    let k_ratio = diag.stats.k_ratio;
    let n_rects = rat_u64(inst.rect_count() as u64);
    let mut seen_costs = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for (r_max, (_, rect)) in (0..inst.rect_count()).map(|id| (id, inst.rect(id))) {
        if !seen_costs.insert(crate::ratio::format_rat(&rect.c)) {
            continue;
        }
        let c_max = rect.c.clone();
        let cheap = eps.clone() * c_max.clone() / (n_rects.clone() * k_ratio.clone());

        let mut forced_ids = Vec::new();
        let mut forced_cost = Rat::zero();
        let mut id_map = Vec::new();
        let mut rows = Vec::new();
        let mut id = 0usize;
        for row in &inst.rows {
            let keep: Vec<(RectId, &crate::rcp::instance::Rect)> = {
                let mut v = Vec::new();
                let mut cut = false;
                for (i, r) in row.rects.iter().enumerate() {
                    if cut || r.c > c_max {
                        cut = true;
                    } else {
                        v.push((id + i, r));
                    }
                }
                v
            };
            let any_cheap = keep.iter().any(|(_, r)| r.c <= cheap);
            if any_cheap {
                for (gid, r) in &keep {
                    forced_ids.push(*gid);
                    forced_cost += r.c.clone();
                }
            } else if !keep.is_empty() {
                let rects = keep
                    .iter()
                    .map(|(gid, r)| {
                        id_map.push(*gid);
                        (*r).clone()
                    })
                    .collect();
                rows.push(Row { j: row.j, rects });
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
        let reduced = RcpInstance { rows, rays };
        let cost_ratio = {
            let costs: Vec<&Rat> = reduced
                .rows
                .iter()
                .flat_map(|w| w.rects.iter().map(|r| &r.c))
                .collect();
            match (costs.iter().max(), costs.iter().min()) {
                (Some(mx), Some(mn)) => (*mx).clone() / (*mn).clone(),
                _ => Rat::from_integer(1.into()),
            }
        };
        out.push(TardinessCandidate {
            r_max,
            instance: reduced,
            forced,
            forced_cost,
            id_map,
            cost_ratio,
        });
    }
    out
}

/// The concrete ratio budget: K * |R| / eps.
pub fn ratio_budget(inst: &RcpInstance, eps: &Rat) -> Rat {
    let diag = inst.validate();
    diag.stats.k_ratio * rat_u64(inst.rect_count() as u64) / eps.clone()
}
