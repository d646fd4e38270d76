//! The rectangle covering model: unit-height rectangles organized in rows,
//! downward rays with demands, and prefix-constrained selections.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::ratio::{format_rat, rat_serde, Rat};

pub type RectId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rect {
    pub a: u64,
    pub b: u64,
    #[serde(with = "rat_serde")]
    pub c: Rat,
    pub p: u64,
}

impl Rect {
    pub fn width(&self) -> u64 {
        self.b - self.a
    }

    pub fn contains_x(&self, t: u64) -> bool {
        self.a <= t && t < self.b
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Row {
    /// Row index: the rectangles span [j, j+1) vertically.
    pub j: u64,
    pub rects: Vec<Rect>,
}

/// Downward ray at x = t with top y = s: {t} x (-inf, s].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ray {
    pub s: u64,
    pub t: u64,
    pub d: u64,
}

impl Ray {
    pub fn hits(&self, row_j: u64, rect: &Rect) -> bool {
        row_j <= self.s && rect.contains_x(self.t)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RcpInstance {
    pub rows: Vec<Row>,
    pub rays: Vec<Ray>,
}

/// Derived constants reported by validation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RcpStats {
    #[serde(with = "rat_serde")]
    pub k_ratio: Rat,
    pub distinct_costs: usize,
    pub p_max: u64,
    pub x_extent: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RcpDiagnostics {
    pub errors: Vec<String>,
    pub stats: RcpStats,
}

impl RcpInstance {
    pub fn rect_count(&self) -> usize {
        self.rows.iter().map(|w| w.rects.len()).sum()
    }

    /// Global rectangle ids are assigned row-major, then by left coordinate.
    pub fn rect_ids(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.rect_count());
        for (wi, row) in self.rows.iter().enumerate() {
            for ri in 0..row.rects.len() {
                out.push((wi, ri));
            }
        }
        out
    }

    pub fn rect(&self, id: RectId) -> (&Row, &Rect) {
        let mut id = id;
        for row in &self.rows {
            if id < row.rects.len() {
                return (row, &row.rects[id]);
            }
            id -= row.rects.len();
        }
        panic!("rectangle id out of range");
    }

    /// First global id of each row.
    pub fn row_base_ids(&self) -> Vec<RectId> {
        let mut base = Vec::with_capacity(self.rows.len());
        let mut acc = 0;
        for row in &self.rows {
            base.push(acc);
            acc += row.rects.len();
        }
        base
    }

    /// Validate all structural invariants and compute derived constants.
    pub fn validate(&self) -> RcpDiagnostics {
        let mut errors = Vec::new();
        let mut k_ratio = Rat::zero();
        let mut costs: BTreeSet<String> = BTreeSet::new();
        let mut p_max = 0u64;
        let mut x_extent = 0u64;
        let mut seen_rows = BTreeSet::new();
        for row in &self.rows {
            if !seen_rows.insert(row.j) {
                errors.push(format!("row index {} appears twice", row.j));
            }
            if row.rects.is_empty() {
                errors.push(format!("row {} has no rectangles", row.j));
                continue;
            }
            let p = row.rects[0].p;
            let mut total = Rat::zero();
            let mut min_cost: Option<Rat> = None;
            for (i, rect) in row.rects.iter().enumerate() {
                if rect.a >= rect.b {
                    errors.push(format!("row {}: rectangle [{},{}) is empty", row.j, rect.a, rect.b));
                }
                if !rect.c.is_positive() {
                    errors.push(format!("row {}: costs strictly positive", row.j));
                }
                if rect.p == 0 {
                    errors.push(format!("row {}: values strictly positive", row.j));
                }
                if rect.p != p {
                    errors.push(format!("row {}: all rectangles must share one value", row.j));
                }
                if i > 0 && row.rects[i - 1].b != rect.a {
                    errors.push(format!(
                        "row {} not consecutive at x={}",
                        row.j,
                        row.rects[i - 1].b
                    ));
                }
                total += rect.c.clone();
                min_cost = Some(match min_cost {
                    None => rect.c.clone(),
                    Some(m) => m.min(rect.c.clone()),
                });
                costs.insert(format_rat(&rect.c));
                p_max = p_max.max(rect.p);
                x_extent = x_extent.max(rect.b);
            }
            if let Some(m) = min_cost {
                if m.is_positive() {
                    let ratio = total / m;
                    if ratio > k_ratio {
                        k_ratio = ratio;
                    }
                }
            }
        }
        if k_ratio.is_zero() {
            k_ratio = Rat::one();
        }
        RcpDiagnostics {
            errors,
            stats: RcpStats {
                k_ratio,
                distinct_costs: costs.len(),
                p_max,
                x_extent,
            },
        }
    }
}

/// A set of rectangles; feasible selections are per-row prefixes.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Selection {
    pub ids: BTreeSet<RectId>,
}

impl Selection {
    pub fn empty() -> Self {
        Selection::default()
    }

    pub fn from_ids<I: IntoIterator<Item = RectId>>(ids: I) -> Self {
        Selection {
            ids: ids.into_iter().collect(),
        }
    }

    pub fn sorted_ids(&self) -> Vec<RectId> {
        self.ids.iter().copied().collect()
    }

    pub fn contains(&self, id: RectId) -> bool {
        self.ids.contains(&id)
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn union(&self, other: &Selection) -> Selection {
        Selection {
            ids: self.ids.union(&other.ids).copied().collect(),
        }
    }

    pub fn cost(&self, inst: &RcpInstance) -> Rat {
        let mut total = Rat::zero();
        for &id in &self.ids {
            total += inst.rect(id).1.c.clone();
        }
        total
    }
}

impl Serialize for Selection {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        self.sorted_ids().serialize(ser)
    }
}

impl<'de> Deserialize<'de> for Selection {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Bare(Vec<RectId>),
            Wrapped { selected: Vec<RectId> },
        }
        Ok(match Raw::deserialize(de)? {
            Raw::Bare(v) => Selection::from_ids(v),
            Raw::Wrapped { selected } => Selection::from_ids(selected),
        })
    }
}

/// True iff the selection is a per-row prefix starting at each row's leftmost
/// rectangle.
pub fn is_prefix_valid(inst: &RcpInstance, sel: &Selection) -> bool {
    let mut id = 0;
    for row in &inst.rows {
        let mut gap = false;
        for _rect in &row.rects {
            let here = sel.contains(id);
            if here && gap {
                return false;
            }
            if !here {
                gap = true;
            }
            id += 1;
        }
    }
    true
}

/// Total value of selected rectangles intersecting the ray.
pub fn coverage(inst: &RcpInstance, sel: &Selection, ray: &Ray) -> u64 {
    let mut total = 0u64;
    let mut id = 0;
    for row in &inst.rows {
        for rect in &row.rects {
            if sel.contains(id) && ray.hits(row.j, rect) {
                total += rect.p;
            }
            id += 1;
        }
    }
    total
}

/// Prefix property plus all ray demands met.
pub fn is_feasible(inst: &RcpInstance, sel: &Selection) -> bool {
    if !is_prefix_valid(inst, sel) {
        return false;
    }
    inst.rays
        .iter()
        .all(|ray| ray.d == 0 || coverage(inst, sel, ray) >= ray.d)
}

/// Smallest prefix-valid superset: in each row, every rectangle strictly left
/// of a chosen rectangle's right edge is added.
pub fn prefix_closure(inst: &RcpInstance, ids: &Selection) -> Selection {
    let mut out = BTreeSet::new();
    let mut base = 0;
    for row in &inst.rows {
        let mut max_right: Option<u64> = None;
        for (i, rect) in row.rects.iter().enumerate() {
            if ids.contains(base + i) {
                max_right = Some(max_right.map_or(rect.b, |m: u64| m.max(rect.b)));
            }
        }
        if let Some(m) = max_right {
            for (i, rect) in row.rects.iter().enumerate() {
                if rect.a < m {
                    out.insert(base + i);
                }
            }
        }
        base += row.rects.len();
    }
    Selection { ids: out }
}

#[cfg(test)]
pub(crate) fn r1_instance() -> RcpInstance {
    use crate::ratio::rat_int;
    RcpInstance {
        rows: vec![
            Row {
                j: 0,
                rects: vec![
                    Rect { a: 0, b: 2, c: rat_int(1), p: 3 },
                    Rect { a: 2, b: 4, c: rat_int(1), p: 3 },
                ],
            },
            Row {
                j: 1,
                rects: vec![Rect { a: 1, b: 3, c: rat_int(2), p: 2 }],
            },
        ],
        rays: vec![Ray { s: 1, t: 2, d: 5 }],
    }
}
