//! Recursion nodes: an RCP restriction to a vertical strip, with rays split
//! into those meeting the strip and those outside it. Rectangles may stick
//! out of the strip; every row has at least one rectangle meeting it.

use num_traits::Zero;

use crate::ratio::Rat;
use crate::rcp::instance::{RcpInstance, Ray, Rect, Row, Selection};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Area {
    pub left: u64,
    pub right: u64,
}

impl Area {
    pub fn width(&self) -> u64 {
        self.right - self.left
    }

    pub fn mid(&self) -> u64 {
        self.left + self.width() / 2
    }

    pub fn contains_x(&self, t: u64) -> bool {
        self.left <= t && t < self.right
    }

    pub fn left_half(&self) -> Area {
        Area { left: self.left, right: self.mid() }
    }

    pub fn right_half(&self) -> Area {
        Area { left: self.mid(), right: self.right }
    }
}

/// One rectangle inside a node. `parent` links to the enclosing node's
/// rectangle id (splits map both halves to the same parent). `cost` may be
/// adjusted relative to the parent's cost during splitting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubRect {
    pub id: usize,
    pub parent: Option<usize>,
    pub a: u64,
    pub b: u64,
    pub cost: Rat,
    pub value: u64,
}

impl SubRect {
    pub fn contains_x(&self, t: u64) -> bool {
        self.a <= t && t < self.b
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubRow {
    pub y: u64,
    pub rects: Vec<SubRect>,
}

impl SubRow {
    pub fn left(&self) -> u64 {
        self.rects[0].a
    }

    pub fn right(&self) -> u64 {
        self.rects.last().unwrap().b
    }

    pub fn value(&self) -> u64 {
        self.rects[0].value
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subproblem {
    pub area: Area,
    pub rows: Vec<SubRow>,
    pub rays: Vec<Ray>,
}

impl Subproblem {
    /// Root node over the whole instance: the area is the dyadic hull
    /// [0, 2^k) with 2^k >= max right(R).
    pub fn root(inst: &RcpInstance) -> Subproblem {
        let max_right = inst
            .rows
            .iter()
            .flat_map(|w| w.rects.iter().map(|r| r.b))
            .max()
            .unwrap_or(1);
        let mut width = 1u64;
        while width < max_right {
            width *= 2;
        }
        let mut rows = Vec::new();
        let mut id = 0;
        for row in &inst.rows {
            let rects = row
                .rects
                .iter()
                .map(|r| {
                    let sr = SubRect {
                        id,
                        parent: Some(id),
                        a: r.a,
                        b: r.b,
                        cost: r.c.clone(),
                        value: r.p,
                    };
                    id += 1;
                    sr
                })
                .collect();
            rows.push(SubRow { y: row.j, rects });
        }
        Subproblem {
            area: Area { left: 0, right: width },
            rows,
            rays: inst.rays.clone(),
        }
    }

    pub fn rect_count(&self) -> usize {
        self.rows.iter().map(|w| w.rects.len()).sum()
    }

    pub fn rect(&self, id: usize) -> (&SubRow, &SubRect) {
        for row in &self.rows {
            for rect in &row.rects {
                if rect.id == id {
                    return (row, rect);
                }
            }
        }
        panic!("rect id {id} not in subproblem");
    }

    pub fn interior_rays(&self) -> impl Iterator<Item = &Ray> {
        self.rays.iter().filter(|r| self.area.contains_x(r.t))
    }

    pub fn out_rays(&self) -> impl Iterator<Item = &Ray> {
        self.rays.iter().filter(|r| !self.area.contains_x(r.t))
    }

    /// View as a standalone RCP instance (ids re-based row-major); returns the
    /// id map from standalone ids to node ids.
    pub fn as_instance(&self) -> (RcpInstance, Vec<usize>) {
        let mut id_map = Vec::with_capacity(self.rect_count());
        let rows = self
            .rows
            .iter()
            .map(|row| Row {
                j: row.y,
                rects: row
                    .rects
                    .iter()
                    .map(|r| {
                        id_map.push(r.id);
                        Rect { a: r.a, b: r.b, c: r.cost.clone(), p: r.value }
                    })
                    .collect(),
            })
            .collect();
        (
            RcpInstance {
                rows,
                rays: self.rays.clone(),
            },
            id_map,
        )
    }

    pub fn coverage(&self, sel: &Selection, ray: &Ray) -> u64 {
        let mut total = 0;
        for row in &self.rows {
            if row.y > ray.s {
                continue;
            }
            for rect in &row.rects {
                if sel.contains(rect.id) && rect.contains_x(ray.t) {
                    total += rect.value;
                }
            }
        }
        total
    }

    pub fn is_prefix_valid(&self, sel: &Selection) -> bool {
        for row in &self.rows {
            let mut gap = false;
            for rect in &row.rects {
                let here = sel.contains(rect.id);
                if here && gap {
                    return false;
                }
                if !here {
                    gap = true;
                }
            }
        }
        true
    }

    pub fn is_feasible(&self, sel: &Selection) -> bool {
        self.is_prefix_valid(sel)
            && self
                .rays
                .iter()
                .all(|ray| ray.d == 0 || self.coverage(sel, ray) >= ray.d)
    }

    pub fn selection_cost(&self, sel: &Selection) -> Rat {
        let mut total = Rat::zero();
        for row in &self.rows {
            for rect in &row.rects {
                if sel.contains(rect.id) {
                    total += rect.cost.clone();
                }
            }
        }
        total
    }

    /// Prefix closure in node-id space.
    pub fn prefix_closure(&self, sel: &Selection) -> Selection {
        let mut out = Vec::new();
        for row in &self.rows {
            let mut max_right: Option<u64> = None;
            for rect in &row.rects {
                if sel.contains(rect.id) {
                    max_right = Some(max_right.map_or(rect.b, |m: u64| m.max(rect.b)));
                }
            }
            if let Some(m) = max_right {
                for rect in &row.rects {
                    if rect.a < m {
                        out.push(rect.id);
                    }
                }
            }
        }
        Selection::from_ids(out)
    }
}
