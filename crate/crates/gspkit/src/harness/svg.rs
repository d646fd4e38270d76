//! SVG rendering of covering instances: rectangles as boxes on a 16px unit
//! grid, rays as dotted downward arrows drawn at half-integer offsets,
//! selected rectangles shaded.

use std::fmt::Write;

use crate::rcp::instance::{RcpInstance, Selection};

const UNIT: u64 = 16;

pub fn render_svg(inst: &RcpInstance, selection: Option<&Selection>) -> String {
    let x_max = inst
        .rows
        .iter()
        .flat_map(|w| w.rects.iter().map(|r| r.b))
        .chain(inst.rays.iter().map(|l| l.t + 1))
        .max()
        .unwrap_or(4);
    let y_max = inst
        .rows
        .iter()
        .map(|w| w.j + 1)
        .chain(inst.rays.iter().map(|l| l.s + 1))
        .max()
        .unwrap_or(4);
    let margin = 2 * UNIT;
    let width = x_max * UNIT + 2 * margin;
    let height = (y_max + 2) * UNIT + 2 * margin;
    // SVG y grows downward; instance y grows upward from the axis line
    let axis_y = height - margin;
    let ypix = |j: u64| axis_y - (j + 1) * UNIT;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">"
    );
    let _ = writeln!(
        svg,
        "  <line x1=\"{m}\" y1=\"{axis_y}\" x2=\"{}\" y2=\"{axis_y}\" stroke=\"black\"/>",
        width - margin,
        m = margin
    );
    let _ = writeln!(
        svg,
        "  <line x1=\"{m}\" y1=\"{axis_y}\" x2=\"{m}\" y2=\"{top}\" stroke=\"black\"/>",
        m = margin,
        top = margin
    );
    let mut id = 0usize;
    for row in &inst.rows {
        for rect in &row.rects {
            let selected = selection.is_some_and(|s| s.contains(id));
            let fill = if selected { "#7799dd" } else { "#e8e8f2" };
            let _ = writeln!(
                svg,
                "  <rect x=\"{x}\" y=\"{y}\" width=\"{w}\" height=\"{h}\" fill=\"{fill}\" stroke=\"#333\"/>",
                x = margin + rect.a * UNIT,
                y = ypix(row.j),
                w = (rect.b - rect.a) * UNIT,
                h = UNIT,
            );
            id += 1;
        }
    }
    for ray in &inst.rays {
        // drawn at (t + 1/2, s + 1/2) so the line avoids box boundaries
        let x = margin + ray.t * UNIT + UNIT / 2;
        let y_top = ypix(ray.s) + UNIT / 2;
        let y_bot = axis_y + UNIT;
        let _ = writeln!(
            svg,
            "  <line x1=\"{x}\" y1=\"{y_top}\" x2=\"{x}\" y2=\"{y_bot}\" stroke=\"#a33\" stroke-dasharray=\"3 2\"/>"
        );
        let _ = writeln!(
            svg,
            "  <path d=\"M {} {} L {} {} L {} {} Z\" fill=\"#a33\"/>",
            x - 4,
            y_bot,
            x + 4,
            y_bot,
            x,
            y_bot + 6
        );
        let _ = writeln!(
            svg,
            "  <text x=\"{}\" y=\"{}\" font-size=\"10\" fill=\"#a33\">{}</text>",
            x + 5,
            y_bot,
            ray.d
        );
    }
    svg.push_str("</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rcp::instance::r1_instance;

    #[test]
    fn r1_has_three_boxes_and_one_arrow() {
        let svg = render_svg(&r1_instance(), None);
        assert_eq!(svg.matches("<rect ").count(), 3);
        assert_eq!(svg.matches("stroke-dasharray").count(), 1);
    }

    #[test]
    fn selection_is_shaded() {
        let sel = Selection::from_ids([0, 1, 2]);
        let svg = render_svg(&r1_instance(), Some(&sel));
        assert_eq!(svg.matches("#7799dd").count(), 3);
    }

    #[test]
    fn empty_instance_still_draws_axes() {
        let empty = RcpInstance { rows: vec![], rays: vec![] };
        let svg = render_svg(&empty, None);
        assert_eq!(svg.matches("<line ").count(), 2);
    }
}
