//! SVG drawing of the planar subdivision: `m = 1` cells shaded, `m = 2` cells open.

use std::fmt::Write;

use crate::error::{invalid, Result};
use crate::geometry::BaryPoint;
use crate::rational;
use crate::subdivision::subdivide;

const WIDTH: f64 = 400.0;
const MARGIN: f64 = 10.0;

fn project(p: &BaryPoint) -> (f64, f64) {
    // e_1 bottom left, e_2 top, e_3 bottom right
    let c: Vec<f64> = p.coords().iter().map(rational::to_f64).collect();
    let height = WIDTH * 3f64.sqrt() / 2.0;
    let x = MARGIN + WIDTH * (c[1] / 2.0 + c[2]);
    let y = MARGIN + height * (1.0 - c[1]);
    (x, y)
}

pub fn emit_subdivision_svg(k: usize, n: u32) -> Result<String> {
    if k != 2 {
        return Err(invalid(format!("the subdivision figure is planar only (k = 2), got k = {k}")));
    }
    let cells = subdivide(k, n)?;
    let height = WIDTH * 3f64.sqrt() / 2.0 + 2.0 * MARGIN;
    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.0} {h:.0}">"#,
        w = WIDTH + 2.0 * MARGIN,
        h = height.ceil()
    )
    .unwrap();
    for cell in &cells {
        let pts: Vec<String> = cell
            .vertices()
            .iter()
            .map(|p| {
                let (x, y) = project(p);
                format!("{x:.3},{y:.3}")
            })
            .collect();
        let fill = if cell.m == 1 { "#b0b0b0" } else { "none" };
        writeln!(
            out,
            r#"  <polygon class="m{}" points="{}" fill="{}" stroke="black" stroke-width="1"/>"#,
            cell.m,
            pts.join(" "),
            fill
        )
        .unwrap();
    }
    out.push_str("</svg>\n");
    Ok(out)
}
