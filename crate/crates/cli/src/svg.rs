//! Barcode plots as standalone SVG.

use std::fmt::Write;

use qtda_core::homology::Barcode;

pub const WIDTH: f64 = 800.0;
pub const HEIGHT: f64 = 400.0;

const LEFT: f64 = 50.0;
const RIGHT: f64 = 30.0;
const TOP: f64 = 20.0;
const BOTTOM: f64 = 50.0;
const COLORS: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

/// One row per interval, grouped by dimension, with ticks at `critical`.
/// Infinite bars run to the right edge of the plot area and end in an arrow.
pub fn barcode_svg(barcode: &Barcode, critical: &[f64]) -> String {
    let finite_max = barcode
        .bars
        .iter()
        .flatten()
        .flat_map(|i| [Some(i.birth), i.death])
        .flatten()
        .chain(critical.iter().copied())
        .fold(0.0, f64::max);
    let x_max = if finite_max > 0.0 { finite_max * 1.1 } else { 1.0 };
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let x = |v: f64| LEFT + plot_w * v / x_max;
    let rows: usize = barcode.bars.iter().map(Vec::len).sum();
    let step = plot_h / rows.max(1) as f64;
    let thickness = (step * 0.6).min(12.0);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(s, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let axis_y = TOP + plot_h;
    let _ = writeln!(
        s,
        r#"<line class="axis" x1="{LEFT}" y1="{axis_y}" x2="{:.2}" y2="{axis_y}" stroke="black"/>"#,
        WIDTH - RIGHT
    );
    for &c in critical {
        let cx = x(c);
        let _ = writeln!(
            s,
            r##"<line class="tick" x1="{cx:.2}" y1="{TOP}" x2="{cx:.2}" y2="{:.2}" stroke="#bbbbbb" stroke-dasharray="2,3"/>"##,
            axis_y + 5.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{cx:.2}" y="{:.2}" font-size="9" text-anchor="end" transform="rotate(-45 {cx:.2} {:.2})">{}</text>"#,
            axis_y + 16.0,
            axis_y + 16.0,
            tick_label(c)
        );
    }

    let mut row = 0;
    for (k, bars) in barcode.bars.iter().enumerate() {
        let color = COLORS[k % COLORS.len()];
        if !bars.is_empty() {
            let label_y = TOP + step * (row as f64 + bars.len() as f64 / 2.0) + 4.0;
            let _ = writeln!(s, r#"<text x="8" y="{label_y:.2}" font-size="12">H{k}</text>"#);
        }
        for bar in bars {
            let y = TOP + step * (row as f64 + 0.5) - thickness / 2.0;
            let x0 = x(bar.birth);
            let x1 = bar.death.map_or(WIDTH - RIGHT, x);
            let _ = writeln!(
                s,
                r#"<rect class="bar" data-dim="{k}" x="{x0:.2}" y="{y:.2}" width="{:.2}" height="{thickness:.2}" fill="{color}"/>"#,
                (x1 - x0).max(1.0)
            );
            if bar.death.is_none() {
                let cy = y + thickness / 2.0;
                let _ = writeln!(
                    s,
                    r#"<path d="M{:.2} {:.2} L{:.2} {cy:.2} L{:.2} {:.2} Z" fill="{color}"/>"#,
                    x1,
                    cy - thickness,
                    x1 + 10.0,
                    x1,
                    cy + thickness
                );
            }
            row += 1;
        }
    }
    s.push_str("</svg>\n");
    s
}

fn tick_label(v: f64) -> String {
    let t = format!("{v:.4}");
    let t = t.trim_end_matches('0').trim_end_matches('.');
    t.to_owned()
}
