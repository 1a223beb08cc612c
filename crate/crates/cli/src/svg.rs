//! Self-contained SVG rendering of visibility maps and curves.

use std::fmt::Write;

use ptperm::{CurveSet, Geometry, VisibilityGrid};

const PLOT: f64 = 400.0;
const LEFT: f64 = 64.0;
const TOP: f64 = 36.0;
const BOTTOM: f64 = 56.0;
const GAP: f64 = 40.0;
const TICKS: usize = 5;
const UNDEFINED: &str = "#808080";

/// Diverging scale: blue at −1, white at 0, red at +1.
pub fn color(v: Option<f64>) -> String {
    let Some(v) = v.filter(|v| v.is_finite()) else {
        return UNDEFINED.to_string();
    };
    let t = v.clamp(-1.0, 1.0);
    let fade = (255.0 * (1.0 - t.abs())).round() as u8;
    if t < 0.0 {
        format!("#{fade:02x}{fade:02x}ff")
    } else {
        format!("#ff{fade:02x}{fade:02x}")
    }
}

fn tick_label(v: f64) -> String {
    let s = format!("{v:.2}");
    if s == "-0.00" {
        "0.00".into()
    } else {
        s
    }
}

fn header(out: &mut String, width: f64, height: f64) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(
        out,
        r#"<rect width="{width}" height="{height}" fill="white"/>"#
    );
}

/// Axis line with ticks along the bottom (`vertical = false`) or left edge.
#[allow(clippy::too_many_arguments)]
fn axis(
    out: &mut String,
    x0: f64,
    y0: f64,
    len: f64,
    lo: f64,
    hi: f64,
    vertical: bool,
    label: &str,
) {
    if vertical {
        let _ = writeln!(
            out,
            r#"<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{}" stroke="black"/>"#,
            y0 - len
        );
    } else {
        let _ = writeln!(
            out,
            r#"<line x1="{x0}" y1="{y0}" x2="{}" y2="{y0}" stroke="black"/>"#,
            x0 + len
        );
    }
    for k in 0..TICKS {
        let f = k as f64 / (TICKS - 1) as f64;
        let v = lo + f * (hi - lo);
        if vertical {
            let y = y0 - f * len;
            let _ = writeln!(
                out,
                r#"<line x1="{}" y1="{y:.2}" x2="{x0}" y2="{y:.2}" stroke="black"/><text x="{}" y="{:.2}" text-anchor="end">{}</text>"#,
                x0 - 5.0,
                x0 - 8.0,
                y + 4.0,
                tick_label(v)
            );
        } else {
            let x = x0 + f * len;
            let _ = writeln!(
                out,
                r#"<line x1="{x:.2}" y1="{y0}" x2="{x:.2}" y2="{}" stroke="black"/><text x="{x:.2}" y="{}" text-anchor="middle">{}</text>"#,
                y0 + 5.0,
                y0 + 18.0,
                tick_label(v)
            );
        }
    }
    if vertical {
        let (x, y) = (x0 - 46.0, y0 - len / 2.0);
        let _ = writeln!(
            out,
            r#"<text x="{x}" y="{y}" text-anchor="middle" transform="rotate(-90 {x} {y})">{label}</text>"#
        );
    } else {
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" text-anchor="middle">{label}</text>"#,
            x0 + len / 2.0,
            y0 + 38.0
        );
    }
}

/// One heatmap panel per grid, side by side, κl horizontal and γ/κ upward.
pub fn heatmaps(grids: &[VisibilityGrid]) -> String {
    let panel = LEFT + PLOT + GAP;
    let width = panel * grids.len() as f64;
    let height = TOP + PLOT + BOTTOM;
    let mut out = String::new();
    header(&mut out, width, height);
    for (p, grid) in grids.iter().enumerate() {
        let x0 = p as f64 * panel + LEFT;
        let y0 = TOP + PLOT;
        let (nk, ng) = (grid.kl_axis.len(), grid.gok_axis.len());
        let (w, h) = (PLOT / nk as f64, PLOT / ng as f64);
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" text-anchor="middle" font-size="13">{}</text>"#,
            x0 + PLOT / 2.0,
            TOP - 14.0,
            grid.config
        );
        for g in 0..ng {
            for k in 0..nk {
                let _ = writeln!(
                    out,
                    r#"<rect x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}" fill="{}"/>"#,
                    x0 + k as f64 * w,
                    y0 - (g + 1) as f64 * h,
                    w,
                    h,
                    color(grid.get(k, g))
                );
            }
        }
        let (kl0, kl1) = (grid.kl_axis[0], grid.kl_axis[nk - 1]);
        let (g0, g1) = (grid.gok_axis[0].re, grid.gok_axis[ng - 1].re);
        // Ticks sit on cell centres.
        axis(&mut out, x0 + w / 2.0, y0, PLOT - w, kl0, kl1, false, "κl");
        axis(&mut out, x0, y0 - h / 2.0, PLOT - h, g0, g1, true, "γ/κ");
    }
    out.push_str("</svg>\n");
    out
}

fn line_color(g: Geometry) -> &'static str {
    match g {
        Geometry::MXmtx => "#1f77b4",
        Geometry::MMt => "#d62728",
        Geometry::MtM => "#2ca02c",
        Geometry::XmtxM => "#ff7f0e",
    }
}

/// Visibility against length, one polyline per geometry, `V ∈ [−1, 1]`.
pub fn curves(set: &CurveSet) -> String {
    let plot_w = 1.5 * PLOT;
    let width = LEFT + plot_w + 120.0;
    let height = TOP + PLOT + BOTTOM;
    let mut out = String::new();
    header(&mut out, width, height);
    let (x0, y0) = (LEFT, TOP + PLOT);
    let lo = set.lengths[0];
    let hi = set.lengths[set.lengths.len() - 1];
    let span = if hi > lo { hi - lo } else { 1.0 };
    let _ = writeln!(
        out,
        r##"<line x1="{x0}" y1="{}" x2="{}" y2="{}" stroke="#bbbbbb" stroke-dasharray="4 3"/>"##,
        y0 - PLOT / 2.0,
        x0 + plot_w,
        y0 - PLOT / 2.0
    );
    for (i, (g, values)) in set.configs.iter().zip(&set.values).enumerate() {
        // Undefined samples break the line.
        let mut runs: Vec<Vec<(f64, f64)>> = vec![Vec::new()];
        for (l, v) in set.lengths.iter().zip(values) {
            match v {
                Some(v) if v.is_finite() => {
                    let x = x0 + (l - lo) / span * plot_w;
                    let y = y0 - (v.clamp(-1.0, 1.0) + 1.0) / 2.0 * PLOT;
                    runs.last_mut().unwrap().push((x, y));
                }
                _ => runs.push(Vec::new()),
            }
        }
        for run in runs.iter().filter(|r| !r.is_empty()) {
            let pts: Vec<String> = run.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
            let _ = writeln!(
                out,
                r#"<polyline fill="none" stroke="{}" stroke-width="1.5" points="{}"/>"#,
                line_color(*g),
                pts.join(" ")
            );
        }
        let ly = TOP + 16.0 * i as f64;
        let lx = x0 + plot_w + 16.0;
        let _ = writeln!(
            out,
            r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{}" stroke-width="2"/><text x="{}" y="{}">{g}</text>"#,
            lx + 20.0,
            line_color(*g),
            lx + 26.0,
            ly + 4.0
        );
    }
    axis(&mut out, x0, y0, plot_w, lo, hi, false, "length");
    axis(&mut out, x0, y0, PLOT, -1.0, 1.0, true, "V");
    out.push_str("</svg>\n");
    out
}
