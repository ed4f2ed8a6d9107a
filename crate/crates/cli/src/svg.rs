//! Minimal SVG line chart of the three correlation curves.

use crate::output::TrajectoryTable;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const MARGIN_L: f64 = 70.0;
const MARGIN_R: f64 = 20.0;
const MARGIN_T: f64 = 30.0;
const MARGIN_B: f64 = 55.0;

struct Scale {
    min: f64,
    max: f64,
    lo_px: f64,
    hi_px: f64,
}

impl Scale {
    fn map(&self, v: f64) -> f64 {
        if self.max == self.min {
            return 0.5 * (self.lo_px + self.hi_px);
        }
        self.lo_px + (v - self.min) / (self.max - self.min) * (self.hi_px - self.lo_px)
    }
}

fn polyline(t: &[f64], y: &[f64], xs: &Scale, ys: &Scale, color: &str) -> String {
    let pts: Vec<String> = t
        .iter()
        .zip(y)
        .map(|(&ti, &yi)| format!("{:.2},{:.2}", xs.map(ti), ys.map(yi)))
        .collect();
    format!(
        "  <polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" points=\"{}\"/>\n",
        pts.join(" ")
    )
}

fn ticks(min: f64, max: f64, count: usize) -> Vec<f64> {
    (0..=count)
        .map(|i| min + (max - min) * i as f64 / count as f64)
        .collect()
}

/// Renders mutual information, classical and quantum correlation against
/// time as a standalone SVG document.
pub fn trajectory_svg(table: &TrajectoryTable) -> String {
    let t_min = table.t.first().copied().unwrap_or(0.0);
    let t_max = table.t.last().copied().unwrap_or(1.0);
    let mut y_max = 0.0f64;
    let mut y_min = 0.0f64;
    for series in [&table.mutual_info, &table.classical, &table.quantum] {
        for &v in series.iter() {
            y_max = y_max.max(v);
            y_min = y_min.min(v);
        }
    }
    if y_max == y_min {
        y_max = y_min + 1.0;
    }
    y_max *= 1.05;

    let xs = Scale {
        min: t_min,
        max: t_max,
        lo_px: MARGIN_L,
        hi_px: WIDTH - MARGIN_R,
    };
    let ys = Scale {
        min: y_min,
        max: y_max,
        lo_px: HEIGHT - MARGIN_B,
        hi_px: MARGIN_T,
    };

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
    ));
    svg.push_str("  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");

    // axes
    svg.push_str(&format!(
        "  <line x1=\"{MARGIN_L}\" y1=\"{MARGIN_T}\" x2=\"{MARGIN_L}\" y2=\"{}\" stroke=\"black\"/>\n",
        HEIGHT - MARGIN_B
    ));
    svg.push_str(&format!(
        "  <line x1=\"{MARGIN_L}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n",
        HEIGHT - MARGIN_B,
        WIDTH - MARGIN_R,
        HEIGHT - MARGIN_B
    ));
    for tv in ticks(t_min, t_max, 5) {
        let x = xs.map(tv);
        svg.push_str(&format!(
            "  <line x1=\"{x:.2}\" y1=\"{}\" x2=\"{x:.2}\" y2=\"{}\" stroke=\"black\"/>\n",
            HEIGHT - MARGIN_B,
            HEIGHT - MARGIN_B + 5.0
        ));
        svg.push_str(&format!(
            "  <text x=\"{x:.2}\" y=\"{}\" font-size=\"12\" text-anchor=\"middle\">{tv:.3}</text>\n",
            HEIGHT - MARGIN_B + 20.0
        ));
    }
    for yv in ticks(y_min, y_max, 5) {
        let y = ys.map(yv);
        svg.push_str(&format!(
            "  <line x1=\"{}\" y1=\"{y:.2}\" x2=\"{MARGIN_L}\" y2=\"{y:.2}\" stroke=\"black\"/>\n",
            MARGIN_L - 5.0
        ));
        svg.push_str(&format!(
            "  <text x=\"{}\" y=\"{:.2}\" font-size=\"12\" text-anchor=\"end\">{yv:.3}</text>\n",
            MARGIN_L - 9.0,
            y + 4.0
        ));
    }
    svg.push_str(&format!(
        "  <text x=\"{}\" y=\"{}\" font-size=\"13\" text-anchor=\"middle\">t (s)</text>\n",
        0.5 * (MARGIN_L + WIDTH - MARGIN_R),
        HEIGHT - 12.0
    ));
    svg.push_str(&format!(
        "  <text x=\"16\" y=\"{}\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 {})\">correlation (eps^2/ln2) bit</text>\n",
        0.5 * HEIGHT,
        0.5 * HEIGHT
    ));

    svg.push_str(&polyline(&table.t, &table.mutual_info, &xs, &ys, "#1f6fb4"));
    svg.push_str(&polyline(&table.t, &table.classical, &xs, &ys, "#d03030"));
    svg.push_str(&polyline(&table.t, &table.quantum, &xs, &ys, "#2c9a40"));

    // legend
    let legend = [("I", "#1f6fb4"), ("C", "#d03030"), ("Q", "#2c9a40")];
    for (i, (name, color)) in legend.iter().enumerate() {
        let y = MARGIN_T + 16.0 * i as f64;
        let x = WIDTH - MARGIN_R - 90.0;
        svg.push_str(&format!(
            "  <line x1=\"{x}\" y1=\"{y}\" x2=\"{}\" y2=\"{y}\" stroke=\"{color}\" stroke-width=\"2\"/>\n",
            x + 24.0
        ));
        svg.push_str(&format!(
            "  <text x=\"{}\" y=\"{}\" font-size=\"13\">{name}</text>\n",
            x + 30.0,
            y + 4.0
        ));
    }
    svg.push_str("</svg>\n");
    svg
}
