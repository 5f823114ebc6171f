//! Minimal SVG heatmaps and line charts.

use std::fmt::Write;

/// Eight-stop viridis-like ramp from low to high.
pub const RAMP: [(u8, u8, u8); 8] = [
    (68, 1, 84),
    (70, 50, 126),
    (54, 92, 141),
    (39, 127, 142),
    (31, 161, 135),
    (74, 193, 109),
    (160, 218, 57),
    (253, 231, 37),
];

const SERIES_COLOURS: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

const WIDTH: f64 = 560.0;
const HEIGHT: f64 = 460.0;
const LEFT: f64 = 70.0;
const TOP: f64 = 40.0;
const PLOT: f64 = 360.0;

/// Colour for `t ∈ [0, 1]`, linearly interpolated between ramp stops.
pub fn ramp_colour(t: f64) -> String {
    let t = if t.is_finite() { t.clamp(0.0, 1.0) } else { 0.0 };
    let pos = t * (RAMP.len() - 1) as f64;
    let i = (pos.floor() as usize).min(RAMP.len() - 2);
    let f = pos - i as f64;
    let mix = |a: u8, b: u8| (a as f64 + (b as f64 - a as f64) * f).round() as u8;
    let (a, b) = (RAMP[i], RAMP[i + 1]);
    format!("#{:02x}{:02x}{:02x}", mix(a.0, b.0), mix(a.1, b.1), mix(a.2, b.2))
}

fn fmt_tick(v: f64) -> String {
    crate::format::format_g(v, 4)
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn finite_range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) =
        values.filter(|v| v.is_finite()).fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    if hi > lo {
        (lo, hi)
    } else {
        (lo - 0.5, hi + 0.5)
    }
}

fn header(svg: &mut String, title: &str) {
    let _ = write!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\" font-family=\"sans-serif\" font-size=\"12\">\n\
         <rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>\n\
         <text x=\"{:.1}\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">{}</text>\n",
        LEFT + PLOT / 2.0,
        escape(title)
    );
}

fn axes(svg: &mut String, (x0, x1): (f64, f64), (y0, y1): (f64, f64), x_label: &str, y_label: &str) {
    let bottom = TOP + PLOT;
    let _ = writeln!(
        svg,
        "<rect x=\"{LEFT}\" y=\"{TOP}\" width=\"{PLOT}\" height=\"{PLOT}\" fill=\"none\" stroke=\"black\"/>"
    );
    for k in 0..=5 {
        let f = k as f64 / 5.0;
        let px = LEFT + f * PLOT;
        let py = bottom - f * PLOT;
        let _ = writeln!(
            svg,
            "<line x1=\"{px:.1}\" y1=\"{bottom}\" x2=\"{px:.1}\" y2=\"{:.1}\" stroke=\"black\"/>\
             <text x=\"{px:.1}\" y=\"{:.1}\" text-anchor=\"middle\">{}</text>",
            bottom + 5.0,
            bottom + 18.0,
            fmt_tick(x0 + f * (x1 - x0))
        );
        let _ = writeln!(
            svg,
            "<line x1=\"{:.1}\" y1=\"{py:.1}\" x2=\"{LEFT}\" y2=\"{py:.1}\" stroke=\"black\"/>\
             <text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"end\">{}</text>",
            LEFT - 5.0,
            LEFT - 8.0,
            py + 4.0,
            fmt_tick(y0 + f * (y1 - y0))
        );
    }
    let _ = writeln!(
        svg,
        "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"middle\">{}</text>\n\
         <text x=\"18\" y=\"{:.1}\" text-anchor=\"middle\" transform=\"rotate(-90 18 {:.1})\">{}</text>",
        LEFT + PLOT / 2.0,
        bottom + 38.0,
        escape(x_label),
        TOP + PLOT / 2.0,
        TOP + PLOT / 2.0,
        escape(y_label)
    );
}

/// Heatmap of `values[j * xs.len() + i]` at `(xs[i], ys[j])`; non-finite
/// cells are drawn grey.
pub fn heatmap(title: &str, xs: &[f64], ys: &[f64], values: &[f64], x_label: &str, y_label: &str) -> String {
    assert_eq!(values.len(), xs.len() * ys.len(), "heatmap needs one value per cell");
    let (lo, hi) = finite_range(values.iter().copied());
    let (x0, x1) = (xs[0], xs[xs.len() - 1]);
    let (y0, y1) = (ys[0], ys[ys.len() - 1]);
    let (cw, ch) = (PLOT / xs.len() as f64, PLOT / ys.len() as f64);

    let mut svg = String::new();
    header(&mut svg, title);
    for (j, _) in ys.iter().enumerate() {
        for (i, _) in xs.iter().enumerate() {
            let v = values[j * xs.len() + i];
            let fill = if v.is_finite() { ramp_colour((v - lo) / (hi - lo)) } else { "#bbbbbb".into() };
            let _ = writeln!(
                svg,
                "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"{fill}\"/>",
                LEFT + i as f64 * cw,
                TOP + PLOT - (j + 1) as f64 * ch,
                cw + 0.05,
                ch + 0.05
            );
        }
    }
    axes(&mut svg, (x0, x1), (y0, y1), x_label, y_label);

    let bar_x = LEFT + PLOT + 30.0;
    let steps = 64;
    for k in 0..steps {
        let t = (k as f64 + 0.5) / steps as f64;
        let _ = writeln!(
            svg,
            "<rect x=\"{bar_x}\" y=\"{:.2}\" width=\"18\" height=\"{:.2}\" fill=\"{}\"/>",
            TOP + PLOT - (k + 1) as f64 * PLOT / steps as f64,
            PLOT / steps as f64 + 0.05,
            ramp_colour(t)
        );
    }
    for (f, v) in [(0.0, lo), (0.5, 0.5 * (lo + hi)), (1.0, hi)] {
        let _ = writeln!(
            svg,
            "<text x=\"{:.1}\" y=\"{:.1}\">{}</text>",
            bar_x + 22.0,
            TOP + PLOT - f * PLOT + 4.0,
            fmt_tick(v)
        );
    }
    svg.push_str("</svg>\n");
    svg
}

/// One named curve of a line chart.
pub struct Series<'a> {
    pub name: &'a str,
    pub ys: Vec<f64>,
    pub dashed: bool,
}

/// Line chart of several series sharing `xs`; non-finite points break the
/// line.
pub fn line_chart(title: &str, xs: &[f64], series: &[Series], x_label: &str, y_label: &str) -> String {
    let (x0, x1) = finite_range(xs.iter().copied());
    let (y0, y1) = finite_range(series.iter().flat_map(|s| s.ys.iter().copied()));
    let px = |x: f64| LEFT + (x - x0) / (x1 - x0) * PLOT;
    let py = |y: f64| TOP + PLOT - (y - y0) / (y1 - y0) * PLOT;

    let mut svg = String::new();
    header(&mut svg, title);
    axes(&mut svg, (x0, x1), (y0, y1), x_label, y_label);
    for (k, s) in series.iter().enumerate() {
        let colour = SERIES_COLOURS[k % SERIES_COLOURS.len()];
        let dash = if s.dashed { " stroke-dasharray=\"6 4\"" } else { "" };
        let mut runs: Vec<Vec<String>> = vec![Vec::new()];
        for (&x, &y) in xs.iter().zip(&s.ys) {
            if x.is_finite() && y.is_finite() {
                runs.last_mut().expect("nonempty").push(format!("{:.2},{:.2}", px(x), py(y)));
            } else if !runs.last().expect("nonempty").is_empty() {
                runs.push(Vec::new());
            }
        }
        for run in runs.iter().filter(|r| !r.is_empty()) {
            let _ = writeln!(
                svg,
                "<polyline points=\"{}\" fill=\"none\" stroke=\"{colour}\" stroke-width=\"1.8\"{dash}/>",
                run.join(" ")
            );
        }
        let ly = TOP + 14.0 + 16.0 * k as f64;
        let lx = LEFT + PLOT + 12.0;
        let _ = writeln!(
            svg,
            "<line x1=\"{lx}\" y1=\"{ly:.1}\" x2=\"{:.1}\" y2=\"{ly:.1}\" stroke=\"{colour}\" stroke-width=\"2\"{dash}/>\
             <text x=\"{:.1}\" y=\"{:.1}\" font-size=\"10\">{}</text>",
            lx + 20.0,
            lx + 24.0,
            ly + 3.5,
            escape(s.name)
        );
    }
    svg.push_str("</svg>\n");
    svg
}
