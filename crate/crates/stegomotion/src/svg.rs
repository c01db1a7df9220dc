//! Minimal hand-rolled SVG line/scatter plots.
//!
//! Deterministic by construction: fixed viewport, fixed palette, fixed-point
//! coordinate formatting. Equal inputs render byte-identical documents,
//! which the CLI's reproducibility contract relies on.

use std::fmt::Write as _;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const MARGIN_LEFT: f64 = 62.0;
const MARGIN_RIGHT: f64 = 18.0;
const MARGIN_TOP: f64 = 34.0;
const MARGIN_BOTTOM: f64 = 46.0;

const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesStyle {
    Line,
    Scatter,
    LineWithMarkers,
}

#[derive(Debug, Clone)]
pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
    pub style: SeriesStyle,
}

#[derive(Debug, Clone)]
pub struct Plot {
    title: String,
    x_label: String,
    y_label: String,
    series: Vec<Series>,
    y_range: Option<(f64, f64)>,
}

impl Plot {
    pub fn new(title: &str, x_label: &str, y_label: &str) -> Self {
        Plot {
            title: title.to_string(),
            x_label: x_label.to_string(),
            y_label: y_label.to_string(),
            series: Vec::new(),
            y_range: None,
        }
    }

    /// Fix the y axis instead of deriving it from the data (probabilities
    /// read better on a full [0, 1] axis).
    pub fn with_y_range(mut self, min: f64, max: f64) -> Self {
        self.y_range = Some((min, max));
        self
    }

    pub fn add_series(&mut self, name: &str, points: Vec<(f64, f64)>, style: SeriesStyle) {
        self.series.push(Series { name: name.to_string(), points, style });
    }

    /// Render to a complete SVG document.
    pub fn render(&self) -> String {
        let (x_min, x_max) = expand_degenerate(self.data_range(|p| p.0));
        let (y_min, y_max) = match self.y_range {
            Some(range) => range,
            None => pad_range(expand_degenerate(self.data_range(|p| p.1))),
        };
        let to_px = |x: f64, y: f64| -> (f64, f64) {
            let px = MARGIN_LEFT + (x - x_min) / (x_max - x_min) * (WIDTH - MARGIN_LEFT - MARGIN_RIGHT);
            let py = HEIGHT - MARGIN_BOTTOM
                - (y - y_min) / (y_max - y_min) * (HEIGHT - MARGIN_TOP - MARGIN_BOTTOM);
            (px, py)
        };

        let mut out = String::new();
        let _ = writeln!(
            out,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
             viewBox=\"0 0 {WIDTH} {HEIGHT}\" font-family=\"sans-serif\" font-size=\"12\">"
        );
        let _ = writeln!(out, "<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>");
        let _ = writeln!(
            out,
            "<text x=\"{}\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">{}</text>",
            fmt(WIDTH / 2.0),
            escape(&self.title)
        );

        // Gridlines and tick labels.
        for tick in nice_ticks(x_min, x_max, 8) {
            let (px, _) = to_px(tick, y_min);
            let _ = writeln!(
                out,
                "<line x1=\"{x}\" y1=\"{y1}\" x2=\"{x}\" y2=\"{y2}\" stroke=\"#dddddd\"/>",
                x = fmt(px),
                y1 = fmt(MARGIN_TOP),
                y2 = fmt(HEIGHT - MARGIN_BOTTOM)
            );
            let _ = writeln!(
                out,
                "<text x=\"{x}\" y=\"{y}\" text-anchor=\"middle\">{t}</text>",
                x = fmt(px),
                y = fmt(HEIGHT - MARGIN_BOTTOM + 16.0),
                t = fmt_tick(tick)
            );
        }
        for tick in nice_ticks(y_min, y_max, 6) {
            let (_, py) = to_px(x_min, tick);
            let _ = writeln!(
                out,
                "<line x1=\"{x1}\" y1=\"{y}\" x2=\"{x2}\" y2=\"{y}\" stroke=\"#dddddd\"/>",
                x1 = fmt(MARGIN_LEFT),
                x2 = fmt(WIDTH - MARGIN_RIGHT),
                y = fmt(py)
            );
            let _ = writeln!(
                out,
                "<text x=\"{x}\" y=\"{y}\" text-anchor=\"end\">{t}</text>",
                x = fmt(MARGIN_LEFT - 6.0),
                y = fmt(py + 4.0),
                t = fmt_tick(tick)
            );
        }

        // Axes.
        let _ = writeln!(
            out,
            "<line x1=\"{l}\" y1=\"{b}\" x2=\"{r}\" y2=\"{b}\" stroke=\"black\"/>\
             \n<line x1=\"{l}\" y1=\"{t}\" x2=\"{l}\" y2=\"{b}\" stroke=\"black\"/>",
            l = fmt(MARGIN_LEFT),
            r = fmt(WIDTH - MARGIN_RIGHT),
            t = fmt(MARGIN_TOP),
            b = fmt(HEIGHT - MARGIN_BOTTOM)
        );
        let _ = writeln!(
            out,
            "<text x=\"{x}\" y=\"{y}\" text-anchor=\"middle\">{t}</text>",
            x = fmt((MARGIN_LEFT + WIDTH - MARGIN_RIGHT) / 2.0),
            y = fmt(HEIGHT - 10.0),
            t = escape(&self.x_label)
        );
        let _ = writeln!(
            out,
            "<text x=\"14\" y=\"{y}\" text-anchor=\"middle\" transform=\"rotate(-90 14 {y})\">{t}</text>",
            y = fmt((MARGIN_TOP + HEIGHT - MARGIN_BOTTOM) / 2.0),
            t = escape(&self.y_label)
        );

        // Series.
        for (i, series) in self.series.iter().enumerate() {
            let color = PALETTE[i % PALETTE.len()];
            let pixels: Vec<(f64, f64)> =
                series.points.iter().map(|&(x, y)| to_px(x, y)).collect();
            if matches!(series.style, SeriesStyle::Line | SeriesStyle::LineWithMarkers)
                && pixels.len() > 1
            {
                let path: Vec<String> =
                    pixels.iter().map(|&(x, y)| format!("{},{}", fmt(x), fmt(y))).collect();
                let _ = writeln!(
                    out,
                    "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" points=\"{}\"/>",
                    path.join(" ")
                );
            }
            if matches!(series.style, SeriesStyle::Scatter | SeriesStyle::LineWithMarkers) {
                for &(x, y) in &pixels {
                    let _ = writeln!(
                        out,
                        "<circle cx=\"{}\" cy=\"{}\" r=\"2.5\" fill=\"{color}\"/>",
                        fmt(x),
                        fmt(y)
                    );
                }
            }
        }

        // Legend, top-right inside the plot area.
        for (i, series) in self.series.iter().enumerate() {
            let color = PALETTE[i % PALETTE.len()];
            let y = MARGIN_TOP + 14.0 + 16.0 * i as f64;
            let _ = writeln!(
                out,
                "<line x1=\"{x1}\" y1=\"{y}\" x2=\"{x2}\" y2=\"{y}\" stroke=\"{color}\" stroke-width=\"2\"/>\
                 \n<text x=\"{tx}\" y=\"{ty}\">{name}</text>",
                x1 = fmt(WIDTH - MARGIN_RIGHT - 150.0),
                x2 = fmt(WIDTH - MARGIN_RIGHT - 126.0),
                y = fmt(y),
                tx = fmt(WIDTH - MARGIN_RIGHT - 120.0),
                ty = fmt(y + 4.0),
                name = escape(&series.name)
            );
        }

        out.push_str("</svg>\n");
        out
    }

    fn data_range(&self, pick: impl Fn(&(f64, f64)) -> f64) -> (f64, f64) {
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        for series in &self.series {
            for point in &series.points {
                min = min.min(pick(point));
                max = max.max(pick(point));
            }
        }
        if min.is_finite() && max.is_finite() {
            (min, max)
        } else {
            (0.0, 1.0)
        }
    }
}

fn expand_degenerate((min, max): (f64, f64)) -> (f64, f64) {
    if max > min {
        (min, max)
    } else {
        (min - 0.5, max + 0.5)
    }
}

fn pad_range((min, max): (f64, f64)) -> (f64, f64) {
    let pad = (max - min) * 0.05;
    (min - pad, max + pad)
}

/// Round ticks covering [min, max] with a 1/2/5 step, at most `target + 2`.
fn nice_ticks(min: f64, max: f64, target: usize) -> Vec<f64> {
    let span = max - min;
    let raw_step = span / target as f64;
    let magnitude = 10f64.powf(raw_step.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0]
        .iter()
        .map(|m| m * magnitude)
        .find(|&s| span / s <= target as f64)
        .unwrap_or(10.0 * magnitude);
    let first = (min / step).ceil() as i64;
    let last = (max / step).floor() as i64;
    (first..=last).map(|i| i as f64 * step).collect()
}

/// Pixel coordinates at fixed two-decimal precision.
fn fmt(v: f64) -> String {
    let s = format!("{v:.2}");
    // -0.00 and 0.00 must render identically.
    if s == "-0.00" {
        "0.00".to_string()
    } else {
        s
    }
}

/// Tick labels: up to four significant decimals, trailing zeros trimmed.
fn fmt_tick(v: f64) -> String {
    let mut s = format!("{v:.4}");
    while s.contains('.') && (s.ends_with('0') || s.ends_with('.')) {
        s.pop();
    }
    if s == "-0" {
        s = "0".to_string();
    }
    s
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_plot() -> Plot {
        let mut plot = Plot::new("demo", "t", "value").with_y_range(0.0, 1.0);
        plot.add_series(
            "a",
            (0..20).map(|i| (f64::from(i), f64::from(i) / 20.0)).collect(),
            SeriesStyle::Line,
        );
        plot.add_series("b", vec![(0.0, 0.5), (10.0, 0.25)], SeriesStyle::Scatter);
        plot
    }

    #[test]
    fn rendering_is_deterministic() {
        assert_eq!(sample_plot().render(), sample_plot().render());
    }

    #[test]
    fn output_is_a_single_svg_document() {
        let svg = sample_plot().render();
        assert!(svg.starts_with("<svg "));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("<svg ").count(), 1);
        assert!(svg.contains("<polyline"));
        assert!(svg.contains("<circle"));
    }

    #[test]
    fn labels_are_escaped() {
        let plot = Plot::new("a < b & c", "x", "y");
        let svg = plot.render();
        assert!(svg.contains("a &lt; b &amp; c"));
    }

    #[test]
    fn ticks_cover_the_range_with_round_steps() {
        let ticks = nice_ticks(0.0, 100.0, 8);
        assert_eq!(ticks.first(), Some(&0.0));
        assert_eq!(ticks.last(), Some(&100.0));
        assert!(ticks.len() <= 10);
        let ticks = nice_ticks(0.0, 1.0, 6);
        assert!(ticks.contains(&0.0) && ticks.contains(&1.0));
    }

    #[test]
    fn negative_zero_never_appears() {
        assert_eq!(fmt(-0.0001), "0.00");
        assert_eq!(fmt_tick(-0.000001), "0");
    }
}
