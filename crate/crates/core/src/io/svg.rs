//! Minimal deterministic SVG plotting: panels with axes, point and line
//! layers and heatmaps. Coordinates are printed with fixed precision so the
//! same data always produces the same bytes.

use crate::error::{Error, Result};
use std::fmt::Write as _;
use std::path::Path;

#[derive(Debug, Clone, PartialEq)]
pub enum Layer {
    Points { pts: Vec<(f64, f64)>, color: String, radius: f64, label: Option<String> },
    Line { pts: Vec<(f64, f64)>, color: String, width: f64, dashed: bool, label: Option<String> },
    /// Cell `(i, j)` spans `x_edges[i]..x_edges[i+1]` by `y_edges[j]..y_edges[j+1]`;
    /// values are clamped to `[0, vmax]`, NaN cells are left blank.
    Heat { x_edges: Vec<f64>, y_edges: Vec<f64>, values: Vec<Vec<f64>>, vmax: f64 },
}

impl Layer {
    fn is_empty(&self) -> bool {
        match self {
            Layer::Points { pts, .. } | Layer::Line { pts, .. } => pts.is_empty(),
            Layer::Heat { values, .. } => values.iter().all(|r| r.is_empty()),
        }
    }

    fn extent(&self) -> Vec<(f64, f64)> {
        match self {
            Layer::Points { pts, .. } | Layer::Line { pts, .. } => {
                pts.iter().copied().filter(|p| p.0.is_finite() && p.1.is_finite()).collect()
            }
            Layer::Heat { x_edges, y_edges, .. } => vec![
                (x_edges[0], y_edges[0]),
                (x_edges[x_edges.len() - 1], y_edges[y_edges.len() - 1]),
            ],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Panel {
    /// Left, top, width, height in pixels.
    pub frame: (f64, f64, f64, f64),
    pub x_range: Option<(f64, f64)>,
    pub y_range: Option<(f64, f64)>,
    pub x_label: String,
    pub y_label: String,
    pub title: String,
    pub layers: Vec<Layer>,
}

impl Panel {
    pub fn new(frame: (f64, f64, f64, f64), x_label: &str, y_label: &str) -> Self {
        Panel {
            frame,
            x_range: None,
            y_range: None,
            x_label: x_label.into(),
            y_label: y_label.into(),
            title: String::new(),
            layers: Vec::new(),
        }
    }

    fn ranges(&self) -> ((f64, f64), (f64, f64)) {
        let pts: Vec<(f64, f64)> = self.layers.iter().flat_map(|l| l.extent()).collect();
        let auto = |get: fn(&(f64, f64)) -> f64| {
            let lo = pts.iter().map(get).fold(f64::INFINITY, f64::min);
            let hi = pts.iter().map(get).fold(f64::NEG_INFINITY, f64::max);
            let pad = 0.04 * (hi - lo).max(1e-9);
            (lo - pad, hi + pad)
        };
        (self.x_range.unwrap_or_else(|| auto(|p| p.0)), self.y_range.unwrap_or_else(|| auto(|p| p.1)))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Plot {
    pub width: f64,
    pub height: f64,
    pub title: String,
    pub panels: Vec<Panel>,
}

fn nice_step(span: f64) -> f64 {
    let raw = span / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let f = raw / mag;
    mag * if f < 1.5 { 1.0 } else if f < 3.5 { 2.0 } else if f < 7.5 { 5.0 } else { 10.0 }
}

fn tick_label(v: f64, step: f64) -> String {
    let digits = (-step.log10().floor()).max(0.0) as usize;
    let s = format!("{v:.digits$}");
    if s == "-0" || s.starts_with("-0.") && s.trim_start_matches("-0.").chars().all(|c| c == '0') {
        s.trim_start_matches('-').to_string()
    } else {
        s
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Five-stop approximation of the viridis map.
pub fn viridis(t: f64) -> String {
    const STOPS: [(f64, f64, f64); 5] = [
        (68.0, 1.0, 84.0),
        (59.0, 82.0, 139.0),
        (33.0, 145.0, 140.0),
        (94.0, 201.0, 98.0),
        (253.0, 231.0, 37.0),
    ];
    let t = t.clamp(0.0, 1.0) * 4.0;
    let i = (t.floor() as usize).min(3);
    let f = t - i as f64;
    let (a, b) = (STOPS[i], STOPS[i + 1]);
    let mix = |x: f64, y: f64| (x + (y - x) * f).round() as u8;
    format!("#{:02x}{:02x}{:02x}", mix(a.0, b.0), mix(a.1, b.1), mix(a.2, b.2))
}

impl Plot {
    pub fn render(&self) -> Result<String> {
        if self.panels.is_empty() || self.panels.iter().all(|p| p.layers.iter().all(Layer::is_empty)) {
            return Err(Error::Io(format!("plot `{}` has no data", self.title)));
        }
        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="11">"#,
            w = self.width,
            h = self.height
        );
        let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
        if !self.title.is_empty() {
            let _ = writeln!(
                s,
                r#"<text x="{:.1}" y="16" text-anchor="middle" font-size="13">{}</text>"#,
                self.width / 2.0,
                escape(&self.title)
            );
        }
        for (k, p) in self.panels.iter().enumerate() {
            render_panel(&mut s, p, k);
        }
        s.push_str("</svg>\n");
        Ok(s)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let text = self.render()?;
        std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
    }
}

fn render_panel(s: &mut String, p: &Panel, id: usize) {
    let (left, top, w, h) = p.frame;
    let ((x0, x1), (y0, y1)) = p.ranges();
    let sx = |x: f64| left + (x - x0) / (x1 - x0) * w;
    let sy = |y: f64| top + h - (y - y0) / (y1 - y0) * h;
    let _ = writeln!(s, r#"<defs><clipPath id="c{id}"><rect x="{left:.2}" y="{top:.2}" width="{w:.2}" height="{h:.2}"/></clipPath></defs>"#);
    let _ = writeln!(s, r#"<g clip-path="url(#c{id})">"#);
    for layer in &p.layers {
        match layer {
            Layer::Heat { x_edges, y_edges, values, vmax } => {
                for (i, row) in values.iter().enumerate() {
                    for (j, v) in row.iter().enumerate() {
                        if v.is_nan() || *v <= 0.0 {
                            continue;
                        }
                        let (xa, xb) = (sx(x_edges[i]), sx(x_edges[i + 1]));
                        let (ya, yb) = (sy(y_edges[j + 1]), sy(y_edges[j]));
                        let _ = writeln!(
                            s,
                            r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="{}"/>"#,
                            xa.min(xb),
                            ya.min(yb),
                            (xb - xa).abs() + 0.3,
                            (yb - ya).abs() + 0.3,
                            viridis(v.min(*vmax) / vmax)
                        );
                    }
                }
            }
            Layer::Points { pts, color, radius, .. } => {
                for &(x, y) in pts {
                    if x.is_finite() && y.is_finite() {
                        let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="{radius}" fill="{color}"/>"#, sx(x), sy(y));
                    }
                }
            }
            Layer::Line { pts, color, width, dashed, .. } => {
                // break the polyline at non-finite samples
                let mut seg = String::new();
                let flush = |seg: &mut String, s: &mut String| {
                    if !seg.is_empty() {
                        let dash = if *dashed { r#" stroke-dasharray="4 3""# } else { "" };
                        let _ = writeln!(s, r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="{width}"{dash}/>"#, seg.trim_end());
                        seg.clear();
                    }
                };
                for &(x, y) in pts {
                    if x.is_finite() && y.is_finite() {
                        let _ = write!(seg, "{:.2},{:.2} ", sx(x), sy(y));
                    } else {
                        flush(&mut seg, s);
                    }
                }
                flush(&mut seg, s);
            }
        }
    }
    s.push_str("</g>\n");
    // frame and ticks
    let _ = writeln!(s, r#"<rect x="{left:.2}" y="{top:.2}" width="{w:.2}" height="{h:.2}" fill="none" stroke="black"/>"#);
    let xs = nice_step(x1 - x0);
    let mut t = (x0 / xs).ceil() * xs;
    while t <= x1 + 1e-9 * xs {
        let px = sx(t);
        let _ = writeln!(s, r#"<line x1="{px:.2}" y1="{:.2}" x2="{px:.2}" y2="{:.2}" stroke="black"/>"#, top + h, top + h + 4.0);
        let _ = writeln!(s, r#"<text x="{px:.2}" y="{:.2}" text-anchor="middle">{}</text>"#, top + h + 15.0, tick_label(t, xs));
        t += xs;
    }
    let ys = nice_step(y1 - y0);
    let mut t = (y0 / ys).ceil() * ys;
    while t <= y1 + 1e-9 * ys {
        let py = sy(t);
        let _ = writeln!(s, r#"<line x1="{:.2}" y1="{py:.2}" x2="{left:.2}" y2="{py:.2}" stroke="black"/>"#, left - 4.0);
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#, left - 6.0, py + 4.0, tick_label(t, ys));
        t += ys;
    }
    let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#, left + w / 2.0, top + h + 32.0, escape(&p.x_label));
    let _ = writeln!(
        s,
        r#"<text x="{x:.2}" y="{y:.2}" text-anchor="middle" transform="rotate(-90 {x:.2} {y:.2})">{}</text>"#,
        escape(&p.y_label),
        x = left - 42.0,
        y = top + h / 2.0
    );
    if !p.title.is_empty() {
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#, left + w / 2.0, top - 6.0, escape(&p.title));
    }
    // legend
    let mut row = 0.0;
    for layer in &p.layers {
        let (label, color) = match layer {
            Layer::Points { label: Some(l), color, .. } | Layer::Line { label: Some(l), color, .. } => (l, color),
            _ => continue,
        };
        let y = top + 14.0 + row * 14.0;
        let _ = writeln!(s, r#"<rect x="{:.2}" y="{:.2}" width="10" height="10" fill="{color}"/>"#, left + w - 110.0, y - 9.0);
        let _ = writeln!(s, r#"<text x="{:.2}" y="{y:.2}">{}</text>"#, left + w - 96.0, escape(label));
        row += 1.0;
    }
}
