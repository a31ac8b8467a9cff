//! Minimal deterministic SVG output for torus and profile plots.

use std::f64::consts::PI;
use std::fmt::Write;

#[derive(Clone, Debug)]
enum Layer {
    Points { pts: Vec<(f64, f64)>, radius: f64, color: String },
    Polyline { pts: Vec<(f64, f64)>, width: f64, color: String, dashed: bool },
    Band { y0: f64, y1: f64, color: String, opacity: f64 },
}

/// A square canvas with an affine map from a data window onto pixels.
///
/// The torus window is `(-pi, pi]^2` with `t1` to the right and `t2` up.
#[derive(Clone, Debug)]
pub struct SvgFigure {
    size: u32,
    margin: f64,
    x_range: (f64, f64),
    y_range: (f64, f64),
    title: String,
    x_label: String,
    y_label: String,
    y_ticks: Vec<(f64, String)>,
    x_ticks: Vec<(f64, String)>,
    layers: Vec<Layer>,
}

fn pi_ticks() -> Vec<(f64, String)> {
    vec![
        (-PI, "-π".into()),
        (-PI / 2.0, "-π/2".into()),
        (0.0, "0".into()),
        (PI / 2.0, "π/2".into()),
        (PI, "π".into()),
    ]
}

impl SvgFigure {
    pub fn new(size: u32, x_range: (f64, f64), y_range: (f64, f64)) -> Self {
        SvgFigure {
            size,
            margin: 40.0,
            x_range,
            y_range,
            title: String::new(),
            x_label: String::new(),
            y_label: String::new(),
            x_ticks: Vec::new(),
            y_ticks: Vec::new(),
            layers: Vec::new(),
        }
    }

    pub fn torus(size: u32) -> Self {
        let mut f = Self::new(size, (-PI, PI), (-PI, PI));
        f.x_ticks = pi_ticks();
        f.y_ticks = pi_ticks();
        f.x_label = "t1".into();
        f.y_label = "t2".into();
        f
    }

    pub fn title(mut self, t: impl Into<String>) -> Self {
        self.title = t.into();
        self
    }

    pub fn labels(mut self, x: impl Into<String>, y: impl Into<String>) -> Self {
        self.x_label = x.into();
        self.y_label = y.into();
        self
    }

    pub fn x_ticks(mut self, ticks: Vec<(f64, String)>) -> Self {
        self.x_ticks = ticks;
        self
    }

    pub fn y_ticks(mut self, ticks: Vec<(f64, String)>) -> Self {
        self.y_ticks = ticks;
        self
    }

    pub fn pi_x_ticks(self) -> Self {
        self.x_ticks(pi_ticks())
    }

    /// Pixel position of a data point.
    pub fn to_px(&self, x: f64, y: f64) -> (f64, f64) {
        let w = self.size as f64 - 2.0 * self.margin;
        let (x0, x1) = self.x_range;
        let (y0, y1) = self.y_range;
        (
            self.margin + (x - x0) / (x1 - x0) * w,
            self.margin + (y1 - y) / (y1 - y0) * w,
        )
    }

    pub fn points(&mut self, pts: Vec<(f64, f64)>, radius: f64, color: &str) {
        self.layers.push(Layer::Points {
            pts,
            radius,
            color: color.into(),
        });
    }

    pub fn polyline(&mut self, pts: Vec<(f64, f64)>, width: f64, color: &str) {
        self.layers.push(Layer::Polyline {
            pts,
            width,
            color: color.into(),
            dashed: false,
        });
    }

    pub fn dashed(&mut self, pts: Vec<(f64, f64)>, width: f64, color: &str) {
        self.layers.push(Layer::Polyline {
            pts,
            width,
            color: color.into(),
            dashed: true,
        });
    }

    /// Full-width horizontal line at height `y`.
    pub fn hline(&mut self, y: f64, width: f64, color: &str) {
        let (x0, x1) = self.x_range;
        self.polyline(vec![(x0, y), (x1, y)], width, color);
    }

    /// Shaded horizontal band between heights `y0 < y1`.
    pub fn band(&mut self, y0: f64, y1: f64, color: &str, opacity: f64) {
        self.layers.push(Layer::Band {
            y0,
            y1,
            color: color.into(),
            opacity,
        });
    }

    pub fn render(&self) -> String {
        let s = self.size;
        let m = self.margin;
        let w = s as f64 - 2.0 * m;
        let mut out = String::new();
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{s}" height="{s}" viewBox="0 0 {s} {s}">"#
        );
        let _ = writeln!(out, r#"<rect width="{s}" height="{s}" fill="white"/>"#);
        let _ = writeln!(
            out,
            r#"<clipPath id="plot"><rect x="{m}" y="{m}" width="{w}" height="{w}"/></clipPath>"#
        );
        let _ = writeln!(out, r#"<g clip-path="url(#plot)">"#);
        for layer in &self.layers {
            match layer {
                Layer::Band { y0, y1, color, opacity } => {
                    let (_, top) = self.to_px(0.0, *y1);
                    let (_, bottom) = self.to_px(0.0, *y0);
                    let _ = writeln!(
                        out,
                        r#"<rect x="{m}" y="{top:.2}" width="{w}" height="{:.2}" fill="{color}" fill-opacity="{opacity}"/>"#,
                        bottom - top
                    );
                }
                Layer::Polyline { pts, width, color, dashed } => {
                    if pts.len() < 2 {
                        continue;
                    }
                    let mut d = String::new();
                    for (i, &(x, y)) in pts.iter().enumerate() {
                        let (px, py) = self.to_px(x, y);
                        let _ = write!(d, "{}{px:.2},{py:.2}", if i == 0 { "" } else { " " });
                    }
                    let dash = if *dashed { r#" stroke-dasharray="4 3""# } else { "" };
                    let _ = writeln!(
                        out,
                        r#"<polyline points="{d}" fill="none" stroke="{color}" stroke-width="{width}"{dash}/>"#
                    );
                }
                Layer::Points { pts, radius, color } => {
                    let _ = writeln!(out, r#"<g fill="{color}">"#);
                    for &(x, y) in pts {
                        let (px, py) = self.to_px(x, y);
                        let _ = writeln!(out, r#"<circle cx="{px:.2}" cy="{py:.2}" r="{radius}"/>"#);
                    }
                    let _ = writeln!(out, "</g>");
                }
            }
        }
        let _ = writeln!(out, "</g>");
        let _ = writeln!(
            out,
            r#"<rect x="{m}" y="{m}" width="{w}" height="{w}" fill="none" stroke="black" stroke-width="1"/>"#
        );
        let font = r#"font-family="sans-serif" font-size="12""#;
        for (x, label) in &self.x_ticks {
            let (px, _) = self.to_px(*x, self.y_range.0);
            let _ = writeln!(
                out,
                r#"<text x="{px:.2}" y="{:.2}" text-anchor="middle" {font}>{label}</text>"#,
                m + w + 16.0
            );
        }
        for (y, label) in &self.y_ticks {
            let (_, py) = self.to_px(self.x_range.0, *y);
            let _ = writeln!(
                out,
                r#"<text x="{:.2}" y="{:.2}" text-anchor="end" {font}>{label}</text>"#,
                m - 4.0,
                py + 4.0
            );
        }
        if !self.x_label.is_empty() {
            let _ = writeln!(
                out,
                r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" {font}>{}</text>"#,
                m + w / 2.0,
                s as f64 - 6.0,
                self.x_label
            );
        }
        if !self.y_label.is_empty() {
            let _ = writeln!(
                out,
                r#"<text x="12" y="{:.2}" text-anchor="middle" transform="rotate(-90 12 {:.2})" {font}>{}</text>"#,
                m + w / 2.0,
                m + w / 2.0,
                self.y_label
            );
        }
        if !self.title.is_empty() {
            let _ = writeln!(
                out,
                r#"<text x="{:.2}" y="24" text-anchor="middle" font-family="sans-serif" font-size="14">{}</text>"#,
                s as f64 / 2.0,
                escape(&self.title)
            );
        }
        out.push_str("</svg>\n");
        out
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Splits a sampled curve wherever consecutive x values are further apart than `gap`.
pub fn split_at_gaps(pts: &[(f64, f64)], gap: f64) -> Vec<Vec<(f64, f64)>> {
    let mut out: Vec<Vec<(f64, f64)>> = Vec::new();
    for &p in pts {
        match out.last_mut() {
            Some(run) if run.last().is_some_and(|q| (p.0 - q.0).abs() <= gap) => run.push(p),
            _ => out.push(vec![p]),
        }
    }
    out
}
