//! Minimal SVG scatter plots: circles and crosses on linear axes.

use std::fmt::Write;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 640.0;
const MARGIN: f64 = 60.0;
const MARKER: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Marker {
    Circle,
    Cross,
}

#[derive(Debug, Clone)]
pub struct Series {
    pub name: String,
    pub marker: Marker,
    pub points: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, Default)]
pub struct Scatter {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
    /// Draw `|z| = 1` and use equal scales on both axes.
    pub unit_circle: bool,
}

struct Frame {
    x: (f64, f64),
    y: (f64, f64),
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        MARGIN + (x - self.x.0) / (self.x.1 - self.x.0) * (WIDTH - 2.0 * MARGIN)
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT - MARGIN - (y - self.y.0) / (self.y.1 - self.y.0) * (HEIGHT - 2.0 * MARGIN)
    }
}

fn padded(lo: f64, hi: f64) -> (f64, f64) {
    if !(lo.is_finite() && hi.is_finite()) {
        return (-1.0, 1.0);
    }
    let span = hi - lo;
    if span <= 0.0 {
        let w = lo.abs().max(1.0) * 0.5;
        return (lo - w, hi + w);
    }
    (lo - 0.05 * span, hi + 0.05 * span)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

impl Scatter {
    fn frame(&self) -> Frame {
        let pts = self
            .series
            .iter()
            .flat_map(|s| s.points.iter())
            .filter(|p| p.0.is_finite() && p.1.is_finite());
        let (mut x0, mut x1, mut y0, mut y1) = (
            f64::INFINITY,
            f64::NEG_INFINITY,
            f64::INFINITY,
            f64::NEG_INFINITY,
        );
        for &(x, y) in pts {
            x0 = x0.min(x);
            x1 = x1.max(x);
            y0 = y0.min(y);
            y1 = y1.max(y);
        }
        if self.unit_circle {
            let r = [x0.abs(), x1.abs(), y0.abs(), y1.abs(), 1.0]
                .into_iter()
                .filter(|v| v.is_finite())
                .fold(0.0, f64::max);
            let (lo, hi) = padded(-r, r);
            return Frame {
                x: (lo, hi),
                y: (lo, hi),
            };
        }
        Frame {
            x: padded(x0, x1),
            y: padded(y0, y1),
        }
    }

    pub fn render(&self) -> String {
        let f = self.frame();
        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
        );
        let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
        let _ = writeln!(
            s,
            r#"<text x="{}" y="30" text-anchor="middle" font-family="sans-serif" font-size="16">{}</text>"#,
            WIDTH / 2.0,
            escape(&self.title)
        );
        self.axes(&mut s, &f);
        if self.unit_circle {
            let (cx, cy) = (f.px(0.0), f.py(0.0));
            let r = f.px(1.0) - cx;
            let _ = writeln!(
                s,
                r##"<circle class="unit-circle" cx="{cx:.3}" cy="{cy:.3}" r="{r:.3}" fill="none" stroke="#888" stroke-dasharray="4 3"/>"##
            );
        }
        for series in &self.series {
            let _ = writeln!(s, r#"<g class="{}">"#, escape(&series.name));
            for &(x, y) in series
                .points
                .iter()
                .filter(|p| p.0.is_finite() && p.1.is_finite())
            {
                let (px, py) = (f.px(x), f.py(y));
                match series.marker {
                    Marker::Circle => {
                        let _ = writeln!(
                            s,
                            r##"<circle cx="{px:.3}" cy="{py:.3}" r="{MARKER}" fill="none" stroke="#1f4e9c"/>"##
                        );
                    }
                    Marker::Cross => {
                        let d = MARKER;
                        let _ = writeln!(
                            s,
                            r##"<path d="M{:.3} {:.3}L{:.3} {:.3}M{:.3} {:.3}L{:.3} {:.3}" stroke="#c0392b"/>"##,
                            px - d,
                            py - d,
                            px + d,
                            py + d,
                            px - d,
                            py + d,
                            px + d,
                            py - d
                        );
                    }
                }
            }
            let _ = writeln!(s, "</g>");
        }
        self.legend(&mut s);
        s.push_str("</svg>\n");
        s
    }

    fn axes(&self, s: &mut String, f: &Frame) {
        let (l, r) = (MARGIN, WIDTH - MARGIN);
        let (t, b) = (MARGIN, HEIGHT - MARGIN);
        let _ = writeln!(
            s,
            r#"<rect x="{l}" y="{t}" width="{}" height="{}" fill="none" stroke="black"/>"#,
            r - l,
            b - t
        );
        for i in 0..=4 {
            let fx = f.x.0 + (f.x.1 - f.x.0) * i as f64 / 4.0;
            let fy = f.y.0 + (f.y.1 - f.y.0) * i as f64 / 4.0;
            let _ = writeln!(
                s,
                r#"<text x="{:.3}" y="{}" text-anchor="middle" font-family="sans-serif" font-size="11">{:.3}</text>"#,
                f.px(fx),
                b + 16.0,
                fx
            );
            let _ = writeln!(
                s,
                r#"<text x="{}" y="{:.3}" text-anchor="end" font-family="sans-serif" font-size="11">{:.3}</text>"#,
                l - 6.0,
                f.py(fy) + 4.0,
                fy
            );
        }
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="middle" font-family="sans-serif" font-size="13">{}</text>"#,
            WIDTH / 2.0,
            HEIGHT - 15.0,
            escape(&self.x_label)
        );
        let _ = writeln!(
            s,
            r#"<text x="15" y="{}" text-anchor="middle" font-family="sans-serif" font-size="13" transform="rotate(-90 15 {})">{}</text>"#,
            HEIGHT / 2.0,
            HEIGHT / 2.0,
            escape(&self.y_label)
        );
    }

    fn legend(&self, s: &mut String) {
        for (i, series) in self.series.iter().enumerate() {
            let y = MARGIN + 14.0 + 16.0 * i as f64;
            let x = WIDTH - MARGIN - 110.0;
            let symbol = match series.marker {
                Marker::Circle => "○",
                Marker::Cross => "×",
            };
            let _ = writeln!(
                s,
                r#"<text x="{x}" y="{y}" font-family="sans-serif" font-size="12">{symbol} {} ({})</text>"#,
                escape(&series.name),
                series.points.len()
            );
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plot() -> Scatter {
        Scatter {
            title: "t<1>".into(),
            x_label: "Re z".into(),
            y_label: "Im z".into(),
            series: vec![
                Series {
                    name: "fisher".into(),
                    marker: Marker::Circle,
                    points: vec![(1.0, 0.0), (-0.5, 0.8)],
                },
                Series {
                    name: "correlation".into(),
                    marker: Marker::Cross,
                    points: vec![(0.0, 1.01), (f64::NAN, 0.0)],
                },
            ],
            unit_circle: true,
        }
    }

    #[test]
    fn markers_and_unit_circle() {
        let s = plot().render();
        assert!(s.starts_with("<svg"));
        assert!(s.trim_end().ends_with("</svg>"));
        assert!(s.contains(r#"class="unit-circle""#));
        assert_eq!(s.matches("<path d=").count(), 1);
        // Two data circles plus the unit circle.
        assert_eq!(s.matches("<circle").count(), 3);
        assert!(s.contains("t&lt;1&gt;"));
    }

    #[test]
    fn equal_scales_with_unit_circle() {
        let f = plot().frame();
        assert_eq!(f.x, f.y);
        assert!(f.x.0 < -1.0 && f.x.1 > 1.0);
    }

    #[test]
    fn empty_plot_renders() {
        let s = Scatter::default().render();
        assert!(s.contains("</svg>"));
    }
}
