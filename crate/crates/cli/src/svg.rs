//! Static SVG 1.1 figures: axes, polylines, scatter points, filled
//! polygons and heat-map cells.

use std::fmt::Write as _;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 55.0;

pub struct Figure {
    title: String,
    x_label: String,
    y_label: String,
    x: (f64, f64),
    y: (f64, f64),
    body: String,
    notes: Vec<String>,
}

fn fmt(v: f64) -> String {
    format!("{v:.2}")
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Tick positions at 1, 2 or 5 times a power of ten, about six per axis.
fn ticks(lo: f64, hi: f64) -> Vec<f64> {
    let span = hi - lo;
    if !(span > 0.0) || !span.is_finite() {
        return vec![lo];
    }
    let raw = span / 6.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0].iter().map(|f| f * mag).find(|s| *s >= raw).unwrap_or(10.0 * mag);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    (first..=last).map(|i| i as f64 * step).collect()
}

fn tick_label(v: f64) -> String {
    let s = format!("{:.3}", v);
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

impl Figure {
    pub fn new(title: &str, x_label: &str, y_label: &str, x: (f64, f64), y: (f64, f64)) -> Self {
        let widen = |(lo, hi): (f64, f64)| if hi > lo { (lo, hi) } else { (lo - 1.0, hi + 1.0) };
        Self {
            title: title.into(),
            x_label: x_label.into(),
            y_label: y_label.into(),
            x: widen(x),
            y: widen(y),
            body: String::new(),
            notes: Vec::new(),
        }
    }

    fn px(&self, x: f64) -> f64 {
        LEFT + (x - self.x.0) / (self.x.1 - self.x.0) * (WIDTH - LEFT - RIGHT)
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT - BOTTOM - (y - self.y.0) / (self.y.1 - self.y.0) * (HEIGHT - TOP - BOTTOM)
    }

    fn points(&self, pts: &[(f64, f64)]) -> String {
        pts.iter()
            .filter(|(x, y)| x.is_finite() && y.is_finite())
            .map(|&(x, y)| format!("{},{}", fmt(self.px(x)), fmt(self.py(y))))
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn polyline(&mut self, pts: &[(f64, f64)], color: &str, width: f64) {
        if pts.len() < 2 {
            return;
        }
        let p = self.points(pts);
        let _ = writeln!(self.body, r#"<polyline points="{p}" fill="none" stroke="{color}" stroke-width="{width}"/>"#);
    }

    pub fn polygon(&mut self, pts: &[(f64, f64)], fill: &str, opacity: f64, stroke: Option<&str>) {
        if pts.len() < 3 {
            return;
        }
        let p = self.points(pts);
        let stroke = stroke.map_or("none".to_string(), str::to_string);
        let _ = writeln!(
            self.body,
            r#"<polygon points="{p}" fill="{fill}" fill-opacity="{opacity}" stroke="{stroke}" stroke-width="1"/>"#
        );
    }

    pub fn scatter(&mut self, pts: &[(f64, f64)], color: &str, radius: f64) {
        let _ = writeln!(self.body, r#"<g fill="{color}">"#);
        for &(x, y) in pts {
            if x < self.x.0 || x > self.x.1 || y < self.y.0 || y > self.y.1 {
                continue;
            }
            let _ = writeln!(self.body, r#"<circle cx="{}" cy="{}" r="{radius}"/>"#, fmt(self.px(x)), fmt(self.py(y)));
        }
        self.body.push_str("</g>\n");
    }

    /// Bars from 0 up to `h` over `[lo, hi)`.
    pub fn bars(&mut self, bins: &[(f64, f64, f64)], fill: &str) {
        let _ = writeln!(self.body, r#"<g fill="{fill}" fill-opacity="0.6">"#);
        for &(lo, hi, h) in bins {
            let (x0, x1) = (self.px(lo), self.px(hi));
            let (y0, y1) = (self.py(h.min(self.y.1)), self.py(0f64.max(self.y.0)));
            let _ = writeln!(
                self.body,
                r#"<rect x="{}" y="{}" width="{}" height="{}"/>"#,
                fmt(x0),
                fmt(y0),
                fmt(x1 - x0),
                fmt((y1 - y0).max(0.0))
            );
        }
        self.body.push_str("</g>\n");
    }

    /// Cells `(x0, y0, x1, y1, v)` shaded by `v / max`.
    pub fn heatmap(&mut self, cells: &[(f64, f64, f64, f64, f64)]) {
        let max = cells.iter().map(|c| c.4).fold(0.0, f64::max);
        if max <= 0.0 {
            return;
        }
        for &(x0, y0, x1, y1, v) in cells {
            if v <= 0.0 {
                continue;
            }
            let s = (v / max).clamp(0.0, 1.0);
            let shade = (255.0 * (1.0 - s)).round() as u8;
            let _ = writeln!(
                self.body,
                r#"<rect x="{}" y="{}" width="{}" height="{}" fill="rgb({shade},{shade},255)"/>"#,
                fmt(self.px(x0)),
                fmt(self.py(y1)),
                fmt(self.px(x1) - self.px(x0)),
                fmt(self.py(y0) - self.py(y1))
            );
        }
    }

    pub fn note(&mut self, text: &str) {
        self.notes.push(text.into());
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
        );
        let _ = writeln!(s, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
        let (x0, x1, y0, y1) = (LEFT, WIDTH - RIGHT, TOP, HEIGHT - BOTTOM);
        let _ = writeln!(
            s,
            r#"<clipPath id="plot"><rect x="{x0}" y="{y0}" width="{}" height="{}"/></clipPath>"#,
            x1 - x0,
            y1 - y0
        );
        let _ = writeln!(s, r#"<g clip-path="url(#plot)">"#);
        s.push_str(&self.body);
        s.push_str("</g>\n");
        let _ = writeln!(
            s,
            r#"<rect x="{x0}" y="{y0}" width="{}" height="{}" fill="none" stroke="black"/>"#,
            x1 - x0,
            y1 - y0
        );
        for t in ticks(self.x.0, self.x.1) {
            let px = fmt(self.px(t));
            let _ = writeln!(s, r#"<line x1="{px}" y1="{y1}" x2="{px}" y2="{}" stroke="black"/>"#, y1 + 5.0);
            let _ = writeln!(s, r#"<text x="{px}" y="{}" text-anchor="middle">{}</text>"#, y1 + 18.0, tick_label(t));
        }
        for t in ticks(self.y.0, self.y.1) {
            let py = fmt(self.py(t));
            let _ = writeln!(s, r#"<line x1="{}" y1="{py}" x2="{x0}" y2="{py}" stroke="black"/>"#, x0 - 5.0);
            let _ = writeln!(s, r#"<text x="{}" y="{py}" text-anchor="end" dy="4">{}</text>"#, x0 - 8.0, tick_label(t));
        }
        let _ = writeln!(
            s,
            r#"<text x="{}" y="24" text-anchor="middle" font-size="14">{}</text>"#,
            WIDTH / 2.0,
            escape(&self.title)
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
            (x0 + x1) / 2.0,
            HEIGHT - 12.0,
            escape(&self.x_label)
        );
        let _ = writeln!(
            s,
            r#"<text x="18" y="{}" text-anchor="middle" transform="rotate(-90 18 {})">{}</text>"#,
            (y0 + y1) / 2.0,
            (y0 + y1) / 2.0,
            escape(&self.y_label)
        );
        for (i, n) in self.notes.iter().enumerate() {
            let _ = writeln!(
                s,
                r#"<text x="{}" y="{}" fill="dimgray">{}</text>"#,
                x0 + 8.0,
                y0 + 16.0 + 14.0 * i as f64,
                escape(n)
            );
        }
        s.push_str("</svg>\n");
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ticks_are_round() {
        assert_eq!(ticks(0.0, 1.0), vec![0.0, 0.2, 0.4, 0.6000000000000001, 0.8, 1.0]);
        assert_eq!(ticks(-3.0, 3.0), vec![-3.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.0]);
        assert_eq!(tick_label(0.6000000000000001), "0.6");
        assert_eq!(tick_label(-0.0), "0");
    }

    #[test]
    fn document_is_well_formed() {
        let mut f = Figure::new("a < b", "x", "y", (0.0, 1.0), (0.0, 2.0));
        f.polyline(&[(0.0, 0.0), (1.0, 2.0)], "red", 1.5);
        f.scatter(&[(0.5, 1.0), (5.0, 1.0)], "blue", 1.0);
        f.note("flagged");
        let s = f.render();
        assert!(s.starts_with("<?xml") && s.trim_end().ends_with("</svg>"));
        assert!(s.contains("a &lt; b"));
        assert_eq!(s.matches("<circle").count(), 1);
        assert_eq!(s.matches("<polyline").count(), 1);
    }
}
