//! Deterministic SVG and CSV renderings of planar curves.

use std::fmt::Write as _;
use std::path::Path;

use crate::io::{write_text, CliError};

pub struct Series {
    pub name: String,
    pub points: Vec<[f64; 2]>,
    pub closed: bool,
}

impl Series {
    pub fn open(name: impl Into<String>, points: Vec<[f64; 2]>) -> Self {
        Series { name: name.into(), points, closed: false }
    }

    pub fn closed(name: impl Into<String>, points: Vec<[f64; 2]>) -> Self {
        Series { name: name.into(), points, closed: true }
    }
}

pub struct Figure {
    pub title: String,
    pub series: Vec<Series>,
}

const SIZE: f64 = 400.0;
const PAD: f64 = 20.0;
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

// fixed precision keeps the output byte-stable
fn num(v: f64) -> String {
    let s = format!("{v:.3}");
    if s == "-0.000" {
        "0.000".into()
    } else {
        s
    }
}

impl Figure {
    fn bounds(&self) -> (f64, f64, f64, f64) {
        let pts = self.series.iter().flat_map(|s| s.points.iter());
        let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for p in pts.filter(|p| p[0].is_finite() && p[1].is_finite()) {
            x0 = x0.min(p[0]);
            x1 = x1.max(p[0]);
            y0 = y0.min(p[1]);
            y1 = y1.max(p[1]);
        }
        if !x0.is_finite() {
            return (-1.0, 1.0, -1.0, 1.0);
        }
        let w = (x1 - x0).max(1e-9);
        let h = (y1 - y0).max(1e-9);
        (x0 - 0.05 * w, x1 + 0.05 * w, y0 - 0.05 * h, y1 + 0.05 * h)
    }

    pub fn to_svg(&self) -> String {
        let (x0, x1, y0, y1) = self.bounds();
        let inner = SIZE - 2.0 * PAD;
        let sx = |x: f64| PAD + (x - x0) / (x1 - x0) * inner;
        let sy = |y: f64| SIZE - PAD - (y - y0) / (y1 - y0) * inner;
        let mut out = String::new();
        out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
        let _ = writeln!(
            out,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{SIZE}\" height=\"{SIZE}\" viewBox=\"0 0 {SIZE} {SIZE}\">"
        );
        let _ = writeln!(out, "<title>{}</title>", escape(&self.title));
        let _ = writeln!(out, "<rect x=\"0\" y=\"0\" width=\"{SIZE}\" height=\"{SIZE}\" fill=\"white\"/>");
        for (k, s) in self.series.iter().enumerate() {
            let pts: Vec<String> = s
                .points
                .iter()
                .filter(|p| p[0].is_finite() && p[1].is_finite())
                .map(|p| format!("{},{}", num(sx(p[0])), num(sy(p[1]))))
                .collect();
            let tag = if s.closed { "polygon" } else { "polyline" };
            let _ = writeln!(
                out,
                "<{tag} id=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" points=\"{}\"/>",
                escape(&s.name),
                COLORS[k % COLORS.len()],
                pts.join(" ")
            );
        }
        out.push_str("</svg>\n");
        out
    }

    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["series", "x", "y"])?;
        for s in &self.series {
            for p in &s.points {
                w.write_record([s.name.clone(), format!("{:.12e}", p[0]), format!("{:.12e}", p[1])])?;
            }
        }
        let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))
    }

    /// Writes whichever of the two renderings was asked for.
    pub fn emit(&self, svg: Option<&Path>, csv: Option<&Path>) -> Result<(), CliError> {
        if let Some(p) = svg {
            write_text(p, &self.to_svg())?;
        }
        if let Some(p) = csv {
            write_text(p, &self.to_csv()?)?;
        }
        Ok(())
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}
