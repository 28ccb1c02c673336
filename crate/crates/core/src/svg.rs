//! Log-log plot of ΔE and ΔF against θ, written directly as SVG.
//!
//! Both series are drawn as magnitudes. Segments where the value is negative
//! use a dashed stroke.

use std::fmt::Write as _;

use crate::sweep::SweepTable;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;
const MARGIN_LEFT: f64 = 80.0;
const MARGIN_RIGHT: f64 = 160.0;
const MARGIN_TOP: f64 = 30.0;
const MARGIN_BOTTOM: f64 = 60.0;

struct Axis {
    lo: f64,
    hi: f64,
}

impl Axis {
    /// Decade-aligned range covering every positive sample.
    fn covering(values: impl Iterator<Item = f64>) -> Option<Axis> {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for v in values.filter(|v| *v > 0.0 && v.is_finite()) {
            lo = lo.min(v.log10());
            hi = hi.max(v.log10());
        }
        if !lo.is_finite() {
            return None;
        }
        let (mut lo, mut hi) = (lo.floor(), hi.ceil());
        if hi <= lo {
            lo -= 1.0;
            hi += 1.0;
        }
        Some(Axis { lo, hi })
    }

    fn frac(&self, v: f64) -> f64 {
        (v.log10() - self.lo) / (self.hi - self.lo)
    }
}

fn x_px(axis: &Axis, v: f64) -> f64 {
    MARGIN_LEFT + axis.frac(v) * (WIDTH - MARGIN_LEFT - MARGIN_RIGHT)
}

fn y_px(axis: &Axis, v: f64) -> f64 {
    HEIGHT - MARGIN_BOTTOM - axis.frac(v) * (HEIGHT - MARGIN_TOP - MARGIN_BOTTOM)
}

/// Split a series into runs of constant sign, dropping zeros.
fn signed_runs(points: &[(f64, f64)]) -> Vec<(bool, Vec<(f64, f64)>)> {
    let mut runs: Vec<(bool, Vec<(f64, f64)>)> = Vec::new();
    for &(x, y) in points {
        if y == 0.0 || !y.is_finite() {
            continue;
        }
        let negative = y < 0.0;
        match runs.last_mut() {
            Some((sign, run)) if *sign == negative => run.push((x, y.abs())),
            _ => runs.push((negative, vec![(x, y.abs())])),
        }
    }
    runs
}

pub fn render(table: &SweepTable) -> String {
    let de: Vec<(f64, f64)> = table.rows.iter().map(|r| (r.theta, r.delta_e)).collect();
    let df: Vec<(f64, f64)> = table.rows.iter().map(|r| (r.theta, r.delta_f)).collect();
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);

    let xaxis = Axis::covering(table.rows.iter().map(|r| r.theta));
    let yaxis = Axis::covering(de.iter().chain(df.iter()).map(|p| p.1.abs()));
    let (Some(xaxis), Some(yaxis)) = (xaxis, yaxis) else {
        let _ = writeln!(
            out,
            r#"<text x="20" y="40">no positive samples to plot</text>"#
        );
        out.push_str("</svg>\n");
        return out;
    };

    let (x0, x1) = (MARGIN_LEFT, WIDTH - MARGIN_RIGHT);
    let (y0, y1) = (HEIGHT - MARGIN_BOTTOM, MARGIN_TOP);
    let _ = writeln!(
        out,
        r#"<rect x="{x0}" y="{y1}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        x1 - x0,
        y0 - y1
    );
    for d in (xaxis.lo as i32)..=(xaxis.hi as i32) {
        let x = x_px(&xaxis, 10f64.powi(d));
        let _ = writeln!(
            out,
            r##"<line x1="{x:.2}" y1="{y0}" x2="{x:.2}" y2="{y1}" stroke="#ddd"/><text x="{x:.2}" y="{}" text-anchor="middle">1e{d}</text>"##,
            y0 + 18.0
        );
    }
    for d in (yaxis.lo as i32)..=(yaxis.hi as i32) {
        let y = y_px(&yaxis, 10f64.powi(d));
        let _ = writeln!(
            out,
            r##"<line x1="{x0}" y1="{y:.2}" x2="{x1}" y2="{y:.2}" stroke="#ddd"/><text x="{}" y="{:.2}" text-anchor="end">1e{d}</text>"##,
            x0 - 6.0,
            y + 4.0
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="{}" text-anchor="middle">theta = kT/(hbar omega0)</text>"#,
        0.5 * (x0 + x1),
        HEIGHT - 15.0
    );
    let _ = writeln!(
        out,
        r#"<text x="20" y="{:.1}" text-anchor="middle" transform="rotate(-90 20 {:.1})">|shift| / (hbar omega0)</text>"#,
        0.5 * (y0 + y1),
        0.5 * (y0 + y1)
    );

    for (series, color) in [(&de, "#c0392b"), (&df, "#2471a3")] {
        for (negative, run) in signed_runs(series) {
            let pts: Vec<String> = run
                .iter()
                .map(|&(x, y)| format!("{:.2},{:.2}", x_px(&xaxis, x), y_px(&yaxis, y)))
                .collect();
            let dash = if negative {
                r#" stroke-dasharray="6 4""#
            } else {
                ""
            };
            let _ = writeln!(
                out,
                r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="2"{dash}/>"#,
                pts.join(" ")
            );
        }
    }

    let lx = x1 + 12.0;
    let legend = [
        ("#c0392b", "", "dE > 0"),
        ("#c0392b", r#" stroke-dasharray="6 4""#, "dE < 0"),
        ("#2471a3", "", "dF > 0"),
        ("#2471a3", r#" stroke-dasharray="6 4""#, "dF < 0"),
    ];
    for (i, (color, dash, label)) in legend.iter().enumerate() {
        let y = y1 + 20.0 + 20.0 * i as f64;
        let _ = writeln!(
            out,
            r#"<line x1="{lx}" y1="{y}" x2="{}" y2="{y}" stroke="{color}" stroke-width="2"{dash}/><text x="{}" y="{}">{label}</text>"#,
            lx + 30.0,
            lx + 36.0,
            y + 4.0
        );
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sign_runs() {
        let runs = signed_runs(&[(1.0, 2.0), (2.0, -1.0), (3.0, -4.0), (4.0, 0.0), (5.0, 1.0)]);
        assert_eq!(runs.len(), 3);
        assert!(!runs[0].0 && runs[1].0 && !runs[2].0);
        assert_eq!(runs[1].1, vec![(2.0, 1.0), (3.0, 4.0)]);
    }

    #[test]
    fn decade_axis() {
        let a = Axis::covering([15.0, 900.0].into_iter()).unwrap();
        assert_eq!((a.lo, a.hi), (1.0, 3.0));
        let flat = Axis::covering([100.0].into_iter()).unwrap();
        assert_eq!((flat.lo, flat.hi), (1.0, 3.0));
        assert!(Axis::covering([-1.0, 0.0].into_iter()).is_none());
    }
}
