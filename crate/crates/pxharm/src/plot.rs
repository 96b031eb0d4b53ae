//! Deterministic SVG rendering: heatmaps for fields and log–log plots with a
//! least-squares line for decay profiles.

use std::fmt::Write as _;

use anyhow::{bail, Result};
use pxharm_core::fit::fit_loglog;

use crate::csv::{read_table, Table};

const W: f64 = 560.0;
const H: f64 = 480.0;
const M: f64 = 56.0;

/// Renders a CSV produced by this tool; the header picks the plot kind.
pub fn plot_csv(text: &str) -> Result<String> {
    let t = read_table(text)?;
    let cols: Vec<&str> = t.header.iter().map(String::as_str).collect();
    match cols.as_slice() {
        ["x", "y", _] => Ok(heatmap(&t)),
        ["rho", "value"] => Ok(loglog(&t)),
        _ => bail!("unrecognized CSV header {:?}", t.header),
    }
}

fn open(s: &mut String) {
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="11">"#
    )
    .unwrap();
    writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#).unwrap();
}

fn axes(s: &mut String, x_label: &str, y_label: &str) {
    let (x0, y0, x1, y1) = (M, H - M, W - M, M);
    writeln!(
        s,
        r#"<path d="M{x0} {y1} L{x0} {y0} L{x1} {y0}" fill="none" stroke="black"/>"#
    )
    .unwrap();
    writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">{x_label}</text>"#, (x0 + x1) / 2.0, H - 16.0).unwrap();
    writeln!(
        s,
        r#"<text x="16" y="{}" text-anchor="middle" transform="rotate(-90 16 {})">{y_label}</text>"#,
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0
    )
    .unwrap();
}

fn range(v: impl Iterator<Item = f64>) -> Option<(f64, f64)> {
    let mut r: Option<(f64, f64)> = None;
    for x in v.filter(|x| x.is_finite()) {
        r = Some(match r {
            None => (x, x),
            Some((a, b)) => (a.min(x), b.max(x)),
        });
    }
    r.map(|(a, b)| if b > a { (a, b) } else { (a - 0.5, b + 0.5) })
}

/// Five-stop blue to yellow ramp.
fn color(t: f64) -> String {
    const STOPS: [[f64; 3]; 5] = [
        [68.0, 1.0, 84.0],
        [59.0, 82.0, 139.0],
        [33.0, 145.0, 140.0],
        [94.0, 201.0, 98.0],
        [253.0, 231.0, 37.0],
    ];
    let t = if t.is_finite() { t.clamp(0.0, 1.0) } else { 0.0 };
    let x = t * 4.0;
    let i = (x.floor() as usize).min(3);
    let f = x - i as f64;
    let c: Vec<u8> = (0..3)
        .map(|k| (STOPS[i][k] + f * (STOPS[i + 1][k] - STOPS[i][k])).round() as u8)
        .collect();
    format!("#{:02x}{:02x}{:02x}", c[0], c[1], c[2])
}

fn spacing(v: &mut Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    v.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    v.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min)
}

fn heatmap(t: &Table) -> String {
    let mut s = String::new();
    open(&mut s);
    let title = &t.header[2];
    axes(&mut s, "x", "y");
    let (Some((xa, xb)), Some((ya, yb))) = (range(t.rows.iter().map(|r| r[0])), range(t.rows.iter().map(|r| r[1]))) else {
        s.push_str("</svg>\n");
        return s;
    };
    let (va, vb) = range(t.rows.iter().map(|r| r[2])).unwrap_or((0.0, 1.0));
    let span = (xb - xa).max(yb - ya);
    let k = (W - 2.0 * M - 60.0).min(H - 2.0 * M) / span;
    let px = |x: f64| M + (x - xa) * k;
    let py = |y: f64| H - M - (y - ya) * k;
    let mut xs: Vec<f64> = t.rows.iter().map(|r| r[0]).collect();
    let mut ys: Vec<f64> = t.rows.iter().map(|r| r[1]).collect();
    let dx = spacing(&mut xs).min(span / 8.0);
    let dy = spacing(&mut ys).min(span / 8.0);
    let cell = dx.min(dy) * k;
    let cell = if cell.is_finite() { cell.max(1.0) } else { 4.0 };
    for r in &t.rows {
        writeln!(
            s,
            r#"<rect x="{:.2}" y="{:.2}" width="{cell:.2}" height="{cell:.2}" fill="{}"/>"#,
            px(r[0]) - cell / 2.0,
            py(r[1]) - cell / 2.0,
            color((r[2] - va) / (vb - va))
        )
        .unwrap();
    }
    // Color bar.
    let bx = W - M - 24.0;
    for i in 0..32 {
        let f = i as f64 / 31.0;
        let y = H - M - f * (H - 2.0 * M);
        writeln!(s, r#"<rect x="{bx}" y="{:.2}" width="14" height="{:.2}" fill="{}"/>"#, y - (H - 2.0 * M) / 31.0, (H - 2.0 * M) / 31.0 + 0.5, color(f)).unwrap();
    }
    writeln!(s, r#"<text x="{bx}" y="{}">{vb:.4e}</text>"#, M - 6.0).unwrap();
    writeln!(s, r#"<text x="{bx}" y="{}">{va:.4e}</text>"#, H - M + 14.0).unwrap();
    writeln!(s, r#"<text x="{}" y="20" text-anchor="middle">{title}</text>"#, W / 2.0).unwrap();
    s.push_str("</svg>\n");
    s
}

fn loglog(t: &Table) -> String {
    let mut s = String::new();
    open(&mut s);
    axes(&mut s, "log ρ", "log value");
    let pts: Vec<(f64, f64)> = t
        .rows
        .iter()
        .filter(|r| r[0] > 0.0 && r[1] > 0.0)
        .map(|r| (r[0].ln(), r[1].ln()))
        .collect();
    let (Some((xa, xb)), Some((ya, yb))) = (range(pts.iter().map(|p| p.0)), range(pts.iter().map(|p| p.1))) else {
        s.push_str("</svg>\n");
        return s;
    };
    let px = |x: f64| M + (x - xa) / (xb - xa) * (W - 2.0 * M);
    let py = |y: f64| H - M - (y - ya) / (yb - ya) * (H - 2.0 * M);
    for &(x, y) in &pts {
        writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="black"/>"#, px(x), py(y)).unwrap();
    }
    let xs: Vec<f64> = t.rows.iter().map(|r| r[0]).collect();
    let ys: Vec<f64> = t.rows.iter().map(|r| r[1]).collect();
    if let Some(fit) = fit_loglog(&xs, &ys) {
        let line = |x: f64| fit.log_prefactor + fit.exponent * x;
        writeln!(
            s,
            r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="crimson"/>"#,
            px(xa),
            py(line(xa)),
            px(xb),
            py(line(xb))
        )
        .unwrap();
        writeln!(
            s,
            r#"<text x="{}" y="20" text-anchor="middle" data-slope="{:?}">slope = {:.12}</text>"#,
            W / 2.0,
            fit.exponent,
            fit.exponent
        )
        .unwrap();
    }
    s.push_str("</svg>\n");
    s
}

/// Slope annotated in a profile plot, if any.
pub fn annotated_slope(svg: &str) -> Option<f64> {
    let i = svg.find("data-slope=\"")? + "data-slope=\"".len();
    let j = svg[i..].find('"')? + i;
    svg[i..j].parse().ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_profile_draws_axes_only() {
        let svg = plot_csv("rho,value\n").unwrap();
        assert!(svg.contains("<path") && !svg.contains("<circle"));
    }

    #[test]
    fn slope_annotation_matches_fit() {
        let csv = "rho,value\n0.5,0.25\n0.25,0.0625\n0.125,0.015625\n";
        let svg = plot_csv(csv).unwrap();
        assert!((annotated_slope(&svg).unwrap() - 2.0).abs() < 1e-9);
        assert_eq!(svg, plot_csv(csv).unwrap());
    }

    #[test]
    fn heatmap_is_monotone_for_linear_field() {
        let mut csv = String::from("x,y,value\n");
        for i in 0..5 {
            csv += &format!("{},0,{}\n", i as f64 * 0.25, i as f64 * 0.25);
        }
        let svg = plot_csv(&csv).unwrap();
        let fills: Vec<&str> = svg
            .lines()
            .filter(|l| l.contains("width=") && l.contains("fill=\"#") && !l.contains("width=\"14\""))
            .map(|l| l.rsplit("fill=\"").next().unwrap())
            .collect();
        assert_eq!(fills.len(), 5);
        assert!(fills.first().unwrap().starts_with("#440154"));
        assert!(fills.last().unwrap().starts_with("#fde725"));
        assert!(plot_csv("a,b,c,d\n1,2,3,4\n").is_err());
    }
}
