//! SVG plots drawn from the CSV artifacts.
//!
//! Curves are read back from the same CSV text that is written to disk, so a
//! plot never shows data the CSV does not contain.

use std::fmt::Write;

const PANEL: f64 = 420.0;
const MARGIN: f64 = 40.0;

struct Polyline {
    kind: String,
    points: Vec<(f64, f64)>,
}

fn parse_curves(csv: &str) -> Vec<Polyline> {
    let mut out: Vec<(String, Polyline)> = Vec::new();
    for line in csv.lines().filter(|l| !l.starts_with('#')).skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() < 4 {
            continue;
        }
        let (Ok(x), Ok(y)) = (cols[2].parse::<f64>(), cols[3].parse::<f64>()) else { continue };
        match out.last_mut() {
            Some((id, p)) if id == cols[0] => p.points.push((x, y)),
            _ => {
                let kind = cols[0].split(':').next().unwrap_or("").to_string();
                out.push((cols[0].to_string(), Polyline { kind, points: vec![(x, y)] }));
            }
        }
    }
    out.into_iter().map(|(_, p)| p).collect()
}

/// Bounds from the 2nd to 98th percentile of each axis, widened by 10%, so
/// that points near poles do not flatten the picture.
fn robust_bounds(lines: &[&Polyline]) -> Option<[f64; 4]> {
    let mut xs: Vec<f64> = Vec::new();
    let mut ys: Vec<f64> = Vec::new();
    for l in lines {
        for &(x, y) in &l.points {
            if x.is_finite() && y.is_finite() {
                xs.push(x);
                ys.push(y);
            }
        }
    }
    if xs.is_empty() {
        return None;
    }
    let range = |v: &mut Vec<f64>| {
        v.sort_by(f64::total_cmp);
        let lo = v[(v.len() as f64 * 0.02) as usize];
        let hi = v[((v.len() as f64 * 0.98) as usize).min(v.len() - 1)];
        let pad = ((hi - lo) * 0.1).max(1e-9);
        (lo - pad, hi + pad)
    };
    let (x0, x1) = range(&mut xs);
    let (y0, y1) = range(&mut ys);
    Some([x0, x1, y0, y1])
}

fn style(kind: &str) -> (&'static str, &'static str) {
    match kind {
        "caustic" | "pre_caustic" => ("#c0392b", "12,6"),
        "maxwell" | "pre_maxwell" => ("#2c3e50", "none"),
        _ => ("#2471a3", "3,3"),
    }
}

fn panel(svg: &mut String, lines: &[&Polyline], offset: f64, title: &str) {
    let _ = writeln!(svg, r#"<g transform="translate({offset},0)">"#);
    let _ = writeln!(
        svg,
        r##"<rect x="{MARGIN}" y="{MARGIN}" width="{PANEL}" height="{PANEL}" fill="none" stroke="#999"/>"##
    );
    let _ = writeln!(svg, r#"<text x="{}" y="{}" font-size="13">{title}</text>"#, MARGIN, MARGIN - 8.0);
    if let Some([x0, x1, y0, y1]) = robust_bounds(lines) {
        let sx = |x: f64| MARGIN + (x - x0) / (x1 - x0) * PANEL;
        let sy = |y: f64| MARGIN + PANEL - (y - y0) / (y1 - y0) * PANEL;
        let inside = |&(x, y): &(f64, f64)| x >= x0 && x <= x1 && y >= y0 && y <= y1;
        for l in lines {
            let (colour, dash) = style(&l.kind);
            // split at points outside the box instead of drawing to them
            for run in l.points.split(|p| !inside(p)).filter(|r| r.len() >= 2) {
                let pts: Vec<String> = run.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
                let _ = writeln!(
                    svg,
                    r#"<polyline fill="none" stroke="{colour}" stroke-width="1.4" stroke-dasharray="{dash}" points="{}"/>"#,
                    pts.join(" ")
                );
            }
        }
        let _ = writeln!(
            svg,
            r#"<text x="{MARGIN}" y="{}" font-size="10">x [{x0:.3}, {x1:.3}]  y [{y0:.3}, {y1:.3}]</text>"#,
            MARGIN + PANEL + 16.0
        );
    }
    svg.push_str("</g>\n");
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Two panels: curves in physical coordinates on the left, pre-curves in
/// initial coordinates on the right.
pub fn curves_svg(csvs: &[String], title: &str) -> String {
    let all: Vec<Polyline> = csvs.iter().flat_map(|c| parse_curves(c)).collect();
    let (pre, spatial): (Vec<&Polyline>, Vec<&Polyline>) = all.iter().partition(|l| l.kind.starts_with("pre_"));
    let width = 2.0 * (PANEL + 2.0 * MARGIN);
    let height = PANEL + 2.0 * MARGIN + 10.0;
    let mut svg = format!(
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    svg.push('\n');
    let _ = writeln!(svg, r#"<title>{}</title>"#, escape(title));
    panel(&mut svg, &spatial, 0.0, "physical plane");
    panel(&mut svg, &pre, PANEL + 2.0 * MARGIN, "initial plane");
    svg.push_str("</svg>\n");
    svg
}

/// Process values against time, one polyline per branch.
pub fn process_svg(csv: &str, title: &str) -> String {
    let mut branches: Vec<(String, Polyline)> = Vec::new();
    for line in csv.lines().filter(|l| !l.starts_with('#')).skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() < 3 {
            continue;
        }
        let (Ok(t), Ok(v)) = (cols[0].parse::<f64>(), cols[1].parse::<f64>()) else { continue };
        match branches.iter_mut().find(|(id, _)| id == cols[2]) {
            Some((_, p)) => p.points.push((t, v)),
            None => branches.push((cols[2].to_string(), Polyline { kind: "process".into(), points: vec![(t, v)] })),
        }
    }
    let lines: Vec<&Polyline> = branches.iter().map(|(_, p)| p).collect();
    let width = PANEL + 2.0 * MARGIN;
    let height = PANEL + 2.0 * MARGIN + 10.0;
    let mut svg = format!(
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    svg.push('\n');
    let _ = writeln!(svg, r#"<title>{}</title>"#, escape(title));
    panel(&mut svg, &lines, 0.0, &escape(title));
    svg.push_str("</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clipping_breaks_runs() {
        let mut csv = String::from("curve_id,param,x,y\n");
        for k in 0..100 {
            let v = if k == 50 { 1e9 } else { k as f64 };
            csv.push_str(&format!("caustic,{k},{v},{v}\n"));
        }
        let svg = curves_svg(&[csv], "t");
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.contains("12,6"));
    }

    #[test]
    fn process_branches() {
        let csv = "# seed=1\nt,value,branch_id\n0,1,0\n1,2,0\n0,3,1\n1,4,1\n";
        assert_eq!(process_svg(csv, "zeta").matches("<polyline").count(), 2);
    }
}
