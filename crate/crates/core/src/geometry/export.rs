//! Sampled curves for plotting: caustic, level surfaces and the Maxwell set,
//! together with their pre-images in the initial coordinates.
//!
//! Implicit curves (Maxwell, pre-Maxwell) are traced by solving for one
//! coordinate along columns and rows of a grid and linking nearby roots into
//! polylines.

use serde::Serialize;

use crate::action::ReducedAction;
use crate::polyalg::{real_roots_f64, to_f64, F64Poly, Polynomial, Rational};

use super::caustic::{CausticData, LAMBDA};
use super::checks::{FlowEval, PreLevel};
use super::maxwell::{classify_b_point, maxwell_klein, pre_maxwell, NodeKind};
use super::GeometryError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveKind {
    Caustic,
    Level,
    Maxwell,
    PreCaustic,
    PreLevel,
    PreMaxwell,
}

impl CurveKind {
    /// Pre-curves live in the initial coordinates.
    pub fn is_pre(self) -> bool {
        matches!(self, CurveKind::PreCaustic | CurveKind::PreLevel | CurveKind::PreMaxwell)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CurvePoint {
    pub param: f64,
    pub coords: Vec<f64>,
}

/// One connected polyline.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Curve {
    pub id: String,
    pub kind: CurveKind,
    pub points: Vec<CurvePoint>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CurveSet {
    pub t: f64,
    pub dim: usize,
    pub curves: Vec<Curve>,
}

#[derive(Clone, Debug)]
pub struct ExportOptions {
    pub lambda_range: (f64, f64),
    pub samples: usize,
    pub levels: Vec<Rational>,
    pub maxwell: bool,
    /// Spatial window for traced curves; derived from the caustic if absent.
    pub window: Option<[(f64, f64); 2]>,
    /// Window in the initial coordinates for pre-curves.
    pub pre_window: [(f64, f64); 2],
    /// Values of the second parameter for three-dimensional caustics.
    pub lambda2: Vec<f64>,
}

impl Default for ExportOptions {
    fn default() -> Self {
        ExportOptions {
            lambda_range: (-2.0, 2.0),
            samples: 400,
            levels: Vec::new(),
            maxwell: true,
            window: None,
            pre_window: [(-2.0, 2.0), (-2.0, 2.0)],
            lambda2: vec![0.0],
        }
    }
}

/// Splits a sequence of samples wherever the step jumps far above the median.
fn split_jumps(points: Vec<CurvePoint>) -> Vec<Vec<CurvePoint>> {
    if points.len() < 3 {
        return vec![points];
    }
    let dist = |a: &CurvePoint, b: &CurvePoint| {
        a.coords.iter().zip(&b.coords).map(|(u, v)| (u - v).powi(2)).sum::<f64>().sqrt()
    };
    let mut steps: Vec<f64> = points.windows(2).map(|w| dist(&w[0], &w[1])).collect();
    steps.sort_by(f64::total_cmp);
    let limit = 50.0 * steps[steps.len() / 2].max(f64::MIN_POSITIVE);
    let mut out = vec![Vec::new()];
    for p in points {
        let current = out.last_mut().expect("nonempty");
        if let Some(last) = current.last() {
            if dist(last, &p) > limit {
                out.push(Vec::new());
            }
        }
        out.last_mut().expect("nonempty").push(p);
    }
    out.retain(|s| s.len() > 1);
    out
}

fn push_pieces(curves: &mut Vec<Curve>, base: &str, kind: CurveKind, points: Vec<CurvePoint>) {
    let pieces = split_jumps(points);
    let n = pieces.len();
    for (k, pts) in pieces.into_iter().enumerate() {
        let id = if n == 1 { base.to_string() } else { format!("{base}:{k}") };
        curves.push(Curve { id, kind, points: pts });
    }
}

/// Links roots found along grid lines into polylines: `rows[i]` holds the
/// roots on the line with parameter `params[i]`. `coords` maps a
/// `(param, root)` pair to the plane.
fn link_roots(params: &[f64], rows: &[Vec<f64>], max_jump: f64, coords: impl Fn(f64, f64) -> [f64; 2]) -> Vec<Vec<CurvePoint>> {
    let mut open: Vec<Vec<CurvePoint>> = Vec::new();
    let mut closed: Vec<Vec<CurvePoint>> = Vec::new();
    for (p, roots) in params.iter().zip(rows) {
        let mut next: Vec<Vec<CurvePoint>> = Vec::new();
        let mut used = vec![false; open.len()];
        for &r in roots {
            let best = open
                .iter()
                .enumerate()
                .filter(|(k, _)| !used[*k])
                .map(|(k, line)| (k, (line.last().expect("nonempty").coords[1] - coords(*p, r)[1]).abs()))
                .filter(|(_, d)| *d <= max_jump)
                .min_by(|a, b| a.1.total_cmp(&b.1));
            let c = coords(*p, r);
            let pt = CurvePoint { param: *p, coords: c.to_vec() };
            match best {
                Some((k, _)) => {
                    used[k] = true;
                    let mut line = std::mem::take(&mut open[k]);
                    line.push(pt);
                    next.push(line);
                }
                None => next.push(vec![pt]),
            }
        }
        for (k, line) in open.into_iter().enumerate() {
            if !used[k] && !line.is_empty() {
                closed.push(line);
            }
        }
        open = next;
    }
    closed.extend(open);
    closed.retain(|l| l.len() > 1);
    closed
}

/// Real roots in the second variable of `p(u, v)` at each `u`, inside `range`.
fn roots_along(p: &Polynomial, u: &str, v: &str, us: &[f64], range: (f64, f64)) -> Vec<Vec<f64>> {
    let coeffs: Vec<F64Poly> = p
        .with_vars(&[u, v])
        .coefficients_in(v)
        .iter()
        .map(|c| c.compile(&[u]).expect("two variables"))
        .collect();
    us.iter()
        .map(|&uu| {
            let c: Vec<f64> = coeffs.iter().map(|f| f.eval(&[uu])).collect();
            if c.iter().all(|x| *x == 0.0) {
                return Vec::new();
            }
            let mut r: Vec<f64> = real_roots_f64(&c).into_iter().filter(|r| *r >= range.0 && *r <= range.1).collect();
            r.sort_by(f64::total_cmp);
            r
        })
        .collect()
}

fn grid(range: (f64, f64), n: usize) -> Vec<f64> {
    (0..n).map(|k| range.0 + (range.1 - range.0) * k as f64 / (n.max(2) - 1) as f64).collect()
}

/// Traces `p(x, y) = 0` by columns and rows, keeping points accepted by `keep`.
fn trace_implicit(
    p: &Polynomial,
    names: [&str; 2],
    window: [(f64, f64); 2],
    n: usize,
    keep: impl Fn(f64, f64) -> bool,
) -> Vec<Vec<CurvePoint>> {
    let xs = grid(window[0], n);
    let ys = grid(window[1], n);
    let jump_y = 0.05 * (window[1].1 - window[1].0);
    let jump_x = 0.05 * (window[0].1 - window[0].0);
    let cols: Vec<Vec<f64>> = roots_along(p, names[0], names[1], &xs, window[1])
        .into_iter()
        .zip(&xs)
        .map(|(r, &x)| r.into_iter().filter(|&y| keep(x, y)).collect())
        .collect();
    let rows: Vec<Vec<f64>> = roots_along(p, names[1], names[0], &ys, window[0])
        .into_iter()
        .zip(&ys)
        .map(|(r, &y)| r.into_iter().filter(|&x| keep(x, y)).collect())
        .collect();
    let mut lines = link_roots(&xs, &cols, jump_y, |x, y| [x, y]);
    // rows link on the x coordinate, so swap before and after
    let by_rows = link_roots(&ys, &rows, jump_x, |y, x| [y, x]);
    lines.extend(by_rows.into_iter().map(|l| {
        l.into_iter()
            .map(|p| CurvePoint { param: p.param, coords: vec![p.coords[1], p.coords[0]] })
            .collect()
    }));
    lines
}

fn caustic_window(curves: &[Curve]) -> [(f64, f64); 2] {
    let mut w = [(f64::INFINITY, f64::NEG_INFINITY); 2];
    for c in curves.iter().filter(|c| c.kind == CurveKind::Caustic) {
        for p in &c.points {
            for k in 0..2 {
                w[k].0 = w[k].0.min(p.coords[k]);
                w[k].1 = w[k].1.max(p.coords[k]);
            }
        }
    }
    for r in &mut w {
        if !r.0.is_finite() {
            *r = (-1.0, 1.0);
        }
        let pad = 0.25 * (r.1 - r.0).max(1e-9);
        *r = (r.0 - pad, r.1 + pad);
    }
    w
}

/// Samples every curve available for the data at time `t`.
pub fn export_curves(
    ra: &ReducedAction,
    caustic: &CausticData,
    t: &Rational,
    opts: &ExportOptions,
) -> Result<CurveSet, GeometryError> {
    let tf = to_f64(t);
    if tf <= 0.0 {
        return Err(GeometryError::Time(tf));
    }
    let dim = caustic.dim;
    let n = opts.samples.max(2);
    let mut curves = Vec::new();

    if dim == 2 {
        let pts = caustic
            .sample(tf, opts.lambda_range, n, &[])
            .into_iter()
            .map(|(param, coords)| CurvePoint { param, coords })
            .collect();
        push_pieces(&mut curves, "caustic", CurveKind::Caustic, pts);
    } else {
        for l2 in &opts.lambda2 {
            let pts = caustic
                .sample(tf, opts.lambda_range, n, &[*l2])
                .into_iter()
                .map(|(param, coords)| CurvePoint { param, coords })
                .collect();
            push_pieces(&mut curves, &format!("caustic:{LAM2}={l2}", LAM2 = LAMBDA[1]), CurveKind::Caustic, pts);
        }
        return Ok(CurveSet { t: tf, dim, curves });
    }

    let fe = FlowEval::new(ra, tf);
    let xs0 = grid(opts.pre_window[0], n);
    for c in &opts.levels {
        let pl = PreLevel::new(ra, c, t);
        for k in 0..pl.branches() {
            let mut pre = Vec::new();
            let mut img = Vec::new();
            for &x0 in &xs0 {
                let Some(y0) = pl.y0(x0, k) else { continue };
                if !y0.is_finite() || y0 < opts.pre_window[1].0 || y0 > opts.pre_window[1].1 {
                    continue;
                }
                pre.push(CurvePoint { param: x0, coords: vec![x0, y0] });
                img.push(CurvePoint { param: x0, coords: fe.map(x0, y0).to_vec() });
            }
            push_pieces(&mut curves, &format!("level:{c}:{k}"), CurveKind::Level, img);
            push_pieces(&mut curves, &format!("pre_level:{c}:{k}"), CurveKind::PreLevel, pre);
        }
    }

    let mut pre_c = Vec::new();
    for &x0 in &xs0 {
        if let Some(v) = caustic.upper.eval(&[(LAMBDA[0], x0), ("t", tf)]) {
            if v[0] >= opts.pre_window[1].0 && v[0] <= opts.pre_window[1].1 {
                pre_c.push(CurvePoint { param: x0, coords: vec![x0, v[0]] });
            }
        }
    }
    push_pieces(&mut curves, "pre_caustic", CurveKind::PreCaustic, pre_c);

    let degree = ra.scaled.degree_in("x0").unwrap_or(0);
    if opts.maxwell && degree >= 4 {
        let window = opts.window.unwrap_or_else(|| caustic_window(&curves));
        let mk = maxwell_klein(ra, caustic)?;
        let b = mk.b_t.evaluate_at("t", t).trimmed();
        if b.contains_var("x") || b.contains_var("y") {
            let lines = trace_implicit(&b, ["x", "y"], window, n, |x, y| {
                classify_b_point(ra, &[x, y], tf).is_ok_and(|c| c.kind == NodeKind::Crunode)
            });
            for (k, l) in lines.into_iter().enumerate() {
                curves.push(Curve { id: format!("maxwell:{k}"), kind: CurveKind::Maxwell, points: l });
            }
        }
        let pm = pre_maxwell(ra, caustic)?;
        let p = pm.poly.evaluate_at("t", t).trimmed();
        if p.contains_var("x0") || p.contains_var("y0") {
            let lines = trace_implicit(&p, ["x0", "y0"], opts.pre_window, n, |_, _| true);
            for (k, l) in lines.into_iter().enumerate() {
                curves.push(Curve { id: format!("pre_maxwell:{k}"), kind: CurveKind::PreMaxwell, points: l });
            }
        }
    }
    Ok(CurveSet { t: tf, dim, curves })
}

impl CurveSet {
    /// CSV with columns `curve_id,param,x,y[,z]`, in curve order. The id
    /// starts with the snake-case curve kind.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("curve_id,param,x,y");
        if self.dim == 3 {
            out.push_str(",z");
        }
        out.push('\n');
        for c in &self.curves {
            for p in &c.points {
                out.push_str(&format!("{},{:e}", c.id, p.param));
                for v in &p.coords {
                    out.push_str(&format!(",{v:e}"));
                }
                out.push('\n');
            }
        }
        out
    }
}
