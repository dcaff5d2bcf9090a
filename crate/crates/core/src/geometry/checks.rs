//! Sampled verification of cusp and normal properties in two dimensions.
//!
//! Level surfaces are traced through their pre-images: the pre-level curve
//! `S0 + (t/2)|∇S0|² = c` is quadratic in `y0`, so each branch is a graph
//! over `x0` and is pushed forward by `Φ_t`.

use serde::Serialize;

use crate::action::{build_flow, ReducedAction, INITIAL};
use crate::polyalg::{real_roots_f64, resultant, to_f64, F64Poly, Polynomial, Rational};

use super::caustic::{univariate_real_roots, CausticData};
use super::maxwell::pre_maxwell;
use super::GeometryError;

/// Distance tolerance for cusps lying on the caustic.
pub const CUSP_ON_CAUSTIC_TOL: f64 = 1e-8;
/// `|sin|` tolerance for parallel directions.
pub const ANGLE_TOL: f64 = 1e-8;
/// Intersections with `|sin|` below this are counted as tangential.
pub const TANGENCY_TOL: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub observed: f64,
    pub tolerance: f64,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct CheckReport {
    pub checks: Vec<CheckResult>,
    /// Cusps found on each level surface, keyed by the level as text.
    pub level_cusps: Vec<(String, Vec<[f64; 2]>)>,
    /// Images of transversal pre-Maxwell / pre-caustic intersections.
    pub maxwell_cusps: Vec<[f64; 2]>,
}

impl CheckReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    fn push(&mut self, name: &str, observed: f64, tolerance: f64, passed: bool, detail: String) {
        self.checks.push(CheckResult {
            name: name.into(),
            passed,
            observed,
            tolerance,
            detail,
        });
    }
}

/// Flow map and Jacobian evaluated in floating point at a fixed time.
pub(crate) struct FlowEval {
    phi: Vec<F64Poly>,
    jac: Vec<Vec<F64Poly>>,
    t: f64,
}

impl FlowEval {
    pub(crate) fn new(ra: &ReducedAction, t: f64) -> FlowEval {
        let flow = build_flow(&ra.data);
        let order = ["x0", "y0", "t"];
        FlowEval {
            phi: flow.phi.iter().map(|p| p.compile(&order).expect("flow variables")).collect(),
            jac: flow
                .jacobian
                .iter()
                .map(|row| row.iter().map(|p| p.compile(&order).expect("flow variables")).collect())
                .collect(),
            t,
        }
    }

    pub(crate) fn map(&self, x0: f64, y0: f64) -> [f64; 2] {
        let a = [x0, y0, self.t];
        [self.phi[0].eval(&a), self.phi[1].eval(&a)]
    }

    fn jacobian(&self, x0: f64, y0: f64) -> [[f64; 2]; 2] {
        let a = [x0, y0, self.t];
        [
            [self.jac[0][0].eval(&a), self.jac[0][1].eval(&a)],
            [self.jac[1][0].eval(&a), self.jac[1][1].eval(&a)],
        ]
    }

    fn det(&self, x0: f64, y0: f64) -> f64 {
        let j = self.jacobian(x0, y0);
        j[0][0] * j[1][1] - j[0][1] * j[1][0]
    }

    /// Unit vector spanning the kernel of the (nearly singular) Jacobian.
    fn kernel(&self, x0: f64, y0: f64) -> [f64; 2] {
        let j = self.jacobian(x0, y0);
        let row = if j[0][0].hypot(j[0][1]) >= j[1][0].hypot(j[1][1]) { j[0] } else { j[1] };
        unit([-row[1], row[0]])
    }
}

fn unit(v: [f64; 2]) -> [f64; 2] {
    let n = v[0].hypot(v[1]);
    [v[0] / n, v[1] / n]
}

fn sin_angle(u: [f64; 2], v: [f64; 2]) -> f64 {
    let u = unit(u);
    let v = unit(v);
    (u[0] * v[1] - u[1] * v[0]).abs()
}

/// Pre-level curve `L(x0, y0) = 0` as a quadratic in `y0`.
pub(crate) struct PreLevel {
    coeffs: Vec<F64Poly>,
    lx: F64Poly,
    ly: F64Poly,
}

impl PreLevel {
    pub(crate) fn new(ra: &ReducedAction, c: &Rational, t: &Rational) -> PreLevel {
        let s0 = ra.data.s0();
        let mut grad_sq = Polynomial::zero();
        for v in &INITIAL[..2] {
            let g = s0.derivative(v);
            grad_sq = &grad_sq + &(&g * &g);
        }
        let half_t = Polynomial::constant(t / Rational::from_integer(2.into()));
        let l = &(s0 + &(&half_t * &grad_sq)) - &Polynomial::constant(c.clone());
        let l = l.with_vars(&["x0", "y0"]);
        PreLevel {
            coeffs: l.coefficients_in("y0").iter().map(|p| p.compile(&["x0"]).expect("x0 only")).collect(),
            lx: l.derivative("x0").compile(&["x0", "y0"]).expect("pre-level variables"),
            ly: l.derivative("y0").compile(&["x0", "y0"]).expect("pre-level variables"),
        }
    }

    pub(crate) fn branches(&self) -> usize {
        self.coeffs.len().saturating_sub(1).max(1)
    }

    /// `y0` on branch `k`, if real.
    pub(crate) fn y0(&self, x0: f64, k: usize) -> Option<f64> {
        let c: Vec<f64> = self.coeffs.iter().map(|p| p.eval(&[x0])).collect();
        match c.len() {
            2 if c[1] != 0.0 => Some(-c[0] / c[1]),
            3 if c[2] != 0.0 => {
                let disc = c[1] * c[1] - 4.0 * c[2] * c[0];
                if disc < 0.0 {
                    return None;
                }
                let s = if k == 0 { 1.0 } else { -1.0 };
                Some((-c[1] + s * disc.sqrt()) / (2.0 * c[2]))
            }
            3 if c[1] != 0.0 && k == 0 => Some(-c[0] / c[1]),
            _ => None,
        }
    }

    fn tangent(&self, x0: f64, y0: f64) -> [f64; 2] {
        // (L_y, -L_x) is tangent; scaled so the x0 component is 1 when possible
        let lx = self.lx.eval(&[x0, y0]);
        let ly = self.ly.eval(&[x0, y0]);
        [ly, -lx]
    }
}

fn bisect(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> f64) -> f64 {
    let mut flo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm > 0.0) == (flo > 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[derive(Clone, Debug)]
pub struct CheckConfig {
    pub levels: Vec<Rational>,
    pub x0_range: (f64, f64),
    pub samples: usize,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            levels: vec![Rational::new(1.into(), 10.into())],
            x0_range: (-2.0, 2.0),
            samples: 4000,
        }
    }
}

struct LevelCusp {
    x0: f64,
    y0: f64,
}

/// Cusps (velocity reversals) and pre-caustic crossings along each branch.
fn level_features(pl: &PreLevel, fe: &FlowEval, cfg: &CheckConfig) -> (Vec<LevelCusp>, Vec<LevelCusp>) {
    let mut cusps = Vec::new();
    let mut crossings = Vec::new();
    let n = cfg.samples.max(2);
    let step = (cfg.x0_range.1 - cfg.x0_range.0) / (n - 1) as f64;
    for k in 0..pl.branches() {
        let velocity = |x0: f64| -> Option<[f64; 2]> {
            let y0 = pl.y0(x0, k)?;
            let tau = pl.tangent(x0, y0);
            if tau[0] == 0.0 {
                return None;
            }
            let tau = [1.0, tau[1] / tau[0]];
            let j = fe.jacobian(x0, y0);
            Some([j[0][0] * tau[0] + j[0][1] * tau[1], j[1][0] * tau[0] + j[1][1] * tau[1]])
        };
        let det = |x0: f64| pl.y0(x0, k).map(|y0| fe.det(x0, y0));
        for i in 0..n - 1 {
            let a = cfg.x0_range.0 + step * i as f64;
            let b = a + step;
            if let (Some(va), Some(vb)) = (velocity(a), velocity(b)) {
                if va[0] * vb[0] + va[1] * vb[1] < 0.0 {
                    let s = bisect(a, b, |x| velocity(x).map_or(0.0, |v| v[0] * va[0] + v[1] * va[1]));
                    // a reversal through a pole of the branch is not a cusp
                    let bound = 1e-6 * va[0].hypot(va[1]).max(vb[0].hypot(vb[1]));
                    if let (Some(y0), Some(vs)) = (pl.y0(s, k), velocity(s)) {
                        if vs[0].hypot(vs[1]) <= bound {
                            cusps.push(LevelCusp { x0: s, y0 });
                        }
                    }
                }
            }
            if let (Some(da), Some(db)) = (det(a), det(b)) {
                if da * db < 0.0 {
                    let s = bisect(a, b, |x| det(x).unwrap_or(0.0));
                    let bound = 1e-6 * da.abs().max(db.abs());
                    if let (Some(y0), Some(ds)) = (pl.y0(s, k), det(s)) {
                        if ds.abs() <= bound {
                            crossings.push(LevelCusp { x0: s, y0 });
                        }
                    }
                }
            }
        }
    }
    (cusps, crossings)
}

/// Verifies cusp and normal properties at time `t` and writes a report.
pub fn cusp_and_normal_checks(
    ra: &ReducedAction,
    caustic: &CausticData,
    t: &Rational,
    cfg: &CheckConfig,
) -> Result<CheckReport, GeometryError> {
    if ra.data.dim() != 2 {
        return Err(GeometryError::Dimension { required: 2, got: ra.data.dim() });
    }
    let tf = to_f64(t);
    if tf <= 0.0 {
        return Err(GeometryError::Time(tf));
    }
    let fe = FlowEval::new(ra, tf);
    let mut report = CheckReport::default();

    for c in &cfg.levels {
        let pl = PreLevel::new(ra, c, t);
        let (cusps, crossings) = level_features(&pl, &fe, cfg);
        let mut worst_dist = 0.0f64;
        let mut worst_angle = 0.0f64;
        let mut points = Vec::new();
        for cp in &cusps {
            let h = fe.map(cp.x0, cp.y0);
            let on_caustic = caustic.point(&[cp.x0], tf).unwrap_or(vec![f64::NAN; 2]);
            let dist = (h[0] - on_caustic[0]).hypot(h[1] - on_caustic[1]);
            worst_dist = worst_dist.max(if dist.is_nan() { f64::INFINITY } else { dist });
            let angle = sin_angle(pl.tangent(cp.x0, cp.y0), fe.kernel(cp.x0, cp.y0));
            worst_angle = worst_angle.max(angle);
            points.push(h);
        }
        report.push(
            &format!("level c={c}: cusps lie on the caustic"),
            worst_dist,
            CUSP_ON_CAUSTIC_TOL,
            worst_dist <= CUSP_ON_CAUSTIC_TOL,
            format!("{} cusps", cusps.len()),
        );
        report.push(
            &format!("level c={c}: cusp tangent along the kernel"),
            worst_angle,
            ANGLE_TOL,
            worst_angle <= ANGLE_TOL,
            format!("{} cusps", cusps.len()),
        );
        let mut worst_speed = 0.0f64;
        for cr in &crossings {
            let tau = unit(pl.tangent(cr.x0, cr.y0));
            let j = fe.jacobian(cr.x0, cr.y0);
            let v = [j[0][0] * tau[0] + j[0][1] * tau[1], j[1][0] * tau[0] + j[1][1] * tau[1]];
            let norm = j.iter().flatten().fold(0.0f64, |m, x| m.max(x.abs()));
            worst_speed = worst_speed.max(v[0].hypot(v[1]) / norm);
        }
        let matched = crossings
            .iter()
            .filter(|cr| cusps.iter().any(|cp| (cp.x0 - cr.x0).abs() <= 1e-6 * cr.x0.abs().max(1.0)))
            .count();
        report.push(
            &format!("level c={c}: pre-curve crossings map to cusps"),
            worst_speed,
            ANGLE_TOL,
            worst_speed <= ANGLE_TOL && matched == crossings.len(),
            format!(
                "{} crossings, {} cusps, {} touching the pre-caustic",
                crossings.len(),
                cusps.len(),
                cusps.len().saturating_sub(matched)
            ),
        );
        report.level_cusps.push((c.to_string(), points));
    }

    maxwell_cusp_checks(ra, caustic, t, &fe, &mut report)?;
    Ok(report)
}

fn maxwell_cusp_checks(
    ra: &ReducedAction,
    caustic: &CausticData,
    t: &Rational,
    fe: &FlowEval,
    report: &mut CheckReport,
) -> Result<(), GeometryError> {
    let pm = match pre_maxwell(ra, caustic) {
        Ok(pm) => pm,
        Err(GeometryError::FewCriticalPoints(_)) => return Ok(()),
        Err(e) => return Err(e),
    };
    let pm_t = pm.poly.evaluate_at("t", t).trimmed();
    let pc_t = caustic.pre_caustic.evaluate_at("t", t).trimmed();
    if !pm_t.contains_var("y0") || !pc_t.contains_var("y0") {
        return Ok(());
    }
    let r = resultant(&pm_t, &pc_t, "y0")?;
    if r.is_zero() || r.is_constant() {
        return Ok(());
    }
    let order = ["x0", "y0"];
    let pm_x = pm_t.derivative("x0").compile(&order)?;
    let pm_y = pm_t.derivative("y0").compile(&order)?;
    let pc_x = pc_t.derivative("x0").compile(&order)?;
    let pc_y = pc_t.derivative("y0").compile(&order)?;
    let g = pm.g.evaluate_at("t", t).trimmed();
    let tf = to_f64(t);
    let mut worst = 0.0f64;
    let mut tangential = 0;
    for x0 in univariate_real_roots(&r.trimmed()) {
        let Some(y0) = caustic.upper.eval(&[("lam", x0), ("t", tf)]).map(|v| v[0]) else { continue };
        let npm = [pm_x.eval(&[x0, y0]), pm_y.eval(&[x0, y0])];
        let npc = [pc_x.eval(&[x0, y0]), pc_y.eval(&[x0, y0])];
        if npm[0].hypot(npm[1]) == 0.0 {
            tangential += 1;
            continue;
        }
        if sin_angle(npm, npc) < TANGENCY_TOL {
            tangential += 1;
            continue;
        }
        if !real_partner(&g, x0, y0) {
            continue;
        }
        let tau = unit([npm[1], -npm[0]]);
        let j = fe.jacobian(x0, y0);
        let v = [j[0][0] * tau[0] + j[0][1] * tau[1], j[1][0] * tau[0] + j[1][1] * tau[1]];
        let norm = j.iter().flatten().fold(0.0f64, |m, x| m.max(x.abs()));
        worst = worst.max(v[0].hypot(v[1]) / norm);
        report.maxwell_cusps.push(fe.map(x0, y0));
    }
    report.push(
        "maxwell cusps are images of pre-Maxwell/pre-caustic crossings",
        worst,
        ANGLE_TOL,
        worst <= ANGLE_TOL,
        format!("{} transversal crossings, {} tangential", report.maxwell_cusps.len(), tangential),
    );
    Ok(())
}

/// `G(·; x0, y0)` has a real double root away from `x0`.
fn real_partner(g: &Polynomial, x0: f64, y0: f64) -> bool {
    let gxy = |p: &Polynomial| -> Vec<f64> {
        p.coefficients_in("xc")
            .iter()
            .map(|c| c.eval_f64(&[("x0", x0), ("y0", y0)]).unwrap_or(f64::NAN))
            .collect()
    };
    let gc = gxy(g);
    let dc = gxy(&g.derivative("xc"));
    let scale = gc.iter().fold(0.0f64, |m, c| m.max(c.abs())).max(f64::MIN_POSITIVE);
    real_roots_f64(&dc).into_iter().any(|xc| {
        let v = gc.iter().rev().fold(0.0, |s, c| s * xc + c);
        (xc - x0).abs() > 1e-6 && v.abs() <= 1e-8 * scale * (1.0 + xc.abs()).powi(gc.len() as i32)
    })
}
