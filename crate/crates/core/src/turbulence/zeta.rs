//! The ζ process: the action at the moving caustic point whose level set
//! touches the pre-caustic.
//!
//! With linear noise every spatial set is translated by `-ε a∫W` and the
//! action picks up `x0`-independent terms. Evaluated at the translated
//! caustic point this gives
//! `ζ = f⁰(x⁰_t(λ)) - ε x⁰_t(λ)·(a∘W) + ε² (a∘W)·(a∘∫W) - (ε²/2) ∫|a∘W|² - c`,
//! with `λ` stationary for `f⁰(x⁰_t(λ)) - ε x⁰_t(λ)·(a∘W)`.

use serde::Serialize;

use crate::action::{ReducedAction, SPATIAL};
use crate::geometry::{on_curve, CausticData, LAMBDA};
use crate::polyalg::{exact_divide, gcd, near_real_roots_f64, q, square_free_part, F64Poly, Polynomial};

use super::brownian::BrownianScenario;
use super::zeros::{detect_zeros, ProcessTag, ZeroCrossingRecord};
use super::TurbulenceError;

/// Tolerance for grazes of the ζ process.
pub const ZETA_GRAZE_TOL: f64 = 1e-9;

const W_VARS: [&str; 3] = ["w1", "w2", "w3"];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProcessSample {
    pub t: f64,
    pub value: f64,
    pub branch: usize,
    /// Caustic parameters of the branch; empty for orthogonal turbulence.
    pub lambda: Vec<f64>,
    /// Deterministic caustic point `x⁰_t(λ)`; empty for orthogonal turbulence.
    pub point: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BranchEventKind {
    Birth,
    Death,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BranchEvent {
    pub t: f64,
    pub branch: usize,
    pub kind: BranchEventKind,
    pub lambda: Vec<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct SampledProcess {
    pub samples: Vec<ProcessSample>,
    pub events: Vec<BranchEvent>,
    /// Grid times where no stationary `λ` was found in the window.
    pub gaps: Vec<f64>,
}

impl SampledProcess {
    pub fn branches(&self) -> Vec<usize> {
        let mut ids: Vec<usize> = self.samples.iter().map(|s| s.branch).collect();
        ids.sort_unstable();
        ids.dedup();
        ids
    }

    /// Times and values of one branch, in time order.
    pub fn branch(&self, id: usize) -> (Vec<f64>, Vec<f64>) {
        self.samples.iter().filter(|s| s.branch == id).map(|s| (s.t, s.value)).unzip()
    }

    /// CSV with columns `t,value,branch_id`; the first line records seed and step.
    pub fn to_csv(&self, seed: u64, h: f64) -> String {
        let mut out = format!("# seed={seed} h={h:e}\nt,value,branch_id\n");
        for s in &self.samples {
            out.push_str(&format!("{:e},{:e},{}\n", s.t, s.value, s.branch));
        }
        out
    }
}

/// `ζ^c(t_i)` for orthogonal turbulence on the first path component.
pub fn zeta_orthogonal_values(scn: &BrownianScenario, a: f64, eps: f64, c: f64) -> Vec<f64> {
    let (w, iw, iw2) = (&scn.w[0], &scn.int_w[0], &scn.int_w2[0]);
    (0..scn.len())
        .map(|i| -a * eps * w[i] + eps * eps * w[i] * iw[i] - 0.5 * eps * eps * iw2[i] - c)
        .collect()
}

pub fn zeta_orthogonal(scn: &BrownianScenario, a: f64, eps: f64, c: f64) -> (SampledProcess, ZeroCrossingRecord) {
    let values = zeta_orthogonal_values(scn, a, eps, c);
    let times: Vec<f64> = (0..scn.len()).map(|i| scn.time(i)).collect();
    let record = zeta_record(&times, &values, a, eps, c, scn.horizon);
    let samples = times
        .iter()
        .zip(&values)
        .map(|(&t, &value)| ProcessSample { t, value, branch: 0, lambda: Vec::new(), point: Vec::new() })
        .collect();
    (SampledProcess { samples, ..Default::default() }, record)
}

pub(crate) fn zeta_record(times: &[f64], values: &[f64], a: f64, eps: f64, c: f64, horizon: f64) -> ZeroCrossingRecord {
    // ζ(0) = -c, so a zero at the origin is not a turbulent time
    let start = usize::from(values.first() == Some(&0.0) && values.len() > 1);
    let (times_z, grazes, degenerate) = detect_zeros(&times[start..], &values[start..], ZETA_GRAZE_TOL);
    ZeroCrossingRecord {
        process: ProcessTag::Zeta,
        times: times_z,
        grazes,
        c,
        params: Some((a, eps)),
        degenerate: degenerate && values[0] == 0.0,
        horizon,
    }
}

#[derive(Clone, Debug)]
pub struct ZetaDdimConfig {
    pub eps: f64,
    pub c: f64,
    /// Search window per caustic parameter.
    pub window: Vec<(f64, f64)>,
    /// Newton seeds per axis when the caustic has two parameters.
    pub seeds: usize,
    /// Reseed every this many steps (two parameters only).
    pub reseed: usize,
}

impl Default for ZetaDdimConfig {
    fn default() -> Self {
        ZetaDdimConfig {
            eps: 0.0,
            c: 0.0,
            window: vec![(-5.0, 5.0), (-5.0, 5.0)],
            seeds: 12,
            reseed: 50,
        }
    }
}

/// Stationarity equations in the caustic parameters, with `w_k` standing for
/// `ε a_k W_k(t)`.
pub struct ZetaSystem {
    dim: usize,
    /// `f⁰(x⁰_t(λ))` as `num / (t den^k)`.
    f_num: F64Poly,
    f_den: F64Poly,
    points: Vec<F64Poly>,
    point_den: F64Poly,
    equations: Vec<F64Poly>,
    jacobian: Vec<Vec<F64Poly>>,
    /// Two dimensions: the equation splits as `g(λ, t) e(λ, t, w)` with `g`
    /// free of the noise; coefficients in `λ` of `sqf(g)` and of `e`.
    fixed: Vec<F64Poly>,
    coeffs: Vec<F64Poly>,
}

impl ZetaSystem {
    pub fn new(ra: &ReducedAction, caustic: &CausticData) -> Result<Self, TurbulenceError> {
        let d = caustic.dim;
        let params = &LAMBDA[..d - 1];
        let mut order: Vec<&str> = params.to_vec();
        order.push("t");
        order.extend_from_slice(&W_VARS[..d]);

        let tf = ra.scaled.substitute("x0", &Polynomial::var(LAMBDA[0]));
        let (pn, k) = on_curve(&tf, &SPATIAL[..d], &caustic.preparam);
        let den = &caustic.preparam.den;
        let m = k.max(1);
        let t = Polynomial::var("t");
        let mut lin = Polynomial::zero();
        for (j, num) in caustic.preparam.num.iter().enumerate() {
            lin = &lin + &(&Polynomial::var(W_VARS[j]) * num);
        }
        // E · t · den^m = P
        let p = &(&pn * &den.pow(m - k)) - &(&(&t * &lin) * &den.pow(m - 1));
        let equations: Vec<Polynomial> = params
            .iter()
            .map(|v| &(&p.derivative(v) * den) - &(&p * &den.derivative(v)).scale(&q(m as i64)))
            .map(|e| e.with_vars(&order))
            .collect();
        let comp = |p: &Polynomial| p.with_vars(&order).compile(&order);
        let jacobian = equations
            .iter()
            .map(|e| params.iter().map(|v| comp(&e.derivative(v))).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        let (fixed, coeffs) = if d == 2 {
            let eq = &equations[0];
            let zero_w: Vec<(&str, Polynomial)> = W_VARS[..d].iter().map(|w| (*w, Polynomial::zero())).collect();
            let mut g = zero_w.iter().fold(eq.clone(), |acc, (w, z)| acc.substitute(w, z));
            for w in &W_VARS[..d] {
                g = gcd(&g, &eq.derivative(w));
            }
            let (g, e) = if g.contains_var(LAMBDA[0]) {
                (square_free_part(&g), exact_divide(eq, &g)?)
            } else {
                (Polynomial::zero(), eq.clone())
            };
            let rest = &order[1..];
            let split = |p: &Polynomial| {
                if p.is_zero() {
                    return Ok(Vec::new());
                }
                p.coefficients_in(LAMBDA[0])
                    .iter()
                    .map(|c| c.with_vars(rest).compile(rest))
                    .collect::<Result<Vec<_>, _>>()
            };
            (split(&g)?, split(&e)?)
        } else {
            (Vec::new(), Vec::new())
        };
        let point_order: Vec<&str> = order[..d].to_vec();
        Ok(ZetaSystem {
            dim: d,
            f_num: comp(&pn)?,
            f_den: comp(&(&t * &den.pow(k)))?,
            points: caustic
                .preparam
                .num
                .iter()
                .map(|n| n.with_vars(&point_order).compile(&point_order))
                .collect::<Result<Vec<_>, _>>()?,
            point_den: den.with_vars(&point_order).compile(&point_order)?,
            equations: equations.iter().map(comp).collect::<Result<Vec<_>, _>>()?,
            jacobian,
            fixed,
            coeffs,
        })
    }

    fn args(&self, lam: &[f64], t: f64, w: &[f64]) -> Vec<f64> {
        let mut a = lam.to_vec();
        a.push(t);
        a.extend_from_slice(w);
        a
    }

    /// Residuals of the stationarity equations, relative to their scale.
    pub fn residual(&self, lam: &[f64], t: f64, w: &[f64]) -> f64 {
        let a = self.args(lam, t, w);
        self.equations
            .iter()
            .map(|e| e.eval(&a).abs() / e.eval_abs(&a).max(f64::MIN_POSITIVE))
            .fold(0.0, f64::max)
    }

    /// Caustic point and deterministic action at `λ`, if defined.
    pub fn point_and_action(&self, lam: &[f64], t: f64) -> Option<(Vec<f64>, f64)> {
        let mut a = lam.to_vec();
        a.push(t);
        let den = self.point_den.eval(&a);
        let scale = self.point_den.eval_abs(&a);
        if den.abs() <= 1e-12 * scale.max(1.0) {
            return None;
        }
        let x = self.points.iter().map(|p| p.eval(&a) / den).collect();
        let w0 = vec![0.0; self.dim];
        let fa = self.args(lam, t, &w0);
        Some((x, self.f_num.eval(&fa) / self.f_den.eval(&fa)))
    }

    fn roots(&self, t: f64, w: &[f64], window: &[(f64, f64)], starts: &[Vec<f64>]) -> Vec<Vec<f64>> {
        let mut out: Vec<Vec<f64>> = Vec::new();
        if self.dim == 2 {
            let mut a = vec![t];
            a.extend_from_slice(w);
            let mut found = Vec::new();
            for part in [&self.fixed, &self.coeffs] {
                let c: Vec<f64> = part.iter().map(|p| p.eval(&a)).collect();
                if !c.is_empty() && c.iter().all(|v| *v == 0.0) {
                    return out;
                }
                found.extend(near_real_roots_f64(&c));
            }
            found.sort_by(f64::total_cmp);
            found.dedup_by(|x, y| (*x - *y).abs() <= 1e-9 * x.abs().max(1.0));
            for r in found {
                if r >= window[0].0 && r <= window[0].1 && self.point_and_action(&[r], t).is_some() {
                    out.push(vec![r]);
                }
            }
            return out;
        }
        for s in starts {
            if let Some(r) = self.newton(s.clone(), t, w) {
                let inside = r.iter().zip(window).all(|(v, (lo, hi))| v >= lo && v <= hi);
                let fresh = out.iter().all(|o| o.iter().zip(&r).map(|(u, v)| (u - v).abs()).fold(0.0, f64::max) > 1e-7);
                if inside && fresh && self.point_and_action(&r, t).is_some() {
                    out.push(r);
                }
            }
        }
        out
    }

    fn newton(&self, mut lam: Vec<f64>, t: f64, w: &[f64]) -> Option<Vec<f64>> {
        for _ in 0..40 {
            let a = self.args(&lam, t, w);
            let f = [self.equations[0].eval(&a), self.equations[1].eval(&a)];
            let j = [
                [self.jacobian[0][0].eval(&a), self.jacobian[0][1].eval(&a)],
                [self.jacobian[1][0].eval(&a), self.jacobian[1][1].eval(&a)],
            ];
            let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
            if det == 0.0 || !det.is_finite() {
                return None;
            }
            let d0 = (f[0] * j[1][1] - f[1] * j[0][1]) / det;
            let d1 = (j[0][0] * f[1] - j[1][0] * f[0]) / det;
            lam[0] -= d0;
            lam[1] -= d1;
            if !lam.iter().all(|v| v.is_finite()) {
                return None;
            }
            if d0.abs().max(d1.abs()) <= 1e-13 * lam[0].abs().max(lam[1].abs()).max(1.0) {
                return (self.residual(&lam, t, w) < 1e-8).then_some(lam);
            }
        }
        (self.residual(&lam, t, w) < 1e-8).then_some(lam)
    }
}

/// ζ along every stationary branch, continued in time from the previous
/// step's roots.
pub fn zeta_ddim(
    scn: &BrownianScenario,
    caustic: &CausticData,
    ra: &ReducedAction,
    cfg: &ZetaDdimConfig,
) -> Result<SampledProcess, TurbulenceError> {
    let d = caustic.dim;
    if scn.dim() != d {
        return Err(TurbulenceError::PathDimension { path: scn.dim(), data: d });
    }
    if cfg.window.len() < d - 1 {
        return Err(TurbulenceError::Window);
    }
    let sys = ZetaSystem::new(ra, caustic)?;
    let a = &ra.data.noise.direction;
    let eps = cfg.eps;
    let window = &cfg.window[..d - 1];
    let seeds: Vec<Vec<f64>> = if d == 3 {
        let n = cfg.seeds.max(2);
        let g = |r: (f64, f64), k: usize| r.0 + (r.1 - r.0) * (k as f64 + 0.5) / n as f64;
        (0..n * n).map(|k| vec![g(window[0], k % n), g(window[1], k / n)]).collect()
    } else {
        Vec::new()
    };
    let span = window.iter().map(|(lo, hi)| hi - lo).fold(0.0, f64::max);
    let max_jump = 0.05 * span;

    let mut out = SampledProcess::default();
    let mut active: Vec<(usize, Vec<f64>)> = Vec::new();
    let mut next_id = 0;
    for i in 1..scn.len() {
        let t = scn.time(i);
        let (w_t, int_w, int_w2) = scn.at(i);
        let w: Vec<f64> = (0..d).map(|k| eps * a[k] * w_t[k]).collect();
        let mut starts: Vec<Vec<f64>> = active.iter().map(|(_, l)| l.clone()).collect();
        if d == 3 && (i == 1 || i % cfg.reseed.max(1) == 0) {
            starts.extend(seeds.iter().cloned());
        }
        let roots = sys.roots(t, &w, window, &starts);
        // nearest-neighbour matching against the previous step
        let mut used = vec![false; roots.len()];
        let mut still = Vec::new();
        for (id, prev) in active.drain(..) {
            let best = roots
                .iter()
                .enumerate()
                .filter(|(k, _)| !used[*k])
                .map(|(k, r)| (k, r.iter().zip(&prev).map(|(u, v)| (u - v).abs()).fold(0.0, f64::max)))
                .filter(|(_, dist)| *dist <= max_jump)
                .min_by(|x, y| x.1.total_cmp(&y.1));
            match best {
                Some((k, _)) => {
                    used[k] = true;
                    still.push((id, roots[k].clone()));
                }
                None => out.events.push(BranchEvent { t, branch: id, kind: BranchEventKind::Death, lambda: prev }),
            }
        }
        for (k, r) in roots.iter().enumerate() {
            if !used[k] {
                out.events.push(BranchEvent { t, branch: next_id, kind: BranchEventKind::Birth, lambda: r.clone() });
                still.push((next_id, r.clone()));
                next_id += 1;
            }
        }
        still.sort_by_key(|(id, _)| *id);
        if still.is_empty() {
            out.gaps.push(t);
        }
        for (id, lam) in &still {
            let (x, f0) = sys.point_and_action(lam, t).expect("roots avoid poles");
            let mut value = f0 - cfg.c;
            for k in 0..d {
                let aw = a[k] * w_t[k];
                value += -eps * x[k] * aw + eps * eps * aw * a[k] * int_w[k] - 0.5 * eps * eps * a[k] * a[k] * int_w2[k];
            }
            out.samples.push(ProcessSample { t, value, branch: *id, lambda: lam.clone(), point: x });
        }
        active = still;
    }
    Ok(out)
}

/// Zero record of one branch of a ζ process.
pub fn branch_zeros(p: &SampledProcess, id: usize, cfg: &ZetaDdimConfig, horizon: f64) -> ZeroCrossingRecord {
    let (t, v) = p.branch(id);
    let (times, grazes, degenerate) = detect_zeros(&t, &v, ZETA_GRAZE_TOL);
    ZeroCrossingRecord {
        process: ProcessTag::Zeta,
        times,
        grazes,
        c: cfg.c,
        params: None,
        degenerate,
        horizon,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::{build_reduced_action, InitialData};
    use crate::geometry::compute_caustic;

    #[test]
    fn zero_noise_is_constant() {
        let scn = BrownianScenario::new(3, 0, 0.01, 5.0, 1).unwrap();
        let v = zeta_orthogonal_values(&scn, 1.0, 0.0, 0.25);
        assert!(v.iter().all(|x| *x == -0.25));
        let (_, rec) = zeta_orthogonal(&scn, 1.0, 0.0, 0.0);
        assert!(rec.degenerate && rec.times.is_empty());
        let (_, rec) = zeta_orthogonal(&scn, 1.0, 0.0, 0.25);
        assert!(!rec.degenerate && rec.times.is_empty());
    }

    #[test]
    fn generic_cusp_matches_orthogonal_formula() {
        let d = InitialData::new(2, "x0^2*y0/2".parse().unwrap(), vec![1.0, 0.0], 0.5).unwrap();
        let ra = build_reduced_action(&d).unwrap();
        let c = compute_caustic(&ra).unwrap();
        let scn = BrownianScenario::new(11, 0, 0.01, 3.0, 2).unwrap();
        let cfg = ZetaDdimConfig { eps: 0.5, c: 0.1, window: vec![(-3.0, 3.0)], ..Default::default() };
        let p = zeta_ddim(&scn, &c, &ra, &cfg).unwrap();
        let first = scn.w.iter().take(1).cloned().collect();
        let one = BrownianScenario { w: first, ..scn.clone() };
        let one = BrownianScenario::from_values(one.h, one.w).unwrap();
        let reference = zeta_orthogonal_values(&one, 0.0, 0.5, 0.1);
        // the cusp branch sits at λ = 0
        let cusp = p
            .events
            .iter()
            .find(|e| e.kind == BranchEventKind::Birth && e.lambda[0].abs() < 1e-9)
            .expect("cusp branch");
        let (t, v) = p.branch(cusp.branch);
        assert_eq!(t.len(), scn.len() - 1);
        for (k, val) in v.iter().enumerate() {
            assert!((val - reference[k + 1]).abs() < 1e-6, "{k}: {val} vs {}", reference[k + 1]);
        }
    }
}
