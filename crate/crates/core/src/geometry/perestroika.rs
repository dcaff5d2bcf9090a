//! Swallowtail perestroikas: `f' = f'' = f''' = f'''' = 0`.
//!
//! On the caustic `f' = f'' = 0` holds identically, so the remaining
//! conditions become `P3(λ, t) = 0` and `∂P3/∂λ = 0`, where `P3` is the
//! reduced numerator of `t f'''` along `x_t(λ)`. Eliminating `λ` gives a
//! univariate polynomial in `t`; each real root is polished by Newton's
//! method in `(λ, t)`.

use crate::action::{ReducedAction, SPATIAL};
use crate::polyalg::{exact_divide, gcd, real_roots_f64, resultant, roots, F64Poly, Polynomial};

use super::caustic::{CausticData, LAMBDA};
use super::rational::on_curve;
use super::GeometryError;

#[derive(Clone, Debug, PartialEq)]
pub struct PerestroikaPoint {
    pub t: f64,
    pub lambda: f64,
    pub point: Vec<f64>,
    /// `∇_x f'` and `∇_x f''` are independent at the point, so the
    /// conditions are sufficient as well as necessary.
    pub certificate: bool,
    /// Largest component of `dx_t/dλ` and `d²x_t/dλ²` at the point.
    pub dx: f64,
    pub d2x: f64,
}

/// `(P3, P4)` in `(lam, t)`.
pub fn perestroika_polynomials(ra: &ReducedAction, caustic: &CausticData) -> Result<(Polynomial, Polynomial), GeometryError> {
    if ra.data.dim() != 2 {
        return Err(GeometryError::Dimension { required: 2, got: ra.data.dim() });
    }
    let f3 = ra.scaled_derivative(3).substitute("x0", &Polynomial::var(LAMBDA[0]));
    let (num, k) = on_curve(&f3, &SPATIAL[..2], &caustic.preparam);
    let den = caustic.preparam.den.pow(k);
    let g = gcd(&num, &den);
    let p3 = exact_divide(&num, &g)?.strip_var_power("t").0.primitive();
    let p4 = p3.derivative(LAMBDA[0]);
    Ok((p3, p4))
}

pub fn perestroika_detect(
    ra: &ReducedAction,
    caustic: &CausticData,
    t_range: (f64, f64),
) -> Result<Vec<PerestroikaPoint>, GeometryError> {
    let (p3, p4) = perestroika_polynomials(ra, caustic)?;
    if p4.is_zero() || !p4.contains_var(LAMBDA[0]) {
        // P3 is free of λ or P4 is a nonzero constant: no common roots
        return Ok(Vec::new());
    }
    let r = resultant(&p3, &p4, LAMBDA[0])?;
    if r.is_zero() {
        return Err(GeometryError::PreCausticDegenerate(LAMBDA[0].into()));
    }
    let r = r.strip_var_power("t").0;
    if r.is_constant() {
        return Ok(Vec::new());
    }
    let order = [LAMBDA[0], "t"];
    let c3 = p3.compile(&order)?;
    let c4 = p4.compile(&order)?;
    let c3l = p4.compile(&order)?;
    let c3t = p3.derivative("t").compile(&order)?;
    let c4l = p4.derivative(LAMBDA[0]).compile(&order)?;
    let c4t = p4.derivative("t").compile(&order)?;
    let p4_coeffs: Vec<F64Poly> = p4
        .coefficients_in(LAMBDA[0])
        .iter()
        .map(|c| c.compile(&["t"]).expect("coefficients in t"))
        .collect();

    let mut out = Vec::new();
    for t0 in roots(&r)?.real_values() {
        if t0 <= 0.0 || t0 < t_range.0 || t0 > t_range.1 {
            continue;
        }
        let coeffs: Vec<f64> = p4_coeffs.iter().map(|c| c.eval(&[t0])).collect();
        let mut best: Option<(f64, f64)> = None;
        for lam in real_roots_f64(&coeffs) {
            let v = c3.eval(&[lam, t0]).abs() / c3.eval_abs(&[lam, t0]).max(f64::MIN_POSITIVE);
            if best.is_none_or(|(_, bv)| v < bv) {
                best = Some((lam, v));
            }
        }
        let Some((mut lam, _)) = best else { continue };
        let mut t = t0;
        for _ in 0..50 {
            let f = [c3.eval(&[lam, t]), c4.eval(&[lam, t])];
            let j = [
                [c3l.eval(&[lam, t]), c3t.eval(&[lam, t])],
                [c4l.eval(&[lam, t]), c4t.eval(&[lam, t])],
            ];
            let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
            if det == 0.0 {
                break;
            }
            let dl = (f[0] * j[1][1] - f[1] * j[0][1]) / det;
            let dt = (j[0][0] * f[1] - j[1][0] * f[0]) / det;
            lam -= dl;
            t -= dt;
            if dl.abs() <= 1e-16 * lam.abs().max(1.0) && dt.abs() <= 1e-16 * t.abs() {
                break;
            }
        }
        let Some(point) = caustic.point(&[lam], t) else { continue };
        let dx = caustic.preparam.derivative(LAMBDA[0]);
        let d2x = dx.derivative(LAMBDA[0]);
        let args = [(LAMBDA[0], lam), ("t", t)];
        let norm = |v: Option<Vec<f64>>| v.map(|v| v.iter().fold(0.0f64, |m, c| m.max(c.abs()))).unwrap_or(f64::NAN);
        out.push(PerestroikaPoint {
            t,
            lambda: lam,
            certificate: independence(ra, lam, &point, t),
            point,
            dx: norm(dx.eval(&args)),
            d2x: norm(d2x.eval(&args)),
        });
    }
    out.sort_by(|a, b| a.t.total_cmp(&b.t));
    Ok(out)
}

/// `det [∇_x(t f'), ∇_x(t f'')]` is bounded away from zero.
fn independence(ra: &ReducedAction, lam: f64, x: &[f64], t: f64) -> bool {
    let order = ["x0", "x", "y", "t"];
    let args = [lam, x[0], x[1], t];
    let grad = |k: u32| -> [f64; 2] {
        let d = ra.scaled_derivative(k);
        let e = |v: &str| d.derivative(v).compile(&order).expect("action variables").eval(&args);
        [e("x"), e("y")]
    };
    let a = grad(1);
    let b = grad(2);
    let det = a[0] * b[1] - a[1] * b[0];
    let scale = (a[0].hypot(a[1]) * b[0].hypot(b[1])).max(f64::MIN_POSITIVE);
    det.abs() > 1e-8 * scale
}
