//! Hot and cool parts of a planar caustic.
//!
//! At a caustic point `x_t(λ)` the reduced action has an inflection at `λ`,
//! so `F_λ(x0) = f(x0) - f(λ)` has a triple root there. Deflating it gives
//! `F̃`, and the other critical points are the roots of
//! `G̃ = 3F̃ + (x0 - λ)F̃'`. The caustic point is cool when `f(λ)` is no larger
//! than `f` at every other real critical point.

use crate::action::{ReducedAction, SPATIAL};
use crate::polyalg::{discriminant, primitive_in, real_roots_f64, try_exact_divide, F64Poly, Polynomial, Rational};

use super::caustic::{univariate_real_roots, CausticData, LAMBDA};
use super::rational::on_curve;
use super::GeometryError;

/// Values closer than this count as equal actions.
pub const TIE_TOL: f64 = 1e-12;

#[derive(Clone, Debug)]
pub struct Deflation {
    /// `F̃` in `(x0, lam, t)`, primitive in `x0`.
    pub f_tilde: Polynomial,
    pub g_tilde: Polynomial,
    /// Discriminants in `x0`, as polynomials in `(lam, t)`.
    pub disc_f: Polynomial,
    pub disc_g: Polynomial,
    g_coeffs: Vec<F64Poly>,
    disc_f_c: F64Poly,
    disc_g_c: F64Poly,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Cool,
    Hot,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HotCoolLabel {
    pub lambda: f64,
    pub point: Vec<f64>,
    pub label: Label,
    /// `disc F̃` or `disc G̃` vanishes at `(λ, t)`.
    pub boundary_flag: bool,
    /// Another real critical point has the same action value.
    pub tie: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum BoundarySource {
    FTilde,
    GTilde,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HotCoolBoundary {
    pub lambda: f64,
    pub point: Vec<f64>,
    pub source: BoundarySource,
    pub below: Label,
    pub above: Label,
}

pub fn deflate(ra: &ReducedAction, caustic: &CausticData) -> Result<Deflation, GeometryError> {
    if ra.data.dim() != 2 {
        return Err(GeometryError::Dimension { required: 2, got: ra.data.dim() });
    }
    let (num, _) = on_curve(&ra.scaled, &SPATIAL[..2], &caustic.preparam);
    let lam = Polynomial::var(LAMBDA[0]);
    let at_lam = num.substitute("x0", &lam);
    let diff = &num - &at_lam;
    let cube = (&Polynomial::var("x0") - &lam).pow(3);
    let q = try_exact_divide(&diff, &cube)?.ok_or(GeometryError::Deflation)?;
    let f_tilde = positive_in_lambda(primitive_in(&q, "x0"));
    let x0m = &Polynomial::var("x0") - &lam;
    let g = &f_tilde.scale(&Rational::from_integer(3.into())) + &(&x0m * &f_tilde.derivative("x0"));
    let g_tilde = positive_in_lambda(g.primitive());
    let disc_f = disc_or_const(&f_tilde)?;
    let disc_g = disc_or_const(&g_tilde)?;
    let order = [LAMBDA[0], "t"];
    let g_coeffs = g_tilde
        .coefficients_in("x0")
        .iter()
        .map(|c| c.compile(&order).expect("deflation variables"))
        .collect();
    Ok(Deflation {
        disc_f_c: disc_f.compile(&order)?,
        disc_g_c: disc_g.compile(&order)?,
        f_tilde,
        g_tilde,
        disc_f,
        disc_g,
        g_coeffs,
    })
}

/// Fixes the sign so that the leading coefficient in `λ` is positive.
fn positive_in_lambda(p: Polynomial) -> Polynomial {
    let lc = p.leading_coefficient_in(LAMBDA[0]).leading_coefficient();
    if lc < Rational::from_integer(0.into()) {
        p.scale(&Rational::from_integer((-1).into()))
    } else {
        p
    }
}

fn disc_or_const(p: &Polynomial) -> Result<Polynomial, GeometryError> {
    match p.degree_in("x0") {
        Some(d) if d >= 2 => Ok(discriminant(p, "x0")?),
        _ => Ok(Polynomial::one()),
    }
}

impl Deflation {
    /// Real roots of `G̃(·; λ, t)`: the critical points other than `λ`.
    pub fn other_critical_points(&self, lam: f64, t: f64) -> Vec<f64> {
        let coeffs: Vec<f64> = self.g_coeffs.iter().map(|c| c.eval(&[lam, t])).collect();
        real_roots_f64(&coeffs)
    }

    fn on_boundary(&self, lam: f64, t: f64) -> bool {
        let near = |v: f64, scale: f64| v.abs() <= 1e-10 * scale.max(f64::MIN_POSITIVE);
        near(self.disc_f_c.eval(&[lam, t]), self.disc_f_c.eval_abs(&[lam, t]))
            || near(self.disc_g_c.eval(&[lam, t]), self.disc_g_c.eval_abs(&[lam, t]))
    }
}

/// Labels the caustic point with parameter `λ` at time `t > 0`.
pub fn hot_cool(
    ra: &ReducedAction,
    caustic: &CausticData,
    defl: &Deflation,
    lam: f64,
    t: f64,
) -> Result<HotCoolLabel, GeometryError> {
    if t <= 0.0 {
        return Err(GeometryError::Time(t));
    }
    let point = caustic.point(&[lam], t).ok_or(GeometryError::PreCausticDegenerate(LAMBDA[0].into()))?;
    let f_lam = ra.eval_deterministic(lam, &point, t);
    let scale = f_lam.abs().max(1.0);
    let mut label = Label::Cool;
    let mut tie = false;
    for r in defl.other_critical_points(lam, t) {
        let gap = ra.eval_deterministic(r, &point, t) - f_lam;
        if gap.abs() <= TIE_TOL * scale {
            tie = true;
        } else if gap < 0.0 {
            label = Label::Hot;
        }
    }
    Ok(HotCoolLabel {
        lambda: lam,
        point,
        label,
        boundary_flag: defl.on_boundary(lam, t),
        tie,
    })
}

/// Boundary candidates from repeated roots of `F̃` and `G̃` at time `t`, kept
/// only where the label differs on the two sides.
pub fn hot_cool_boundaries(
    ra: &ReducedAction,
    caustic: &CausticData,
    defl: &Deflation,
    t: &Rational,
) -> Result<Vec<HotCoolBoundary>, GeometryError> {
    let tf = crate::polyalg::to_f64(t);
    let singular = caustic.singular_params(t);
    let mut out = Vec::new();
    for (disc, source) in [(&defl.disc_f, BoundarySource::FTilde), (&defl.disc_g, BoundarySource::GTilde)] {
        let d = disc.evaluate_at("t", t).trimmed();
        if d.is_constant() {
            continue;
        }
        for lam in univariate_real_roots(&d) {
            if singular.iter().any(|s| (s - lam).abs() < 1e-9) {
                continue;
            }
            let delta = 1e-6 * lam.abs().max(1.0);
            let below = hot_cool(ra, caustic, defl, lam - delta, tf)?.label;
            let above = hot_cool(ra, caustic, defl, lam + delta, tf)?.label;
            if below != above {
                let point = caustic.point(&[lam], tf).expect("not singular");
                out.push(HotCoolBoundary { lambda: lam, point, source, below, above });
            }
        }
    }
    out.sort_by(|a, b| a.lambda.total_cmp(&b.lambda));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::{build_reduced_action, InitialData};
    use crate::geometry::compute_caustic;
    use crate::polyalg::q;

    fn p(s: &str) -> Polynomial {
        s.parse().unwrap()
    }

    #[test]
    fn swallowtail_deflation() {
        let d = InitialData::deterministic(2, p("x0^5 + x0^2*y0")).unwrap();
        let ra = build_reduced_action(&d).unwrap();
        let c = compute_caustic(&ra).unwrap();
        let defl = deflate(&ra, &c).unwrap();
        assert_eq!(defl.f_tilde, p("12*lam^2 - 3*lam*t + 6*lam*x0 - t*x0 + 2*x0^2"));
        assert_eq!(defl.g_tilde, p("15*lam^2 - 4*lam*t + 10*lam*x0 - 2*t*x0 + 5*x0^2"));
        let b = hot_cool_boundaries(&ra, &c, &defl, &q(1)).unwrap();
        assert_eq!(b.len(), 2, "{b:?}");
        let kappa = (-0.002, -0.48);
        let psi = (-(3.0 + 8.0 * 6f64.sqrt()) / 18000.0, (9.0 - 6f64.sqrt()) / 450.0 - 0.5);
        for (bd, (x, y)) in b.iter().zip([psi, kappa]) {
            assert!((bd.point[0] - x).abs() < 1e-12 && (bd.point[1] - y).abs() < 1e-12, "{bd:?}");
        }
    }
}
