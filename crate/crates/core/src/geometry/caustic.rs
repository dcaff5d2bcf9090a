//! Caustic by pre-parameterisation.
//!
//! The pre-caustic `det(I + t∇²S0) = 0` is affine in the last initial
//! coordinate, so it is solved for that coordinate and pushed through the
//! flow map: `x_t(λ) = Φ_t(λ, x0^d(λ))`. In two dimensions the same curve is
//! also obtained by solving the linear system `f' = f'' = 0` in `(x, y)`.

use crate::action::{build_flow, ReducedAction, INITIAL, SPATIAL};
use crate::polyalg::{gcd, resultant, Polynomial, Rational};

use super::rational::{substitute_rational, RationalCurve};
use super::GeometryError;

/// Names of the caustic parameters: `λ` and, in three dimensions, `λ2`.
pub const LAMBDA: [&str; 2] = ["lam", "lam2"];

#[derive(Clone, Debug, PartialEq)]
pub struct CausticData {
    pub dim: usize,
    /// `det(I + t∇²S0)` in the initial coordinates and `t`.
    pub pre_caustic: Polynomial,
    /// Last initial coordinate on the pre-caustic, in the parameters and `t`.
    pub upper: RationalCurve,
    /// `λ ↦ x_t(λ)`.
    pub preparam: RationalCurve,
    /// Solution of `f' = f'' = 0` in two dimensions.
    pub linear_solve: Option<RationalCurve>,
    /// `C_t`: primitive resultant of `t f'` and `t f''` in `x0`, free of powers of `t`.
    pub implicit: Polynomial,
    /// Gcd of the numerators of `dx_t/dλ` (two dimensions only).
    pub cusp_condition: Option<Polynomial>,
}

pub fn compute_caustic(ra: &ReducedAction) -> Result<CausticData, GeometryError> {
    let dim = ra.data.dim();
    let flow = build_flow(&ra.data);
    let pre = flow.jacobian_det();
    let u = INITIAL[dim - 1];
    let coeffs = pre.coefficients_in(u);
    if coeffs.len() != 2 || coeffs[1].is_zero() {
        return Err(GeometryError::PreCausticDegenerate(u.to_string()));
    }
    let params: Vec<String> = LAMBDA[..dim - 1].iter().map(|s| s.to_string()).collect();
    let rename = |p: &Polynomial| -> Polynomial {
        let mut out = p.clone();
        for (k, name) in LAMBDA[..dim - 1].iter().enumerate() {
            out = out.substitute(INITIAL[k], &Polynomial::var(name));
        }
        out.trimmed()
    };
    let mut with_t = params.clone();
    with_t.push("t".into());
    let u_num = rename(&-&coeffs[0]);
    let u_den = rename(&coeffs[1]);
    let upper = RationalCurve::new(with_t.clone(), vec![u_num.clone()], u_den.clone());

    let mut num = Vec::with_capacity(dim);
    let mut den = Polynomial::one();
    let mut parts = Vec::with_capacity(dim);
    for phi in &flow.phi {
        let (n, k) = substitute_rational(&rename(phi), u, &upper.num[0], &upper.den);
        parts.push((n, k));
    }
    let kmax = parts.iter().map(|(_, k)| *k).max().unwrap_or(0);
    for (n, k) in parts {
        num.push(&n * &upper.den.pow(kmax - k));
    }
    if kmax > 0 {
        den = upper.den.pow(kmax);
    }
    let preparam = RationalCurve::new(with_t.clone(), num, den);

    let fp = ra.scaled_derivative(1);
    let fpp = ra.scaled_derivative(2);
    let linear_solve = if dim == 2 { Some(cramer(&fp, &fpp, &rename, &with_t)) } else { None };
    if let Some(ls) = &linear_solve {
        if !ls.same_map(&preparam) {
            return Err(GeometryError::RouteMismatch);
        }
    }

    let r = resultant(&fp, &fpp, "x0")?;
    let (r, _) = r.strip_var_power("t");
    let implicit = r.primitive();

    let cusp_condition = if dim == 2 {
        let nums = preparam.derivative_numerators(LAMBDA[0]);
        let g = nums.iter().fold(Polynomial::zero(), |acc, n| gcd(&acc, n));
        Some(g.strip_var_power("t").0.primitive())
    } else {
        None
    };

    Ok(CausticData {
        dim,
        pre_caustic: pre,
        upper,
        preparam,
        linear_solve,
        implicit,
        cusp_condition,
    })
}

/// Solves `a·(x, y) + a0 = 0`, `b·(x, y) + b0 = 0` by Cramer's rule.
fn cramer(
    fp: &Polynomial,
    fpp: &Polynomial,
    rename: &dyn Fn(&Polynomial) -> Polynomial,
    params: &[String],
) -> RationalCurve {
    let split = |p: &Polynomial| -> [Polynomial; 3] {
        let zero = |q: &Polynomial| q.evaluate_at("x", &Rational::from_integer(0.into())).evaluate_at("y", &Rational::from_integer(0.into()));
        let cx = p.derivative(SPATIAL[0]);
        let cy = p.derivative(SPATIAL[1]);
        [rename(&zero(p)), rename(&cx), rename(&cy)]
    };
    let [a0, a1, a2] = split(fp);
    let [b0, b1, b2] = split(fpp);
    let det = &(&a1 * &b2) - &(&a2 * &b1);
    let xn = &(&a2 * &b0) - &(&a0 * &b2);
    let yn = &(&a0 * &b1) - &(&a1 * &b0);
    RationalCurve::new(params.to_vec(), vec![xn, yn], det)
}

impl CausticData {
    /// Parameter values where the pre-parameterisation is undefined, at time `t`.
    pub fn singular_params(&self, t: &Rational) -> Vec<f64> {
        let d = self.preparam.den.evaluate_at("t", t).trimmed();
        if self.dim != 2 || d.is_constant() {
            return Vec::new();
        }
        univariate_real_roots(&d)
    }

    /// Real `λ` with `dx_t/dλ = 0` at time `t` (two dimensions).
    pub fn cusp_params(&self, t: &Rational) -> Vec<f64> {
        let Some(c) = &self.cusp_condition else {
            return Vec::new();
        };
        let c = c.evaluate_at("t", t).trimmed();
        if c.is_constant() {
            return Vec::new();
        }
        let singular = self.singular_params(t);
        univariate_real_roots(&c)
            .into_iter()
            .filter(|r| !singular.iter().any(|s| (s - r).abs() < 1e-12))
            .collect()
    }

    /// `x_t(λ)` in floating point; `lam` holds one or two parameters.
    pub fn point(&self, lam: &[f64], t: f64) -> Option<Vec<f64>> {
        let mut args: Vec<(&str, f64)> = LAMBDA[..self.dim - 1].iter().copied().zip(lam.iter().copied()).collect();
        args.push(("t", t));
        self.preparam.eval(&args)
    }

    /// Curve samples `(λ, x_t(λ))` on a uniform grid, skipping poles. In three
    /// dimensions `fixed` holds the value of the second parameter.
    pub fn sample(&self, t: f64, range: (f64, f64), n: usize, fixed: &[f64]) -> Vec<(f64, Vec<f64>)> {
        let mut order: Vec<&str> = LAMBDA[..self.dim - 1].to_vec();
        order.push("t");
        let c = self.preparam.compile(&order);
        (0..n)
            .filter_map(|k| {
                let lam = range.0 + (range.1 - range.0) * k as f64 / (n.max(2) - 1) as f64;
                let mut args = vec![lam];
                args.extend_from_slice(fixed);
                args.push(t);
                c.eval(&args).map(|p| (lam, p))
            })
            .collect()
    }
}

/// Distinct real roots of a univariate exact polynomial.
pub(crate) fn univariate_real_roots(p: &Polynomial) -> Vec<f64> {
    crate::polyalg::roots(p).map(|set| set.real_values()).unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::{build_reduced_action, InitialData};
    use crate::polyalg::q;

    fn p(s: &str) -> Polynomial {
        s.parse().unwrap()
    }

    fn caustic_of(s0: &str, dim: usize) -> CausticData {
        let d = InitialData::deterministic(dim, p(s0)).unwrap();
        compute_caustic(&build_reduced_action(&d).unwrap()).unwrap()
    }

    #[test]
    fn generic_cusp_preparameterisation() {
        let c = caustic_of("x0^2*y0/2", 2);
        let expected = RationalCurve::new(
            vec!["lam".into(), "t".into()],
            vec![p("t^3*lam^3"), p("3/2*t^2*lam^2 - 1")],
            p("t"),
        );
        assert!(c.preparam.same_map(&expected));
        assert_eq!(c.cusp_condition.clone().unwrap(), p("lam"));
        assert_eq!(c.cusp_params(&q(1)), vec![0.0]);
    }

    #[test]
    fn swallowtail_cusps() {
        let c = caustic_of("x0^5 + x0^2*y0", 2);
        let x = c.point(&[0.3], 2.0).unwrap();
        let lam: f64 = 0.3;
        assert!((x[0] - (16.0 * lam.powi(3) - 30.0 * lam.powi(4))).abs() < 1e-12);
        assert!((x[1] - (6.0 * lam * lam - 10.0 * lam.powi(3) - 0.25)).abs() < 1e-12);
        let mut cusps = c.cusp_params(&q(1));
        cusps.sort_by(f64::total_cmp);
        assert_eq!(cusps.len(), 2);
        assert!(cusps[0].abs() < 1e-12 && (cusps[1] - 0.2).abs() < 1e-12);
    }

    #[test]
    fn implicit_equation_vanishes_on_the_curve() {
        for (s0, dim) in [("x0^2*y0/2", 2), ("x0^5 + x0^2*y0", 2), ("x0^7 + x0^3*y0 + x0^2*z0", 3)] {
            let c = caustic_of(s0, dim);
            let mut num = c.implicit.clone();
            for (k, n) in c.preparam.num.iter().enumerate() {
                num = substitute_rational(&num, SPATIAL[k], n, &c.preparam.den).0;
            }
            assert!(num.is_zero(), "{s0}");
        }
    }
}
