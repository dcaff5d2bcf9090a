//! Level surfaces `H_t^c` as resultants, and the double-point locus swept by
//! them as `c` varies.

use crate::action::ReducedAction;
use crate::polyalg::{gcd, resultant, square_free_part, Polynomial, Rational};

use super::GeometryError;

/// `ρ = R(t f - t c, t f'; x0)` with `c` left symbolic, at a fixed time.
pub fn level_surface_symbolic(ra: &ReducedAction, t: &Rational) -> Result<Polynomial, GeometryError> {
    if *t <= Rational::from_integer(0.into()) {
        return Err(GeometryError::Time(crate::polyalg::to_f64(t)));
    }
    let tf = ra.scaled.evaluate_at("t", t).trimmed();
    let shifted = &tf - &Polynomial::var("c").scale(t);
    let rho = resultant(&shifted, &tf.derivative("x0"), "x0")?;
    Ok(rho.primitive())
}

/// `ρ_(t,c)` in the spatial variables, primitive.
pub fn level_surface(ra: &ReducedAction, c: &Rational, t: &Rational) -> Result<Polynomial, GeometryError> {
    Ok(level_surface_symbolic(ra, t)?.evaluate_at("c", c).trimmed().primitive())
}

/// `gcd(R_c(ρ, ∂ρ/∂x), R_c(∂ρ/∂x, ∂ρ/∂y))` at time `t`, square-free.
pub fn double_point_gcd(ra: &ReducedAction, t: &Rational) -> Result<Polynomial, GeometryError> {
    let rho = level_surface_symbolic(ra, t)?;
    let rx = rho.derivative("x");
    let ry = rho.derivative("y");
    let rho1 = resultant(&rho, &rx, "c")?;
    let rho2 = resultant(&rx, &ry, "c")?;
    Ok(square_free_part(&gcd(&rho1, &rho2)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::{build_reduced_action, InitialData};
    use crate::polyalg::q;

    #[test]
    fn generic_cusp_zero_level() {
        let d = InitialData::deterministic(2, "x0^2*y0/2".parse().unwrap()).unwrap();
        let ra = build_reduced_action(&d).unwrap();
        let rho = level_surface(&ra, &q(0), &q(1)).unwrap();
        let cmax = rho.terms().map(|(_, c)| crate::polyalg::to_f64(c).abs()).fold(0.0, f64::max);
        let f = rho.compile(&["x", "y"]).unwrap();
        for k in 1..20 {
            let x0 = -0.95 + 0.1 * k as f64;
            let s = (1.0 - x0 * x0).sqrt();
            for sign in [1.0, -1.0] {
                let x = x0 / 2.0 * (1.0 + sign * s);
                let y = (x0 * x0 - 1.0 + sign * s) / 2.0;
                assert!(f.eval(&[x, y]).abs() / cmax < 1e-12);
            }
        }
    }

    #[test]
    fn double_point_gcd_matches_double_discriminant() {
        let d = InitialData::deterministic(2, "x0^2*y0/2".parse().unwrap()).unwrap();
        let ra = build_reduced_action(&d).unwrap();
        let c = crate::geometry::compute_caustic(&ra).unwrap();
        let mk = crate::geometry::maxwell_klein(&ra, &c).unwrap();
        let dt = square_free_part(&mk.d.evaluate_at("t", &q(1)).trimmed());
        let g = double_point_gcd(&ra, &q(1)).unwrap();
        assert!(g.equal_up_to_scalar(&dt), "{g} vs {dt}");
    }
}
