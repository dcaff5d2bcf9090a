//! Multivariate gcd by recursive primitive remainder sequences, square-free
//! parts, and exact square roots.

use std::collections::BTreeMap;

use num_traits::Signed;

use super::poly::{Monomial, Polynomial, Rational};
use super::resultant::exact_divide;
use super::PolyError;

/// Greatest common divisor with content 1 and positive leading coefficient.
/// `gcd(p, 0)` is `p` normalised; `gcd(0, 0)` is zero.
pub fn gcd(p: &Polynomial, q: &Polynomial) -> Polynomial {
    gcd_raw(p, q).primitive()
}

fn gcd_raw(p: &Polynomial, q: &Polynomial) -> Polynomial {
    if p.is_zero() {
        return q.primitive();
    }
    if q.is_zero() {
        return p.primitive();
    }
    // main variable: highest-ranked variable occurring in either
    let mut used = p.used_vars();
    for v in q.used_vars() {
        if !used.contains(&v) {
            used.push(v);
        }
    }
    used.sort_by(|a, b| super::poly::var_rank(a).cmp(&super::poly::var_rank(b)));
    let Some(var) = used.last().cloned() else {
        return Polynomial::one();
    };
    match (p.contains_var(&var), q.contains_var(&var)) {
        (true, false) => return gcd_raw(&content_in(p, &var), q),
        (false, true) => return gcd_raw(p, &content_in(q, &var)),
        _ => {}
    }
    let cp = content_in(p, &var);
    let cq = content_in(q, &var);
    let gc = gcd_raw(&cp, &cq);
    let mut a = exact_divide(p, &cp).expect("content divides");
    let mut b = exact_divide(q, &cq).expect("content divides");
    if a.degree_in(&var) < b.degree_in(&var) {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_zero() && b.contains_var(&var) {
        let r = pseudo_remainder(&a, &b, &var);
        a = b;
        b = if r.is_zero() {
            r
        } else {
            primitive_in(&r, &var)
        };
    }
    let g = if b.is_zero() {
        primitive_in(&a, &var)
    } else {
        // nonzero remainder free of var: the primitive parts are coprime
        Polynomial::one()
    };
    (&gc * &g).primitive()
}

/// Gcd of the coefficients of `p` viewed as a polynomial in `var`.
fn content_in(p: &Polynomial, var: &str) -> Polynomial {
    let mut coeffs = p.coefficients_in(var);
    coeffs.sort_by_key(Polynomial::len);
    let mut g = Polynomial::zero();
    for c in coeffs.iter().filter(|c| !c.is_zero()) {
        g = gcd_raw(&g, c);
        if g.is_constant() {
            return Polynomial::one();
        }
    }
    g
}

/// `p` divided by its content as a polynomial in `var`, then made primitive.
pub fn primitive_in(p: &Polynomial, var: &str) -> Polynomial {
    let c = content_in(p, var);
    exact_divide(p, &c).expect("content divides").primitive()
}

fn pseudo_remainder(a: &Polynomial, b: &Polynomial, var: &str) -> Polynomial {
    let db = b.degree_in(var).unwrap_or(0);
    let lb = b.leading_coefficient_in(var);
    let x = Polynomial::var(var);
    let mut r = a.clone();
    while !r.is_zero() && r.degree_in(var).unwrap_or(0) >= db {
        let dr = r.degree_in(var).unwrap();
        let lr = r.leading_coefficient_in(var);
        r = &(&lb * &r) - &(&(&lr * &x.pow(dr - db)) * b);
    }
    r
}

/// `p` divided by the gcd of `p` and all its partial derivatives, normalised.
pub fn square_free_part(p: &Polynomial) -> Polynomial {
    if p.is_zero() || p.is_constant() {
        return p.primitive();
    }
    let mut g = p.clone();
    for v in p.used_vars() {
        g = gcd(&g, &p.derivative(&v));
        if g.is_constant() {
            break;
        }
    }
    exact_divide(p, &g).expect("gcd divides").primitive()
}

/// Exact square root of a perfect square, normalised to positive leading
/// coefficient. The input is first made primitive with positive leading
/// coefficient, so a constant factor is tolerated.
pub fn sqrt_exact(p: &Polynomial) -> Result<Polynomial, PolyError> {
    if p.is_zero() {
        return Ok(p.clone());
    }
    let pp = p.primitive();
    let vars = pp.vars().to_vec();
    let min_deg = pp.terms().map(|(m, _)| m.degree()).min().unwrap_or(0);
    let (lm, lc) = pp.leading_term().unwrap();
    let obstruction = |r: &Polynomial| PolyError::NotSquare {
        obstruction: r.to_string(),
    };
    let half = halve(lm).ok_or_else(|| obstruction(&pp))?;
    let root_c = rational_sqrt(lc).ok_or_else(|| obstruction(&pp))?;
    let mut s_terms = BTreeMap::new();
    s_terms.insert(half.clone(), root_c.clone());
    let lead = Polynomial::from_parts(vars.clone(), s_terms.clone());
    let mut r = &pp - &(&lead * &lead);
    let two_lead_c = &root_c * Rational::from_integer(2.into());
    while let Some((rm, rc)) = r.leading_term() {
        if !half.divides(rm) {
            return Err(obstruction(&r));
        }
        let m = Monomial(rm.0.iter().zip(&half.0).map(|(a, b)| a - b).collect());
        // the lowest term of s squared is the lowest term of p
        if 2 * m.degree() < min_deg {
            return Err(obstruction(&r));
        }
        let c = rc / &two_lead_c;
        // r -= 2 s m c + (m c)^2
        let s = Polynomial::from_parts(vars.clone(), s_terms.clone());
        let mut t = BTreeMap::new();
        t.insert(m.clone(), c.clone());
        let term = Polynomial::from_parts(vars.clone(), t);
        let two = Polynomial::int(2);
        r = &r - &(&(&two * &(&s * &term)) + &(&term * &term));
        s_terms.insert(m, c);
    }
    Ok(Polynomial::from_parts(vars, s_terms).primitive().trimmed())
}

fn halve(m: &Monomial) -> Option<Monomial> {
    if m.0.iter().all(|e| e % 2 == 0) {
        Some(Monomial(m.0.iter().map(|e| e / 2).collect()))
    } else {
        None
    }
}

fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Polynomial {
        s.parse().unwrap()
    }

    #[test]
    fn simple_gcds() {
        assert_eq!(gcd(&p("x^2 - 1"), &p("x - 1")), p("x - 1"));
        assert_eq!(gcd(&p("2*x^2 - 2"), &Polynomial::zero()), p("x^2 - 1"));
        assert_eq!(gcd(&p("x + 1"), &p("x + 2")), Polynomial::one());
    }

    #[test]
    fn multivariate_gcd() {
        let w = p("x*y - t^2 + 3");
        let a = &p("3/2*(x + y^2)") * &w;
        let b = &p("-5*(x^2 - t)") * &w;
        assert_eq!(gcd(&a, &b), w.primitive());
        let g = gcd(&p("x^2*y - x*y"), &p("x*y^2 - y^2"));
        assert_eq!(g, p("x*y - y"));
    }

    #[test]
    fn square_free_parts() {
        let f = p("(x - y)^3 * (x + t)^2 * (y + 1)");
        assert_eq!(square_free_part(&f), p("(x - y)*(x + t)*(y + 1)").primitive());
    }

    #[test]
    fn exact_square_roots() {
        let b = p("x^2*y - 3*t*x + 7/2 - y^3");
        let sq = (&b * &b).scale(&Rational::new((-12).into(), 5.into()));
        assert_eq!(sqrt_exact(&sq).unwrap(), b.primitive());
        assert!(matches!(sqrt_exact(&p("x^2 + 1")), Err(PolyError::NotSquare { .. })));
        assert!(matches!(sqrt_exact(&p("x^2*y + 2*x + 1")), Err(PolyError::NotSquare { .. })));
    }
}
