//! Exact division, Sylvester resultants and discriminants.
//!
//! Resultants are Sylvester determinants with the rows of `p` placed above
//! the rows of `q`, so `R(x - a, x - b; x) = a - b`. The determinant is
//! evaluated by fraction-free (Bareiss) elimination.

use std::collections::BTreeMap;

use num_traits::One;

use super::poly::{add_term, Monomial, Polynomial};
use super::PolyError;

/// `p / d`, failing if the division leaves a remainder.
pub fn exact_divide(p: &Polynomial, d: &Polynomial) -> Result<Polynomial, PolyError> {
    divide_impl(p, d)?.map_err(|var| PolyError::NotDivisible { var })
}

/// `Some(p / d)` if `d` divides `p`, `None` otherwise.
pub fn try_exact_divide(p: &Polynomial, d: &Polynomial) -> Result<Option<Polynomial>, PolyError> {
    Ok(divide_impl(p, d)?.ok())
}

/// Inner result is `Err(var)` naming a variable whose exponent in the
/// remainder's leading term falls short of the divisor's.
fn divide_impl(p: &Polynomial, d: &Polynomial) -> Result<Result<Polynomial, String>, PolyError> {
    if d.is_zero() {
        return Err(PolyError::DivisionByZero);
    }
    let (p, d) = Polynomial::unify(p, d);
    let (ld, lc) = d.leading_term().expect("nonzero");
    let mut r = p.terms_map().clone();
    let mut out = BTreeMap::new();
    while let Some((lr, cr)) = r.iter().next_back() {
        if !ld.divides(lr) {
            let i = (0..ld.0.len()).find(|&i| ld.0[i] > lr.0[i]).unwrap_or(0);
            return Ok(Err(d.vars()[i].clone()));
        }
        let qm = Monomial(lr.0.iter().zip(&ld.0).map(|(a, b)| a - b).collect());
        let qc = cr / lc;
        for (m, c) in d.terms_map() {
            let mm = Monomial(m.0.iter().zip(&qm.0).map(|(a, b)| a + b).collect());
            add_term(&mut r, mm, -(c * &qc));
        }
        out.insert(qm, qc);
    }
    Ok(Ok(Polynomial::from_parts(p.vars().to_vec(), out)))
}

/// Sylvester resultant of `p` and `q` with respect to `var`.
pub fn resultant(p: &Polynomial, q: &Polynomial, var: &str) -> Result<Polynomial, PolyError> {
    let m = p.degree_in(var).unwrap_or(0);
    let n = q.degree_in(var).unwrap_or(0);
    for (poly, deg) in [(p, m), (q, n)] {
        if deg == 0 || poly.is_zero() {
            return Err(PolyError::DegreeTooLow {
                var: var.to_string(),
                degree: deg,
                required: 1,
            });
        }
    }
    // pull out numeric contents: R(a P, b Q) = a^n b^m R(P, Q)
    let cp = p.content();
    let cq = q.content();
    let pp = p.scale(&cp.recip());
    let qq = q.scale(&cq.recip());
    let (pp, qq) = Polynomial::unify(&pp, &qq);
    let pc = pp.coefficients_in(var);
    let qc = qq.coefficients_in(var);
    let (m, n) = (m as usize, n as usize);
    let size = m + n;
    let zero = Polynomial::zero();
    let mut mat: Vec<Vec<Polynomial>> = vec![vec![zero.clone(); size]; size];
    for i in 0..n {
        for (k, c) in pc.iter().enumerate() {
            // highest power first along the row
            mat[i][i + m - k] = c.clone();
        }
    }
    for i in 0..m {
        for (k, c) in qc.iter().enumerate() {
            mat[n + i][i + n - k] = c.clone();
        }
    }
    let det = bareiss_det(mat)?;
    let scale = num_traits::pow(cp, n) * num_traits::pow(cq, m);
    Ok(det.scale(&scale).trimmed_drop(var))
}

impl Polynomial {
    fn trimmed_drop(&self, var: &str) -> Polynomial {
        if self.contains_var(var) {
            return self.clone();
        }
        let keep: Vec<&str> = self
            .vars()
            .iter()
            .filter(|v| v.as_str() != var)
            .map(String::as_str)
            .collect();
        if keep.len() == self.vars().len() {
            return self.clone();
        }
        let idx: Vec<usize> = keep
            .iter()
            .map(|k| self.vars().iter().position(|v| v == k).unwrap())
            .collect();
        let terms = self
            .terms_map()
            .iter()
            .map(|(m, c)| (Monomial(idx.iter().map(|&i| m.0[i]).collect()), c.clone()))
            .collect();
        Polynomial::from_parts(keep.iter().map(|s| s.to_string()).collect(), terms)
    }
}

/// Determinant by Bareiss fraction-free elimination with exact division.
fn bareiss_det(mut a: Vec<Vec<Polynomial>>) -> Result<Polynomial, PolyError> {
    let n = a.len();
    if n == 0 {
        return Ok(Polynomial::one());
    }
    let mut negate = false;
    let mut prev = Polynomial::one();
    for k in 0..n - 1 {
        // pivot: the sparsest nonzero entry in column k
        let pivot = (k..n)
            .filter(|&i| !a[i][k].is_zero())
            .min_by_key(|&i| a[i][k].len());
        let Some(piv) = pivot else {
            return Ok(Polynomial::zero());
        };
        if piv != k {
            a.swap(piv, k);
            negate = !negate;
        }
        let (top, rest) = a.split_at_mut(k + 1);
        let row_k = &top[k];
        let akk = &row_k[k];
        for row in rest.iter_mut() {
            let aik = row[k].clone();
            for j in k + 1..n {
                let num = &(&row[j] * akk) - &(&aik * &row_k[j]);
                row[j] = if prev.is_one_poly() {
                    num
                } else {
                    exact_divide(&num, &prev)?
                };
            }
            row[k] = Polynomial::zero();
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    Ok(if negate { -d } else { d })
}

impl Polynomial {
    fn is_one_poly(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }
}

/// Discriminant `(-1)^{n(n-1)/2} R(p, p') / lc(p)` with respect to `var`.
pub fn discriminant(p: &Polynomial, var: &str) -> Result<Polynomial, PolyError> {
    let n = p.degree_in(var).unwrap_or(0);
    if n < 2 {
        return Err(PolyError::DegreeTooLow {
            var: var.to_string(),
            degree: n,
            required: 2,
        });
    }
    let lc = p.leading_coefficient_in(var);
    let r = resultant(p, &p.derivative(var), var)?;
    let d = exact_divide(&r, &lc)?;
    let sign = (n as u64 * (n as u64 - 1) / 2) % 2 == 1;
    Ok(if sign { -d } else { d })
}
