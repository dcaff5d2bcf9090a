//! Dense univariate polynomials with rational coefficients.

use num_traits::{One, Signed, Zero};

use super::poly::{from_f64, q, to_f64, Polynomial, Rational};
use super::PolyError;

/// Coefficients in ascending order, without trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UPoly {
    c: Vec<Rational>,
}

impl UPoly {
    pub fn new(mut c: Vec<Rational>) -> Self {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        UPoly { c }
    }

    pub fn from_f64(coeffs: &[f64]) -> Self {
        UPoly::new(coeffs.iter().map(|&x| from_f64(x)).collect())
    }

    /// Reads a polynomial with at most one occurring variable.
    pub fn from_polynomial(p: &Polynomial) -> Result<Self, PolyError> {
        let used = p.used_vars();
        match used.len() {
            0 => Ok(UPoly::new(vec![p.constant_value().unwrap()])),
            1 => Ok(UPoly::new(
                p.coefficients_in(&used[0])
                    .iter()
                    .map(|c| c.constant_value().unwrap())
                    .collect(),
            )),
            _ => Err(PolyError::NotUnivariate { vars: used }),
        }
    }

    pub fn to_polynomial(&self, var: &str) -> Polynomial {
        let x = Polynomial::var(var);
        let mut acc = Polynomial::zero();
        for c in self.c.iter().rev() {
            acc = &(&acc * &x) + &Polynomial::constant(c.clone());
        }
        acc
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn lc(&self) -> Rational {
        self.c.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.c.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        self.c.iter().map(to_f64).collect()
    }

    pub fn derivative(&self) -> UPoly {
        UPoly::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * q(k as i64))
                .collect(),
        )
    }

    pub fn scale(&self, k: &Rational) -> UPoly {
        UPoly::new(self.c.iter().map(|c| c * k).collect())
    }

    pub fn monic(&self) -> UPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.lc().recip())
    }

    pub fn mul(&self, other: &UPoly) -> UPoly {
        if self.is_zero() || other.is_zero() {
            return UPoly::new(Vec::new());
        }
        let mut out = vec![Rational::zero(); self.c.len() + other.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            for (j, b) in other.c.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UPoly::new(out)
    }

    pub fn sub(&self, other: &UPoly) -> UPoly {
        let n = self.c.len().max(other.c.len());
        UPoly::new(
            (0..n)
                .map(|i| {
                    let a = self.c.get(i).cloned().unwrap_or_else(Rational::zero);
                    let b = other.c.get(i).cloned().unwrap_or_else(Rational::zero);
                    a - b
                })
                .collect(),
        )
    }

    /// Euclidean division over the rationals.
    pub fn divrem(&self, d: &UPoly) -> (UPoly, UPoly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let dd = d.c.len() - 1;
        let mut r = self.c.clone();
        if r.len() <= dd {
            return (UPoly::new(Vec::new()), self.clone());
        }
        let mut qv = vec![Rational::zero(); r.len() - dd];
        let inv = d.lc().recip();
        for k in (0..qv.len()).rev() {
            let coef = &r[k + dd] * &inv;
            if !coef.is_zero() {
                for (j, dj) in d.c.iter().enumerate() {
                    r[k + j] -= &coef * dj;
                }
            }
            qv[k] = coef;
        }
        r.truncate(dd);
        (UPoly::new(qv), UPoly::new(r))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &UPoly) -> UPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r.primitive_rational();
        }
        a.monic()
    }

    /// Rescaled to coprime integer coefficients (sign kept).
    fn primitive_rational(&self) -> UPoly {
        if self.is_zero() {
            return self.clone();
        }
        let p = self.to_polynomial("_u");
        let k = p.content();
        self.scale(&k.recip())
    }

    /// Yun's square-free decomposition: `self = lc * prod f_i^{m_i}` with
    /// monic, square-free, pairwise coprime `f_i`.
    pub fn square_free_decomposition(&self) -> Vec<(UPoly, u32)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let f = self.monic();
        let fp = f.derivative();
        let a0 = f.gcd(&fp);
        let mut b = f.divrem(&a0).0;
        let mut c = fp.divrem(&a0).0;
        let mut d = c.sub(&b.derivative());
        let mut i = 1;
        loop {
            let a = b.gcd(&d);
            if a.degree().unwrap_or(0) > 0 {
                out.push((a.clone(), i));
            }
            b = b.divrem(&a).0;
            if b.degree().unwrap_or(0) == 0 {
                break;
            }
            c = d.divrem(&a).0;
            d = c.sub(&b.derivative());
            i += 1;
        }
        out
    }

    /// Monic product of the distinct factors.
    pub fn square_free_part(&self) -> UPoly {
        if self.degree().unwrap_or(0) == 0 {
            return UPoly::new(vec![Rational::one()]);
        }
        let g = self.gcd(&self.derivative());
        self.divrem(&g).0.monic()
    }

    /// `p(x + a)`.
    pub fn taylor_shift(&self, a: &Rational) -> UPoly {
        let mut c = self.c.clone();
        let n = c.len();
        for i in 0..n {
            for j in (i..n.saturating_sub(1)).rev() {
                let t = &c[j + 1] * a;
                c[j] += t;
            }
        }
        UPoly::new(c)
    }

    /// `p(s x)`.
    pub fn scale_var(&self, s: &Rational) -> UPoly {
        let mut pw = Rational::one();
        let mut out = Vec::with_capacity(self.c.len());
        for c in &self.c {
            out.push(c * &pw);
            pw *= s;
        }
        UPoly::new(out)
    }

    /// `x^n p(1/x)`.
    pub fn reversed(&self) -> UPoly {
        let mut c = self.c.clone();
        c.reverse();
        UPoly::new(c)
    }

    pub fn sign_variations(&self) -> usize {
        let mut count = 0;
        let mut last = 0i8;
        for c in &self.c {
            let s = if c.is_positive() {
                1
            } else if c.is_negative() {
                -1
            } else {
                0
            };
            if s != 0 {
                if last != 0 && s != last {
                    count += 1;
                }
                last = s;
            }
        }
        count
    }

    /// Cauchy bound: every root has modulus below the returned value.
    pub fn cauchy_bound(&self) -> Rational {
        let lc = self.lc().abs();
        let m = self.c[..self.c.len() - 1]
            .iter()
            .map(|c| c.abs() / &lc)
            .fold(Rational::zero(), |a, b| if b > a { b } else { a });
        m + Rational::one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::poly::q;

    fn up(v: &[i64]) -> UPoly {
        UPoly::new(v.iter().map(|&x| q(x)).collect())
    }

    #[test]
    fn yun_recovers_multiplicities() {
        // (x-1)^3 (x+2)^2 (x-5)
        let f = up(&[-1, 1]).mul(&up(&[-1, 1])).mul(&up(&[-1, 1]));
        let f = f.mul(&up(&[2, 1])).mul(&up(&[2, 1])).mul(&up(&[-5, 1]));
        let sf = f.square_free_decomposition();
        assert_eq!(sf, vec![(up(&[-5, 1]), 1), (up(&[2, 1]), 2), (up(&[-1, 1]), 3)]);
    }

    #[test]
    fn taylor_shift_and_scaling() {
        let f = up(&[1, 2, 3]);
        assert_eq!(f.taylor_shift(&q(1)), up(&[6, 8, 3]));
        assert_eq!(f.scale_var(&q(2)), up(&[1, 4, 12]));
        assert_eq!(f.reversed(), up(&[3, 2, 1]));
    }

    #[test]
    fn division() {
        let (qq, r) = up(&[-1, 0, 0, 1]).divrem(&up(&[-1, 1]));
        assert_eq!(qq, up(&[1, 1, 1]));
        assert!(r.is_zero());
    }
}
