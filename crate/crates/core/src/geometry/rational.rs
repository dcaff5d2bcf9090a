//! Parameterised curves whose coordinates are rational functions with a
//! common denominator.

use crate::polyalg::{exact_divide, gcd, Polynomial, Rational};

/// `p` with `var` replaced by `num/den`, returned as the numerator over
/// `den^k` where `k` is the degree of `p` in `var`.
pub fn substitute_rational(p: &Polynomial, var: &str, num: &Polynomial, den: &Polynomial) -> (Polynomial, u32) {
    let coeffs = p.coefficients_in(var);
    if coeffs.len() <= 1 {
        return (p.clone(), 0);
    }
    let k = coeffs.len() - 1;
    let mut acc = Polynomial::zero();
    let mut num_pow = Polynomial::one();
    let den_pows: Vec<Polynomial> = (0..=k).map(|j| den.pow(j as u32)).collect();
    for (j, c) in coeffs.iter().enumerate() {
        if !c.is_zero() {
            acc = &acc + &(&(c * &num_pow) * &den_pows[k - j]);
        }
        if j < k {
            num_pow = &num_pow * num;
        }
    }
    (acc, k as u32)
}

/// Reduces `num/den` to lowest terms with a positive, content-one denominator.
pub fn reduce_fraction(num: &Polynomial, den: &Polynomial) -> (Polynomial, Polynomial) {
    let g = gcd(num, den);
    let n = exact_divide(num, &g).expect("gcd divides");
    let d = exact_divide(den, &g).expect("gcd divides");
    normalise_den(n, d)
}

fn normalise_den(n: Polynomial, d: Polynomial) -> (Polynomial, Polynomial) {
    let dp = d.primitive();
    if dp.is_zero() {
        return (n, d);
    }
    // d = k * dp
    let k = ratio(&d, &dp);
    (n.scale(&k.recip()), dp)
}

fn ratio(a: &Polynomial, b: &Polynomial) -> Rational {
    let (_, ca) = a.leading_term().expect("nonzero");
    let (_, cb) = b.leading_term().expect("nonzero");
    ca / cb
}

/// `x(λ) = num(λ) / den(λ)` componentwise.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalCurve {
    /// Parameter names (plus `t` where the curve depends on time).
    pub params: Vec<String>,
    pub num: Vec<Polynomial>,
    pub den: Polynomial,
}

impl RationalCurve {
    pub fn new(params: Vec<String>, num: Vec<Polynomial>, den: Polynomial) -> Self {
        // common factor of every numerator and the denominator
        let mut g = den.clone();
        for n in &num {
            g = gcd(&g, n);
        }
        let num: Vec<Polynomial> = num
            .iter()
            .map(|n| exact_divide(n, &g).expect("gcd divides"))
            .collect();
        let den = exact_divide(&den, &g).expect("gcd divides");
        let dp = den.primitive();
        let k = ratio(&den, &dp).recip();
        RationalCurve {
            params,
            num: num.iter().map(|n| n.scale(&k)).collect(),
            den: dp,
        }
    }

    pub fn dim(&self) -> usize {
        self.num.len()
    }

    /// Componentwise derivative with respect to `var`, over `den^2`.
    pub fn derivative(&self, var: &str) -> RationalCurve {
        let dd = self.den.derivative(var);
        let num = self
            .num
            .iter()
            .map(|n| &(&n.derivative(var) * &self.den) - &(n * &dd))
            .collect();
        RationalCurve::new(self.params.clone(), num, &self.den * &self.den)
    }

    /// Numerators of the derivative before cancelling, i.e. `n' d - n d'`.
    pub fn derivative_numerators(&self, var: &str) -> Vec<Polynomial> {
        let dd = self.den.derivative(var);
        self.num
            .iter()
            .map(|n| &(&n.derivative(var) * &self.den) - &(n * &dd))
            .collect()
    }

    /// Fixes one parameter at an exact value.
    pub fn specialise(&self, var: &str, value: &Rational) -> RationalCurve {
        RationalCurve::new(
            self.params.iter().filter(|p| p.as_str() != var).cloned().collect(),
            self.num.iter().map(|n| n.evaluate_at(var, value).trimmed()).collect(),
            self.den.evaluate_at(var, value).trimmed(),
        )
    }

    /// Floating evaluation; `None` on the pole set.
    pub fn eval(&self, args: &[(&str, f64)]) -> Option<Vec<f64>> {
        let d = self.den.eval_f64(args).ok()?;
        if d == 0.0 || !d.is_finite() {
            return None;
        }
        self.num
            .iter()
            .map(|n| n.eval_f64(args).ok().map(|v| v / d))
            .collect()
    }

    pub fn compile(&self, order: &[&str]) -> CompiledCurve {
        CompiledCurve {
            num: self.num.iter().map(|n| n.compile(order).expect("curve variables")).collect(),
            den: self.den.compile(order).expect("curve variables"),
        }
    }

    /// True if `self` and `other` are the same rational map.
    pub fn same_map(&self, other: &RationalCurve) -> bool {
        self.num.len() == other.num.len()
            && self
                .num
                .iter()
                .zip(&other.num)
                .all(|(a, b)| &(a * &other.den) == &(b * &self.den))
    }
}

/// Fast evaluator for a [`RationalCurve`].
#[derive(Clone, Debug)]
pub struct CompiledCurve {
    num: Vec<crate::polyalg::F64Poly>,
    den: crate::polyalg::F64Poly,
}

impl CompiledCurve {
    pub fn eval(&self, args: &[f64]) -> Option<Vec<f64>> {
        let d = self.den.eval(args);
        if d == 0.0 || !d.is_finite() {
            return None;
        }
        Some(self.num.iter().map(|n| n.eval(args) / d).collect())
    }
}

/// Substitutes a curve for the spatial variables `vars` of `p`. Returns the
/// numerator over `curve.den^k`.
pub fn on_curve(p: &Polynomial, vars: &[&str], curve: &RationalCurve) -> (Polynomial, u32) {
    let mut acc = p.clone();
    let mut power = 0;
    for (v, n) in vars.iter().zip(&curve.num) {
        let (next, k) = substitute_rational(&acc, v, n, &curve.den);
        acc = next;
        power += k;
    }
    (acc, power)
}
