//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! Variables are kept sorted by [`var_rank`]; monomials are ordered graded
//! lexicographically, comparing the exponent of the highest-ranked variable
//! first. Under this order `x0 < xc < lam < y0 < z0 < x < y < z < t < c`.

use std::borrow::Cow;
use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::PolyError;

pub type Rational = BigRational;

/// Rank used to order variables. Lower ranks are "smaller" variables.
pub fn var_rank(name: &str) -> (u32, &str) {
    let r = match name {
        "x0" => 0,
        "xc" => 1,
        "lam" => 2,
        "lam2" => 3,
        "y0" => 4,
        "z0" => 5,
        "x" => 10,
        "y" => 11,
        "z" => 12,
        "t" => 20,
        "c" => 21,
        _ => 30,
    };
    (r, name)
}

fn cmp_vars(a: &str, b: &str) -> Ordering {
    var_rank(a).cmp(&var_rank(b))
}

/// Exponent vector aligned with the owning polynomial's variable list.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub(crate) Vec<u32>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.iter().rev().cmp(other.0.iter().rev()))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial in named variables with `BigRational` coefficients.
///
/// No zero coefficient is ever stored.
#[derive(Clone, Debug)]
pub struct Polynomial {
    vars: Vec<String>,
    terms: BTreeMap<Monomial, Rational>,
}

pub fn q(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial {
            vars: Vec::new(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial(Vec::new()), c);
        }
        Polynomial {
            vars: Vec::new(),
            terms,
        }
    }

    pub fn int(n: i64) -> Self {
        Self::constant(q(n))
    }

    pub fn var(name: &str) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial(vec![1]), Rational::one());
        Polynomial {
            vars: vec![name.to_string()],
            terms,
        }
    }

    /// Builds from raw terms; `vars` need not be sorted. Zero coefficients
    /// are dropped and duplicate monomials summed.
    pub fn from_terms<I>(vars: Vec<String>, terms: I) -> Result<Self, PolyError>
    where
        I: IntoIterator<Item = (Vec<u32>, Rational)>,
    {
        let mut seen = vars.clone();
        seen.sort();
        seen.dedup();
        if seen.len() != vars.len() {
            return Err(PolyError::Json("duplicate variable name".into()));
        }
        let mut perm: Vec<usize> = (0..vars.len()).collect();
        perm.sort_by(|&a, &b| cmp_vars(&vars[a], &vars[b]));
        let sorted: Vec<String> = perm.iter().map(|&i| vars[i].clone()).collect();
        let mut out: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (e, c) in terms {
            if e.len() != vars.len() {
                return Err(PolyError::Json(format!(
                    "exponent vector of length {} for {} variables",
                    e.len(),
                    vars.len()
                )));
            }
            let m = Monomial(perm.iter().map(|&i| e[i]).collect());
            add_term(&mut out, m, c);
        }
        Ok(Polynomial {
            vars: sorted,
            terms: out,
        })
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    /// Variables that actually occur with a positive exponent.
    pub fn used_vars(&self) -> Vec<String> {
        self.vars
            .iter()
            .enumerate()
            .filter(|(i, _)| self.terms.keys().any(|m| m.0[*i] > 0))
            .map(|(_, v)| v.clone())
            .collect()
    }

    /// Terms in descending monomial order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter().rev()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    pub fn constant_value(&self) -> Option<Rational> {
        if self.is_zero() {
            Some(Rational::zero())
        } else if self.is_constant() {
            self.terms.values().next().cloned()
        } else {
            None
        }
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coefficient(&self) -> Rational {
        self.leading_term()
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rational::zero)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    fn index_of(&self, var: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == var)
    }

    /// Degree in `var`; zero when `var` does not occur, `None` for the zero polynomial.
    pub fn degree_in(&self, var: &str) -> Option<u32> {
        if self.is_zero() {
            return None;
        }
        match self.index_of(var) {
            None => Some(0),
            Some(i) => self.terms.keys().map(|m| m.0[i]).max(),
        }
    }

    pub fn contains_var(&self, var: &str) -> bool {
        self.degree_in(var).is_some_and(|d| d > 0)
    }

    /// Re-expresses over a superset of variables (must be sorted by rank).
    fn aligned(&self, vars: &[String]) -> Polynomial {
        if self.vars == vars {
            return self.clone();
        }
        let map: Vec<usize> = self
            .vars
            .iter()
            .map(|v| vars.iter().position(|w| w == v).expect("superset"))
            .collect();
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut e = vec![0; vars.len()];
                for (i, &j) in map.iter().enumerate() {
                    e[j] = m.0[i];
                }
                (Monomial(e), c.clone())
            })
            .collect();
        Polynomial {
            vars: vars.to_vec(),
            terms,
        }
    }

    /// Adds variables (keeping rank order). Existing ones are kept.
    pub fn with_vars(&self, extra: &[&str]) -> Polynomial {
        let mut vars = self.vars.clone();
        for v in extra {
            if !vars.iter().any(|w| w == v) {
                vars.push(v.to_string());
            }
        }
        vars.sort_by(|a, b| cmp_vars(a, b));
        self.aligned(&vars)
    }

    /// Drops variables that do not occur.
    pub fn trimmed(&self) -> Polynomial {
        let keep: Vec<usize> = (0..self.vars.len())
            .filter(|&i| self.terms.keys().any(|m| m.0[i] > 0))
            .collect();
        if keep.len() == self.vars.len() {
            return self.clone();
        }
        Polynomial {
            vars: keep.iter().map(|&i| self.vars[i].clone()).collect(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (Monomial(keep.iter().map(|&i| m.0[i]).collect()), c.clone()))
                .collect(),
        }
    }

    pub(crate) fn unify<'a>(a: &'a Polynomial, b: &'a Polynomial) -> (Cow<'a, Polynomial>, Cow<'a, Polynomial>) {
        if a.vars == b.vars {
            return (Cow::Borrowed(a), Cow::Borrowed(b));
        }
        let mut vars = a.vars.clone();
        for v in &b.vars {
            if !vars.contains(v) {
                vars.push(v.clone());
            }
        }
        vars.sort_by(|x, y| cmp_vars(x, y));
        let ca = if a.vars == vars {
            Cow::Borrowed(a)
        } else {
            Cow::Owned(a.aligned(&vars))
        };
        let cb = if b.vars == vars {
            Cow::Borrowed(b)
        } else {
            Cow::Owned(b.aligned(&vars))
        };
        (ca, cb)
    }

    pub fn scale(&self, k: &Rational) -> Polynomial {
        if k.is_zero() {
            return Polynomial {
                vars: self.vars.clone(),
                terms: BTreeMap::new(),
            };
        }
        Polynomial {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut result = Polynomial::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn derivative(&self, var: &str) -> Polynomial {
        let Some(i) = self.index_of(var) else {
            return Polynomial {
                vars: self.vars.clone(),
                terms: BTreeMap::new(),
            };
        };
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e > 0 {
                let mut n = m.clone();
                n.0[i] -= 1;
                add_term(&mut terms, n, c * q(e as i64));
            }
        }
        Polynomial {
            vars: self.vars.clone(),
            terms,
        }
    }

    /// Coefficients of successive powers of `var`; entry `k` multiplies `var^k`.
    /// The coefficients keep the same variable list (with `var` at exponent 0).
    pub fn coefficients_in(&self, var: &str) -> Vec<Polynomial> {
        let Some(i) = self.index_of(var) else {
            return if self.is_zero() { Vec::new() } else { vec![self.clone()] };
        };
        let deg = self.degree_in(var).unwrap_or(0) as usize;
        let mut out: Vec<BTreeMap<Monomial, Rational>> = vec![BTreeMap::new(); if self.is_zero() { 0 } else { deg + 1 }];
        for (m, c) in &self.terms {
            let mut n = m.clone();
            let e = n.0[i] as usize;
            n.0[i] = 0;
            out[e].insert(n, c.clone());
        }
        out.into_iter()
            .map(|terms| Polynomial {
                vars: self.vars.clone(),
                terms,
            })
            .collect()
    }

    /// Inverse of [`coefficients_in`](Self::coefficients_in).
    pub fn from_coefficients_in(var: &str, coeffs: &[Polynomial]) -> Polynomial {
        let x = Polynomial::var(var);
        let mut acc = Polynomial::zero();
        for c in coeffs.iter().rev() {
            acc = &(&acc * &x) + c;
        }
        acc
    }

    /// Leading coefficient with respect to `var` (a polynomial free of `var`).
    pub fn leading_coefficient_in(&self, var: &str) -> Polynomial {
        self.coefficients_in(var).pop().unwrap_or_else(Polynomial::zero)
    }

    /// Replaces `var` by `value`.
    pub fn substitute(&self, var: &str, value: &Polynomial) -> Polynomial {
        if !self.contains_var(var) {
            return self.clone();
        }
        let coeffs = self.coefficients_in(var);
        let mut acc = Polynomial::zero();
        for c in coeffs.iter().rev() {
            acc = &(&acc * value) + c;
        }
        // the substituted variable no longer occurs
        let vars: Vec<String> = acc.vars.iter().filter(|v| {
            v.as_str() != var || value.contains_var(var)
        }).cloned().collect();
        if vars.len() != acc.vars.len() {
            acc.trimmed_to(&vars)
        } else {
            acc
        }
    }

    fn trimmed_to(&self, vars: &[String]) -> Polynomial {
        let keep: Vec<usize> = vars
            .iter()
            .map(|v| self.index_of(v).expect("subset"))
            .collect();
        Polynomial {
            vars: vars.to_vec(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (Monomial(keep.iter().map(|&i| m.0[i]).collect()), c.clone()))
                .collect(),
        }
    }

    /// Substitutes an exact value for one variable.
    pub fn evaluate_at(&self, var: &str, value: &Rational) -> Polynomial {
        self.substitute(var, &Polynomial::constant(value.clone()))
    }

    /// Exact evaluation; every occurring variable must be assigned.
    pub fn eval_exact(&self, values: &[(&str, Rational)]) -> Result<Rational, PolyError> {
        let idx = self.assignment_indices(values.iter().map(|(n, _)| *n))?;
        let mut powers: Vec<Vec<Rational>> = Vec::with_capacity(self.vars.len());
        for (i, _) in self.vars.iter().enumerate() {
            let maxe = self.terms.keys().map(|m| m.0[i]).max().unwrap_or(0) as usize;
            let mut p = vec![Rational::one()];
            if let Some(j) = idx[i] {
                for k in 1..=maxe {
                    let next = &p[k - 1] * &values[j].1;
                    p.push(next);
                }
            }
            powers.push(p);
        }
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    term *= &powers[i][e as usize];
                }
            }
            acc += term;
        }
        Ok(acc)
    }

    fn assignment_indices<'a>(
        &self,
        names: impl Iterator<Item = &'a str> + Clone,
    ) -> Result<Vec<Option<usize>>, PolyError> {
        let mut idx = Vec::with_capacity(self.vars.len());
        for (i, v) in self.vars.iter().enumerate() {
            let pos = names.clone().position(|n| n == v);
            if pos.is_none() && self.terms.keys().any(|m| m.0[i] > 0) {
                return Err(PolyError::UnknownVariable(v.clone()));
            }
            idx.push(pos);
        }
        Ok(idx)
    }

    /// Floating evaluation; every occurring variable must be assigned.
    pub fn eval_f64(&self, values: &[(&str, f64)]) -> Result<f64, PolyError> {
        Ok(self.compile(&values.iter().map(|(n, _)| *n).collect::<Vec<_>>())?
            .eval(&values.iter().map(|(_, v)| *v).collect::<Vec<_>>()))
    }

    /// Converts to a floating-point evaluator with the given argument order.
    pub fn compile(&self, order: &[&str]) -> Result<F64Poly, PolyError> {
        let idx = self.assignment_indices(order.iter().copied())?;
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let mut e = vec![0u32; order.len()];
            for (i, &k) in m.0.iter().enumerate() {
                if k > 0 {
                    e[idx[i].expect("checked")] = k;
                }
            }
            terms.push((e, to_f64(c)));
        }
        Ok(F64Poly {
            nvars: order.len(),
            terms,
        })
    }

    /// Positive rational `k` such that `self / k` has coprime integer coefficients.
    pub fn content(&self) -> Rational {
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for c in self.terms.values() {
            num = num.gcd(c.numer());
            den = den.lcm(c.denom());
        }
        if num.is_zero() {
            return Rational::one();
        }
        Rational::new(num, den)
    }

    /// Integer coefficients with gcd 1 and positive leading coefficient.
    pub fn primitive(&self) -> Polynomial {
        if self.is_zero() {
            return self.clone();
        }
        let mut k = self.content();
        if self.leading_coefficient().is_negative() {
            k = -k;
        }
        self.scale(&k.recip())
    }

    /// Monic normalisation under the monomial order.
    pub fn monic(&self) -> Polynomial {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.leading_coefficient().recip())
    }

    /// Largest power of `var` dividing every term.
    pub fn power_of_var_dividing(&self, var: &str) -> u32 {
        match self.index_of(var) {
            None => 0,
            Some(i) => self.terms.keys().map(|m| m.0[i]).min().unwrap_or(0),
        }
    }

    /// Divides out the largest power of `var` dividing every term.
    pub fn strip_var_power(&self, var: &str) -> (Polynomial, u32) {
        let k = self.power_of_var_dividing(var);
        if k == 0 {
            return (self.clone(), 0);
        }
        let i = self.index_of(var).unwrap();
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut n = m.clone();
                n.0[i] -= k;
                (n, c.clone())
            })
            .collect();
        (
            Polynomial {
                vars: self.vars.clone(),
                terms,
            },
            k,
        )
    }

    /// True if `self` and `other` differ by a nonzero rational factor.
    pub fn equal_up_to_scalar(&self, other: &Polynomial) -> bool {
        if self.is_zero() || other.is_zero() {
            return self.is_zero() && other.is_zero();
        }
        self.primitive() == other.primitive()
    }

    pub(crate) fn terms_map(&self) -> &BTreeMap<Monomial, Rational> {
        &self.terms
    }

    pub(crate) fn from_parts(vars: Vec<String>, terms: BTreeMap<Monomial, Rational>) -> Self {
        Polynomial { vars, terms }
    }
}

pub(crate) fn add_term(map: &mut BTreeMap<Monomial, Rational>, m: Monomial, c: Rational) {
    if c.is_zero() {
        return;
    }
    match map.entry(m) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

pub fn to_f64(c: &Rational) -> f64 {
    c.to_f64().unwrap_or(f64::NAN)
}

/// Exact rational from a finite `f64`.
pub fn from_f64(x: f64) -> Rational {
    Rational::from_float(x).expect("finite float")
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        if self.vars == other.vars {
            return self.terms == other.terms;
        }
        let (a, b) = Polynomial::unify(self, other);
        a.terms == b.terms
    }
}

impl Eq for Polynomial {}

impl From<i64> for Polynomial {
    fn from(n: i64) -> Self {
        Polynomial::int(n)
    }
}

impl From<Rational> for Polynomial {
    fn from(c: Rational) -> Self {
        Polynomial::constant(c)
    }
}

fn add_impl(a: &Polynomial, b: &Polynomial, negate_b: bool) -> Polynomial {
    let (a, b) = Polynomial::unify(a, b);
    let mut terms = a.terms.clone();
    for (m, c) in &b.terms {
        let c = if negate_b { -c } else { c.clone() };
        add_term(&mut terms, m.clone(), c);
    }
    Polynomial {
        vars: a.vars.clone(),
        terms,
    }
}

fn mul_impl(a: &Polynomial, b: &Polynomial) -> Polynomial {
    let (a, b) = Polynomial::unify(a, b);
    if a.is_zero() || b.is_zero() {
        return Polynomial {
            vars: a.vars.clone(),
            terms: BTreeMap::new(),
        };
    }
    let mut acc: HashMap<Monomial, Rational> = HashMap::with_capacity(a.len() * b.len());
    for (ma, ca) in &a.terms {
        for (mb, cb) in &b.terms {
            let m = ma.mul(mb);
            let p = ca * cb;
            match acc.entry(m) {
                std::collections::hash_map::Entry::Vacant(v) => {
                    v.insert(p);
                }
                std::collections::hash_map::Entry::Occupied(mut o) => {
                    *o.get_mut() += p;
                }
            }
        }
    }
    Polynomial {
        vars: a.vars.clone(),
        terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        add_impl(self, rhs, false)
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        add_impl(self, rhs, true)
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        mul_impl(self, rhs)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $f(self, rhs: Polynomial) -> Polynomial {
                (&self).$f(&rhs)
            }
        }
        impl $tr<&Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $f(self, rhs: &Polynomial) -> Polynomial {
                (&self).$f(rhs)
            }
        }
        impl $tr<Polynomial> for &Polynomial {
            type Output = Polynomial;
            fn $f(self, rhs: Polynomial) -> Polynomial {
                self.$f(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

/// Floating-point evaluator produced by [`Polynomial::compile`].
#[derive(Clone, Debug)]
pub struct F64Poly {
    nvars: usize,
    terms: Vec<(Vec<u32>, f64)>,
}

impl F64Poly {
    pub fn eval(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.nvars);
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter()
                    .zip(x)
                    .fold(*c, |acc, (&k, &v)| if k == 0 { acc } else { acc * v.powi(k as i32) })
            })
            .sum()
    }

    /// Sum of absolute term values; a scale for rounding error estimates.
    pub fn eval_abs(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter()
                    .zip(x)
                    .fold(c.abs(), |acc, (&k, &v)| if k == 0 { acc } else { acc * v.abs().powi(k as i32) })
            })
            .sum()
    }

    pub fn eval_complex(&self, x: &[num_complex::Complex64]) -> num_complex::Complex64 {
        let mut acc = num_complex::Complex64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            let mut t = num_complex::Complex64::new(*c, 0.0);
            for (&k, v) in e.iter().zip(x) {
                if k > 0 {
                    t *= v.powi(k as i32);
                }
            }
            acc += t;
        }
        acc
    }
}

impl fmt::Display for Polynomial {
    /// Canonical text form: `c * v1^e1 v2 ... + ...`, terms in descending order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}", c)?;
            if m.degree() > 0 {
                write!(f, " *")?;
                for (v, &e) in self.vars.iter().zip(&m.0) {
                    match e {
                        0 => {}
                        1 => write!(f, " {}", v)?,
                        _ => write!(f, " {}^{}", v, e)?,
                    }
                }
            }
        }
        Ok(())
    }
}
