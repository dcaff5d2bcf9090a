//! Univariate root isolation.
//!
//! Real roots are isolated exactly on each square-free factor with the
//! Descartes rule of signs and bisection, then refined by exact bisection.
//! Complex roots come from Aberth-Ehrlich simultaneous iteration in `f64`;
//! the exact real count decides which of them are real.

use num_complex::Complex64;
use num_traits::{One, Signed, Zero};

use super::poly::{from_f64, to_f64, Polynomial, Rational};
use super::univariate::UPoly;
use super::PolyError;

/// Pairs with imaginary part below this are reported as near-real.
pub const NEAR_REAL_ETA: f64 = 1e-8;

const DEFAULT_WIDTH: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct RealRoot {
    /// Isolating interval; `lo == hi` when the root is an exact rational.
    pub lo: Rational,
    pub hi: Rational,
    pub value: f64,
    pub multiplicity: u32,
}

/// The conjugate pair `a ± i eta`.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexPair {
    pub a: f64,
    pub eta: f64,
    pub multiplicity: u32,
    pub near_real: bool,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct RootSet {
    pub real_roots: Vec<RealRoot>,
    pub complex_pairs: Vec<ComplexPair>,
}

impl RootSet {
    pub fn real_values(&self) -> Vec<f64> {
        self.real_roots.iter().map(|r| r.value).collect()
    }

    /// Real roots plus twice the pairs, with multiplicity.
    pub fn total_multiplicity(&self) -> u32 {
        self.real_roots.iter().map(|r| r.multiplicity).sum::<u32>()
            + 2 * self.complex_pairs.iter().map(|p| p.multiplicity).sum::<u32>()
    }
}

pub fn roots(p: &Polynomial) -> Result<RootSet, PolyError> {
    roots_with_width(p, DEFAULT_WIDTH)
}

/// Roots with real isolating intervals narrower than `width`.
pub fn roots_with_width(p: &Polynomial, width: f64) -> Result<RootSet, PolyError> {
    let u = UPoly::from_polynomial(p)?;
    roots_of(&u, width)
}

pub(crate) fn roots_of(u: &UPoly, width: f64) -> Result<RootSet, PolyError> {
    if u.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    let mut set = RootSet::default();
    for (f, mult) in u.square_free_decomposition() {
        let real = isolate_real(&f);
        let nreal = real.len();
        for (lo, hi) in real {
            let (lo, hi) = refine(&f, lo, hi, width);
            let value = to_f64(&((&lo + &hi) / Rational::from_integer(2.into())));
            let achieved = value.abs() * f64::EPSILON;
            if width < achieved {
                return Err(PolyError::Precision {
                    requested: width,
                    achieved,
                });
            }
            set.real_roots.push(RealRoot {
                lo,
                hi,
                value,
                multiplicity: mult,
            });
        }
        let deg = f.degree().unwrap_or(0);
        if deg > nreal {
            let npairs = (deg - nreal) / 2;
            let mut zs = aberth(&f.to_f64_coeffs());
            zs.sort_by(|a, b| a.im.abs().total_cmp(&b.im.abs()));
            let mut rest: Vec<Complex64> = zs.split_off(nreal);
            rest.sort_by(|a, b| b.im.total_cmp(&a.im));
            for z in rest.into_iter().take(npairs) {
                let eta = z.im.abs();
                set.complex_pairs.push(ComplexPair {
                    a: z.re,
                    eta,
                    multiplicity: mult,
                    near_real: eta < NEAR_REAL_ETA,
                });
            }
        }
    }
    set.real_roots.sort_by(|a, b| a.lo.cmp(&b.lo));
    set.complex_pairs
        .sort_by(|a, b| a.a.total_cmp(&b.a).then(a.eta.total_cmp(&b.eta)));
    Ok(set)
}

/// Distinct real roots of a polynomial with `f64` coefficients (ascending),
/// to about 1e-14 relative accuracy.
pub fn real_roots_f64(coeffs: &[f64]) -> Vec<f64> {
    let u = UPoly::from_f64(coeffs);
    if u.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let f = u.square_free_part();
    let mut out: Vec<f64> = isolate_real(&f)
        .into_iter()
        .map(|(lo, hi)| {
            let w = (to_f64(&lo).abs().max(to_f64(&hi).abs()) * 1e-14).max(1e-300);
            let (lo, hi) = refine(&f, lo, hi, w);
            to_f64(&((lo + hi) / Rational::from_integer(2.into())))
        })
        .collect();
    out.sort_by(f64::total_cmp);
    out
}

/// Real roots of a float polynomial (ascending coefficients) from Aberth
/// iteration alone, polished by Newton steps. Faster than [`real_roots_f64`]
/// but a close real pair may be reported as complex, or the reverse.
pub fn near_real_roots_f64(coeffs: &[f64]) -> Vec<f64> {
    let mut c: Vec<f64> = coeffs.to_vec();
    while c.last() == Some(&0.0) {
        c.pop();
    }
    let mut out = Vec::new();
    let zeros = c.iter().take_while(|v| **v == 0.0).count();
    if zeros > 0 && zeros < c.len() {
        out.push(0.0);
        c.drain(..zeros);
    }
    if c.len() < 2 {
        return out;
    }
    for z in aberth(&c) {
        if z.im.abs() > 1e-7 * z.re.abs().max(1.0) {
            continue;
        }
        let mut x = z.re;
        for _ in 0..3 {
            let (p, dp) = horner(&c, Complex64::new(x, 0.0));
            if dp.re == 0.0 {
                break;
            }
            let step = p.re / dp.re;
            if !step.is_finite() || step.abs() > 1e-6 * x.abs().max(1.0) {
                break;
            }
            x -= step;
        }
        out.push(x);
    }
    out.sort_by(f64::total_cmp);
    out.dedup_by(|a, b| (*a - *b).abs() <= 1e-9 * a.abs().max(1.0));
    out
}

fn sign(r: &Rational) -> i8 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

/// Number of sign variations bounding the root count in the open interval (a, b).
fn descartes(f: &UPoly, a: &Rational, b: &Rational) -> usize {
    let g = f.taylor_shift(a).scale_var(&(b - a));
    g.reversed().taylor_shift(&Rational::one()).sign_variations()
}

/// Isolating intervals (open, or degenerate for exact roots) of a square-free polynomial.
pub(crate) fn isolate_real(f: &UPoly) -> Vec<(Rational, Rational)> {
    let Some(deg) = f.degree() else {
        return Vec::new();
    };
    if deg == 0 {
        return Vec::new();
    }
    let bound = f.cauchy_bound();
    let mut b = Rational::one();
    while b < bound {
        b *= Rational::from_integer(2.into());
    }
    let mut out = Vec::new();
    let mut stack = vec![(-b.clone(), b)];
    while let Some((lo, hi)) = stack.pop() {
        match descartes(f, &lo, &hi) {
            0 => {}
            1 => out.push((lo, hi)),
            _ => {
                let mid = (&lo + &hi) / Rational::from_integer(2.into());
                if f.eval(&mid).is_zero() {
                    out.push((mid.clone(), mid.clone()));
                }
                stack.push((mid.clone(), hi));
                stack.push((lo, mid));
            }
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

/// Shrinks an isolating interval below `width` by exact bisection.
fn refine(f: &UPoly, mut lo: Rational, mut hi: Rational, width: f64) -> (Rational, Rational) {
    if lo == hi {
        return (lo, hi);
    }
    let two = Rational::from_integer(2.into());
    // endpoints may be neighbouring exact roots; move off them first
    loop {
        let (sl, sh) = (sign(&f.eval(&lo)), sign(&f.eval(&hi)));
        if sl != 0 && sh != 0 {
            break;
        }
        let mid = (&lo + &hi) / &two;
        if f.eval(&mid).is_zero() {
            return (mid.clone(), mid);
        }
        if descartes(f, &lo, &mid) == 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let w = from_f64(width);
    let slo = sign(&f.eval(&lo));
    while &hi - &lo >= w {
        let mid = (&lo + &hi) / &two;
        let s = sign(&f.eval(&mid));
        if s == 0 {
            return (mid.clone(), mid);
        }
        if s == slo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}

fn horner(c: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::zero();
    let mut dp = Complex64::zero();
    for &a in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

/// All complex roots by Aberth-Ehrlich iteration; `c` ascending, nonzero leading term.
pub(crate) fn aberth(c: &[f64]) -> Vec<Complex64> {
    let n = c.len() - 1;
    if n == 0 {
        return Vec::new();
    }
    let lc = c[n];
    let c: Vec<f64> = c.iter().map(|x| x / lc).collect();
    if n == 1 {
        return vec![Complex64::new(-c[0], 0.0)];
    }
    // Fujiwara-style radius for the starting circle
    let radius = (0..n)
        .map(|i| c[i].abs().powf(1.0 / (n - i) as f64))
        .fold(0.0f64, f64::max)
        .max(1e-3);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius, 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4))
        .collect();
    let mut settled = 0;
    for _ in 0..2000 {
        let mut max_step = 0.0f64;
        for k in 0..n {
            let (p, dp) = horner(&c, z[k]);
            if p == Complex64::zero() {
                continue;
            }
            let ratio = p / dp;
            let s: Complex64 = (0..n)
                .filter(|&j| j != k)
                .map(|j| (z[k] - z[j]).inv())
                .sum();
            let w = ratio / (Complex64::one() - ratio * s);
            if w.is_finite() {
                z[k] -= w;
                max_step = max_step.max(w.norm() / z[k].norm().max(1.0));
            }
        }
        if max_step < 1e-15 {
            settled += 1;
            if settled > 2 {
                break;
            }
        }
    }
    z
}
