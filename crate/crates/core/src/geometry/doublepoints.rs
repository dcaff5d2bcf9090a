//! Complex double points of the caustic.
//!
//! Continuing `λ ↦ x_t(λ)` to `λ = a + iη`, a conjugate pair of parameters
//! maps to a real point exactly when `Im x_t(a + iη) = 0` in every
//! coordinate. With `x = N/D`, the conditions are
//! `U_k = Im(N_k(λ) D(λ̄)) / η = 0`, polynomial in `(a, η)`. Common zeros
//! in a window are found by interval subdivision and Newton polishing.

use rayon::prelude::*;

use crate::polyalg::{exact_divide, to_f64, Polynomial, Rational};

use super::caustic::{CausticData, LAMBDA};
use super::GeometryError;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DoublePointWindow {
    pub a: (f64, f64),
    pub eta: (f64, f64),
    /// Boxes are split until both sides are below this width.
    pub min_width: f64,
}

impl Default for DoublePointWindow {
    fn default() -> Self {
        DoublePointWindow { a: (-5.0, 5.0), eta: (1e-6, 5.0), min_width: 1e-3 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComplexDoublePoint {
    pub a: f64,
    pub eta: f64,
    pub t: f64,
    /// The real image point `x_t(a + iη)`.
    pub point: Vec<f64>,
    /// Within `1e-6` of the window boundary, so a neighbour may be outside.
    pub near_boundary: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DoublePointsResult {
    pub points: Vec<ComplexDoublePoint>,
    pub window: DoublePointWindow,
    /// Boxes still undecided when the depth limit was reached.
    pub unresolved_boxes: usize,
}

/// Real and imaginary parts of `p(a + iη)` for `p` univariate in `var`.
fn complex_parts(p: &Polynomial, var: &str) -> (Polynomial, Polynomial) {
    let a = Polynomial::var("a");
    let e = Polynomial::var("eta");
    let mut re = Polynomial::zero();
    let mut im = Polynomial::zero();
    // Horner: (re + i im) * (a + i e) + c
    for c in p.coefficients_in(var).iter().rev() {
        let nre = &(&(&re * &a) - &(&im * &e)) + c;
        let nim = &(&re * &e) + &(&im * &a);
        re = nre;
        im = nim;
    }
    (re, im)
}

/// Dense `f64` coefficients `c[i][j]` of `a^i η^j`.
#[derive(Clone, Debug)]
struct Dense {
    c: Vec<Vec<f64>>,
}

impl Dense {
    fn new(p: &Polynomial) -> Dense {
        let da = p.degree_in("a").unwrap_or(0) as usize;
        let de = p.degree_in("eta").unwrap_or(0) as usize;
        let mut c = vec![vec![0.0; de + 1]; da + 1];
        let ia = p.vars().iter().position(|v| v == "a");
        let ie = p.vars().iter().position(|v| v == "eta");
        for (m, coef) in p.terms() {
            let i = ia.map_or(0, |k| m.exps()[k] as usize);
            let j = ie.map_or(0, |k| m.exps()[k] as usize);
            c[i][j] += to_f64(coef);
        }
        Dense { c }
    }

    fn eval(&self, a: f64, e: f64) -> f64 {
        self.c
            .iter()
            .rev()
            .fold(0.0, |acc, row| acc * a + row.iter().rev().fold(0.0, |s, v| s * e + v))
    }

    /// Coefficients of `p(ca + u, ce + v)`.
    fn shifted(&self, ca: f64, ce: f64) -> Vec<Vec<f64>> {
        let mut c = self.c.clone();
        // shift in a for each power of eta
        let na = c.len();
        let ne = c[0].len();
        for j in 0..ne {
            for i in 0..na {
                for k in (i..na - 1).rev() {
                    c[k][j] += ca * c[k + 1][j];
                }
            }
        }
        for row in c.iter_mut() {
            for i in 0..ne {
                for k in (i..ne - 1).rev() {
                    row[k] += ce * row[k + 1];
                }
            }
        }
        c
    }

    /// Can the polynomial vanish on the box centred at `(ca, ce)` with
    /// half-widths `(ra, re)`?
    fn may_vanish(&self, ca: f64, ce: f64, ra: f64, re: f64) -> bool {
        let c = self.shifted(ca, ce);
        let mut rest = 0.0;
        let mut pa = 1.0;
        for (i, row) in c.iter().enumerate() {
            let mut pe = 1.0;
            for (j, v) in row.iter().enumerate() {
                if i + j > 0 {
                    rest += v.abs() * pa * pe;
                }
                pe *= re;
            }
            pa *= ra;
        }
        c[0][0].abs() <= rest * (1.0 + 1e-12) + 1e-300
    }
}

#[derive(Clone, Debug)]
struct System {
    u: [Dense; 2],
    ua: [Dense; 2],
    ue: [Dense; 2],
    den_re: Dense,
    den_im: Dense,
}

impl System {
    fn newton(&self, mut a: f64, mut e: f64) -> Option<(f64, f64)> {
        for _ in 0..60 {
            let f = [self.u[0].eval(a, e), self.u[1].eval(a, e)];
            let j = [
                [self.ua[0].eval(a, e), self.ue[0].eval(a, e)],
                [self.ua[1].eval(a, e), self.ue[1].eval(a, e)],
            ];
            let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
            if det == 0.0 || !det.is_finite() {
                return None;
            }
            let da = (f[0] * j[1][1] - f[1] * j[0][1]) / det;
            let de = (j[0][0] * f[1] - j[1][0] * f[0]) / det;
            a -= da;
            e -= de;
            if !a.is_finite() || !e.is_finite() {
                return None;
            }
            if da.abs() <= 1e-14 * a.abs().max(1.0) && de.abs() <= 1e-14 * e.abs().max(1.0) {
                return Some((a, e));
            }
        }
        None
    }

    fn on_pole(&self, a: f64, e: f64) -> bool {
        let r = self.den_re.eval(a, e);
        let i = self.den_im.eval(a, e);
        r.hypot(i) < 1e-10
    }
}

/// Complex double points of the caustic at time `t` in the default window.
pub fn complex_double_points(caustic: &CausticData, t: &Rational) -> Result<DoublePointsResult, GeometryError> {
    complex_double_points_in(caustic, t, DoublePointWindow::default())
}

pub fn complex_double_points_in(
    caustic: &CausticData,
    t: &Rational,
    window: DoublePointWindow,
) -> Result<DoublePointsResult, GeometryError> {
    if caustic.dim != 2 {
        return Err(GeometryError::Dimension { required: 2, got: caustic.dim });
    }
    let tf = to_f64(t);
    if tf <= 0.0 {
        return Err(GeometryError::Time(tf));
    }
    let curve = caustic.preparam.specialise("t", t);
    let (dre, dim) = complex_parts(&curve.den, LAMBDA[0]);
    let eta = Polynomial::var("eta");
    let mut u = Vec::new();
    for n in &curve.num {
        let (nre, nim) = complex_parts(n, LAMBDA[0]);
        // Im(N conj D) = Im N Re D - Re N Im D
        let im = &(&nim * &dre) - &(&nre * &dim);
        let q = if im.is_zero() { im } else { exact_divide(&im, &eta)? };
        u.push(q);
    }
    let sys = System {
        ua: [Dense::new(&u[0].derivative("a")), Dense::new(&u[1].derivative("a"))],
        ue: [Dense::new(&u[0].derivative("eta")), Dense::new(&u[1].derivative("eta"))],
        u: [Dense::new(&u[0]), Dense::new(&u[1])],
        den_re: Dense::new(&dre),
        den_im: Dense::new(&dim),
    };

    // initial grid of boxes, refined in parallel
    let n0 = 16;
    let wa = (window.a.1 - window.a.0) / n0 as f64;
    let we = (window.eta.1 - window.eta.0) / n0 as f64;
    let boxes: Vec<(f64, f64, f64, f64)> = (0..n0 * n0)
        .map(|k| {
            let i = k / n0;
            let j = k % n0;
            let a0 = window.a.0 + wa * i as f64;
            let e0 = window.eta.0 + we * j as f64;
            (a0, a0 + wa, e0, e0 + we)
        })
        .collect();
    let results: Vec<(Vec<(f64, f64)>, usize)> = boxes
        .par_iter()
        .map(|b| subdivide(&sys, *b, window.min_width))
        .collect();

    let mut found: Vec<(f64, f64)> = Vec::new();
    let mut unresolved = 0;
    for (pts, un) in results {
        unresolved += un;
        for (a, e) in pts {
            let inside = a >= window.a.0 - 1e-9 && a <= window.a.1 + 1e-9 && e >= window.eta.0 && e <= window.eta.1 + 1e-9;
            if !inside || sys.on_pole(a, e) {
                continue;
            }
            if !found.iter().any(|(fa, fe)| (fa - a).abs() < 1e-7 && (fe - e).abs() < 1e-7) {
                found.push((a, e));
            }
        }
    }
    found.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.total_cmp(&y.1)));
    let points = found
        .into_iter()
        .map(|(a, e)| {
            let z = num_complex::Complex64::new(a, e);
            let point = complex_point(&curve.num, &curve.den, z);
            let near_boundary = (a - window.a.0).abs() < 1e-6
                || (a - window.a.1).abs() < 1e-6
                || (e - window.eta.0).abs() < 1e-6
                || (e - window.eta.1).abs() < 1e-6;
            ComplexDoublePoint { a, eta: e, t: tf, point, near_boundary }
        })
        .collect();
    Ok(DoublePointsResult { points, window, unresolved_boxes: unresolved })
}

fn complex_point(num: &[Polynomial], den: &Polynomial, z: num_complex::Complex64) -> Vec<f64> {
    let ev = |p: &Polynomial| {
        p.compile(&[LAMBDA[0]]).expect("univariate").eval_complex(&[z])
    };
    let d = ev(den);
    num.iter().map(|n| (ev(n) / d).re).collect()
}

fn subdivide(sys: &System, root: (f64, f64, f64, f64), min_width: f64) -> (Vec<(f64, f64)>, usize) {
    let mut stack = vec![(root, 0u32)];
    let mut out = Vec::new();
    let mut unresolved = 0;
    while let Some(((a0, a1, e0, e1), depth)) = stack.pop() {
        let ca = 0.5 * (a0 + a1);
        let ce = 0.5 * (e0 + e1);
        let ra = 0.5 * (a1 - a0);
        let re = 0.5 * (e1 - e0);
        if !sys.u[0].may_vanish(ca, ce, ra, re) || !sys.u[1].may_vanish(ca, ce, ra, re) {
            continue;
        }
        if a1 - a0 <= min_width && e1 - e0 <= min_width {
            match sys.newton(ca, ce) {
                Some((a, e)) if (a - ca).abs() <= 4.0 * ra && (e - ce).abs() <= 4.0 * re => out.push((a, e)),
                Some(_) => {}
                None => unresolved += 1,
            }
            continue;
        }
        if depth > 60 {
            unresolved += 1;
            continue;
        }
        if a1 - a0 >= e1 - e0 {
            stack.push(((a0, ca, e0, e1), depth + 1));
            stack.push(((ca, a1, e0, e1), depth + 1));
        } else {
            stack.push(((a0, a1, e0, ce), depth + 1));
            stack.push(((a0, a1, ce, e1), depth + 1));
        }
    }
    (out, unresolved)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::{build_reduced_action, InitialData};
    use crate::geometry::compute_caustic;
    use crate::polyalg::qf;

    #[test]
    fn dense_shift_matches_evaluation() {
        let p: Polynomial = "3*a^3*eta - 2*a*eta^2 + eta^4 - 7 + a".parse().unwrap();
        let d = Dense::new(&p);
        let s = Dense { c: d.shifted(0.3, -1.2) };
        for (u, v) in [(0.0, 0.0), (0.7, 0.1), (-1.1, 2.0)] {
            assert!((s.eval(u, v) - d.eval(0.3 + u, -1.2 + v)).abs() < 1e-10);
        }
    }

    #[test]
    fn sextic_counts() {
        let d = InitialData::deterministic(2, "x0^5 + x0^6*y0".parse().unwrap()).unwrap();
        let ra = build_reduced_action(&d).unwrap();
        let c = compute_caustic(&ra).unwrap();
        let before = complex_double_points(&c, &qf(12, 5)).unwrap();
        let after = complex_double_points(&c, &qf(27, 10)).unwrap();
        assert_eq!(before.points.len(), 5, "{before:?}");
        assert_eq!(after.points.len(), 4, "{after:?}");
    }
}
