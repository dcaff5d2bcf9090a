use causticlab::action::{build_flow, build_reduced_action, InitialData, ReducedAction, SPATIAL};
use causticlab::geometry::{
    classify_b_point, complex_double_points, compute_caustic, deflate, hot_cool, hot_cool_boundaries, level_surface,
    maxwell_klein, pre_maxwell, substitute_rational, CausticData, Label, NodeKind, LAMBDA,
};
use causticlab::polyalg::{q, qf, Polynomial};

const EXAMPLES: [(&str, usize); 3] = [("x0^2*y0/2", 2), ("x0^5 + x0^2*y0", 2), ("x0^7 + x0^3*y0 + x0^2*z0", 3)];

fn setup(s0: &str, dim: usize) -> (ReducedAction, CausticData) {
    let d = InitialData::deterministic(dim, s0.parse().unwrap()).unwrap();
    let ra = build_reduced_action(&d).unwrap();
    let c = compute_caustic(&ra).unwrap();
    (ra, c)
}

fn on_curve(p: &Polynomial, c: &CausticData) -> Polynomial {
    let mut out = p.clone();
    for (k, n) in c.preparam.num.iter().enumerate() {
        out = substitute_rational(&out, SPATIAL[k], n, &c.preparam.den).0;
    }
    out
}

#[test]
fn first_two_derivatives_vanish_on_the_caustic() {
    for (s0, dim) in EXAMPLES {
        let (ra, c) = setup(s0, dim);
        for k in 1..=2 {
            let d = ra.scaled_derivative(k).substitute("x0", &Polynomial::var(LAMBDA[0]));
            assert!(on_curve(&d, &c).is_zero(), "{s0}: derivative {k}");
        }
        assert!(on_curve(&c.implicit, &c).is_zero(), "{s0}: implicit equation");
    }
}

/// Distinct real roots of `g` on `[lo, hi]` by sign changes on a fine grid.
fn grid_roots(g: impl Fn(f64) -> f64, lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let mut out = Vec::new();
    let step = (hi - lo) / n as f64;
    for k in 0..n {
        let (mut a, mut b) = (lo + step * k as f64, lo + step * (k + 1) as f64);
        if g(a) == 0.0 {
            out.push(a);
            continue;
        }
        if g(a) * g(b) >= 0.0 {
            continue;
        }
        for _ in 0..80 {
            let m = 0.5 * (a + b);
            if g(a) * g(m) <= 0.0 {
                b = m
            } else {
                a = m
            }
        }
        out.push(0.5 * (a + b));
    }
    out
}

fn derivative_at(ra: &ReducedAction, x: &[f64], t: f64) -> impl Fn(f64) -> f64 {
    let fp = ra.scaled_derivative(1).compile(&["x0", "x", "y", "t"]).unwrap();
    let args = [x[0], x[1], t];
    move |x0| fp.eval(&[x0, args[0], args[1], args[2]])
}

#[test]
fn cusp_parameters_kill_the_third_derivative() {
    for (s0, _) in &EXAMPLES[..2] {
        let (ra, c) = setup(s0, 2);
        let f3 = ra.scaled_derivative(3).compile(&["x0", "x", "y", "t"]).unwrap();
        for t in [0.5, 1.0, 2.0] {
            let tq = causticlab::polyalg::from_f64(t);
            for lam in c.cusp_params(&tq) {
                let x = c.point(&[lam], t).unwrap();
                let v = f3.eval(&[lam, x[0], x[1], t]);
                assert!(v.abs() <= 1e-9 * f3.eval_abs(&[lam, x[0], x[1], t]).max(1.0), "{s0} λ={lam}: {v}");
            }
        }
    }
}

#[test]
fn hot_cool_labels_match_brute_force() {
    let (ra, c) = setup("x0^5 + x0^2*y0", 2);
    let defl = deflate(&ra, &c).unwrap();
    let t = 1.0;
    let bounds = hot_cool_boundaries(&ra, &c, &defl, &q(1)).unwrap();
    let avoid: Vec<f64> = bounds.iter().map(|b| b.lambda).chain([0.0, 0.2]).collect();
    let mut checked = 0;
    let mut seen = [false; 2];
    for k in 0..=60 {
        let lam = -0.5 + 1.1 * k as f64 / 60.0;
        if avoid.iter().any(|a| (a - lam).abs() < 1e-3) {
            continue;
        }
        let x = c.point(&[lam], t).unwrap();
        let f = |x0: f64| ra.eval_deterministic(x0, &x, t);
        let others = grid_roots(derivative_at(&ra, &x, t), -10.0, 10.0, 200_000);
        let f_lam = f(lam);
        let hot = others.iter().filter(|r| (*r - lam).abs() > 1e-5).any(|r| f(*r) < f_lam - 1e-12 * f_lam.abs().max(1.0));
        let label = hot_cool(&ra, &c, &defl, lam, t).unwrap().label;
        assert_eq!(label == Label::Hot, hot, "λ={lam}");
        seen[hot as usize] = true;
        checked += 1;
    }
    assert!(checked >= 20 && seen[0] && seen[1]);
}

#[test]
fn b_points_split_into_crunodes_and_acnodes() {
    let (ra, c) = setup("x0^5 + x0^2*y0", 2);
    let mk = maxwell_klein(&ra, &c).unwrap();
    let b = mk.b_t.evaluate_at("t", &q(1)).trimmed();
    let coeffs: Vec<_> = b.coefficients_in("y").iter().map(|p| p.compile(&["x"]).unwrap()).collect();
    let mut samples = Vec::new();
    for k in 0..400 {
        let x = -0.02 + 0.03 * k as f64 / 399.0;
        let cs: Vec<f64> = coeffs.iter().map(|p| p.eval(&[x])).collect();
        for y in causticlab::polyalg::real_roots_f64(&cs) {
            samples.push([x, y]);
        }
    }
    let (mut crunodes, mut acnodes) = (0, 0);
    for p in samples.iter().step_by((samples.len() / 100).max(1)).take(100) {
        let cls = classify_b_point(&ra, p, 1.0).unwrap();
        if cls.near_real_pairs > 0 {
            continue;
        }
        let crit = grid_roots(derivative_at(&ra, p, 1.0), -10.0, 10.0, 100_000);
        match cls.kind {
            NodeKind::Crunode => {
                crunodes += 1;
                assert_eq!(crit.len(), 4, "{p:?}");
                let vals: Vec<f64> = crit.iter().map(|r| ra.eval_deterministic(*r, p, 1.0)).collect();
                let close = (0..4).any(|i| (i + 1..4).any(|j| (vals[i] - vals[j]).abs() < 1e-10));
                assert!(close, "{p:?}: {vals:?}");
            }
            NodeKind::Acnode => {
                acnodes += 1;
                assert_eq!(crit.len(), 2, "{p:?}");
            }
            NodeKind::Undetermined => {}
        }
    }
    assert!(crunodes > 0 && acnodes > 0, "{crunodes} crunodes, {acnodes} acnodes");
}

#[test]
fn double_discriminant_vanishes_at_a_brute_force_maxwell_point() {
    let (ra, c) = setup("x0^5 + x0^2*y0", 2);
    let mk = maxwell_klein(&ra, &c).unwrap();
    let t = 1.0;
    // gap between the two local minima, leftmost minus rightmost
    let gap = |x: f64, y: f64| -> Option<f64> {
        let p = [x, y];
        let crit = grid_roots(derivative_at(&ra, &p, t), -2.0, 2.0, 8_000);
        let f = |x0: f64| ra.eval_deterministic(x0, &p, t);
        let minima: Vec<f64> = crit.into_iter().filter(|r| f(r + 1e-5) > f(*r) && f(r - 1e-5) > f(*r)).collect();
        (minima.len() == 2).then(|| f(minima[0]) - f(minima[1]))
    };
    let mut point = None;
    'scan: for i in 0..20 {
        let x = -0.004 + 0.0045 * i as f64 / 19.0;
        let ys: Vec<f64> = (0..60).map(|j| -0.5 + 0.04 * j as f64 / 59.0).collect();
        for w in ys.windows(2) {
            if let (Some(ga), Some(gb)) = (gap(x, w[0]), gap(x, w[1])) {
                if ga * gb < 0.0 {
                    let (mut lo, mut hi) = (w[0], w[1]);
                    for _ in 0..60 {
                        let m = 0.5 * (lo + hi);
                        match gap(x, m) {
                            Some(gm) if gm * ga > 0.0 => lo = m,
                            _ => hi = m,
                        }
                    }
                    point = Some([x, 0.5 * (lo + hi)]);
                    break 'scan;
                }
            }
        }
    }
    let p = point.expect("a Maxwell point in the scanned window");
    let d = mk.d.compile(&["x", "y", "t"]).unwrap();
    let rel = d.eval(&[p[0], p[1], t]).abs() / d.eval_abs(&[p[0], p[1], t]);
    assert!(rel < 1e-8, "{p:?}: {rel}");
}

#[test]
fn small_time_pre_caustic_is_empty() {
    for (s0, dim) in EXAMPLES {
        let d = InitialData::deterministic(dim, s0.parse().unwrap()).unwrap();
        let det = build_flow(&d).jacobian_det().evaluate_at("t", &qf(1, 100));
        let order = &["x0", "y0", "z0"][..dim];
        let f = det.with_vars(order).compile(order).unwrap();
        let n: usize = if dim == 2 { 60 } else { 20 };
        let pts = (0..n.pow(dim as u32)).map(|k| {
            (0..dim).map(|j| -1.0 + 2.0 * ((k / n.pow(j as u32)) % n) as f64 / (n - 1) as f64).collect::<Vec<f64>>()
        });
        for p in pts {
            assert!(f.eval(&p) > 0.0, "{s0} at {p:?}");
        }
    }
}

#[test]
fn generic_cusp_zero_level_on_fifty_points() {
    let (ra, _) = setup("x0^2*y0/2", 2);
    let rho = level_surface(&ra, &q(0), &q(1)).unwrap();
    let f = rho.compile(&["x", "y"]).unwrap();
    for k in 0..25 {
        let x0 = -0.96 + 1.92 * k as f64 / 24.0;
        let s = (1.0 - x0 * x0).sqrt();
        for sign in [1.0, -1.0] {
            let (x, y) = (x0 / 2.0 * (1.0 + sign * s), (x0 * x0 - 1.0 + sign * s) / 2.0);
            assert!(f.eval(&[x, y]).abs() < 1e-10, "{x0}");
        }
    }
}

#[test]
fn very_low_level_misses_the_window() {
    let (ra, _) = setup("x0^2*y0/2", 2);
    let rho = level_surface(&ra, &q(-10), &q(1)).unwrap();
    let f = rho.compile(&["x", "y"]).unwrap();
    let sign = f.eval(&[0.0, 0.0]).signum();
    for i in 0..50 {
        for j in 0..50 {
            let (x, y) = (-1.0 + 2.0 * i as f64 / 49.0, -1.0 + 2.0 * j as f64 / 49.0);
            assert_eq!(f.eval(&[x, y]).signum(), sign);
        }
    }
}

#[test]
fn even_data_gives_symmetric_pre_maxwell() {
    let (ra, c) = setup("x0^2*y0/2", 2);
    let pm = pre_maxwell(&ra, &c).unwrap().poly;
    assert_eq!(pm.substitute("x0", &-&Polynomial::var("x0")), pm);
}

#[test]
fn generic_cusp_double_point_count_is_constant() {
    let (_, c) = setup("x0^2*y0/2", 2);
    let counts: Vec<usize> =
        [qf(1, 2), q(1), q(2)].iter().map(|t| complex_double_points(&c, t).unwrap().points.len()).collect();
    assert!(counts.windows(2).all(|w| w[0] == w[1]), "{counts:?}");
}

#[test]
fn vanishing_pair_approaches_the_real_axis() {
    let (_, c) = setup("x0^5 + x0^6*y0", 2);
    let etas: Vec<f64> = [qf(50, 20), qf(51, 20), qf(129, 50)]
        .iter()
        .map(|t| {
            let r = complex_double_points(&c, t).unwrap();
            r.points.iter().map(|p| p.eta).fold(f64::INFINITY, f64::min)
        })
        .collect();
    assert!(etas[0] > etas[1] && etas[1] > etas[2], "{etas:?}");
}
