use causticlab::action::{build_flow, build_reduced_action, InitialData, ReducedAction, INITIAL, SPATIAL};
use causticlab::polyalg::{qf, roots, Polynomial, Rational, UPoly};
use proptest::prelude::*;

const EXAMPLES: [(&str, usize); 3] = [("x0^2*y0/2", 2), ("x0^5 + x0^2*y0", 2), ("x0^7 + x0^3*y0 + x0^2*z0", 3)];

fn reduced(s0: &str, dim: usize) -> ReducedAction {
    let d = InitialData::deterministic(dim, s0.parse().unwrap()).unwrap();
    build_reduced_action(&d).unwrap()
}

#[test]
fn hessian_product_formula_is_exact() {
    for (s0, dim) in EXAMPLES {
        let ra = reduced(s0, dim);
        let (lhs, rhs) = ra.hessian_product_sides();
        assert_eq!(lhs, rhs, "{s0}");
    }
}

#[test]
fn generic_cusp_hessian_against_direct_determinant() {
    // 2×2 determinant of the Hessian of t𝒜 in (x0, y0), on the chain,
    // against (t f)'' since ∂²(t𝒜)/∂y0² = 1
    let ra = reduced("x0^2*y0/2", 2);
    let h = |a: &str, b: &str| ra.full_scaled.derivative(a).derivative(b);
    let det = &(&h("x0", "x0") * &h("y0", "y0")) - &(&h("x0", "y0") * &h("y0", "x0"));
    assert_eq!(h("y0", "y0"), Polynomial::one());
    assert_eq!(ra.on_chain(&det), ra.scaled_derivative(2));
}

#[test]
fn quadratic_initial_data_has_constant_sides() {
    let ra = reduced("x0*y0 + x0^2", 2);
    let (lhs, rhs) = ra.hessian_product_sides();
    assert_eq!(lhs, rhs);
    assert!(!lhs.contains_var("x0"));
}

/// `Φ_t(x0, chain(x0)) - x` reduced modulo `f'` at rational `(x, t)`.
fn residual_remainders(ra: &ReducedAction, x: &[Rational], t: &Rational) -> Vec<UPoly> {
    let fp = UPoly::from_polynomial(&ra.at(x, t).derivative("x0")).unwrap();
    ra.flow_residuals()
        .iter()
        .map(|r| {
            let mut r = r.evaluate_at("t", t);
            for (v, val) in ra.data.spatial_vars().iter().zip(x) {
                r = r.evaluate_at(v, val);
            }
            UPoly::from_polynomial(&r.trimmed()).unwrap().divrem(&fp).1
        })
        .collect()
}

#[test]
fn critical_points_are_exact_preimages() {
    let mut rng = 17u64;
    let mut next = move |span: i64| {
        rng = rng.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((rng >> 33) as i64 % (2 * span + 1)) - span
    };
    for (s0, dim) in EXAMPLES {
        let ra = reduced(s0, dim);
        let flow = build_flow(&ra.data);
        for _ in 0..100 {
            let x: Vec<Rational> = (0..dim).map(|_| qf(next(20), 10)).collect();
            let t = qf(next(9).abs() + 1, 4);
            for rem in residual_remainders(&ra, &x, &t) {
                assert!(rem.is_zero(), "{s0} at {x:?}, t={t}");
            }
            // every real critical point maps back to x
            let xf: Vec<f64> = x.iter().map(causticlab::polyalg::to_f64).collect();
            let tf = causticlab::polyalg::to_f64(&t);
            let set = roots(&ra.at(&x, &t).derivative("x0")).unwrap();
            for x0 in set.real_values() {
                let mut pre = vec![x0];
                let mut args: Vec<(&str, f64)> = vec![("x0", x0), ("t", tf)];
                args.extend(SPATIAL[..dim].iter().copied().zip(xf.iter().copied()));
                for k in 1..dim {
                    let e = ra.chain.iter().find(|e| e.coord == INITIAL[k]).unwrap();
                    pre.push(e.expr.eval_f64(&args).unwrap());
                }
                let img = flow.apply(&pre, tf, &vec![0.0; dim]);
                for (a, b) in img.iter().zip(&xf) {
                    assert!((a - b).abs() < 1e-6 * (1.0 + b.abs()), "{s0}: {img:?} vs {xf:?}");
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    /// Critical points of the random action are pre-images under the noisy
    /// flow `x0 + t∇S0 - ε a ∫W`, written out by hand for `S0 = x0^5 + x0^2 y0`.
    #[test]
    fn noise_is_a_translation(
        eps in 0.0f64..1.0,
        a in prop::array::uniform2(-1.0f64..1.0),
        int_w in prop::array::uniform2(-2.0f64..2.0),
        w_t in prop::array::uniform2(-2.0f64..2.0),
        x in prop::array::uniform2(-0.5f64..0.5),
        t in 0.2f64..1.5,
    ) {
        let d = InitialData::new(2, "x0^5 + x0^2*y0".parse().unwrap(), a.to_vec(), eps).unwrap();
        let ra = build_reduced_action(&d).unwrap();
        let f = |x0: f64| ra.eval_random(x0, &x, t, &w_t, &int_w, 0.7);
        let df = |x0: f64| (f(x0 + 1e-6) - f(x0 - 1e-6)) / 2e-6;
        let n = 3000;
        for k in 0..n {
            let (mut lo, mut hi) = (-3.0 + 6.0 * k as f64 / n as f64, -3.0 + 6.0 * (k + 1) as f64 / n as f64);
            if df(lo) * df(hi) >= 0.0 {
                continue;
            }
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if df(lo) * df(mid) <= 0.0 { hi = mid } else { lo = mid }
            }
            let x0 = 0.5 * (lo + hi);
            let y0 = x[1] + eps * a[1] * int_w[1] - t * x0 * x0;
            let img_x = x0 + t * (5.0 * x0.powi(4) + 2.0 * x0 * y0) - eps * a[0] * int_w[0];
            prop_assert!((img_x - x[0]).abs() < 1e-5, "x0={x0}: {img_x} vs {}", x[0]);
        }
    }
}
