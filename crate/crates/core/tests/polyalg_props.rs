use causticlab::polyalg::{
    discriminant, exact_divide, gcd, q, resultant, roots, to_f64, Polynomial, Rational, UPoly,
};
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn univariate(var: &str, coeffs: &[i64]) -> Polynomial {
    let x = Polynomial::var(var);
    coeffs
        .iter()
        .enumerate()
        .fold(Polynomial::zero(), |acc, (k, &c)| &acc + &(&Polynomial::int(c) * &x.pow(k as u32)))
}

fn bivariate(coeffs: &[i64]) -> Polynomial {
    // coefficients of x^i y^j for i + j <= 2, then a leading x^3 term
    let x = Polynomial::var("x");
    let y = Polynomial::var("y");
    let monos = [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2), (3, 0)];
    coeffs
        .iter()
        .zip(monos)
        .fold(Polynomial::zero(), |acc, (&c, (i, j))| {
            &acc + &(&Polynomial::int(c) * &(&x.pow(i) * &y.pow(j)))
        })
}

fn nonzero_lead(max_deg: usize) -> impl Strategy<Value = Vec<i64>> {
    (1..=max_deg).prop_flat_map(|d| {
        (prop::collection::vec(-6i64..=6, d), prop_oneof![1i64..=5, -5i64..=-1]).prop_map(
            |(mut v, lead)| {
                v.push(lead);
                v
            },
        )
    })
}

fn nth_derivative_at_zero(p: &Polynomial, var: &str, n: u32) -> Rational {
    let mut d = p.clone();
    for _ in 0..n {
        d = d.derivative(var);
    }
    d.evaluate_at(var, &Rational::zero()).constant_value().unwrap()
}

fn factorial(n: u32) -> Rational {
    (1..=n as i64).fold(q(1), |acc, k| acc * q(k))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn resultant_is_antisymmetric(a in prop::collection::vec(-4i64..=4, 7), b in prop::collection::vec(-4i64..=4, 7)) {
        let mut a = a; a[6] = 1 + a[6].abs();
        let mut b = b; b[6] = -1 - b[6].abs();
        let p = bivariate(&a);
        let r = bivariate(&b);
        for var in ["x", "y"] {
            if p.contains_var(var) && r.contains_var(var) {
                let m = p.degree_in(var).unwrap();
                let n = r.degree_in(var).unwrap();
                let lhs = resultant(&p, &r, var).unwrap();
                let rhs = resultant(&r, &p, var).unwrap();
                let rhs = if (m * n) % 2 == 1 { -rhs } else { rhs };
                prop_assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn exact_divide_inverts_multiplication(a in prop::collection::vec(-5i64..=5, 7), b in prop::collection::vec(-5i64..=5, 7)) {
        let p = bivariate(&a);
        let d = bivariate(&b);
        prop_assume!(!d.is_zero());
        let prod = &p * &d;
        prop_assert_eq!(exact_divide(&prod, &d).unwrap(), p);
    }

    #[test]
    fn gcd_recovers_common_factor(
        pc in nonzero_lead(3),
        qc in nonzero_lead(3),
        wc in prop::collection::vec(-4i64..=4, 7),
        c in 1i64..=9,
        d in -9i64..=-1,
    ) {
        let p = univariate("x", &pc);
        let r = univariate("x", &qc);
        let w = bivariate(&wc);
        prop_assume!(!w.is_zero());
        let a = (&p * &w).scale(&q(c));
        let b = (&r * &w).scale(&Rational::new(d.into(), 7.into()));
        let g = gcd(&a, &b);
        prop_assert!(exact_divide(&a, &g).is_ok());
        prop_assert!(exact_divide(&b, &g).is_ok());
        prop_assert!(exact_divide(&g, &w).is_ok());
        let coprime = !resultant(&p, &r, "x").unwrap().is_zero();
        if coprime {
            prop_assert_eq!(g, w.primitive());
        }
    }

    #[test]
    fn univariate_gcd_is_one_iff_resultant_nonzero(pc in nonzero_lead(4), qc in nonzero_lead(4)) {
        let p = univariate("x", &pc);
        let r = univariate("x", &qc);
        let res = resultant(&p, &r, "x").unwrap();
        let g = gcd(&p, &r);
        prop_assert_eq!(g == Polynomial::one(), !res.is_zero());
    }

    #[test]
    fn root_multiplicities_sum_to_degree(pc in nonzero_lead(4), qc in nonzero_lead(2)) {
        // force a repeated factor
        let r = univariate("x", &qc);
        let p = &univariate("x", &pc) * &(&r * &r);
        let set = roots(&p).unwrap();
        prop_assert_eq!(set.total_multiplicity(), p.degree_in("x").unwrap());
        let sf = UPoly::from_polynomial(&p).unwrap().square_free_part();
        for root in &set.real_roots {
            if root.lo != root.hi {
                let a = sf.eval(&root.lo);
                let b = sf.eval(&root.hi);
                prop_assert!((a * b).is_negative());
            }
        }
    }

    #[test]
    fn product_resultant_identity(gc in nonzero_lead(4), hc in nonzero_lead(4)) {
        let g = univariate("x", &gc);
        let h = univariate("x", &hc);
        prop_assume!(g.degree_in("x").unwrap() >= 1 && h.degree_in("x").unwrap() >= 1);
        let rgh = resultant(&g, &h, "x").unwrap();
        prop_assume!(!rgh.is_zero());
        let f = &g * &h;
        let m = g.degree_in("x").unwrap();
        let n = h.degree_in("x").unwrap();
        let nn = m + n;
        let res = |a: &Polynomial, b: &Polynomial| -> Rational {
            if b.is_constant() {
                // R(a, c) = c^deg a for a constant c
                let c = b.constant_value().unwrap();
                return num_traits::pow(c, a.degree_in("x").unwrap() as usize);
            }
            resultant(a, b, "x").unwrap().constant_value().unwrap()
        };
        let lhs = res(&f, &f.derivative("x"));
        let ratio = factorial(m) * factorial(n) / factorial(nn)
            * nth_derivative_at_zero(&f, "x", nn)
            / (nth_derivative_at_zero(&g, "x", m) * nth_derivative_at_zero(&h, "x", n));
        let sign = if (m * n) % 2 == 1 { q(-1) } else { q(1) };
        let rgh = rgh.constant_value().unwrap();
        let rhs = sign * num_traits::pow(ratio, (nn - 1) as usize)
            * res(&g, &g.derivative("x"))
            * res(&h, &h.derivative("x"))
            * &rgh * &rgh;
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn cubic_discriminant_matches_root_product(a in -20i64..=20, b in -20i64..=20, c in -20i64..=20) {
        let p = univariate("x", &[c, b, a, 1]);
        let disc = discriminant(&p, "x").unwrap().constant_value().unwrap();
        let set = roots(&p).unwrap();
        let mut zs: Vec<num_complex::Complex64> = Vec::new();
        for r in &set.real_roots {
            for _ in 0..r.multiplicity { zs.push(num_complex::Complex64::new(r.value, 0.0)); }
        }
        for pr in &set.complex_pairs {
            for _ in 0..pr.multiplicity {
                zs.push(num_complex::Complex64::new(pr.a, pr.eta));
                zs.push(num_complex::Complex64::new(pr.a, -pr.eta));
            }
        }
        prop_assert_eq!(zs.len(), 3);
        let mut prod = num_complex::Complex64::new(1.0, 0.0);
        for i in 0..3 { for j in i + 1..3 { let d = zs[i] - zs[j]; prod *= d * d; } }
        let exact = to_f64(&disc);
        let scale = zs.iter().map(|z| z.norm()).fold(1.0f64, f64::max).powi(6);
        prop_assert!((prod.re - exact).abs() <= 1e-9 * exact.abs().max(scale), "{} vs {}", prod.re, exact);
    }

    #[test]
    fn text_and_json_round_trip(a in prop::collection::vec(-50i64..=50, 7), den in 1i64..=30) {
        let p = bivariate(&a).scale(&Rational::new(1.into(), den.into()));
        let text = p.to_string();
        let back: Polynomial = text.parse().unwrap();
        prop_assert_eq!(&back, &p);
        prop_assert_eq!(back.to_string(), text);
        let j = p.to_json();
        prop_assert_eq!(Polynomial::from_json(&j).unwrap().to_json(), j);
    }
}

fn grid_sign_changes(g: &causticlab::polyalg::F64Poly) -> usize {
    let mut changes = 0;
    let mut prev = g.eval(&[-10.0]);
    for k in 1..=200_000 {
        let v = g.eval(&[-10.0 + k as f64 * 1e-4]);
        if v == 0.0 || v.signum() != prev.signum() {
            changes += 1;
        }
        prev = v;
    }
    changes
}

#[test]
fn generic_cusp_critical_point_counts_match_grid_oracle() {
    // t f for the generic cusp at t = 1
    let f: Polynomial = "x0^2*y/2 - x0^4/8 + (x - x0)^2/2".parse().unwrap();
    for (y, expected) in [(2, 3), (-2, 1)] {
        let fp = f
            .derivative("x0")
            .evaluate_at("x", &q(0))
            .evaluate_at("y", &q(y));
        let set = roots(&fp).unwrap();
        let oracle = grid_sign_changes(&fp.compile(&["x0"]).unwrap());
        assert_eq!(set.real_roots.len(), oracle);
        assert_eq!(set.real_roots.len(), expected);
    }
}
