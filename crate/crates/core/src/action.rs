//! Flow map, action and reduced action for free flow with linear noise.
//!
//! The supported family has no potential and noise potential `k_t(x) = a·x`,
//! with initial action `S0 = p(x0) + Σ g_α(x0) x0^α` affine in each upper
//! initial coordinate. Initial coordinates are named `x0, y0, z0`; spatial
//! coordinates `x, y, z`; time `t`.
//!
//! Everything here is exact. The free action carries a `1/t` pole, so the
//! reduced action is stored as the polynomial `t·f` together with its pole
//! order; critical points in `x0` are unchanged by the scaling for `t > 0`.

use thiserror::Error;

use crate::polyalg::{PolyError, Polynomial, Rational};

pub const INITIAL: [&str; 3] = ["x0", "y0", "z0"];
pub const SPATIAL: [&str; 3] = ["x", "y", "z"];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ActionError {
    #[error("dimension {0} is not supported (expected 2 or 3)")]
    Dimension(usize),
    #[error("variable `{0}` is not an initial coordinate for this dimension")]
    UnknownVariable(String),
    #[error("term `{term}` is not affine in a single upper coordinate")]
    NotReducible { term: String },
    #[error("S0 does not involve any upper coordinate; the problem is one-dimensional")]
    OneDimensional,
    #[error("noise direction has {got} components, expected {expected}")]
    NoiseLength { got: usize, expected: usize },
    #[error("epsilon must be finite and non-negative, got {0}")]
    Epsilon(f64),
    #[error("chain equation for `{0}` has a vanishing leading coefficient")]
    ChainDegenerate(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Noise data: `k_t(x) = a·x` driven by `ε W`.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseShift {
    pub direction: Vec<f64>,
    pub epsilon: f64,
}

impl NoiseShift {
    /// Translation `-ε a ∫W ds` of every spatial set, given `∫W ds` per component.
    pub fn translation(&self, int_w: &[f64]) -> Vec<f64> {
        self.direction
            .iter()
            .zip(int_w)
            .map(|(a, i)| -self.epsilon * a * i)
            .collect()
    }

    /// The `x0`-independent terms of the random action:
    /// `-ε x·(a∘W_t) - (ε²/2) ∫|a∘W|² ds`.
    pub fn additive(&self, x: &[f64], w_t: &[f64], int_w2: f64) -> f64 {
        let lin: f64 = x
            .iter()
            .zip(&self.direction)
            .zip(w_t)
            .map(|((xi, a), w)| xi * a * w)
            .sum();
        -self.epsilon * lin - 0.5 * self.epsilon * self.epsilon * int_w2
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InitialData {
    dim: usize,
    s0: Polynomial,
    pub noise: NoiseShift,
    p: Polynomial,
    g: Vec<Polynomial>,
}

impl InitialData {
    /// Validates the reducible form and splits `S0 = p(x0) + Σ g_α(x0) x0^α`.
    pub fn new(dim: usize, s0: Polynomial, direction: Vec<f64>, epsilon: f64) -> Result<Self, ActionError> {
        if !(2..=3).contains(&dim) {
            return Err(ActionError::Dimension(dim));
        }
        for v in s0.used_vars() {
            if !INITIAL[..dim].contains(&v.as_str()) {
                return Err(ActionError::UnknownVariable(v));
            }
        }
        if direction.len() != dim {
            return Err(ActionError::NoiseLength {
                got: direction.len(),
                expected: dim,
            });
        }
        if !epsilon.is_finite() || epsilon < 0.0 {
            return Err(ActionError::Epsilon(epsilon));
        }
        let s0 = s0.with_vars(&INITIAL[..dim]);
        let upper: Vec<usize> = (1..dim)
            .map(|k| s0.vars().iter().position(|v| v == INITIAL[k]).unwrap())
            .collect();
        for (m, c) in s0.terms() {
            let e: Vec<u32> = upper.iter().map(|&i| m.exps()[i]).collect();
            if e.iter().sum::<u32>() > 1 {
                let term = Polynomial::from_terms(s0.vars().to_vec(), [(m.exps().to_vec(), c.clone())])?;
                return Err(ActionError::NotReducible {
                    term: term.to_string(),
                });
            }
        }
        let mut p = s0.clone();
        for k in 1..dim {
            p = p.evaluate_at(INITIAL[k], &Rational::from_integer(0.into()));
        }
        let g: Vec<Polynomial> = (1..dim)
            .map(|k| s0.derivative(INITIAL[k]).trimmed())
            .collect();
        if g.iter().all(Polynomial::is_zero) {
            return Err(ActionError::OneDimensional);
        }
        Ok(InitialData {
            dim,
            s0,
            noise: NoiseShift { direction, epsilon },
            p: p.trimmed(),
            g,
        })
    }

    pub fn deterministic(dim: usize, s0: Polynomial) -> Result<Self, ActionError> {
        Self::new(dim, s0, vec![0.0; dim], 0.0)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn s0(&self) -> &Polynomial {
        &self.s0
    }

    /// The part of `S0` free of upper coordinates.
    pub fn p(&self) -> &Polynomial {
        &self.p
    }

    /// `g_α` for α = 2..=d, as polynomials in `x0`.
    pub fn g(&self) -> &[Polynomial] {
        &self.g
    }

    pub fn initial_vars(&self) -> &'static [&'static str] {
        &INITIAL[..self.dim]
    }

    pub fn spatial_vars(&self) -> &'static [&'static str] {
        &SPATIAL[..self.dim]
    }
}

/// `Φ_t(x0) = x0 + t ∇S0(x0)` (deterministic part) and its Jacobian.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowMap {
    pub phi: Vec<Polynomial>,
    pub phi_dot: Vec<Polynomial>,
    pub jacobian: Vec<Vec<Polynomial>>,
    pub noise: NoiseShift,
}

impl FlowMap {
    /// Evaluates `Φ_t(x0)` including the noise translation for the given `∫W ds`.
    pub fn apply(&self, x0: &[f64], t: f64, int_w: &[f64]) -> Vec<f64> {
        let mut order: Vec<&str> = INITIAL[..x0.len()].to_vec();
        order.push("t");
        let mut args = x0.to_vec();
        args.push(t);
        let shift = self.noise.translation(int_w);
        self.phi
            .iter()
            .zip(shift)
            .map(|(p, s)| p.compile(&order).expect("flow variables").eval(&args) + s)
            .collect()
    }

    pub fn jacobian_det(&self) -> Polynomial {
        det(&self.jacobian)
    }
}

pub fn build_flow(data: &InitialData) -> FlowMap {
    let t = Polynomial::var("t");
    let vars = data.initial_vars();
    let grad: Vec<Polynomial> = vars.iter().map(|v| data.s0.derivative(v)).collect();
    let phi = vars
        .iter()
        .zip(&grad)
        .map(|(v, g)| &Polynomial::var(v) + &(&t * g))
        .collect();
    let jacobian = vars
        .iter()
        .enumerate()
        .map(|(i, _)| {
            vars.iter()
                .enumerate()
                .map(|(j, vj)| {
                    let h = &t * &grad[i].derivative(vj);
                    if i == j {
                        &h + &Polynomial::one()
                    } else {
                        h
                    }
                })
                .collect()
        })
        .collect();
    FlowMap {
        phi,
        phi_dot: grad,
        jacobian,
        noise: data.noise.clone(),
    }
}

/// Determinant of a small square matrix by cofactor expansion.
pub fn det(m: &[Vec<Polynomial>]) -> Polynomial {
    match m.len() {
        0 => Polynomial::one(),
        1 => m[0][0].clone(),
        n => {
            let mut acc = Polynomial::zero();
            for j in 0..n {
                if m[0][j].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<Polynomial>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|(k, _)| *k != j)
                            .map(|(_, p)| p.clone())
                            .collect()
                    })
                    .collect();
                let term = &m[0][j] * &det(&minor);
                acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
            }
            acc
        }
    }
}

/// One step of the reducibility chain: `coord = expr`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainEntry {
    pub coord: String,
    pub expr: Polynomial,
}

/// The reduced action, stored as `t·f` with `f` the univariate function of `x0`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedAction {
    pub data: InitialData,
    /// `t·f(x0; x, t)`, polynomial in `x0`, the spatial variables and `t`.
    pub scaled: Polynomial,
    pub pole_order: u32,
    /// Elimination solutions `x0^α = x_α - t g_α(x0)`, highest α first.
    pub chain: Vec<ChainEntry>,
    /// `t·𝒜(x0, x, t)` before elimination, with `𝒜 = S0 + |x - x0|²/(2t)`.
    pub full_scaled: Polynomial,
    /// Second derivatives `t ∂²𝒜_α/∂(x0^α)²` met along the chain, highest α first.
    pub chain_factors: Vec<Polynomial>,
}

pub fn build_reduced_action(data: &InitialData) -> Result<ReducedAction, ActionError> {
    let t = Polynomial::var("t");
    let dim = data.dim;
    let mut sq = Polynomial::zero();
    for k in 0..dim {
        let d = &Polynomial::var(SPATIAL[k]) - &Polynomial::var(INITIAL[k]);
        sq = &sq + &(&d * &d);
    }
    let half = Polynomial::constant(Rational::new(1.into(), 2.into()));
    let full = &(&t * &data.s0) + &(&half * &sq);
    let mut current = full.clone();
    let mut chain = Vec::new();
    let mut factors = Vec::new();
    for k in (1..dim).rev() {
        let v = INITIAL[k];
        let eq = current.derivative(v);
        let coeffs = eq.coefficients_in(v);
        if coeffs.len() != 2 || coeffs[1].is_zero() {
            return Err(ActionError::ChainDegenerate(v.to_string()));
        }
        let a = &coeffs[1];
        if a.is_constant() {
            let expr = (-&coeffs[0]).scale(&a.constant_value().unwrap().recip());
            factors.push(current.derivative(v).derivative(v));
            current = current.substitute(v, &expr);
            chain.push(ChainEntry {
                coord: v.to_string(),
                expr: expr.trimmed(),
            });
        } else {
            // only constant leading coefficients keep the chain polynomial
            return Err(ActionError::ChainDegenerate(v.to_string()));
        }
    }
    Ok(ReducedAction {
        data: data.clone(),
        scaled: current.trimmed(),
        pole_order: 1,
        chain,
        full_scaled: full,
        chain_factors: factors,
    })
}

impl ReducedAction {
    /// `t·f^{(k)}` with derivatives in `x0`.
    pub fn scaled_derivative(&self, k: u32) -> Polynomial {
        let mut d = self.scaled.clone();
        for _ in 0..k {
            d = d.derivative("x0");
        }
        d
    }

    /// Substitutes the chain into a polynomial in the initial coordinates.
    pub fn on_chain(&self, p: &Polynomial) -> Polynomial {
        let mut out = p.clone();
        for e in &self.chain {
            out = out.substitute(&e.coord, &e.expr);
        }
        out
    }

    /// Exact identity behind the Hessian product formula: returns
    /// `(det(I + t∇²S0) on the chain, (t f)'' · Π chain factors)`.
    /// Both equal `t^d det ∇²𝒜` on the chain.
    pub fn hessian_product_sides(&self) -> (Polynomial, Polynomial) {
        let flow = build_flow(&self.data);
        let lhs = self.on_chain(&flow.jacobian_det());
        let mut rhs = self.scaled_derivative(2);
        for f in &self.chain_factors {
            rhs = &rhs * &self.on_chain(f);
        }
        (lhs, rhs)
    }

    /// Residuals `Φ_t(x0, chain(x0)) - x` as polynomials in `x0` and `x, t`.
    pub fn flow_residuals(&self) -> Vec<Polynomial> {
        let flow = build_flow(&self.data);
        flow.phi
            .iter()
            .zip(self.data.spatial_vars())
            .map(|(p, v)| &self.on_chain(p) - &Polynomial::var(v))
            .collect()
    }

    /// True if every flow residual is an exact multiple of `(t f)'`, so that
    /// `Φ_t(x0) = x` at every critical point.
    pub fn residuals_divisible_by_derivative(&self) -> Result<bool, ActionError> {
        let fp = self.scaled_derivative(1);
        for r in self.flow_residuals() {
            if !r.is_zero() && crate::polyalg::try_exact_divide(&r, &fp)?.is_none() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Evaluates `f` (not scaled) at a point, with the random translation and
    /// additive terms: `f_det(x0; x + ε a∫W, t) - ε x·(a∘W_t) - (ε²/2)∫|a∘W|²`.
    pub fn eval_random(&self, x0: f64, x: &[f64], t: f64, w_t: &[f64], int_w: &[f64], int_w2: f64) -> f64 {
        let shift = self.data.noise.translation(int_w);
        let shifted: Vec<f64> = x.iter().zip(&shift).map(|(a, s)| a - s).collect();
        self.eval_deterministic(x0, &shifted, t) + self.data.noise.additive(x, w_t, int_w2)
    }

    pub fn eval_deterministic(&self, x0: f64, x: &[f64], t: f64) -> f64 {
        let mut order = vec!["x0"];
        order.extend_from_slice(self.data.spatial_vars());
        order.push("t");
        let mut args = vec![x0];
        args.extend_from_slice(x);
        args.push(t);
        self.scaled.compile(&order).expect("reduced action variables").eval(&args) / t
    }

    /// `t f` specialised at rational `(x, t)`: a univariate polynomial in `x0`.
    pub fn at(&self, x: &[Rational], t: &Rational) -> Polynomial {
        let mut p = self.scaled.evaluate_at("t", t);
        for (v, val) in self.data.spatial_vars().iter().zip(x) {
            p = p.evaluate_at(v, val);
        }
        p
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Polynomial {
        s.parse().unwrap()
    }

    #[test]
    fn validation_names_offending_term() {
        let err = InitialData::deterministic(2, p("x0^2*y0^2 + x0")).unwrap_err();
        assert_eq!(
            err,
            ActionError::NotReducible {
                term: "1 * x0^2 y0^2".into()
            }
        );
        assert!(matches!(
            InitialData::deterministic(3, p("y0*z0")),
            Err(ActionError::NotReducible { .. })
        ));
        assert_eq!(InitialData::deterministic(2, p("x0^3")).unwrap_err(), ActionError::OneDimensional);
        assert!(matches!(
            InitialData::deterministic(2, p("x0*z0")),
            Err(ActionError::UnknownVariable(_))
        ));
        assert!(matches!(
            InitialData::deterministic(4, p("x0*y0")),
            Err(ActionError::Dimension(4))
        ));
    }

    #[test]
    fn generic_cusp_flow() {
        let d = InitialData::deterministic(2, p("x0^2*y0/2")).unwrap();
        let fl = build_flow(&d);
        assert_eq!(fl.phi[0], p("x0 + t*x0*y0"));
        assert_eq!(fl.phi[1], p("y0 + t*x0^2/2"));
        assert_eq!(fl.jacobian_det(), p("1 + t*y0 - t^2*x0^2"));
        for (ph, v) in fl.phi.iter().zip(["x0", "y0"]) {
            assert_eq!(ph.evaluate_at("t", &Rational::from_integer(0.into())), p(v));
        }
    }

    #[test]
    fn generic_cusp_reduced_action() {
        let d = InitialData::deterministic(2, p("x0^2*y0/2")).unwrap();
        let ra = build_reduced_action(&d).unwrap();
        assert_eq!(ra.scaled, p("(x - x0)^2/2 + t*x0^2*y/2 - t^2*x0^4/8"));
        assert_eq!(ra.chain[0].expr, p("y - t*x0^2/2"));
        let (lhs, rhs) = ra.hessian_product_sides();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn swallowtail_reduced_action() {
        let d = InitialData::deterministic(2, p("x0^5 + x0^2*y0")).unwrap();
        let ra = build_reduced_action(&d).unwrap();
        assert_eq!(ra.scaled, p("t*x0^5 - t^2*x0^4/2 + t*y*x0^2 + (x - x0)^2/2"));
        assert!(ra.residuals_divisible_by_derivative().unwrap());
    }
}
