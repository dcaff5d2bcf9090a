//! The resultant η process `ρ_η(t) = |R_λ(f'''_t, f''''_t)|`.
//!
//! `f'''_t(λ)` is the reduced numerator `P3(λ, t)` of `t f'''` along the
//! caustic and `f''''_t = ∂P3/∂λ`. Translating `x` by the noise leaves every
//! derivative in `x0` unchanged, so `ρ_η` is the same on every path; the
//! path only supplies the time grid.

use serde::Serialize;

use crate::action::ReducedAction;
use crate::geometry::{deflate, hot_cool, perestroika_polynomials, CausticData, Label, LAMBDA};
use crate::polyalg::{from_f64, real_roots_f64, resultant, roots, to_f64, F64Poly, Polynomial, Rational};

use super::brownian::BrownianScenario;
use super::zeros::{detect_zeros, ProcessTag, ZeroCrossingRecord};
use super::TurbulenceError;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EtaZero {
    pub t: f64,
    pub lambda: Option<f64>,
    /// Hot/cool label of the caustic point at the zero, where defined.
    pub label: Option<Label>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EtaProcess {
    pub times: Vec<f64>,
    /// `ρ_η(t_i)`.
    pub values: Vec<f64>,
    pub record: ZeroCrossingRecord,
    pub zeros: Vec<EtaZero>,
}

/// `R_λ(P3, P4)` as a polynomial in `t`, free of powers of `t`.
pub fn eta_resultant(ra: &ReducedAction, caustic: &CausticData) -> Result<Polynomial, TurbulenceError> {
    let (p3, p4) = perestroika_polynomials(ra, caustic)?;
    let lam = LAMBDA[0];
    let r = match (p3.degree_in(lam).unwrap_or(0), p4.degree_in(lam).unwrap_or(0)) {
        (_, 0) => p4.pow(p3.degree_in(lam).unwrap_or(0)),
        (0, n) => p3.pow(n),
        _ => resultant(&p3, &p4, lam)?,
    };
    if r.is_zero() {
        return Err(TurbulenceError::EtaDegenerate);
    }
    Ok(r.strip_var_power("t").0)
}

pub fn eta_process(
    ra: &ReducedAction,
    caustic: &CausticData,
    scn: &BrownianScenario,
    eps: f64,
) -> Result<EtaProcess, TurbulenceError> {
    let r = eta_resultant(ra, caustic)?;
    let rc = r.with_vars(&["t"]).compile(&["t"])?;
    let times: Vec<f64> = (1..scn.len()).map(|i| scn.time(i)).collect();
    let signed: Vec<f64> = times.iter().map(|t| rc.eval(&[*t])).collect();
    let values = signed.iter().map(|v| v.abs()).collect();
    let scale = times.iter().map(|t| rc.eval_abs(&[*t])).fold(0.0, f64::max);
    let (zero_times, grazes, degenerate) = detect_zeros(&times, &signed, 1e-12 * scale);
    let zeros = zero_times
        .iter()
        .map(|t| locate(ra, caustic, *t))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(EtaProcess {
        times,
        values,
        record: ZeroCrossingRecord {
            process: ProcessTag::Eta,
            times: zero_times,
            grazes,
            c: 0.0,
            params: Some((0.0, eps)),
            degenerate,
            horizon: scn.horizon,
        },
        zeros,
    })
}

/// `λ` at an η zero: the root of `P4` where `P3` is smallest.
fn locate(ra: &ReducedAction, caustic: &CausticData, t: f64) -> Result<EtaZero, TurbulenceError> {
    let (p3, p4) = perestroika_polynomials(ra, caustic)?;
    let order = [LAMBDA[0], "t"];
    let c3 = p3.with_vars(&order).compile(&order)?;
    let coeffs: Vec<f64> = p4
        .coefficients_in(LAMBDA[0])
        .iter()
        .map(|c| c.with_vars(&["t"]).compile(&["t"]).map(|f| f.eval(&[t])))
        .collect::<Result<_, _>>()?;
    let lambda = real_roots_f64(&coeffs).into_iter().min_by(|a, b| {
        let ra_ = c3.eval(&[*a, t]).abs() / c3.eval_abs(&[*a, t]).max(f64::MIN_POSITIVE);
        let rb = c3.eval(&[*b, t]).abs() / c3.eval_abs(&[*b, t]).max(f64::MIN_POSITIVE);
        ra_.total_cmp(&rb)
    });
    let label = match (lambda, deflate(ra, caustic)) {
        (Some(l), Ok(defl)) => hot_cool(ra, caustic, &defl, l, t).ok().map(|h| h.label),
        _ => None,
    };
    Ok(EtaZero { t, lambda, label })
}

/// Both sides of the factorised form at a rational time: the Sylvester
/// resultant `|R_λ(P3, P3')|` and
/// `K_t Π η_k² Π_{j≠k}{…} |R(H, H')| |R(Q, H)|²` from the roots of `P3`.
pub fn eta_factorised(p3: &Polynomial, t: &Rational) -> Result<(f64, f64), TurbulenceError> {
    let lam = LAMBDA[0];
    let p = p3.evaluate_at("t", t).trimmed();
    let n = p.degree_in(lam).unwrap_or(0);
    if n < 2 {
        return Err(TurbulenceError::EtaDegenerate);
    }
    let r = resultant(&p, &p.derivative(lam), lam)?;
    let direct = to_f64(&r.constant_value().expect("univariate")).abs();

    let set = roots(&p)?;
    let lc = to_f64(&p.leading_coefficient_in(lam).constant_value().expect("univariate")).abs();
    let reals: Vec<f64> = set.real_values();
    let pairs: Vec<(f64, f64)> = set.complex_pairs.iter().map(|c| (c.a, c.eta)).collect();
    // K_t = |c|^(2N-1) 4^q for P3 = c H Q with H, Q monic
    let mut log = (2.0 * n as f64 - 1.0) * lc.ln() + pairs.len() as f64 * 4f64.ln();
    for (k, (ak, ek)) in pairs.iter().enumerate() {
        log += 2.0 * ek.ln();
        for (j, (aj, ej)) in pairs.iter().enumerate() {
            if j != k {
                let da = ak - aj;
                let v = da.powi(4) + 2.0 * (ek * ek + ej * ej) * da * da + (ek * ek - ej * ej).powi(2);
                log += v.ln();
            }
        }
    }
    // |R(H, H')| = Π_{i≠j} |r_i - r_j| for monic H
    for (i, ri) in reals.iter().enumerate() {
        for (j, rj) in reals.iter().enumerate() {
            if i != j {
                log += (ri - rj).abs().ln();
            }
        }
    }
    // |R(Q, H)| = Π_i |Q(r_i)|
    for r in &reals {
        for (a, e) in &pairs {
            log += 2.0 * ((r - a).powi(2) + e * e).ln();
        }
    }
    Ok((direct, log.exp()))
}

/// `ρ_η` at `t` through the exact resultant.
pub fn eta_at(r: &Polynomial, t: f64) -> f64 {
    let c: F64Poly = r.with_vars(&["t"]).compile(&["t"]).expect("univariate in t");
    c.eval(&[t]).abs()
}

/// Rational time close to `t`, for exact evaluation.
pub fn rational_time(t: f64) -> Rational {
    from_f64(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::{build_reduced_action, InitialData};
    use crate::geometry::compute_caustic;
    use crate::polyalg::qf;

    fn setup(s0: &str) -> (ReducedAction, CausticData) {
        let d = InitialData::deterministic(2, s0.parse().unwrap()).unwrap();
        let ra = build_reduced_action(&d).unwrap();
        let c = compute_caustic(&ra).unwrap();
        (ra, c)
    }

    #[test]
    fn sextic_zero_at_the_perestroika() {
        let (ra, c) = setup("x0^5 + x0^6*y0");
        let scn = BrownianScenario::new(0, 0, 1e-3, 4.0, 1).unwrap();
        let eta = eta_process(&ra, &c, &scn, 0.0).unwrap();
        let reference = 4.0 * 2f64.sqrt() * 33f64.powf(0.75) * 7f64.powf(-1.75);
        assert_eq!(eta.record.times.len(), 1, "{:?}", eta.record);
        assert!((eta.record.times[0] - reference).abs() < 1e-3);
        assert!(eta.zeros[0].lambda.is_some());
    }

    #[test]
    fn generic_cusp_never_vanishes() {
        let (ra, c) = setup("x0^2*y0/2");
        let r = eta_resultant(&ra, &c).unwrap();
        assert!(r.is_constant() && !r.is_zero());
    }

    #[test]
    fn factorised_form_matches() {
        let (ra, c) = setup("x0^5 + x0^6*y0");
        let (p3, _) = perestroika_polynomials(&ra, &c).unwrap();
        for t in [qf(1, 2), qf(3, 2), qf(12, 5), qf(27, 10)] {
            let (direct, fact) = eta_factorised(&p3, &t).unwrap();
            assert!((direct - fact).abs() <= 1e-8 * direct, "t={t}: {direct} vs {fact}");
        }
    }
}
