//! Zero and graze detection on a sampled process.

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ProcessTag {
    Zeta,
    Eta,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ZeroCrossingRecord {
    pub process: ProcessTag,
    /// Zeros bracketed by a sign change, located on the linear interpolant.
    pub times: Vec<f64>,
    /// Local minima of `|value|` below the tolerance without a sign change.
    pub grazes: Vec<f64>,
    pub c: f64,
    /// `(a, ε)` for the ζ process.
    pub params: Option<(f64, f64)>,
    /// The process vanishes identically on the grid.
    pub degenerate: bool,
    pub horizon: f64,
}

impl ZeroCrossingRecord {
    /// Number of zeros in `(delta, horizon]`.
    pub fn count_in(&self, delta: f64, horizon: f64) -> usize {
        self.times.iter().filter(|t| **t > delta && **t <= horizon).count()
    }
}

/// Zeros and grazes of `values` sampled at `times`.
pub fn detect_zeros(times: &[f64], values: &[f64], tol: f64) -> (Vec<f64>, Vec<f64>, bool) {
    let degenerate = !values.is_empty() && values.iter().all(|v| *v == 0.0);
    if degenerate {
        return (Vec::new(), Vec::new(), true);
    }
    let mut zeros = Vec::new();
    let mut grazes = Vec::new();
    for i in 0..values.len().saturating_sub(1) {
        let (a, b) = (values[i], values[i + 1]);
        if a == 0.0 && i > 0 && values[i - 1] * b < 0.0 {
            // sign change through an exact grid zero, counted once
            zeros.push(times[i]);
        } else if a * b < 0.0 {
            zeros.push(times[i] + (times[i + 1] - times[i]) * a / (a - b));
        }
    }
    for i in 1..values.len().saturating_sub(1) {
        let (p, v, n) = (values[i - 1].abs(), values[i].abs(), values[i + 1].abs());
        let same_sign = values[i - 1] * values[i] > 0.0 && values[i] * values[i + 1] > 0.0;
        if same_sign && v < p && v <= n && v < tol {
            grazes.push(times[i]);
        }
    }
    (zeros, grazes, false)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn crossings_and_grazes() {
        let t: Vec<f64> = (0..7).map(|i| i as f64).collect();
        let v = [1.0, -1.0, -2.0, -1e-12, -3.0, 0.0, 2.0];
        let (z, g, deg) = detect_zeros(&t, &v, 1e-9);
        assert!(!deg);
        assert_eq!(z, vec![0.5, 5.0]);
        assert_eq!(g, vec![3.0]);
        assert!(detect_zeros(&t, &[0.0; 7], 1e-9).2);
    }
}
