//! Seeded Brownian paths with trapezoid pathwise integrals.
//!
//! Each path draws from its own ChaCha8 stream, keyed by the master seed and
//! the path index. Halving the step inserts Brownian-bridge midpoints, so the
//! refined path passes through every node of the coarse one.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::TurbulenceError;

#[derive(Clone, Debug, PartialEq)]
pub struct BrownianScenario {
    pub seed: u64,
    /// Path index within the ensemble; selects the generator stream.
    pub stream: u64,
    pub h: f64,
    pub horizon: f64,
    /// Number of bridge refinements applied to the base path.
    pub level: u32,
    /// `w[k][i] = W_k(t_i)`.
    pub w: Vec<Vec<f64>>,
    /// Running `∫_0^t W_k ds`.
    pub int_w: Vec<Vec<f64>>,
    /// Running `∫_0^t W_k² ds`, per component.
    pub int_w2: Vec<Vec<f64>>,
}

fn generator(seed: u64, stream: u64, level: u32) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(0x9e37_79b9_7f4a_7c15u64.wrapping_mul(level as u64)));
    rng.set_stream(stream);
    rng
}

fn check(h: f64, horizon: f64, dim: usize) -> Result<usize, TurbulenceError> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(TurbulenceError::Step(h));
    }
    if !(horizon > 0.0 && horizon.is_finite()) {
        return Err(TurbulenceError::Horizon(horizon));
    }
    if !(1..=3).contains(&dim) {
        return Err(TurbulenceError::Dimension(dim));
    }
    Ok((horizon / h).round().max(1.0) as usize)
}

impl BrownianScenario {
    pub fn new(seed: u64, stream: u64, h: f64, horizon: f64, dim: usize) -> Result<Self, TurbulenceError> {
        let n = check(h, horizon, dim)?;
        let mut rng = generator(seed, stream, 0);
        let sd = h.sqrt();
        let mut w = vec![Vec::with_capacity(n + 1); dim];
        for comp in &mut w {
            comp.push(0.0);
        }
        for _ in 0..n {
            for comp in w.iter_mut() {
                let z: f64 = rng.sample(StandardNormal);
                let last = *comp.last().expect("starts at zero");
                comp.push(last + sd * z);
            }
        }
        Ok(Self::assemble(seed, stream, h, 0, w))
    }

    /// A path with prescribed values on the grid `t_i = i h`.
    pub fn from_values(h: f64, w: Vec<Vec<f64>>) -> Result<Self, TurbulenceError> {
        let n = w.first().map_or(0, |c| c.len());
        check(h, h * n.saturating_sub(1).max(1) as f64, w.len())?;
        if n < 2 || w.iter().any(|c| c.len() != n) {
            return Err(TurbulenceError::PathShape);
        }
        Ok(Self::assemble(0, 0, h, 0, w))
    }

    fn assemble(seed: u64, stream: u64, h: f64, level: u32, w: Vec<Vec<f64>>) -> Self {
        let trap = |f: &dyn Fn(f64) -> f64, comp: &[f64]| -> Vec<f64> {
            let mut acc = Vec::with_capacity(comp.len());
            let mut s = 0.0;
            acc.push(0.0);
            for pair in comp.windows(2) {
                s += 0.5 * h * (f(pair[0]) + f(pair[1]));
                acc.push(s);
            }
            acc
        };
        let int_w = w.iter().map(|c| trap(&|v| v, c)).collect();
        let int_w2 = w.iter().map(|c| trap(&|v| v * v, c)).collect();
        let horizon = h * (w[0].len() - 1) as f64;
        BrownianScenario { seed, stream, h, horizon, level, w, int_w, int_w2 }
    }

    pub fn dim(&self) -> usize {
        self.w.len()
    }

    pub fn len(&self) -> usize {
        self.w[0].len()
    }

    pub fn is_empty(&self) -> bool {
        self.w[0].is_empty()
    }

    pub fn time(&self, i: usize) -> f64 {
        self.h * i as f64
    }

    /// Halves the step by Brownian-bridge midpoints.
    pub fn refine(&self) -> Self {
        let level = self.level + 1;
        let mut rng = generator(self.seed, self.stream, level);
        let sd = (self.h / 4.0).sqrt();
        let w = self
            .w
            .iter()
            .map(|comp| {
                let mut out = Vec::with_capacity(2 * comp.len() - 1);
                out.push(comp[0]);
                for pair in comp.windows(2) {
                    let z: f64 = rng.sample(StandardNormal);
                    out.push(0.5 * (pair[0] + pair[1]) + sd * z);
                    out.push(pair[1]);
                }
                out
            })
            .collect();
        Self::assemble(self.seed, self.stream, self.h / 2.0, level, w)
    }

    /// Values at node `i`: `(W, ∫W, ∫W²)` per component.
    pub fn at(&self, i: usize) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
        (
            self.w.iter().map(|c| c[i]).collect(),
            self.int_w.iter().map(|c| c[i]).collect(),
            self.int_w2.iter().map(|c| c[i]).collect(),
        )
    }

    /// CSV with columns `t,W_1..W_d,intW_1..intW_d,intW2`, where `intW2` is
    /// `∫|W|² ds`. The first line records the seed, stream and step.
    pub fn to_csv(&self) -> String {
        let d = self.dim();
        let mut out = format!("# seed={} stream={} h={:e}\nt", self.seed, self.stream, self.h);
        for k in 1..=d {
            out.push_str(&format!(",W_{k}"));
        }
        for k in 1..=d {
            out.push_str(&format!(",intW_{k}"));
        }
        out.push_str(",intW2\n");
        for i in 0..self.len() {
            out.push_str(&format!("{:e}", self.time(i)));
            for c in &self.w {
                out.push_str(&format!(",{:e}", c[i]));
            }
            for c in &self.int_w {
                out.push_str(&format!(",{:e}", c[i]));
            }
            let s: f64 = self.int_w2.iter().map(|c| c[i]).sum();
            out.push_str(&format!(",{s:e}\n"));
        }
        out
    }
}
