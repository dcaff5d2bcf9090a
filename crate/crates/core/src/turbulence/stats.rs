//! Ensembles of ζ paths and recurrence statistics.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use super::brownian::BrownianScenario;
use super::zeros::ZeroCrossingRecord;
use super::zeta::{zeta_orthogonal_values, zeta_record};
use super::TurbulenceError;

/// Fewest paths accepted by the statistics.
pub const MIN_PATHS: usize = 100;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ZetaEnsemble {
    pub master_seed: u64,
    pub paths: usize,
    pub h: f64,
    pub horizon: f64,
    pub a: f64,
    pub eps: f64,
    pub c: f64,
}

impl ZetaEnsemble {
    /// Zero records for every path, ordered by path index.
    pub fn records(&self) -> Result<Vec<ZeroCrossingRecord>, TurbulenceError> {
        (0..self.paths as u64)
            .into_par_iter()
            .map(|k| {
                let scn = BrownianScenario::new(self.master_seed, k, self.h, self.horizon, 1)?;
                let v = zeta_orthogonal_values(&scn, self.a, self.eps, self.c);
                let times: Vec<f64> = (0..scn.len()).map(|i| scn.time(i)).collect();
                Ok(zeta_record(&times, &v, self.a, self.eps, self.c, scn.horizon))
            })
            .collect()
    }

    /// Monte-Carlo mean and standard error of `ζ(t) + c` over the ensemble.
    pub fn mean_at(&self, t: f64) -> Result<(f64, f64), TurbulenceError> {
        if t > self.horizon {
            return Err(TurbulenceError::Horizon(t));
        }
        let values: Vec<f64> = (0..self.paths as u64)
            .into_par_iter()
            .map(|k| {
                let scn = BrownianScenario::new(self.master_seed, k, self.h, t, 1)?;
                let v = zeta_orthogonal_values(&scn, self.a, self.eps, self.c);
                Ok(v[v.len() - 1] + self.c)
            })
            .collect::<Result<_, TurbulenceError>>()?;
        Ok(mean_se(&values))
    }
}

fn mean_se(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0).max(1.0);
    (mean, (var / n).sqrt())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HorizonStats {
    pub horizon: f64,
    pub paths: usize,
    /// Fraction of paths with at least 1, 2, 3 zeros in `(delta, horizon]`.
    pub fraction: [f64; 3],
    pub fraction_se: [f64; 3],
    /// Mean gap between consecutive zeros, over paths with two or more.
    pub mean_gap: Option<f64>,
    pub gap_se: Option<f64>,
}

pub fn recurrence_stats(
    records: &[ZeroCrossingRecord],
    horizons: &[f64],
    delta: f64,
) -> Result<Vec<HorizonStats>, TurbulenceError> {
    if records.len() < MIN_PATHS {
        return Err(TurbulenceError::TooFewPaths(records.len()));
    }
    let n = records.len() as f64;
    Ok(horizons
        .iter()
        .map(|&hz| {
            let mut fraction = [0.0; 3];
            let mut gaps = Vec::new();
            for r in records {
                let z: Vec<f64> = r.times.iter().copied().filter(|t| *t > delta && *t <= hz).collect();
                for (k, f) in fraction.iter_mut().enumerate() {
                    if z.len() > k {
                        *f += 1.0;
                    }
                }
                gaps.extend(z.windows(2).map(|w| w[1] - w[0]));
            }
            let fraction = fraction.map(|f| f / n);
            let fraction_se = fraction.map(|p| (p * (1.0 - p) / n).sqrt());
            let (mean_gap, gap_se) = if gaps.is_empty() {
                (None, None)
            } else {
                let (m, s) = mean_se(&gaps);
                (Some(m), Some(s))
            };
            HorizonStats { horizon: hz, paths: records.len(), fraction, fraction_se, mean_gap, gap_se }
        })
        .collect())
}

/// CSV of the statistics table, with the ensemble seed and step on every row.
pub fn stats_csv(stats: &[HorizonStats], master_seed: u64, h: f64) -> String {
    let mut out = String::from("master_seed,h,horizon,paths,frac_ge1,frac_ge2,frac_ge3,se_ge1,se_ge2,se_ge3,mean_gap,gap_se\n");
    let opt = |v: Option<f64>| v.map_or(String::new(), |x| format!("{x:e}"));
    for s in stats {
        out.push_str(&format!(
            "{master_seed},{h:e},{:e},{},{:e},{:e},{:e},{:e},{:e},{:e},{},{}\n",
            s.horizon,
            s.paths,
            s.fraction[0],
            s.fraction[1],
            s.fraction[2],
            s.fraction_se[0],
            s.fraction_se[1],
            s.fraction_se[2],
            opt(s.mean_gap),
            opt(s.gap_se)
        ));
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChiSquareTest {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
}

/// Homogeneity test of zero counts between two halves of a seeded random
/// permutation of the paths. Counts are binned as 0, 1, 2 and 3 or more;
/// bins with fewer than 5 expected paths are merged into their neighbour.
pub fn exchangeability_test(
    records: &[ZeroCrossingRecord],
    horizon: f64,
    delta: f64,
    seed: u64,
) -> Result<ChiSquareTest, TurbulenceError> {
    if records.len() < MIN_PATHS {
        return Err(TurbulenceError::TooFewPaths(records.len()));
    }
    let mut idx: Vec<usize> = (0..records.len()).collect();
    idx.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let half = idx.len() / 2;
    let mut table = [[0.0f64; 4]; 2];
    for (pos, &i) in idx.iter().enumerate() {
        let bin = records[i].count_in(delta, horizon).min(3);
        table[usize::from(pos >= half)][bin] += 1.0;
    }
    let sizes = [half as f64, (idx.len() - half) as f64];
    let total = idx.len() as f64;
    // merge sparse bins from the top down
    let mut cols: Vec<[f64; 2]> = (0..4).map(|b| [table[0][b], table[1][b]]).collect();
    let expected = |c: &[f64; 2]| (c[0] + c[1]) * sizes[0].min(sizes[1]) / total;
    let mut k = cols.len();
    while k > 1 {
        k -= 1;
        if expected(&cols[k]) < 5.0 {
            let c = cols.remove(k);
            cols[k - 1][0] += c[0];
            cols[k - 1][1] += c[1];
        }
    }
    if cols.len() < 2 {
        return Ok(ChiSquareTest { statistic: 0.0, dof: 0, p_value: 1.0 });
    }
    let mut stat = 0.0;
    for col in &cols {
        let s = col[0] + col[1];
        for g in 0..2 {
            let e = s * sizes[g] / total;
            stat += (col[g] - e).powi(2) / e;
        }
    }
    let dof = cols.len() - 1;
    let chi = ChiSquared::new(dof as f64).map_err(|e| TurbulenceError::Statistics(e.to_string()))?;
    Ok(ChiSquareTest { statistic: stat, dof, p_value: 1.0 - chi.cdf(stat) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_noise_never_crosses() {
        let ens = ZetaEnsemble { master_seed: 1, paths: 100, h: 0.01, horizon: 10.0, a: 1.0, eps: 0.0, c: 0.5 };
        let recs = ens.records().unwrap();
        let st = recurrence_stats(&recs, &[5.0, 10.0], 0.0).unwrap();
        assert!(st.iter().all(|s| s.fraction == [0.0; 3]));
    }

    #[test]
    fn too_few_paths() {
        assert!(matches!(recurrence_stats(&[], &[1.0], 0.0), Err(TurbulenceError::TooFewPaths(0))));
    }
}
