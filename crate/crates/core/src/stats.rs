//! Small statistics toolkit for comparing Monte Carlo output with limit laws.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Discrete, Normal, Poisson};

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Moments {
    pub count: usize,
    pub mean: f64,
    /// Unbiased sample variance (0 for fewer than two values).
    pub variance: f64,
}

pub fn moments<I: IntoIterator<Item = f64>>(values: I) -> Moments {
    let values: Vec<f64> = values.into_iter().collect();
    let count = values.len();
    if count == 0 {
        return Moments { count, mean: f64::NAN, variance: f64::NAN };
    }
    let mean = values.iter().sum::<f64>() / count as f64;
    let variance =
        if count > 1 { values.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (count - 1) as f64 } else { 0.0 };
    Moments { count, mean, variance }
}

pub fn standard_normal_cdf(z: f64) -> f64 {
    Normal::standard().cdf(z)
}

/// Kolmogorov-Smirnov distance between the empirical CDF of `sample` and the
/// standard normal CDF.
pub fn ks_standard_normal(sample: &[f64]) -> f64 {
    let mut sorted = sample.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(i, &z)| {
            let cdf = standard_normal_cdf(z);
            ((i + 1) as f64 / n - cdf).max(cdf - i as f64 / n)
        })
        .fold(0.0, f64::max)
}

pub fn poisson_pmf(mean: f64, x: u64) -> f64 {
    if mean == 0.0 {
        return if x == 0 { 1.0 } else { 0.0 };
    }
    Poisson::new(mean).map_or(f64::NAN, |p| p.pmf(x))
}

/// Empirical frequency of each observed value.
pub fn histogram<I: IntoIterator<Item = u64>>(values: I) -> BTreeMap<u64, u64> {
    let mut h = BTreeMap::new();
    for v in values {
        *h.entry(v).or_insert(0) += 1;
    }
    h
}

/// Total variation distance between the empirical law of `counts` and
/// `Poi(mean)`, with the Poisson law truncated at `max observed + 10` and
/// its remaining tail mass folded into the last bucket.
pub fn poisson_tv(counts: &[u64], mean: f64) -> f64 {
    if counts.is_empty() {
        return f64::NAN;
    }
    let total = counts.len() as f64;
    let hist = histogram(counts.iter().copied());
    let last = counts.iter().copied().max().unwrap_or(0) + 10;
    let mut cum = 0.0;
    let mut sum = 0.0;
    for x in 0..=last {
        let mut p = poisson_pmf(mean, x);
        cum += p;
        if x == last {
            p += (1.0 - cum).max(0.0);
        }
        let emp = hist.get(&x).copied().unwrap_or(0) as f64 / total;
        sum += (emp - p).abs();
    }
    0.5 * sum
}

/// Total variation distance between the empirical joint law of `pairs` and
/// `Poi(mean_a) x Poi(mean_b)`. Pairs never observed contribute their full
/// Poisson mass, so no truncation is involved.
pub fn joint_poisson_tv(pairs: &[(u64, u64)], mean_a: f64, mean_b: f64) -> f64 {
    if pairs.is_empty() {
        return f64::NAN;
    }
    let total = pairs.len() as f64;
    let mut hist: BTreeMap<(u64, u64), u64> = BTreeMap::new();
    for &p in pairs {
        *hist.entry(p).or_insert(0) += 1;
    }
    let mut covered = 0.0;
    let mut sum = 0.0;
    for (&(a, b), &c) in &hist {
        let p = poisson_pmf(mean_a, a) * poisson_pmf(mean_b, b);
        covered += p;
        sum += (c as f64 / total - p).abs();
    }
    0.5 * (sum + (1.0 - covered).max(0.0))
}

/// Pearson chi-square statistic of observed counts against equal expected counts.
pub fn chi_square_uniform(observed: &[u64]) -> f64 {
    let total: u64 = observed.iter().sum();
    let expected = total as f64 / observed.len() as f64;
    observed.iter().map(|&o| (o as f64 - expected).powi(2) / expected).sum()
}

/// Upper `alpha` critical value of the chi-square distribution.
pub fn chi_square_critical(dof: f64, alpha: f64) -> f64 {
    use statrs::distribution::ChiSquared;
    ChiSquared::new(dof).map_or(f64::NAN, |c| c.inverse_cdf(1.0 - alpha))
}

/// Quantile by the nearest-rank rule; `q` in `[0, 1]`.
pub fn quantile(values: &[f64], q: f64) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let rank = ((q * sorted.len() as f64).ceil() as usize).clamp(1, sorted.len());
    sorted[rank - 1]
}
