//! Power-law tail fitting for integer data with a bootstrap goodness-of-fit test.
//!
//! The model for a tail starting at `xmin` is a continuous power law with
//! lower cutoff `xmin - 1/2`, rounded to the nearest integer:
//! `P(X >= x) = ((x - 1/2) / (xmin - 1/2))^(1 - alpha)` for integers `x >= xmin`.
//! Its maximum-likelihood exponent is `1 + k / sum ln(x_i / (xmin - 1/2))`.
//!
//! All sums run over `(value, count / tail_size)` pairs, so a dataset and the
//! same dataset with every count multiplied by a constant produce bit-identical
//! fits.

use std::collections::BTreeMap;

use rand::Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::rng::{stream_rng, ChaCha8Rng};
use crate::scalar::Real;

/// Fewest observations a candidate tail may have.
pub const MIN_TAIL: usize = 10;
/// Fewest bootstrap replicates accepted by [`gof_pvalue`].
pub const MIN_BOOTSTRAP: usize = 20;
pub const DEFAULT_BOOTSTRAP: usize = 100;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FitError {
    #[error("insufficient data: {observations} observations, {distinct} distinct values")]
    InsufficientData { observations: usize, distinct: usize },
    #[error("observations must be positive integers")]
    NonPositive,
    #[error("need at least {MIN_BOOTSTRAP} bootstrap replicates, got {0}")]
    TooFewReplicates(usize),
    #[error("fit does not belong to this data: {0}")]
    Mismatch(String),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TailFit<R: Real = f64> {
    pub alpha_hat: R,
    pub xmin: u64,
    /// Largest CDF gap over the tail.
    pub ks_distance: R,
    /// Observations `>= xmin`.
    pub tail_size: usize,
}

impl<R: Real> TailFit<R> {
    /// Model `P(X >= x)` for integer `x >= xmin`.
    pub fn ccdf(&self, x: u64) -> R {
        let lo = R::from_u64(self.xmin).unwrap() - R::lit(0.5);
        let xr = R::from_u64(x).unwrap() - R::lit(0.5);
        (xr / lo).powf(R::one() - self.alpha_hat)
    }

    /// One draw from the tail model.
    pub fn sample_tail(&self, rng: &mut ChaCha8Rng) -> u64 {
        // 1 - [0,1) keeps U away from zero
        let u = R::lit(1.0 - rng.gen::<f64>());
        let lo = R::from_u64(self.xmin).unwrap() - R::lit(0.5);
        let y = lo * u.powf(-(self.alpha_hat - R::one()).recip());
        (y + R::lit(0.5)).floor().to_u64().unwrap_or(u64::MAX)
    }
}

/// Sorted distinct values with multiplicities.
fn tally(data: &[u64]) -> Result<Vec<(u64, usize)>, FitError> {
    if data.contains(&0) {
        return Err(FitError::NonPositive);
    }
    let mut counts = BTreeMap::new();
    for &x in data {
        *counts.entry(x).or_insert(0usize) += 1;
    }
    Ok(counts.into_iter().collect())
}

/// Fit over tallied values. `from` indexes the first tail value.
fn fit_from<R: Real>(values: &[(u64, usize)], from: usize, tail_size: usize) -> TailFit<R> {
    let xmin = values[from].0;
    let k = R::from_count(tail_size);
    let lo = R::from_u64(xmin).unwrap() - R::lit(0.5);
    let mean_log = values[from..]
        .iter()
        .fold(R::zero(), |acc, &(x, c)| acc + R::from_count(c) / k * R::from_u64(x).unwrap().ln());
    let alpha = R::one() + (mean_log - lo.ln()).recip();
    let mut fit = TailFit { alpha_hat: alpha, xmin, ks_distance: R::zero(), tail_size };
    let mut below = 0usize;
    let mut ks = R::zero();
    for &(x, c) in &values[from..] {
        below += c;
        let empirical = R::from_count(below) / k;
        let model = R::one() - fit.ccdf(x + 1);
        ks = ks.max((empirical - model).abs());
    }
    fit.ks_distance = ks;
    fit
}

fn fit_tallied<R: Real>(values: &[(u64, usize)], observations: usize) -> Result<TailFit<R>, FitError> {
    if observations < MIN_TAIL || values.len() < 2 {
        return Err(FitError::InsufficientData { observations, distinct: values.len() });
    }
    let mut tail_sizes = vec![0usize; values.len() + 1];
    for i in (0..values.len()).rev() {
        tail_sizes[i] = tail_sizes[i + 1] + values[i].1;
    }
    let mut best: Option<TailFit<R>> = None;
    for i in 0..values.len() {
        if tail_sizes[i] < MIN_TAIL {
            break;
        }
        let fit = fit_from(values, i, tail_sizes[i]);
        if best.map_or(true, |b| fit.ks_distance < b.ks_distance) {
            best = Some(fit);
        }
    }
    best.ok_or(FitError::InsufficientData { observations, distinct: values.len() })
}

/// Fits a power-law tail, choosing `xmin` among the distinct observed values
/// to minimise the KS distance. Tails with fewer than [`MIN_TAIL`]
/// observations are not considered; ties go to the smaller `xmin`.
pub fn fit_discrete_powerlaw<R: Real>(data: &[u64]) -> Result<TailFit<R>, FitError> {
    let values = tally(data)?;
    fit_tallied(&values, data.len())
}

/// Semiparametric bootstrap p-value of `fit` on `data`.
///
/// A replicate draws each of `data.len()` points from the fitted tail with
/// probability `tail_size / n` and otherwise uniformly from the observations
/// below `xmin`, refits, and is counted when its KS distance is at least the
/// observed one. Replicate `r` uses stream `r` of `seed`.
pub fn gof_pvalue<R: Real>(data: &[u64], fit: &TailFit<R>, n_bootstrap: usize, seed: u64) -> Result<R, FitError> {
    if n_bootstrap < MIN_BOOTSTRAP {
        return Err(FitError::TooFewReplicates(n_bootstrap));
    }
    let values = tally(data)?;
    let tail_size: usize = values.iter().filter(|(x, _)| *x >= fit.xmin).map(|(_, c)| c).sum();
    if tail_size != fit.tail_size {
        return Err(FitError::Mismatch(format!("{tail_size} observations >= xmin, fit says {}", fit.tail_size)));
    }
    let mut body: Vec<u64> = data.iter().copied().filter(|&x| x < fit.xmin).collect();
    body.sort_unstable();
    let n = data.len();

    let exceed: Vec<bool> = (0..n_bootstrap as u64)
        .into_par_iter()
        .map(|r| {
            let mut rng = stream_rng(seed, r);
            let synthetic: Vec<u64> = (0..n)
                .map(|_| {
                    if rng.gen_range(0..n) < tail_size {
                        fit.sample_tail(&mut rng)
                    } else {
                        body[rng.gen_range(0..body.len())]
                    }
                })
                .collect();
            let refit = fit_discrete_powerlaw::<R>(&synthetic)?;
            Ok(refit.ks_distance >= fit.ks_distance)
        })
        .collect::<Result<_, FitError>>()?;
    let hits = exceed.iter().filter(|&&e| e).count();
    Ok(R::from_count(hits) / R::from_count(n_bootstrap))
}
