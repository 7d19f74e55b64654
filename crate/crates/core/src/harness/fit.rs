use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::sweep::ExperimentRecord;
use crate::error::{Error, Result};
use crate::rational;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    #[serde(with = "rational::as_real")]
    pub slope: f64,
    #[serde(with = "rational::as_real")]
    pub intercept: f64,
    /// Root-mean-square residual of the log-log fit.
    #[serde(with = "rational::as_real")]
    pub residual: f64,
    pub n_points: usize,
}

fn median(xs: &mut [f64]) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        (xs[n / 2 - 1] + xs[n / 2]) / 2.0
    }
}

/// Least-squares slope of `ln(median normalized)` against `ln p`, taking the
/// median over all records that share a prime.
pub fn fit_exponent(records: &[ExperimentRecord]) -> Result<FitResult> {
    let mut by_prime: BTreeMap<u64, Vec<f64>> = BTreeMap::new();
    for r in records {
        by_prime
            .entry(r.p)
            .or_default()
            .push(rational::to_f64(&r.normalized));
    }
    if by_prime.len() < 2 {
        return Err(Error::Precondition(format!(
            "fit needs records at two or more distinct primes, got {}",
            by_prime.len()
        )));
    }
    let mut points = Vec::with_capacity(by_prime.len());
    for (p, mut values) in by_prime {
        let m = median(&mut values);
        if m.is_nan() || m <= 0.0 {
            return Err(Error::Precondition(format!(
                "median normalized value at p = {p} is not positive"
            )));
        }
        points.push(((p as f64).ln(), m.ln()));
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|(x, _)| x).sum::<f64>() / n;
    let my = points.iter().map(|(_, y)| y).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|(x, _)| (x - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(Error::Precondition("degenerate fit: all primes coincide".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = (points
        .iter()
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    Ok(FitResult {
        slope,
        intercept,
        residual,
        n_points: points.len(),
    })
}
