//! Hill estimator for the degree-tail exponent.
//!
//! For a density tail `~ d^{-γ}` the complementary CDF decays like
//! `d^{-(γ-1)}`; the Hill statistic over the top `k` order statistics
//! estimates `1/(γ-1)`, so the returned exponent is `1/hill + 1`. The
//! standard error comes from a nonparametric bootstrap over the full degree
//! sample, chosen over log-log regression for its lower bias on heavy tails.

use super::HarnessError;
use crate::par::map_range;
use crate::rng;
use serde::Serialize;

/// Point estimate of the degree-density tail exponent plus bootstrap spread.
#[derive(Debug, Clone, Serialize)]
pub struct TailFit {
    pub exponent: f64,
    pub stderr: f64,
    /// Number of order statistics above the cutoff.
    pub k: usize,
    /// The (k+1)-th largest value; logs are taken relative to it.
    pub cutoff: f64,
    pub tail_fraction: f64,
    pub bootstrap_rounds: usize,
}

const BOOTSTRAP_ROUNDS: usize = 200;
const MIN_TAIL: usize = 100;

fn hill_exponent(values: &mut [f64], k: usize) -> Option<f64> {
    if k == 0 || k >= values.len() {
        return None;
    }
    // order descending so indices 0..k are the tail and values[k] the cutoff
    let (top, kth, _) =
        values.select_nth_unstable_by(k, |a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    let cutoff = *kth;
    if cutoff <= 0.0 {
        return None;
    }
    let sum_log: f64 = top.iter().map(|&x| (x / cutoff).ln()).sum();
    if sum_log <= 0.0 {
        return None;
    }
    Some(k as f64 / sum_log + 1.0)
}

/// Fits the tail exponent over the top `tail_fraction` of the sample.
///
/// Errors with `InsufficientTail` when fewer than 100 values lie above the
/// cutoff, when the cutoff is nonpositive, or when the tail is degenerate
/// (all values equal).
pub fn fit_tail_exponent(
    degrees: &[f64],
    tail_fraction: f64,
    seed: u64,
) -> Result<TailFit, HarnessError> {
    if !(tail_fraction > 0.0 && tail_fraction < 1.0) {
        return Err(HarnessError::Config(format!(
            "tail_fraction must lie in (0,1), got {tail_fraction}"
        )));
    }
    let m = degrees.len();
    let k = (tail_fraction * m as f64).floor() as usize;
    if k < MIN_TAIL {
        return Err(HarnessError::InsufficientTail(format!(
            "need ≥ {MIN_TAIL} degrees above the cutoff, got k = {k} of m = {m}"
        )));
    }
    let mut work = degrees.to_vec();
    let exponent = hill_exponent(&mut work, k).ok_or_else(|| {
        HarnessError::InsufficientTail(
            "degenerate tail: cutoff nonpositive or all tail values equal".into(),
        )
    })?;
    let cutoff = work[k];

    let estimates: Vec<Option<f64>> = map_range(BOOTSTRAP_ROUNDS, true, |b| {
        let mut resample: Vec<f64> = (0..m)
            .map(|i| {
                let u = rng::unit(seed, (b * m + i) as u64, rng::TAG_BOOT);
                degrees[(u * m as f64) as usize % m]
            })
            .collect();
        hill_exponent(&mut resample, k)
    });
    let ok: Vec<f64> = estimates.into_iter().flatten().collect();
    if ok.len() < BOOTSTRAP_ROUNDS / 2 {
        return Err(HarnessError::InsufficientTail(format!(
            "bootstrap degenerate: only {}/{BOOTSTRAP_ROUNDS} rounds produced an estimate",
            ok.len()
        )));
    }
    let mean = ok.iter().sum::<f64>() / ok.len() as f64;
    let var = ok.iter().map(|e| (e - mean) * (e - mean)).sum::<f64>() / (ok.len() - 1) as f64;
    Ok(TailFit {
        exponent,
        stderr: var.sqrt(),
        k,
        cutoff,
        tail_fraction,
        bootstrap_rounds: ok.len(),
    })
}
