//! Per-point aggregation: success rate, mean attempts and binomial error.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::model::{
    analytic_expected_attempts, analytic_expected_attempts_served, analytic_success, ModelParams,
    PolicyKind,
};
use crate::policies::RequestOutcome;

/// Which requests the mean-attempts metric divides by.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AttemptsDenominator {
    /// Every request, served or failed. Failed requests still spent `R * K`.
    #[default]
    All,
    /// Served requests only (attempts of failed requests are excluded too).
    ServedOnly,
}

impl FromStr for AttemptsDenominator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "all" => Ok(AttemptsDenominator::All),
            "served" | "served_only" => Ok(AttemptsDenominator::ServedOnly),
            other => Err(Error::InvalidParam {
                key: "attempts_denominator",
                value: other.to_string(),
                expected: "one of all, served",
            }),
        }
    }
}

impl fmt::Display for AttemptsDenominator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AttemptsDenominator::All => "all",
            AttemptsDenominator::ServedOnly => "served",
        })
    }
}

/// Aggregated statistics for one `(N, policy)` sweep point.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSummary {
    pub n: u32,
    pub policy: PolicyKind,
    pub trials: u32,
    pub successes: u32,
    pub success_rate: f64,
    /// Attempts summed over all requests.
    pub total_attempts: u64,
    /// Attempts summed over served requests only.
    pub served_attempts: u64,
    pub mean_attempts: f64,
    pub success_stderr: f64,
    pub cache_hits: u32,
    pub master_seed: u64,
    pub denominator: AttemptsDenominator,
}

/// Closed-form counterpart of a [`PointSummary`] for the cache-free process.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyticRow {
    pub n: u32,
    pub policy: PolicyKind,
    pub success_rate: f64,
    pub mean_attempts: f64,
}

impl AnalyticRow {
    pub fn compute(
        n: u32,
        policy: PolicyKind,
        params: &ModelParams,
        denominator: AttemptsDenominator,
    ) -> Result<Self> {
        let mean_attempts = match denominator {
            AttemptsDenominator::All => analytic_expected_attempts(n, policy, params)?,
            AttemptsDenominator::ServedOnly => {
                analytic_expected_attempts_served(n, policy, params)?.unwrap_or(0.0)
            }
        };
        Ok(AnalyticRow {
            n,
            policy,
            success_rate: analytic_success(n, policy, params)?,
            mean_attempts,
        })
    }
}

/// Largest possible binomial standard error at `trials` samples (`p = 1/2`).
pub fn stderr_bound(trials: u32) -> f64 {
    0.5 / f64::from(trials.max(1)).sqrt()
}

pub fn summarize(
    outcomes: &[RequestOutcome],
    n: u32,
    policy: PolicyKind,
    params: &ModelParams,
) -> Result<PointSummary> {
    summarize_with(outcomes, n, policy, params, AttemptsDenominator::All)
}

pub fn summarize_with(
    outcomes: &[RequestOutcome],
    n: u32,
    policy: PolicyKind,
    params: &ModelParams,
    denominator: AttemptsDenominator,
) -> Result<PointSummary> {
    if outcomes.is_empty() {
        return Err(Error::EmptyOutcomes);
    }
    let trials = outcomes.len() as u32;
    let mut successes = 0u32;
    let mut cache_hits = 0u32;
    let mut total_attempts = 0u64;
    let mut served_attempts = 0u64;
    for o in outcomes {
        total_attempts += u64::from(o.attempts);
        if o.served {
            successes += 1;
            served_attempts += u64::from(o.attempts);
        }
        if o.cache_hit {
            cache_hits += 1;
        }
    }
    let success_rate = f64::from(successes) / f64::from(trials);
    let mean_attempts = match denominator {
        AttemptsDenominator::All => total_attempts as f64 / f64::from(trials),
        AttemptsDenominator::ServedOnly if successes == 0 => 0.0,
        AttemptsDenominator::ServedOnly => served_attempts as f64 / f64::from(successes),
    };
    let success_stderr = (success_rate * (1.0 - success_rate) / f64::from(trials)).sqrt();
    Ok(PointSummary {
        n,
        policy,
        trials,
        successes,
        success_rate,
        total_attempts,
        served_attempts,
        mean_attempts,
        success_stderr,
        cache_hits,
        master_seed: params.master_seed(),
        denominator,
    })
}
