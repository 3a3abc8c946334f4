//! Scale-dependent loss model, parallelism schedule and the closed-form
//! success/cost oracle for the cache-free process.
//!
//! Every function here is pure. Network sizes are QPU counts and must be at
//! least 1; the formulas are defined at `N = 1` even though sweeps start at 2.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Entanglement policy used to serve a teleportation request.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PolicyKind {
    /// One attempt per round, no caching.
    NaiveSequential,
    /// `K(N)` simultaneous attempts per round plus a spare-pair cache.
    OrchestratedParallel,
}

impl PolicyKind {
    pub const ALL: [PolicyKind; 2] = [
        PolicyKind::NaiveSequential,
        PolicyKind::OrchestratedParallel,
    ];

    /// Short name used on the command line and in CSV output.
    pub fn name(self) -> &'static str {
        match self {
            PolicyKind::NaiveSequential => "naive",
            PolicyKind::OrchestratedParallel => "orchestrated",
        }
    }

    /// Stable numeric tag mixed into random stream derivation.
    pub fn tag(self) -> u64 {
        match self {
            PolicyKind::NaiveSequential => 0,
            PolicyKind::OrchestratedParallel => 1,
        }
    }

    pub fn uses_cache(self) -> bool {
        matches!(self, PolicyKind::OrchestratedParallel)
    }
}

impl fmt::Display for PolicyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PolicyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "naive" | "naive_sequential" => Ok(PolicyKind::NaiveSequential),
            "orchestrated" | "orchestrated_parallel" => Ok(PolicyKind::OrchestratedParallel),
            other => Err(Error::InvalidParam {
                key: "policies",
                value: other.to_string(),
                expected: "one of naive, orchestrated",
            }),
        }
    }
}

/// Scalar parameters of one sweep.
///
/// Fields are private so that an out-of-range value can never reach the
/// simulator; every setter validates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    p0: f64,
    beta: f64,
    kappa: f64,
    round_budget: u32,
    cache_capacity: u32,
    trials: u32,
    master_seed: u64,
}

impl Default for ModelParams {
    /// p0 = 0.35, beta = 0.35, kappa = 0.9, R = 3, capacity 1, 2500 trials.
    fn default() -> Self {
        ModelParams {
            p0: 0.35,
            beta: 0.35,
            kappa: 0.9,
            round_budget: 3,
            cache_capacity: 1,
            trials: 2500,
            master_seed: 0,
        }
    }
}

fn invalid(key: &'static str, value: impl fmt::Display, expected: &'static str) -> Error {
    Error::InvalidParam {
        key,
        value: value.to_string(),
        expected,
    }
}

impl ModelParams {
    /// Builds a parameter set with the given loss and scheduling model; the
    /// remaining fields keep their defaults.
    pub fn new(p0: f64, beta: f64, kappa: f64, round_budget: u32) -> Result<Self> {
        ModelParams::default()
            .with_p0(p0)?
            .with_beta(beta)?
            .with_kappa(kappa)?
            .with_round_budget(round_budget)
    }

    pub fn with_p0(mut self, p0: f64) -> Result<Self> {
        if !(p0 > 0.0 && p0 <= 1.0) {
            return Err(invalid("p0", p0, "a probability in (0, 1]"));
        }
        self.p0 = p0;
        Ok(self)
    }

    pub fn with_beta(mut self, beta: f64) -> Result<Self> {
        if !(beta >= 0.0 && beta.is_finite()) {
            return Err(invalid("beta", beta, "a finite value >= 0"));
        }
        self.beta = beta;
        Ok(self)
    }

    pub fn with_kappa(mut self, kappa: f64) -> Result<Self> {
        if !(kappa > 0.0 && kappa.is_finite()) {
            return Err(invalid("kappa", kappa, "a finite value > 0"));
        }
        self.kappa = kappa;
        Ok(self)
    }

    pub fn with_round_budget(mut self, rounds: u32) -> Result<Self> {
        if rounds == 0 {
            return Err(invalid("round_budget", rounds, "an integer >= 1"));
        }
        self.round_budget = rounds;
        Ok(self)
    }

    pub fn with_cache_capacity(mut self, capacity: u32) -> Self {
        self.cache_capacity = capacity;
        self
    }

    pub fn with_trials(mut self, trials: u32) -> Result<Self> {
        if trials == 0 {
            return Err(invalid("trials", trials, "an integer >= 1"));
        }
        self.trials = trials;
        Ok(self)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.master_seed = seed;
        self
    }

    pub fn p0(&self) -> f64 {
        self.p0
    }
    pub fn beta(&self) -> f64 {
        self.beta
    }
    pub fn kappa(&self) -> f64 {
        self.kappa
    }
    pub fn round_budget(&self) -> u32 {
        self.round_budget
    }
    pub fn cache_capacity(&self) -> u32 {
        self.cache_capacity
    }
    pub fn trials(&self) -> u32 {
        self.trials
    }
    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }
}

fn check_size(n: u32) -> Result<()> {
    if n == 0 {
        return Err(Error::NetworkTooSmall { n, min: 1 });
    }
    Ok(())
}

/// Per-attempt success probability `p0 / (1 + beta * log2 N)`.
pub fn effective_success_probability(n: u32, params: &ModelParams) -> Result<f64> {
    check_size(n)?;
    let p = params.p0 / (1.0 + params.beta * f64::from(n).log2());
    Ok(p.clamp(0.0, 1.0))
}

/// Attempts launched per round: 1 for naive, `max(2, ceil(kappa * log2 N))`
/// for orchestrated.
pub fn parallelism(n: u32, policy: PolicyKind, params: &ModelParams) -> Result<u32> {
    check_size(n)?;
    Ok(match policy {
        PolicyKind::NaiveSequential => 1,
        PolicyKind::OrchestratedParallel => {
            let k = (params.kappa * f64::from(n).log2()).ceil();
            // log2 N <= 32 and kappa is finite, so the cast saturates at worst.
            (k as u32).max(2)
        }
    })
}

/// Probability that at least one of the round's `K` attempts succeeds.
pub fn round_success_probability(n: u32, policy: PolicyKind, params: &ModelParams) -> Result<f64> {
    let p = effective_success_probability(n, params)?;
    let k = parallelism(n, policy, params)?;
    Ok(at_least_one(p, k))
}

/// Cache-free probability that a request is served within the round budget.
pub fn analytic_success(n: u32, policy: PolicyKind, params: &ModelParams) -> Result<f64> {
    let p_round = round_success_probability(n, policy, params)?;
    Ok(at_least_one(p_round, params.round_budget))
}

/// Expected attempts per request (served and failed alike) for the
/// cache-free process: `K * E[min(G, R)]` with `G ~ Geometric(p_round)`.
pub fn analytic_expected_attempts(n: u32, policy: PolicyKind, params: &ModelParams) -> Result<f64> {
    let k = f64::from(parallelism(n, policy, params)?);
    let p_round = round_success_probability(n, policy, params)?;
    let rounds = params.round_budget;
    if p_round <= 0.0 {
        return Ok(k * f64::from(rounds));
    }
    Ok(k * at_least_one(p_round, rounds) / p_round)
}

/// Expected attempts of a request conditioned on it being served:
/// `K * E[G | G <= R]`.
///
/// Returns `None` when no request can be served (`p_round = 0`).
pub fn analytic_expected_attempts_served(
    n: u32,
    policy: PolicyKind,
    params: &ModelParams,
) -> Result<Option<f64>> {
    let k = f64::from(parallelism(n, policy, params)?);
    let p_round = round_success_probability(n, policy, params)?;
    let served = at_least_one(p_round, params.round_budget);
    if served <= 0.0 {
        return Ok(None);
    }
    let miss = 1.0 - p_round;
    let mut weighted = 0.0;
    let mut reach = 1.0;
    for r in 1..=params.round_budget {
        weighted += f64::from(r) * reach * p_round;
        reach *= miss;
    }
    Ok(Some(k * weighted / served))
}

/// `1 - (1 - p)^trials`.
fn at_least_one(p: f64, trials: u32) -> f64 {
    if trials == 1 {
        return p.clamp(0.0, 1.0);
    }
    let miss = (1.0 - p).powi(trials as i32);
    (1.0 - miss).clamp(0.0, 1.0)
}
