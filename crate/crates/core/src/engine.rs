//! Deterministic sweep driver.
//!
//! Each `(N, policy)` point owns its own cache and its own random stream.
//! Requests inside a point run strictly in order because a spare stored by
//! one request may serve a later one; points are independent and may run on
//! any number of threads without changing results.
//!
//! Streams are ChaCha20 (20 rounds, 64-bit block counter starting at 0,
//! stream id 0) keyed by the 32 bytes
//! `master_seed (u64 LE) || N (u64 LE) || policy tag (u64 LE) || b"tsimpt01"`.
//! Words are taken from the keystream as little-endian `u64`s.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::cache::EntanglementCache;
use crate::error::{Error, Result};
use crate::model::{ModelParams, PolicyKind};
use crate::policies::{execute_request, sample_pair, RequestOutcome};
use crate::stats::{summarize_with, AttemptsDenominator, PointSummary};

/// Name of the generator, echoed in reports.
pub const GENERATOR: &str = "ChaCha20 (RFC 8439 block function, 64-bit counter, zero nonce)";

const STREAM_DOMAIN: [u8; 8] = *b"tsimpt01";

/// Reproducible random stream for one sweep point.
#[derive(Debug, Clone)]
pub struct RandomStream(ChaCha20Rng);

impl RandomStream {
    pub fn key(master_seed: u64, n: u32, policy: PolicyKind) -> [u8; 32] {
        let mut key = [0u8; 32];
        key[..8].copy_from_slice(&master_seed.to_le_bytes());
        key[8..16].copy_from_slice(&u64::from(n).to_le_bytes());
        key[16..24].copy_from_slice(&policy.tag().to_le_bytes());
        key[24..].copy_from_slice(&STREAM_DOMAIN);
        key
    }
}

impl RngCore for RandomStream {
    fn next_u32(&mut self) -> u32 {
        self.0.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.0.fill_bytes(dst)
    }
}

/// Stream for the point `(n, policy)` under `master_seed`. Distinct inputs
/// give distinct keys, so adding or removing grid points never shifts another
/// point's draws.
pub fn derive_stream(master_seed: u64, n: u32, policy: PolicyKind) -> RandomStream {
    RandomStream(ChaCha20Rng::from_seed(RandomStream::key(
        master_seed,
        n,
        policy,
    )))
}

/// Grid, policies and parameters of one sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    grid: Vec<u32>,
    policies: Vec<PolicyKind>,
    params: ModelParams,
}

/// Network sizes used when no grid is given.
pub const DEFAULT_GRID: [u32; 7] = [2, 4, 8, 16, 32, 64, 128];

impl Default for SweepSpec {
    fn default() -> Self {
        SweepSpec {
            grid: DEFAULT_GRID.to_vec(),
            policies: PolicyKind::ALL.to_vec(),
            params: ModelParams::default(),
        }
    }
}

impl SweepSpec {
    pub fn new(grid: Vec<u32>, policies: Vec<PolicyKind>, params: ModelParams) -> Result<Self> {
        if grid.is_empty() {
            return Err(Error::InvalidGrid("must not be empty".into()));
        }
        if let Some(&n) = grid.iter().find(|&&n| n < 2) {
            return Err(Error::InvalidGrid(format!(
                "entry {n} is below the minimum of 2"
            )));
        }
        if let Some(w) = grid.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::InvalidGrid(format!(
                "must be strictly increasing ({} then {})",
                w[0], w[1]
            )));
        }
        if policies.is_empty() {
            return Err(Error::InvalidParam {
                key: "policies",
                value: String::new(),
                expected: "at least one of naive, orchestrated",
            });
        }
        Ok(SweepSpec {
            grid,
            policies,
            params,
        })
    }

    pub fn grid(&self) -> &[u32] {
        &self.grid
    }

    pub fn policies(&self) -> &[PolicyKind] {
        &self.policies
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    /// Every `(N, policy)` point, policy-major.
    pub fn points(&self) -> Vec<(u32, PolicyKind)> {
        self.policies
            .iter()
            .flat_map(|&policy| self.grid.iter().map(move |&n| (n, policy)))
            .collect()
    }
}

/// Outcomes of one point plus the cache counters at the end of it.
#[derive(Debug, Clone, PartialEq)]
pub struct PointRun {
    pub outcomes: Vec<RequestOutcome>,
    pub cache_deposits: u64,
}

/// Runs `trials` requests for one point.
///
/// For each request the pair is sampled first, then attempts are drawn, all
/// from the point's own stream.
pub fn run_point(n: u32, policy: PolicyKind, params: &ModelParams) -> Result<Vec<RequestOutcome>> {
    run_point_detailed(n, policy, params).map(|run| run.outcomes)
}

pub fn run_point_detailed(n: u32, policy: PolicyKind, params: &ModelParams) -> Result<PointRun> {
    if n < 2 {
        return Err(Error::NetworkTooSmall { n, min: 2 });
    }
    let mut rng = derive_stream(params.master_seed(), n, policy);
    let mut cache = policy
        .uses_cache()
        .then(|| EntanglementCache::new(params.cache_capacity()));
    let mut outcomes = Vec::with_capacity(params.trials() as usize);
    for _ in 0..params.trials() {
        let pair = sample_pair(n, &mut rng)?;
        outcomes.push(execute_request(
            pair,
            n,
            policy,
            params,
            cache.as_mut(),
            &mut rng,
        )?);
    }
    Ok(PointRun {
        outcomes,
        cache_deposits: cache.map_or(0, |c| c.deposits()),
    })
}

/// Execution knobs that never change results.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SweepOptions {
    /// Worker threads across points; 0 means one per available core.
    pub threads: usize,
    pub denominator: AttemptsDenominator,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            threads: 0,
            denominator: AttemptsDenominator::All,
        }
    }
}

fn run_summary(
    n: u32,
    policy: PolicyKind,
    params: &ModelParams,
    denominator: AttemptsDenominator,
) -> Result<PointSummary> {
    let wrap = |source: Error| Error::Point {
        n,
        policy: policy.name(),
        source: Box::new(source),
    };
    let outcomes = run_point(n, policy, params).map_err(wrap)?;
    summarize_with(&outcomes, n, policy, params, denominator).map_err(wrap)
}

/// Runs every point of `spec` with default options.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<PointSummary>> {
    run_sweep_with(spec, SweepOptions::default(), |_| {})
}

/// Runs every point of `spec`, calling `on_point` as each one finishes.
///
/// The returned summaries are in [`SweepSpec::points`] order whatever the
/// thread count; only the order of `on_point` calls may vary.
pub fn run_sweep_with<F>(
    spec: &SweepSpec,
    options: SweepOptions,
    on_point: F,
) -> Result<Vec<PointSummary>>
where
    F: Fn(&PointSummary) + Sync,
{
    let points = spec.points();
    let params = spec.params;
    let job = |&(n, policy): &(u32, PolicyKind)| {
        let summary = run_summary(n, policy, &params, options.denominator)?;
        on_point(&summary);
        Ok(summary)
    };

    #[cfg(feature = "parallel")]
    {
        if options.threads != 1 {
            use rayon::prelude::*;
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(options.threads)
                .build()
                .map_err(|e| Error::Config(format!("cannot start worker threads: {e}")))?;
            return pool.install(|| points.par_iter().map(job).collect());
        }
    }

    points.iter().map(job).collect()
}
