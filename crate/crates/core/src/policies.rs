//! Serving a single teleportation request under a policy.
//!
//! Random draws are taken from the stream in a fixed order so trajectories are
//! reproducible in any language that implements the same generator:
//!
//! 1. pair sampling: 64-bit words, rejection-sampled to a uniform index
//!    below `N(N-1)/2`, then unranked lexicographically;
//! 2. attempts: round-major, attempt-minor; one 64-bit word `w` per attempt,
//!    which succeeds iff `(w >> 11) * 2^-53 < p_eff`.
//!
//! A cache hit consumes no attempt draws.

use rand_chacha::rand_core::RngCore;

use crate::cache::{EntanglementCache, NodePair};
use crate::error::{Error, Result};
use crate::model::{effective_success_probability, parallelism, ModelParams, PolicyKind};

/// What happened to one request.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RequestOutcome {
    pub served: bool,
    /// Every attempt launched, including those in failed rounds.
    pub attempts: u32,
    pub rounds: u32,
    pub cache_hit: bool,
}

impl RequestOutcome {
    pub fn from_cache() -> Self {
        RequestOutcome {
            served: true,
            attempts: 0,
            rounds: 0,
            cache_hit: true,
        }
    }

    /// Checks the structural invariants for a request run with `k` attempts
    /// per round and a budget of `rounds` rounds.
    pub fn is_consistent(&self, k: u32, budget: u32) -> bool {
        if self.cache_hit {
            return self.served && self.attempts == 0 && self.rounds == 0;
        }
        if self.served {
            (1..=budget).contains(&self.rounds) && self.attempts == self.rounds * k
        } else {
            self.rounds == budget && self.attempts == budget * k
        }
    }
}

/// Uniform double in `[0, 1)` from the top 53 bits of one word.
pub fn unit_draw<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    const SCALE: f64 = 1.0 / (1u64 << 53) as f64;
    (rng.next_u64() >> 11) as f64 * SCALE
}

/// Uniform integer in `[0, bound)` by rejection, so there is no modulo bias.
pub fn uniform_below<R: RngCore + ?Sized>(rng: &mut R, bound: u64) -> u64 {
    assert!(bound > 0, "uniform_below needs a positive bound");
    // 2^64 mod bound; words at or above 2^64 - rem are rejected.
    let rem = (u64::MAX % bound + 1) % bound;
    loop {
        let word = rng.next_u64();
        if rem == 0 || word < 0u64.wrapping_sub(rem) {
            return word % bound;
        }
    }
}

/// Number of unordered pairs among `n` nodes.
pub fn pair_count(n: u32) -> u64 {
    let n = u64::from(n);
    n * n.saturating_sub(1) / 2
}

/// Maps `index < n(n-1)/2` to the pair at that position in lexicographic
/// order `(0,1), (0,2), ..., (0,n-1), (1,2), ...`.
pub fn unrank_pair(n: u32, index: u64) -> Result<NodePair> {
    if index >= pair_count(n) {
        return Err(Error::InvalidParam {
            key: "pair index",
            value: index.to_string(),
            expected: "an index below n(n-1)/2",
        });
    }
    let mut rest = index;
    let mut lo = 0u32;
    loop {
        let row = u64::from(n - 1 - lo);
        if rest < row {
            return NodePair::new(lo, lo + 1 + rest as u32);
        }
        rest -= row;
        lo += 1;
    }
}

/// Draws a source/destination pair uniformly among all unordered pairs.
pub fn sample_pair<R: RngCore + ?Sized>(n: u32, rng: &mut R) -> Result<NodePair> {
    if n < 2 {
        return Err(Error::NetworkTooSmall { n, min: 2 });
    }
    let index = uniform_below(rng, pair_count(n));
    unrank_pair(n, index)
}

/// Serves one request.
///
/// The orchestrated policy first tries the cache; on a miss (or for the naive
/// policy) it runs up to `R` rounds of `K` simultaneous attempts. All `K`
/// attempts of a round are drawn and counted. When the serving round has
/// `m >= 2` successes the orchestrated policy offers `m - 1` spares to the
/// cache. The naive policy ignores `cache` entirely.
pub fn execute_request<R: RngCore + ?Sized>(
    pair: NodePair,
    n: u32,
    policy: PolicyKind,
    params: &ModelParams,
    mut cache: Option<&mut EntanglementCache>,
    rng: &mut R,
) -> Result<RequestOutcome> {
    if n < 2 {
        return Err(Error::NetworkTooSmall { n, min: 2 });
    }
    if !pair.fits(n) {
        return Err(Error::PairOutOfRange {
            lo: pair.lo(),
            hi: pair.hi(),
            n,
        });
    }
    if !policy.uses_cache() {
        cache = None;
    }

    if let Some(cache) = cache.as_deref_mut() {
        if cache.try_consume(pair) {
            return Ok(RequestOutcome::from_cache());
        }
    }

    let p = effective_success_probability(n, params)?;
    let k = parallelism(n, policy, params)?;
    let budget = params.round_budget();

    for round in 1..=budget {
        let successes = (0..k).filter(|_| unit_draw(rng) < p).count() as u32;
        if successes > 0 {
            if successes >= 2 {
                if let Some(cache) = cache.as_deref_mut() {
                    cache.deposit(pair, successes - 1);
                }
            }
            return Ok(RequestOutcome {
                served: true,
                attempts: round * k,
                rounds: round,
                cache_hit: false,
            });
        }
    }

    Ok(RequestOutcome {
        served: false,
        attempts: budget * k,
        rounds: budget,
        cache_hit: false,
    })
}
