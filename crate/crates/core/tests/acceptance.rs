//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

mod common;

use std::time::{Duration, Instant};

use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

use teleport_sim::cli_io::{execute, RunConfig};
use teleport_sim::engine::{run_point, run_sweep_with, SweepOptions, SweepSpec, DEFAULT_GRID};
use teleport_sim::{
    analytic_expected_attempts, analytic_success, derive_stream, execute_request, parallelism,
    sample_pair, stderr_bound, summarize, EntanglementCache, ModelParams, NodePair, PolicyKind,
};

use common::{binomial_sigma, enumerate_process, trajectory, Scripted};

const NAIVE: PolicyKind = PolicyKind::NaiveSequential;
const ORCH: PolicyKind = PolicyKind::OrchestratedParallel;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn default_sweep(params: ModelParams, threads: usize) -> Vec<teleport_sim::PointSummary> {
    let spec = SweepSpec::new(DEFAULT_GRID.to_vec(), PolicyKind::ALL.to_vec(), params).unwrap();
    run_sweep_with(
        &spec,
        SweepOptions {
            threads,
            ..Default::default()
        },
        |_| {},
    )
    .unwrap()
}

fn rate_at(n: u32, policy: PolicyKind, params: &ModelParams) -> (f64, f64, Duration) {
    let start = Instant::now();
    let outcomes = run_point(n, policy, params).unwrap();
    let elapsed = start.elapsed();
    let s = summarize(&outcomes, n, policy, params).unwrap();
    (s.success_rate, s.mean_attempts, elapsed)
}

/// Large-N success rates at default parameters.
fn c1_large_n_success() -> Outcome {
    let params = ModelParams::default();
    let (orch, _, t_orch) = rate_at(128, ORCH, &params);
    let (naive, _, t_naive) = rate_at(128, NAIVE, &params);
    let orch_ok = orch >= 0.89422 - 0.019;
    let naive_ok = (naive - 0.27452).abs() <= 0.027;
    let time_ok = t_orch < Duration::from_secs(1) && t_naive < Duration::from_secs(1);
    check(
        orch_ok && naive_ok && time_ok,
        format!(
            "orchestrated {orch:.4} (>= 0.8752), naive {naive:.4} (0.27452 +/- 0.027), \
             point times {:.0?} / {:.0?} (< 1 s)",
            t_orch, t_naive
        ),
    )
}

/// Mean-attempt ranges, plus the tight oracle targets on the cache-free process.
fn c2_mean_attempts() -> Outcome {
    let params = ModelParams::default();
    let sweep = default_sweep(params, 0);
    let orch128 = sweep
        .iter()
        .find(|s| s.n == 128 && s.policy == ORCH)
        .unwrap()
        .mean_attempts;
    let naive: Vec<(u32, f64)> = sweep
        .iter()
        .filter(|s| s.policy == NAIVE)
        .map(|s| (s.n, s.mean_attempts))
        .collect();
    let naive_bad: Vec<&(u32, f64)> = naive
        .iter()
        .filter(|(_, m)| !(2.4..=3.0).contains(m))
        .collect();

    let cache_free = params.with_cache_capacity(0);
    let (_, orch_free, _) = rate_at(128, ORCH, &cache_free);
    let (_, naive_free, _) = rate_at(128, NAIVE, &cache_free);
    let tight_orch = analytic_expected_attempts(128, ORCH, &params).unwrap();
    let tight_naive = analytic_expected_attempts(128, NAIVE, &params).unwrap();

    // Closed form for the naive policy at the smallest grid point, for the report.
    let naive_floor = analytic_expected_attempts(DEFAULT_GRID[0], NAIVE, &params).unwrap();

    let ok = (10.0..=12.0).contains(&orch128)
        && naive_bad.is_empty()
        && (orch_free - tight_orch).abs() <= 0.5
        && (naive_free - tight_naive).abs() <= 0.5;
    check(
        ok,
        format!(
            "orchestrated@128 {orch128:.3} in [10,12]; naive outside [2.4,3.0]: {naive_bad:?} \
             (closed form at N={} is {naive_floor:.4}); \
             cache-free orchestrated@128 {orch_free:.3} vs {tight_orch:.3}, naive@128 {naive_free:.3} vs {tight_naive:.3} (+/- 0.5)",
            DEFAULT_GRID[0]
        ),
    )
}

/// Cache-free simulation matches the closed form within 3 sigma everywhere.
fn c3_oracle_equivalence() -> Outcome {
    let mut worst = (0.0f64, 0u64, 0u32, NAIVE);
    let mut violations = Vec::new();
    for seed in 1..=5u64 {
        let params = ModelParams::default()
            .with_cache_capacity(0)
            .with_seed(seed);
        for s in default_sweep(params, 0) {
            let p = analytic_success(s.n, s.policy, &params).unwrap();
            let z = (s.success_rate - p).abs() / binomial_sigma(p, s.trials);
            if z > worst.0 {
                worst = (z, seed, s.n, s.policy);
            }
            if z > 3.0 {
                violations.push((seed, s.n, s.policy.name(), z));
            }
        }
    }
    check(
        violations.is_empty(),
        format!(
            "70 points over seeds 1..=5; worst |z| = {:.2} (seed {}, N={}, {}); violations {:?}",
            worst.0, worst.1, worst.2, worst.3, violations
        ),
    )
}

/// Exhaustive enumeration over R=2, K=2 reproduces both closed forms, and the
/// request executor follows the enumerated trajectory for every vector.
fn c4_brute_force() -> Outcome {
    let mut worst = 0.0f64;
    let mut trajectory_mismatch = 0;
    for p in [0.25, 0.5, 0.75] {
        // beta = 0 and N = 2 give p_eff = p0 exactly and K = max(2, ceil(0.9)) = 2.
        let params = ModelParams::new(p, 0.0, 0.9, 2).unwrap();
        assert_eq!(parallelism(2, ORCH, &params).unwrap(), 2);
        let (success, attempts) = enumerate_process(p, 2, 2);
        worst = worst
            .max((success - analytic_success(2, ORCH, &params).unwrap()).abs())
            .max((attempts - analytic_expected_attempts(2, ORCH, &params).unwrap()).abs());

        for mask in 0u64..16 {
            let (served, used) = trajectory(mask, 2, 2);
            let mut rng = Scripted::from_outcomes((0..4).map(|b| mask >> b & 1 == 1));
            let out = execute_request(
                NodePair::new(0, 1).unwrap(),
                2,
                ORCH,
                &params,
                None,
                &mut rng,
            )
            .unwrap();
            if out.served != served || out.attempts != used {
                trajectory_mismatch += 1;
            }
        }
    }
    check(
        worst <= 1e-12 && trajectory_mismatch == 0,
        format!("max |enumeration - closed form| = {worst:e} (<= 1e-12); trajectory mismatches {trajectory_mismatch}"),
    )
}

/// Every emitted standard error at 2500 trials is at most 1%.
fn c5_stderr_bound() -> Outcome {
    let sweep = default_sweep(ModelParams::default(), 0);
    let max = sweep.iter().map(|s| s.success_stderr).fold(0.0, f64::max);
    let bound = stderr_bound(2500);
    check(
        max <= 0.01 && bound <= 0.01,
        format!(
            "max stderr {max:.6} over {} points; bound {bound}",
            sweep.len()
        ),
    )
}

/// Orchestrated beats naive analytically on 2..=1024 and empirically on the grid.
fn c6_dominance() -> Outcome {
    let params = ModelParams::default();
    let analytic_bad: Vec<u32> = (2..=1024u32)
        .filter(|&n| {
            analytic_success(n, ORCH, &params).unwrap()
                <= analytic_success(n, NAIVE, &params).unwrap()
        })
        .collect();
    let sweep = default_sweep(params, 0);
    let empirical_bad: Vec<u32> = DEFAULT_GRID
        .iter()
        .copied()
        .filter(|&n| {
            let rate = |p| {
                sweep
                    .iter()
                    .find(|s| s.n == n && s.policy == p)
                    .unwrap()
                    .success_rate
            };
            rate(ORCH) <= rate(NAIVE)
        })
        .collect();
    check(
        analytic_bad.is_empty() && empirical_bad.is_empty(),
        format!("analytic violations {analytic_bad:?}; empirical violations {empirical_bad:?}"),
    )
}

fn csv_bytes(dir: &std::path::Path, name: &str, threads: usize) -> Vec<u8> {
    let path = dir.join(name);
    let cfg = RunConfig {
        csv_path: path.clone(),
        threads,
        ..RunConfig::default()
    };
    execute(&cfg, &mut std::io::sink()).unwrap();
    std::fs::read(path).unwrap()
}

/// Same config and seed give byte-identical CSV, at 1 and 8 threads.
fn c7_determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let a = csv_bytes(dir.path(), "a.csv", 1);
    let b = csv_bytes(dir.path(), "b.csv", 1);
    let c = csv_bytes(dir.path(), "c.csv", 8);
    check(
        a == b && a == c,
        format!(
            "{} bytes; repeat identical: {}; 1 vs 8 threads identical: {}",
            a.len(),
            a == b,
            a == c
        ),
    )
}

fn runner() -> TestRunner {
    TestRunner::new(Config {
        cases: 10_000,
        failure_persistence: None,
        ..Config::default()
    })
}

fn params_strategy() -> impl Strategy<Value = ModelParams> {
    (
        0.01f64..=1.0,
        0.0f64..2.0,
        0.1f64..3.0,
        1u32..6,
        0u32..3,
        any::<u64>(),
    )
        .prop_map(|(p0, b, k, r, cap, seed)| {
            ModelParams::new(p0, b, k, r)
                .unwrap()
                .with_cache_capacity(cap)
                .with_seed(seed)
        })
}

fn request_invariants() -> Result<(), String> {
    let strategy = (params_strategy(), 2u32..300, any::<bool>(), 1usize..12);
    runner()
        .run(&strategy, |(params, n, orchestrated, requests)| {
            let policy = if orchestrated { ORCH } else { NAIVE };
            let k = parallelism(n, policy, &params).unwrap();
            let budget = params.round_budget();
            let mut rng = derive_stream(params.master_seed(), n, policy);
            let mut cache = EntanglementCache::new(params.cache_capacity());
            for _ in 0..requests {
                // Small networks so that cache hits actually happen.
                let pair = sample_pair(n.min(4), &mut rng).unwrap();
                let out =
                    execute_request(pair, n, policy, &params, Some(&mut cache), &mut rng).unwrap();
                prop_assert!(out.is_consistent(k, budget), "{out:?} k={k} R={budget}");
                prop_assert!(
                    out.attempts == 0 || (out.attempts % k == 0 && out.attempts <= budget * k)
                );
                prop_assert!(!out.cache_hit || out.served);
                prop_assert!(cache.stored(pair) <= params.cache_capacity());
                prop_assert!(cache.hits() <= cache.deposits());
                if policy == NAIVE {
                    prop_assert!(!out.cache_hit);
                    prop_assert_eq!(cache.deposits(), 0);
                }
            }
            Ok(())
        })
        .map_err(|e| format!("RequestOutcome: {e}"))
}

#[derive(Debug, Clone)]
enum CacheOp {
    Consume(u32, u32),
    Deposit(u32, u32, u32),
}

fn cache_invariants() -> Result<(), String> {
    let op = prop_oneof![
        (0u32..4, 1u32..4).prop_map(|(a, d)| CacheOp::Consume(a, a + d)),
        (0u32..4, 1u32..4, 0u32..6).prop_map(|(a, d, s)| CacheOp::Deposit(a, a + d, s)),
    ];
    let strategy = (0u32..4, prop::collection::vec(op, 0..40));
    runner()
        .run(&strategy, |(capacity, ops)| {
            let mut cache = EntanglementCache::new(capacity);
            for op in ops {
                let (pair, before) = match op {
                    CacheOp::Consume(a, b) | CacheOp::Deposit(a, b, _) => {
                        let pair = NodePair::new(a, b).unwrap();
                        (pair, cache.stored(pair))
                    }
                };
                match op {
                    CacheOp::Consume(..) => {
                        let hit = cache.try_consume(pair);
                        prop_assert_eq!(hit, before > 0);
                        prop_assert!(cache.stored(pair) <= before);
                    }
                    CacheOp::Deposit(_, _, surplus) => {
                        let stored = cache.deposit(pair, surplus);
                        prop_assert!(stored <= 1 && stored <= surplus);
                        prop_assert!(cache.stored(pair) >= before);
                    }
                }
                prop_assert!(cache.stored(pair) <= capacity);
                prop_assert!(cache.hits() <= cache.deposits());
            }
            Ok(())
        })
        .map_err(|e| format!("cache: {e}"))
}

fn summary_invariants() -> Result<(), String> {
    let strategy = (params_strategy(), 2u32..40, any::<bool>(), 1u32..40);
    runner()
        .run(&strategy, |(params, n, orchestrated, trials)| {
            let policy = if orchestrated { ORCH } else { NAIVE };
            let params = params.with_trials(trials).unwrap();
            let mut outcomes = run_point(n, policy, &params).unwrap();
            prop_assert_eq!(outcomes.len(), trials as usize);
            let s = summarize(&outcomes, n, policy, &params).unwrap();
            let successes = outcomes.iter().filter(|o| o.served).count() as u32;
            let attempts: u64 = outcomes.iter().map(|o| u64::from(o.attempts)).sum();
            let hits = outcomes.iter().filter(|o| o.cache_hit).count() as u32;
            prop_assert_eq!(s.trials, trials);
            prop_assert_eq!(s.successes, successes);
            prop_assert_eq!(s.success_rate, f64::from(successes) / f64::from(trials));
            prop_assert_eq!(s.mean_attempts, attempts as f64 / f64::from(trials));
            prop_assert_eq!(
                s.success_stderr,
                (s.success_rate * (1.0 - s.success_rate) / f64::from(trials)).sqrt()
            );
            prop_assert!(s.success_stderr <= stderr_bound(trials) + 1e-15);
            prop_assert_eq!(s.cache_hits, hits);
            prop_assert!(s.cache_hits <= s.successes);
            if policy == NAIVE {
                prop_assert_eq!(s.cache_hits, 0);
            }
            outcomes.reverse();
            prop_assert_eq!(summarize(&outcomes, n, policy, &params).unwrap(), s);
            Ok(())
        })
        .map_err(|e| format!("PointSummary: {e}"))
}

/// Randomized invariant suites, 10^4 cases each.
fn c8_invariants() -> Outcome {
    let results = [
        request_invariants(),
        cache_invariants(),
        summary_invariants(),
    ];
    let failures: Vec<&String> = results.iter().filter_map(|r| r.as_ref().err()).collect();
    check(
        failures.is_empty(),
        format!("3 suites x 10000 cases; failures: {failures:?}"),
    )
}

/// Full default sweep plus CSV and chart in under 5 s.
fn c9_end_to_end_runtime() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let cfg = RunConfig {
        csv_path: dir.path().join("sweep.csv"),
        svg_path: Some(dir.path().join("sweep.svg")),
        ..RunConfig::default()
    };
    let start = Instant::now();
    let out = execute(&cfg, &mut std::io::sink()).unwrap();
    let elapsed = start.elapsed();
    let lines = std::fs::read_to_string(&cfg.csv_path)
        .unwrap()
        .lines()
        .count();
    let svg_ok = std::fs::metadata(cfg.svg_path.as_ref().unwrap()).is_ok();
    check(
        elapsed < Duration::from_secs(5) && out.summaries.len() == 14 && svg_ok,
        format!(
            "{} points, {lines} CSV lines, chart written: {svg_ok}, elapsed {elapsed:.2?}",
            out.summaries.len()
        ),
    )
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("C1 large-N success rates", c1_large_n_success),
        ("C2 mean attempts per teleportation", c2_mean_attempts),
        ("C3 oracle equivalence without cache", c3_oracle_equivalence),
        ("C4 brute-force enumeration", c4_brute_force),
        ("C5 standard error <= 1%", c5_stderr_bound),
        ("C6 orchestrated dominates naive", c6_dominance),
        ("C7 byte-identical CSV", c7_determinism),
        ("C8 invariant property suites", c8_invariants),
        ("C9 end-to-end runtime", c9_end_to_end_runtime),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        match run() {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name}: {detail}");
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
