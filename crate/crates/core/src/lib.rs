//! Monte Carlo simulation of teleportation requests in a hub-and-spoke
//! multi-QPU network.
//!
//! Two policies are compared: a naive one that makes a single entanglement
//! attempt per round, and an orchestrated one that launches `K(N)` attempts
//! per round and keeps spare Bell pairs in a per-pair cache. A closed-form
//! model of the cache-free process serves as an oracle for the simulator.

pub mod cache;
pub mod cli_io;
pub mod engine;
pub mod error;
pub mod model;
pub mod policies;
pub mod stats;

pub use cache::{EntanglementCache, NodePair};
pub use engine::{
    derive_stream, run_point, run_sweep, run_sweep_with, RandomStream, SweepOptions, SweepSpec,
};
pub use error::{Error, Result};
pub use model::{
    analytic_expected_attempts, analytic_success, effective_success_probability, parallelism,
    round_success_probability, ModelParams, PolicyKind,
};
pub use policies::{execute_request, sample_pair, RequestOutcome};
pub use rand_chacha::rand_core;
pub use stats::{stderr_bound, summarize, AnalyticRow, AttemptsDenominator, PointSummary};
