//! Run configuration from a flat `key = value` file and/or command-line flags.
//!
//! File format: UTF-8, one `key = value` per line, `#` starts a comment,
//! blank lines ignored. Keys are the field names below; flags use the same
//! names with dashes (`--cache-capacity`). Flags override file values.

use std::path::PathBuf;
use std::str::FromStr;

use crate::engine::{SweepSpec, DEFAULT_GRID};
use crate::error::{Error, Result};
use crate::model::{ModelParams, PolicyKind};
use crate::stats::AttemptsDenominator;

/// Which tables to produce.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    Simulate,
    Analytic,
    #[default]
    Both,
}

impl Mode {
    pub fn simulates(self) -> bool {
        matches!(self, Mode::Simulate | Mode::Both)
    }

    pub fn includes_analytic(self) -> bool {
        matches!(self, Mode::Analytic | Mode::Both)
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "simulate" => Ok(Mode::Simulate),
            "analytic" => Ok(Mode::Analytic),
            "both" => Ok(Mode::Both),
            other => Err(Error::InvalidParam {
                key: "mode",
                value: other.to_string(),
                expected: "one of simulate, analytic, both",
            }),
        }
    }
}

pub const DEFAULT_CSV: &str = "teleport_sweep.csv";

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub mode: Mode,
    pub spec: SweepSpec,
    pub csv_path: PathBuf,
    pub svg_path: Option<PathBuf>,
    pub attempts_denominator: AttemptsDenominator,
    /// Worker threads across sweep points; 0 means one per core.
    pub threads: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            mode: Mode::default(),
            spec: SweepSpec::default(),
            csv_path: PathBuf::from(DEFAULT_CSV),
            svg_path: None,
            attempts_denominator: AttemptsDenominator::All,
            threads: 0,
        }
    }
}

/// Canonical key for a file key or flag name, or `None` if unknown.
fn canonical_key(key: &str) -> Option<&'static str> {
    Some(match key.replace('-', "_").as_str() {
        "mode" => "mode",
        "master_seed" | "seed" => "master_seed",
        "trials" => "trials",
        "grid" => "grid",
        "p0" => "p0",
        "beta" => "beta",
        "kappa" => "kappa",
        "round_budget" | "rounds" => "round_budget",
        "cache_capacity" => "cache_capacity",
        "policies" => "policies",
        "csv_path" | "csv" => "csv_path",
        "svg_path" | "svg" => "svg_path",
        "attempts_denominator" => "attempts_denominator",
        "threads" => "threads",
        _ => return None,
    })
}

/// Splits a config file into `(key, value)` pairs, rejecting unknown keys.
pub fn parse_key_values(text: &str) -> Result<Vec<(&'static str, String)>> {
    let mut pairs = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::Config(format!(
                "line {}: expected `key = value`, got `{line}`",
                lineno + 1
            )));
        };
        let key = key.trim();
        let canonical = canonical_key(key)
            .ok_or_else(|| Error::Config(format!("line {}: unknown key `{key}`", lineno + 1)))?;
        pairs.push((canonical, value.trim().to_string()));
    }
    Ok(pairs)
}

fn number<T: FromStr>(key: &'static str, value: &str, expected: &'static str) -> Result<T> {
    value.trim().parse().map_err(|_| Error::InvalidParam {
        key,
        value: value.to_string(),
        expected,
    })
}

fn list<T>(value: &str, item: impl Fn(&str) -> Result<T>) -> Result<Vec<T>> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(item)
        .collect()
}

impl RunConfig {
    /// Builds a configuration from `(key, value)` pairs applied in order, so
    /// later pairs override earlier ones. Unmentioned fields keep defaults.
    pub fn from_pairs<'a, I>(pairs: I) -> Result<RunConfig>
    where
        I: IntoIterator<Item = (&'a str, &'a str)>,
    {
        let mut cfg = RunConfig::default();
        let mut params = ModelParams::default();
        let mut grid = DEFAULT_GRID.to_vec();
        let mut policies = PolicyKind::ALL.to_vec();

        for (key, value) in pairs {
            let key =
                canonical_key(key).ok_or_else(|| Error::Config(format!("unknown key `{key}`")))?;
            match key {
                "mode" => cfg.mode = value.parse()?,
                "master_seed" => {
                    params = params.with_seed(number(key, value, "an unsigned 64-bit integer")?)
                }
                "trials" => {
                    params =
                        params.with_trials(number(key, value, "an integer in [1, 4294967295]")?)?
                }
                "p0" => params = params.with_p0(number(key, value, "a probability in (0, 1]")?)?,
                "beta" => params = params.with_beta(number(key, value, "a finite value >= 0")?)?,
                "kappa" => params = params.with_kappa(number(key, value, "a finite value > 0")?)?,
                "round_budget" => {
                    params = params.with_round_budget(number(
                        key,
                        value,
                        "an integer in [1, 4294967295]",
                    )?)?
                }
                "cache_capacity" => {
                    params = params.with_cache_capacity(number(
                        key,
                        value,
                        "an integer in [0, 4294967295]",
                    )?)
                }
                "grid" => {
                    grid = list(value, |s| {
                        number(key, s, "comma-separated integers >= 2, strictly increasing")
                    })?
                }
                "policies" => policies = list(value, PolicyKind::from_str)?,
                "csv_path" => {
                    if value.trim().is_empty() {
                        return Err(Error::InvalidParam {
                            key,
                            value: String::new(),
                            expected: "a non-empty path",
                        });
                    }
                    cfg.csv_path = PathBuf::from(value.trim());
                }
                "svg_path" => {
                    let v = value.trim();
                    cfg.svg_path = (!v.is_empty()).then(|| PathBuf::from(v));
                }
                "attempts_denominator" => cfg.attempts_denominator = value.parse()?,
                "threads" => cfg.threads = number(key, value, "a non-negative integer")?,
                _ => unreachable!("canonical_key returned {key}"),
            }
        }

        cfg.spec = SweepSpec::new(grid, policies, params)?;
        Ok(cfg)
    }
}
