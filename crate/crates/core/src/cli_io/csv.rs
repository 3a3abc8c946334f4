//! CSV tables of simulated and analytic sweep points.
//!
//! Header:
//! `source,policy,N,trials,successes,success_rate,mean_attempts,success_stderr,cache_hits,seed`
//!
//! Rows are sorted by `(source, policy, N)`, floats carry six decimals, lines
//! end in `\n` and nothing is quoted. Analytic rows leave `trials`,
//! `successes`, `cache_hits` and `seed` empty and report a zero standard error.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::model::PolicyKind;
use crate::stats::{AnalyticRow, PointSummary};

pub const HEADER: &str =
    "source,policy,N,trials,successes,success_rate,mean_attempts,success_stderr,cache_hits,seed";

/// One parsed CSV line.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvRow {
    pub source: String,
    pub policy: PolicyKind,
    pub n: u32,
    pub trials: Option<u32>,
    pub successes: Option<u32>,
    pub success_rate: f64,
    pub mean_attempts: f64,
    pub success_stderr: f64,
    pub cache_hits: Option<u32>,
    pub seed: Option<u64>,
}

fn sim_line(s: &PointSummary) -> String {
    format!(
        "sim,{},{},{},{},{:.6},{:.6},{:.6},{},{}",
        s.policy.name(),
        s.n,
        s.trials,
        s.successes,
        s.success_rate,
        s.mean_attempts,
        s.success_stderr,
        s.cache_hits,
        s.master_seed
    )
}

fn analytic_line(a: &AnalyticRow) -> String {
    format!(
        "analytic,{},{},,,{:.6},{:.6},{:.6},,",
        a.policy.name(),
        a.n,
        a.success_rate,
        a.mean_attempts,
        0.0
    )
}

/// Renders the table as a string.
pub fn render_csv(summaries: &[PointSummary], analytic: &[AnalyticRow]) -> Result<String> {
    if summaries.is_empty() && analytic.is_empty() {
        return Err(Error::NothingToWrite);
    }
    let mut rows: Vec<(&'static str, &'static str, u32, String)> = summaries
        .iter()
        .map(|s| ("sim", s.policy.name(), s.n, sim_line(s)))
        .chain(
            analytic
                .iter()
                .map(|a| ("analytic", a.policy.name(), a.n, analytic_line(a))),
        )
        .collect();
    rows.sort_by(|a, b| (a.0, a.1, a.2).cmp(&(b.0, b.1, b.2)));

    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(HEADER);
    out.push('\n');
    for (.., line) in rows {
        let _ = writeln!(out, "{line}");
    }
    Ok(out)
}

pub fn emit_csv(summaries: &[PointSummary], analytic: &[AnalyticRow], path: &Path) -> Result<()> {
    let text = render_csv(summaries, analytic)?;
    std::fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn optional<T: std::str::FromStr>(field: &str, line: usize) -> Result<Option<T>> {
    if field.is_empty() {
        return Ok(None);
    }
    field
        .parse()
        .map(Some)
        .map_err(|_| Error::Config(format!("csv line {line}: bad field `{field}`")))
}

fn required<T: std::str::FromStr>(field: &str, line: usize) -> Result<T> {
    optional(field, line)?.ok_or_else(|| Error::Config(format!("csv line {line}: missing field")))
}

/// Parses a table written by [`render_csv`].
pub fn parse_csv(text: &str) -> Result<Vec<CsvRow>> {
    let mut lines = text.lines();
    if lines.next() != Some(HEADER) {
        return Err(Error::Config("csv: unexpected header".into()));
    }
    lines
        .enumerate()
        .map(|(i, line)| {
            let lineno = i + 2;
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 10 {
                return Err(Error::Config(format!(
                    "csv line {lineno}: expected 10 fields"
                )));
            }
            Ok(CsvRow {
                source: f[0].to_string(),
                policy: f[1].parse()?,
                n: required(f[2], lineno)?,
                trials: optional(f[3], lineno)?,
                successes: optional(f[4], lineno)?,
                success_rate: required(f[5], lineno)?,
                mean_attempts: required(f[6], lineno)?,
                success_stderr: required(f[7], lineno)?,
                cache_hits: optional(f[8], lineno)?,
                seed: optional(f[9], lineno)?,
            })
        })
        .collect()
}
