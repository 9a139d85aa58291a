//! Verification harness: compares bounds with exact or conservative oracles
//! over parameter grids and reports one verdict per grid point.

mod config;
mod report;
mod suite;

use serde::{Deserialize, Serialize};

use crate::bounds::TailBound;
use crate::error::{Error, Result};

pub use config::{GeneratorConfig, Grid, OracleChoice, SuiteConfig, SweepConfig, XGrid};
pub use report::{read_jsonl, summarize, write_jsonl, write_summary_csv, SuiteSummary, SUMMARY_HEADER};
pub use suite::{run_suite, run_suite_to_files, SuiteRun};

/// Which side of the inequality the bound sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// The bound claims `P(event) <= bound`.
    Upper,
    /// The bound claims `P(event) >= bound`.
    Lower,
}

impl Direction {
    pub fn name(self) -> &'static str {
        match self {
            Direction::Upper => "upper",
            Direction::Lower => "lower",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OracleKind {
    Enumeration,
    MonteCarloUcb,
    Certificate,
}

impl OracleKind {
    pub fn name(self) -> &'static str {
        match self {
            OracleKind::Enumeration => "enumeration",
            OracleKind::MonteCarloUcb => "monte-carlo-ucb",
            OracleKind::Certificate => "certificate",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        [OracleKind::Enumeration, OracleKind::MonteCarloUcb, OracleKind::Certificate]
            .into_iter()
            .find(|k| k.name() == name)
    }
}

/// Outcome of comparing one bound with one oracle value.
///
/// `slack_log = bound_log_value - oracle_log_value`. For upper bounds the row
/// dominates when `slack_log >= 0`. For lower bounds the exact quantity is
/// stored as the oracle and the claimed lower bound as the bound, so the row
/// dominates when `slack_log <= 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct VerificationVerdict {
    pub suite: String,
    pub row: u64,
    pub bound_name: String,
    pub generator: String,
    pub params: Vec<(String, f64)>,
    pub oracle_kind: OracleKind,
    pub direction: Direction,
    pub oracle_log_value: f64,
    pub bound_log_value: f64,
    pub slack_log: f64,
    pub dominates: bool,
    /// Raw upper bound above one.
    pub vacuous: bool,
    pub seed: Option<u64>,
    pub delta: Option<f64>,
    pub hits: Option<u64>,
    pub trials: Option<u64>,
    /// Reason the row could not be checked (e.g. enumeration budget).
    pub skipped: Option<String>,
}

impl VerificationVerdict {
    pub fn param(&self, name: &str) -> Option<f64> {
        self.params.iter().find(|(k, _)| k == name).map(|(_, v)| *v)
    }

    pub fn is_checked(&self) -> bool {
        self.skipped.is_none()
    }

    /// A checked row that does not dominate.
    pub fn is_failure(&self) -> bool {
        self.is_checked() && !self.dominates
    }

    pub(crate) fn skipped_row(bound: &TailBound, oracle_kind: OracleKind, reason: String) -> Self {
        let mut verdict = check_dominance(bound, f64::NAN, Direction::Upper);
        verdict.oracle_kind = oracle_kind;
        verdict.slack_log = f64::NAN;
        verdict.dominates = false;
        verdict.skipped = Some(reason);
        verdict
    }
}

/// Compares `bound` with an oracle log-probability.
///
/// For [`Direction::Upper`], `oracle_log` is (a conservative upper estimate
/// of) the true log-probability. For [`Direction::Lower`], `bound` is the
/// exact or certified quantity and `oracle_log` is the claimed lower bound;
/// the stored roles are swapped so that `bound_log_value` is the claim.
pub fn check_dominance(bound: &TailBound, oracle_log: f64, direction: Direction) -> VerificationVerdict {
    let provenance = bound.provenance();
    let (bound_log_value, oracle_log_value) = match direction {
        Direction::Upper => (bound.log_value(), oracle_log),
        Direction::Lower => (oracle_log, bound.log_value()),
    };
    let slack_log = bound_log_value - oracle_log_value;
    let dominates = match direction {
        Direction::Upper => slack_log >= 0.0 || bound_log_value == f64::INFINITY,
        Direction::Lower => slack_log <= 0.0 || bound_log_value == f64::NEG_INFINITY,
    };
    VerificationVerdict {
        suite: String::new(),
        row: 0,
        bound_name: provenance.bound.name().to_string(),
        generator: String::new(),
        params: provenance.params.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
        oracle_kind: match direction {
            Direction::Upper => OracleKind::Enumeration,
            Direction::Lower => OracleKind::Certificate,
        },
        direction,
        oracle_log_value,
        bound_log_value,
        slack_log,
        dominates,
        vacuous: direction == Direction::Upper && bound.is_vacuous(),
        seed: None,
        delta: None,
        hits: None,
        trials: None,
        skipped: None,
    }
}

/// Two-sided Kolmogorov–Smirnov distance between the empirical CDF of
/// `sorted` and `1 - tail`.
pub fn ks_statistic<F: Fn(f64) -> f64>(sorted: &[f64], tail: F) -> Result<f64> {
    if sorted.is_empty() {
        return Err(Error::EmptySample);
    }
    if sorted.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::Config("ks_statistic needs samples in ascending order".into()));
    }
    let n = sorted.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in sorted.iter().enumerate() {
        let cdf = 1.0 - tail(x);
        let above = (i + 1) as f64 / n - cdf;
        let below = cdf - i as f64 / n;
        d = d.max(above).max(below);
    }
    Ok(d)
}
