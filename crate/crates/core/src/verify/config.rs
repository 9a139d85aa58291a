use std::path::PathBuf;

use serde::Deserialize;

use crate::bounds::{Alpha, BoundKind};
use crate::error::{Error, Result};
use crate::simulate::{FiniteLaw, GeneratorSpec, TruncatedHeavy, DEFAULT_ENUMERATION_BUDGET};
use crate::witness::WitnessDistribution;

fn default_seed() -> u64 {
    1
}

fn default_delta() -> f64 {
    1e-3
}

fn default_trials() -> u64 {
    1_000_000
}

fn default_partitions() -> usize {
    1
}

fn default_budget() -> u64 {
    DEFAULT_ENUMERATION_BUDGET
}

fn default_drift() -> f64 {
    -0.01
}

fn default_cap() -> f64 {
    TruncatedHeavy::DEFAULT_CAP
}

fn default_step() -> u64 {
    1
}

/// A verification sweep: global sampling settings and a list of suites.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    #[serde(default = "default_seed")]
    pub seed: u64,
    /// Per-row miss probability of the Monte Carlo upper confidence bound.
    #[serde(default = "default_delta")]
    pub delta: f64,
    /// Monte Carlo paths per row.
    #[serde(default = "default_trials")]
    pub trials: u64,
    /// Number of trial blocks; does not affect results.
    #[serde(default = "default_partitions")]
    pub partitions: usize,
    /// Largest `support^n` handed to exhaustive enumeration.
    #[serde(default = "default_budget")]
    pub enumeration_budget: u64,
    /// JSON-lines verdict file.
    #[serde(default)]
    pub output: Option<PathBuf>,
    /// CSV summary file.
    #[serde(default)]
    pub summary: Option<PathBuf>,
    #[serde(default, rename = "suite")]
    pub suites: Vec<SuiteConfig>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            seed: default_seed(),
            delta: default_delta(),
            trials: default_trials(),
            partitions: default_partitions(),
            enumeration_budget: default_budget(),
            output: None,
            summary: None,
            suites: Vec::new(),
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::domain("delta", self.delta, "must lie in (0, 1)"));
        }
        if self.trials == 0 {
            return Err(Error::domain("trials", 0.0, "must be at least 1"));
        }
        if self.partitions == 0 {
            return Err(Error::domain("partitions", 0.0, "must be at least 1"));
        }
        for suite in &self.suites {
            suite
                .validate()
                .map_err(|e| Error::Config(format!("suite `{}`: {e}", suite.name())))?;
        }
        Ok(())
    }
}

/// One bound checked over the product of its grids.
///
/// Grids left out take per-bound defaults (see `docs/formats.md`); an
/// explicitly empty grid yields no rows.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteConfig {
    #[serde(default)]
    pub name: Option<String>,
    pub bound: BoundKind,
    #[serde(default)]
    pub generator: Option<GeneratorConfig>,
    #[serde(default)]
    pub alpha: Option<Vec<f64>>,
    #[serde(default)]
    pub n: Option<Grid>,
    #[serde(default)]
    pub x: Option<XGrid>,
    #[serde(default)]
    pub v: Option<Vec<f64>>,
    #[serde(default)]
    pub oracle: OracleChoice,
    /// Overrides the generator's closed-form `C1`.
    #[serde(default)]
    pub c1: Option<f64>,
    /// Overrides the generator's closed-form `C2`.
    #[serde(default)]
    pub c2: Option<f64>,
    /// Overrides the sweep-wide Monte Carlo trial count.
    #[serde(default)]
    pub trials: Option<u64>,
    /// Upper end of the certificate scan.
    #[serde(default)]
    pub n_max: Option<u64>,
}

impl SuiteConfig {
    pub fn new(bound: BoundKind) -> Self {
        SuiteConfig {
            name: None,
            bound,
            generator: None,
            alpha: None,
            n: None,
            x: None,
            v: None,
            oracle: OracleChoice::Auto,
            c1: None,
            c2: None,
            trials: None,
            n_max: None,
        }
    }

    pub fn name(&self) -> String {
        self.name.clone().unwrap_or_else(|| self.bound.name().to_string())
    }

    pub fn generator(&self) -> GeneratorConfig {
        self.generator.clone().unwrap_or(match self.bound {
            BoundKind::Lemma2 | BoundKind::Theorem2 => GeneratorConfig::ThreePoint {},
            BoundKind::Certificate => GeneratorConfig::StationaryWitness { alpha: None },
            _ => GeneratorConfig::Rademacher {},
        })
    }

    /// `None` for the bounds that do not depend on `alpha`.
    pub fn alphas(&self) -> Result<Vec<Option<Alpha>>> {
        if matches!(self.bound, BoundKind::Lemma1 | BoundKind::Lemma2) {
            return Ok(vec![None]);
        }
        let values = self.alpha.clone().unwrap_or_else(|| match self.bound {
            BoundKind::Theorem1 => vec![1.0 / 3.0, 0.5],
            BoundKind::Corollary1 => vec![0.5],
            _ => vec![0.3, 0.5, 0.7],
        });
        values.into_iter().map(|a| Alpha::new(a).map(Some)).collect()
    }

    pub fn ns(&self) -> Result<Vec<u64>> {
        let grid = self.n.clone().unwrap_or_else(|| match self.bound {
            BoundKind::Lemma1 => Grid::Range { from: 1, to: 20, step: 1 },
            BoundKind::Lemma2 | BoundKind::Theorem2 => Grid::Range { from: 1, to: 12, step: 1 },
            BoundKind::Certificate => Grid::Range { from: 1, to: 16, step: 1 },
            _ => Grid::List(vec![16, 64, 256, 1024]),
        });
        let ns = grid.values()?;
        if ns.contains(&0) {
            return Err(Error::domain("n", 0.0, "must be at least 1"));
        }
        Ok(ns)
    }

    /// Deviation levels at horizon `n`.
    pub fn xs(&self, n: u64) -> Result<Vec<f64>> {
        let grid = self.x.clone().unwrap_or_else(|| match self.bound {
            BoundKind::Lemma1 => XGrid::Keyword(XKeyword::Integers),
            BoundKind::Lemma2 | BoundKind::Theorem2 => XGrid::List(vec![1.0, 2.0, 3.0]),
            _ => XGrid::List(vec![1.0]),
        });
        let xs = grid.values(n)?;
        if let Some(&bad) = xs.iter().find(|x| !(**x > 0.0 && x.is_finite())) {
            return Err(Error::domain("x", bad, "must be positive and finite"));
        }
        Ok(xs)
    }

    pub fn vs(&self) -> Result<Vec<f64>> {
        let vs = self.v.clone().unwrap_or_else(|| vec![1.0, 2.0]);
        if let Some(&bad) = vs.iter().find(|v| !(**v > 0.0 && v.is_finite())) {
            return Err(Error::domain("v", bad, "must be positive and finite"));
        }
        Ok(vs)
    }

    pub fn n_max(&self) -> u64 {
        self.n_max.unwrap_or(1_000_000)
    }

    pub fn validate(&self) -> Result<()> {
        let alphas = self.alphas()?;
        for a in &alphas {
            self.generator().build(*a)?;
        }
        for n in self.ns()? {
            self.xs(n)?;
        }
        if matches!(self.bound, BoundKind::Lemma2 | BoundKind::Theorem2) {
            self.vs()?;
        }
        for (name, value) in [("c1", self.c1), ("c2", self.c2)] {
            if let Some(c) = value {
                if !(c >= 0.0 && c.is_finite()) {
                    return Err(Error::domain(name, c, "must be nonnegative and finite"));
                }
            }
        }
        if self.trials == Some(0) {
            return Err(Error::domain("trials", 0.0, "must be at least 1"));
        }
        if self.n_max == Some(0) {
            return Err(Error::domain("n_max", 0.0, "must be at least 1"));
        }
        Ok(())
    }
}

/// Which oracle a suite uses.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OracleChoice {
    /// Enumeration when the budget admits it, Monte Carlo otherwise.
    #[default]
    Auto,
    Enumeration,
    MonteCarlo,
}

/// Generator of a suite. Kinds that need `alpha` take the row's value unless
/// one is given here.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum GeneratorConfig {
    Rademacher {},
    /// `{-1, 0, +1}` with probabilities `(1/4, 1/2, 1/4)`.
    ThreePoint {},
    /// Three-point law shifted to conditional mean `drift <= 0`.
    SuperCentered {
        #[serde(default = "default_drift")]
        drift: f64,
    },
    StationaryWitness {
        #[serde(default)]
        alpha: Option<f64>,
    },
    TruncatedHeavy {
        #[serde(default)]
        alpha: Option<f64>,
        #[serde(default = "default_cap")]
        cap: f64,
    },
}

impl GeneratorConfig {
    pub fn build(&self, row_alpha: Option<Alpha>) -> Result<GeneratorSpec> {
        let pick = |own: Option<f64>| -> Result<Alpha> {
            match (own, row_alpha) {
                (Some(a), _) => Alpha::new(a),
                (None, Some(a)) => Ok(a),
                (None, None) => Err(Error::Config(format!("generator {self:?} needs an alpha"))),
            }
        };
        Ok(match *self {
            GeneratorConfig::Rademacher {} => GeneratorSpec::Rademacher,
            GeneratorConfig::ThreePoint {} => GeneratorSpec::ScaledBounded(FiniteLaw::three_point()),
            GeneratorConfig::SuperCentered { drift } => GeneratorSpec::ScaledBounded(FiniteLaw::super_centered(drift)?),
            GeneratorConfig::StationaryWitness { alpha } => {
                GeneratorSpec::StationaryWitness(WitnessDistribution::new(pick(alpha)?))
            }
            GeneratorConfig::TruncatedHeavy { alpha, cap } => {
                GeneratorSpec::TruncatedHeavy(TruncatedHeavy::new(pick(alpha)?, cap)?)
            }
        })
    }
}

/// Integer grid: an explicit list or an inclusive arithmetic range.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum Grid {
    List(Vec<u64>),
    Range {
        from: u64,
        to: u64,
        #[serde(default = "default_step")]
        step: u64,
    },
}

impl Grid {
    pub fn values(&self) -> Result<Vec<u64>> {
        match *self {
            Grid::List(ref v) => Ok(v.clone()),
            Grid::Range { from, to, step } => {
                if step == 0 {
                    return Err(Error::domain("step", 0.0, "must be at least 1"));
                }
                Ok((from..=to).step_by(step as usize).collect())
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum XKeyword {
    /// Every integer in `[1, n]`.
    Integers,
}

/// Deviation grid: a list, an inclusive range, or `"integers"`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum XGrid {
    Keyword(XKeyword),
    List(Vec<f64>),
    Range { from: f64, to: f64, step: f64 },
}

impl XGrid {
    pub fn values(&self, n: u64) -> Result<Vec<f64>> {
        match *self {
            XGrid::Keyword(XKeyword::Integers) => Ok((1..=n).map(|x| x as f64).collect()),
            XGrid::List(ref v) => Ok(v.clone()),
            XGrid::Range { from, to, step } => {
                if step.is_nan() || step <= 0.0 {
                    return Err(Error::domain("step", step, "must be positive"));
                }
                let count = ((to - from) / step + 1e-9).floor();
                if count.is_nan() || count < 0.0 {
                    return Ok(Vec::new());
                }
                Ok((0..=count as u64).map(|i| from + i as f64 * step).collect())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(json: &str) -> std::result::Result<SweepConfig, serde_json::Error> {
        serde_json::from_str(json)
    }

    #[test]
    fn minimal_config_takes_defaults() {
        let c = parse(r#"{"suite": [{"bound": "lemma1"}]}"#).unwrap();
        c.validate().unwrap();
        assert_eq!(c.delta, 1e-3);
        assert_eq!(c.seed, 1);
        let s = &c.suites[0];
        assert_eq!(s.name(), "lemma1");
        assert_eq!(s.ns().unwrap(), (1..=20).collect::<Vec<_>>());
        assert_eq!(s.xs(3).unwrap(), vec![1.0, 2.0, 3.0]);
        assert_eq!(s.alphas().unwrap(), vec![None]);
        assert_eq!(s.generator(), GeneratorConfig::Rademacher {});
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(parse(r#"{"suite": [{"bound": "lemma1", "colour": 1}]}"#).is_err());
        assert!(parse(r#"{"sead": 3}"#).is_err());
        assert!(parse(r#"{"suite": [{"bound": "lemma3"}]}"#).is_err());
        assert!(parse(r#"{"suite": [{"bound": "lemma1", "generator": {"kind": "rademacher", "p": 1}}]}"#).is_err());
    }

    #[test]
    fn domain_rules() {
        let c = parse(r#"{"suite": [{"bound": "theorem1", "alpha": [0.0]}]}"#).unwrap();
        let err = c.validate().unwrap_err().to_string();
        assert!(err.contains("suite `theorem1`") && err.contains("alpha = 0"), "{err}");
        let c = parse(r#"{"delta": 1.5}"#).unwrap();
        assert!(c.validate().is_err());
        let c = parse(r#"{"suite": [{"bound": "theorem2", "v": [0.0]}]}"#).unwrap();
        assert!(c.validate().is_err());
        let c = parse(r#"{"suite": [{"bound": "lemma1", "x": [-1.0]}]}"#).unwrap();
        assert!(c.validate().is_err());
        let c = parse(r#"{"suite": [{"bound": "lemma1", "n": [0]}]}"#).unwrap();
        assert!(c.validate().is_err());
    }

    #[test]
    fn grids() {
        let c = parse(r#"{"suite": [{"bound": "theorem1", "n": {"from": 2, "to": 10, "step": 4}, "x": {"from": 0.5, "to": 1.5, "step": 0.5}}]}"#)
            .unwrap();
        let s = &c.suites[0];
        assert_eq!(s.ns().unwrap(), vec![2, 6, 10]);
        assert_eq!(s.xs(1).unwrap(), vec![0.5, 1.0, 1.5]);
        let c = parse(r#"{"suite": [{"bound": "lemma1", "n": []}]}"#).unwrap();
        assert!(c.suites[0].ns().unwrap().is_empty());
    }

    #[test]
    fn generators_pick_up_row_alpha() {
        let a = Alpha::new(0.5).unwrap();
        let g = GeneratorConfig::TruncatedHeavy { alpha: None, cap: 3.0 };
        assert_eq!(g.build(Some(a)).unwrap().kind_name(), "truncated-heavy");
        assert!(g.build(None).is_err());
        let g = GeneratorConfig::SuperCentered { drift: 0.2 };
        assert!(g.build(None).is_err());
    }
}
