use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::bounds::{
    azuma_max_tail_bound, corollary1_tail_bound, freedman_unit_bound, theorem1_tail_bound, theorem2_tail_bound,
    Alpha, BoundKind, BoundParams, Provenance, TailBound,
};
use crate::error::{Error, Result};
use crate::simulate::{enumerate_exact, mc_tail_estimate_partitioned, Event, GeneratorSpec};
use crate::witness::{optimality_certificate, scan_certificates};

use super::config::{OracleChoice, SuiteConfig, SweepConfig};
use super::report::{summarize, write_summary_csv, write_verdict_line, SuiteSummary};
use super::{check_dominance, Direction, OracleKind, VerificationVerdict};

/// Verdicts and summary of a sweep written to disk.
#[derive(Debug, Clone)]
pub struct SuiteRun {
    pub verdicts: Vec<VerificationVerdict>,
    pub summaries: Vec<SuiteSummary>,
    pub output: Option<PathBuf>,
    pub summary: Option<PathBuf>,
}

impl SuiteRun {
    pub fn failures(&self) -> usize {
        self.verdicts.iter().filter(|v| v.is_failure()).count()
    }
}

/// Runs every suite of `config` and returns the verdicts in row order.
pub fn run_suite(config: &SweepConfig) -> Result<Vec<VerificationVerdict>> {
    let mut verdicts = Vec::new();
    run_streaming(config, &mut |v| {
        verdicts.push(v.clone());
        Ok(())
    })?;
    Ok(verdicts)
}

/// Runs `config`, streaming verdicts to `config.output` (JSON lines) and
/// writing the CSV summary to `config.summary`, when set.
pub fn run_suite_to_files(config: &SweepConfig) -> Result<SuiteRun> {
    let mut writer = match &config.output {
        Some(path) => Some(BufWriter::new(create(path)?)),
        None => None,
    };
    let mut verdicts = Vec::new();
    run_streaming(config, &mut |v| {
        if let Some(w) = writer.as_mut() {
            write_verdict_line(w, v)?;
        }
        verdicts.push(v.clone());
        Ok(())
    })?;
    if let Some(mut w) = writer {
        w.flush()?;
    }
    let declared: Vec<(String, String)> = config
        .suites
        .iter()
        .map(|s| (s.name(), s.bound.name().to_string()))
        .collect();
    let summaries = summarize(&verdicts, &declared);
    if let Some(path) = &config.summary {
        let mut w = BufWriter::new(create(path)?);
        write_summary_csv(&mut w, &summaries)?;
        w.flush()?;
    }
    Ok(SuiteRun {
        verdicts,
        summaries,
        output: config.output.clone(),
        summary: config.summary.clone(),
    })
}

fn create(path: &Path) -> Result<File> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent)?;
    }
    Ok(File::create(path)?)
}

type Sink<'a> = dyn FnMut(&VerificationVerdict) -> Result<()> + 'a;

fn run_streaming(config: &SweepConfig, sink: &mut Sink<'_>) -> Result<()> {
    config.validate()?;
    let mut row = 0u64;
    for suite in &config.suites {
        let mut emit = |mut v: VerificationVerdict| -> Result<()> {
            v.suite = suite.name();
            v.row = row;
            row += 1;
            sink(&v)
        };
        match suite.bound {
            BoundKind::Certificate => certificate_suite(config, suite, &mut emit)?,
            _ => bound_suite(config, suite, &mut emit)?,
        }
    }
    Ok(())
}

/// The law's constants `(C1, C2)` for `bound`, unless overridden.
fn constants(suite: &SuiteConfig, spec: &GeneratorSpec, alpha: Alpha) -> (f64, f64) {
    let (c1, c2) = match suite.bound {
        BoundKind::Theorem1 => (spec.stretched_moment(alpha), 0.0),
        BoundKind::Theorem2 => (spec.positive_part_moment(alpha), 0.0),
        BoundKind::Corollary1 => (spec.positive_part_moment(alpha), spec.variance_moment(alpha)),
        _ => (0.0, 0.0),
    };
    (suite.c1.unwrap_or(c1), suite.c2.unwrap_or(c2))
}

/// Checks that `spec` meets the hypotheses of the alpha-free lemmas.
fn check_hypotheses(bound: BoundKind, spec: &GeneratorSpec) -> Result<()> {
    let support = spec.finite_support();
    let ok = match bound {
        BoundKind::Lemma1 => {
            spec.is_martingale() && support.is_some_and(|s| s.iter().all(|a| a.value.abs() <= 1.0))
        }
        BoundKind::Lemma2 => support.is_some_and(|s| s.iter().all(|a| a.value <= 1.0)),
        _ => true,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::Config(format!("generator {spec} does not satisfy the hypotheses of {bound}")))
    }
}

fn bound_suite(config: &SweepConfig, suite: &SuiteConfig, emit: &mut dyn FnMut(VerificationVerdict) -> Result<()>) -> Result<()> {
    let trials = suite.trials.unwrap_or(config.trials);
    let ns = suite.ns()?;
    for alpha in suite.alphas()? {
        let spec = suite.generator().build(alpha)?;
        check_hypotheses(suite.bound, &spec)?;
        let (c1, c2) = alpha.map_or((0.0, 0.0), |a| constants(suite, &spec, a));
        for &n in &ns {
            for x in suite.xs(n)? {
                let rows: Vec<(TailBound, Event)> = match suite.bound {
                    BoundKind::Lemma1 => vec![(azuma_max_tail_bound(n, x)?, Event::MaxAtLeast { level: x })],
                    BoundKind::Lemma2 => suite
                        .vs()?
                        .into_iter()
                        .map(|v| {
                            let mut b = freedman_unit_bound(x, v)?;
                            b = with_param(b, "n", n as f64);
                            Ok((b, Event::JointVariance { level: x, v }))
                        })
                        .collect::<Result<_>>()?,
                    BoundKind::Theorem2 => suite
                        .vs()?
                        .into_iter()
                        .map(|v| {
                            let alpha = alpha.expect("theorem2 has alpha");
                            let params = BoundParams::new(alpha, x, n).with_v(v).with_c1(c1);
                            Ok((theorem2_tail_bound(&params)?, Event::JointVariance { level: x, v }))
                        })
                        .collect::<Result<_>>()?,
                    BoundKind::Theorem1 | BoundKind::Corollary1 => {
                        let alpha = alpha.expect("moment bounds have alpha");
                        let params = BoundParams::new(alpha, x, n).with_c1(c1).with_c2(c2);
                        let bound = if suite.bound == BoundKind::Theorem1 {
                            theorem1_tail_bound(&params)?
                        } else {
                            corollary1_tail_bound(&params)?
                        };
                        vec![(bound, Event::MaxAtLeast { level: n as f64 * x })]
                    }
                    BoundKind::Certificate => unreachable!("handled separately"),
                };
                for (bound, event) in rows {
                    let mut verdict = evaluate(config, suite.oracle, trials, &spec, &event, n, &bound)?;
                    verdict.generator = spec.to_string();
                    emit(verdict)?;
                }
            }
        }
    }
    Ok(())
}

fn with_param(bound: TailBound, name: &'static str, value: f64) -> TailBound {
    let mut provenance = bound.provenance().clone();
    provenance.params.push((name, value));
    TailBound::from_log(bound.log_value(), provenance)
}

/// Evaluates one row's oracle and compares it with `bound`.
fn evaluate(
    config: &SweepConfig,
    choice: OracleChoice,
    trials: u64,
    spec: &GeneratorSpec,
    event: &Event,
    n: u64,
    bound: &TailBound,
) -> Result<VerificationVerdict> {
    if choice != OracleChoice::MonteCarlo {
        let steps = u32::try_from(n).unwrap_or(u32::MAX);
        match enumerate_exact(spec, steps, event, config.enumeration_budget) {
            Ok(p) => {
                let mut v = check_dominance(bound, p.ln(), Direction::Upper);
                v.oracle_kind = OracleKind::Enumeration;
                return Ok(v);
            }
            Err(e @ (Error::BudgetExceeded { .. } | Error::UnsupportedSpec(_))) => {
                if choice == OracleChoice::Enumeration {
                    return Ok(VerificationVerdict::skipped_row(bound, OracleKind::Enumeration, e.to_string()));
                }
            }
            Err(e) => return Err(e),
        }
    }
    let est = mc_tail_estimate_partitioned(spec, event, n, trials, config.seed, config.delta, config.partitions)?;
    let mut v = check_dominance(bound, est.upper_cb.ln(), Direction::Upper);
    v.oracle_kind = OracleKind::MonteCarloUcb;
    v.seed = Some(est.seed);
    v.delta = Some(est.delta);
    v.hits = Some(est.hits);
    v.trials = Some(est.trials);
    Ok(v)
}

/// Validity rows (certificate below the exact witness probability) for each
/// `n` of the grid, then one scan row per alpha over `[N0, n_max]`.
fn certificate_suite(
    config: &SweepConfig,
    suite: &SuiteConfig,
    emit: &mut dyn FnMut(VerificationVerdict) -> Result<()>,
) -> Result<()> {
    let ns = suite.ns()?;
    for alpha in suite.alphas()? {
        let alpha = alpha.expect("certificate has alpha");
        let spec = suite.generator().build(Some(alpha))?;
        let a = alpha.value();
        for &n in &ns {
            let record = optimality_certificate(alpha, n)?;
            let provenance = Provenance::new(BoundKind::Certificate, &[("alpha", a), ("n", n as f64)]);
            let event = Event::MaxAtLeast { level: n as f64 };
            let steps = u32::try_from(n).unwrap_or(u32::MAX);
            let mut verdict = match enumerate_exact(&spec, steps, &event, config.enumeration_budget) {
                Ok(p) => {
                    let exact = TailBound::from_log(p.ln(), provenance);
                    check_dominance(&exact, record.certificate_log, Direction::Lower)
                }
                Err(e @ (Error::BudgetExceeded { .. } | Error::UnsupportedSpec(_))) => {
                    let claim = TailBound::from_log(record.certificate_log, provenance);
                    let mut v = VerificationVerdict::skipped_row(&claim, OracleKind::Enumeration, e.to_string());
                    v.direction = Direction::Lower;
                    v.vacuous = false;
                    std::mem::swap(&mut v.bound_log_value, &mut v.oracle_log_value);
                    v
                }
                Err(e) => return Err(e),
            };
            verdict.oracle_kind = OracleKind::Enumeration;
            verdict.generator = spec.to_string();
            emit(verdict)?;
        }

        let n_max = suite.n_max();
        let scan = scan_certificates(alpha, n_max)?;
        let record = match scan.tightest {
            Some(r) => r,
            None => optimality_certificate(alpha, n_max)?,
        };
        let mut params = vec![("alpha", a), ("n", record.n as f64), ("n_max", n_max as f64)];
        if let Some(n0) = scan.n0 {
            params.push(("n0", n0 as f64));
        }
        let certificate = TailBound::from_log(record.certificate_log, Provenance::new(BoundKind::Certificate, &params));
        let mut verdict = check_dominance(&certificate, record.threshold_log, Direction::Lower);
        verdict.dominates &= scan.n0.is_some();
        verdict.oracle_kind = OracleKind::Certificate;
        verdict.generator = spec.to_string();
        emit(verdict)?;
    }
    Ok(())
}
