//! Command-line front end for `devbound-core`.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or domain error,
//! 3 I/O error.

use std::ffi::OsString;
use std::fs;
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use devbound_core::bounds::{
    azuma_max_tail_bound, corollary1_tail_bound, freedman_unit_bound, theorem1_constant, theorem1_tail_bound,
    theorem2_tail_bound, truncation_beta, truncation_level,
};
use devbound_core::format::{json_real, sig17};
use devbound_core::simulate::{enumerate_exact, mc_tail_estimate_partitioned, rng::substream};
use devbound_core::verify::{read_jsonl, run_suite_to_files, summarize, write_summary_csv};
use devbound_core::witness::scan_certificates;
use devbound_core::{
    Alpha, BoundParams, Error as CoreError, Event, FiniteLaw, GeneratorSpec, SweepConfig, TailBound, TruncatedHeavy,
    WitnessDistribution,
};
use thiserror::Error;

/// Environment variable naming the default output directory of `verify`.
pub const OUT_DIR_ENV: &str = "DEVBOUND_OUT_DIR";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(String),
    #[error("{failures} of {rows} rows do not dominate")]
    VerificationFailed { failures: usize, rows: usize },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::VerificationFailed { .. } => 1,
            CliError::Usage(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::Io(io) => CliError::Io(io.to_string()),
            CoreError::Domain { name, value, reason } => {
                CliError::Usage(format!("--{}: {name} = {value} {reason}", name.replace('_', "-")))
            }
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "devbound", version, about = "Large-deviation bounds for supermartingales")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a closed-form bound or constant.
    Bound(BoundArgs),
    /// Tail, quantile, samples or moment of the optimality witness law.
    Witness(WitnessArgs),
    /// Estimate an event probability by Monte Carlo or exact enumeration.
    Simulate(SimulateArgs),
    /// Run a verification sweep from a config file.
    Verify(VerifyArgs),
    /// Scan the optimality certificate and print N0.
    Certify(CertifyArgs),
    /// Summarise a JSON-lines verdict file as CSV.
    Report(ReportArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BoundWhat {
    Lemma1,
    Lemma2,
    Theorem1,
    Theorem2,
    Corollary1,
    /// The constant C(alpha, x) of theorem1.
    Constant,
    /// The stationary point of t^3 exp(-t^{2a/(1-a)}).
    Beta,
    /// The truncation level (x / (4 sqrt n))^{1-a}.
    Level,
}

#[derive(Debug, Args)]
pub struct Output {
    /// Print a single JSON object instead of plain numbers.
    #[arg(long)]
    pub json: bool,
    /// Also append the JSON record as one line to this file.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    #[arg(value_enum)]
    pub what: BoundWhat,
    /// Power alpha in (0, 1).
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Deviation level.
    #[arg(long)]
    pub x: Option<f64>,
    /// Horizon.
    #[arg(long)]
    pub n: Option<u64>,
    /// Variance level of the joint event.
    #[arg(long)]
    pub v: Option<f64>,
    /// Increment moment constant.
    #[arg(long)]
    pub c1: Option<f64>,
    /// Predictable-variation moment constant.
    #[arg(long)]
    pub c2: Option<f64>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WitnessWhat {
    Tail,
    Quantile,
    Sample,
    Moment,
}

#[derive(Debug, Args)]
pub struct WitnessArgs {
    #[arg(value_enum)]
    pub what: WitnessWhat,
    #[arg(long)]
    pub alpha: f64,
    /// Point at which to evaluate the tail.
    #[arg(long)]
    pub x: Option<f64>,
    /// Tail probability to invert.
    #[arg(long)]
    pub p: Option<f64>,
    /// Number of samples.
    #[arg(long, default_value_t = 1)]
    pub count: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GeneratorKind {
    Rademacher,
    ThreePoint,
    SuperCentered,
    StationaryWitness,
    TruncatedHeavy,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, value_enum, default_value = "rademacher")]
    pub generator: GeneratorKind,
    /// Alpha of the witness and truncated-heavy generators.
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long, default_value_t = -0.01, allow_negative_numbers = true)]
    pub drift: f64,
    #[arg(long, default_value_t = TruncatedHeavy::DEFAULT_CAP)]
    pub cap: f64,
    #[arg(long)]
    pub n: u64,
    /// Event `max_k S_k >= level`, or with `--v` the joint event
    /// `S_k >= level and <S>_k <= v^2 for some k`.
    #[arg(long, allow_negative_numbers = true)]
    pub level: f64,
    #[arg(long)]
    pub v: Option<f64>,
    #[arg(long, default_value_t = 1_000_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 1e-3)]
    pub delta: f64,
    /// Partition count; results do not depend on it.
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
    /// Enumerate all paths instead of sampling.
    #[arg(long)]
    pub exact: bool,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Sweep config (TOML).
    #[arg(long)]
    pub config: PathBuf,
    /// Output directory for the verdict and summary files.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Partition count; results do not depend on it.
    #[arg(long)]
    pub threads: Option<usize>,
    /// Overrides the config's master seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Print the run summary as a JSON object.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct CertifyArgs {
    #[arg(long)]
    pub alpha: f64,
    /// Largest horizon scanned.
    #[arg(long)]
    pub n_max: u64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// JSON-lines verdict file.
    pub input: PathBuf,
    /// Write the CSV here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Reads a sweep config. Missing or unreadable files are I/O errors;
/// syntax errors, unknown keys and domain violations are usage errors that
/// name the offending line when one is known.
pub fn load_config(path: &Path) -> CliResult<SweepConfig> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let config: SweepConfig = toml::from_str(&text).map_err(|e| {
        let line = e.span().map(|s| text[..s.start].matches('\n').count() + 1);
        let message = e.message().trim_end().to_string();
        match line {
            Some(l) => CliError::Usage(format!("{}:{l}: {message}", path.display())),
            None => CliError::Usage(format!("{}: {message}", path.display())),
        }
    })?;
    config
        .validate()
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    Ok(config)
}

/// A JSON object with keys in insertion order and reals at 17 significant digits.
#[derive(Default)]
struct JsonObject(Vec<String>);

impl JsonObject {
    fn key(k: &str) -> String {
        serde_json::to_string(k).expect("strings serialize")
    }

    fn real(mut self, k: &str, v: f64) -> Self {
        self.0.push(format!("{}:{}", Self::key(k), json_real(v)));
        self
    }

    fn int(mut self, k: &str, v: u64) -> Self {
        self.0.push(format!("{}:{v}", Self::key(k)));
        self
    }

    fn boolean(mut self, k: &str, v: bool) -> Self {
        self.0.push(format!("{}:{v}", Self::key(k)));
        self
    }

    fn string(mut self, k: &str, v: &str) -> Self {
        self.0.push(format!("{}:{}", Self::key(k), Self::key(v)));
        self
    }

    fn raw(mut self, k: &str, v: String) -> Self {
        self.0.push(format!("{}:{v}", Self::key(k)));
        self
    }

    fn render(&self) -> String {
        format!("{{{}}}", self.0.join(","))
    }
}

fn emit<W: Write>(stdout: &mut W, output: &Output, record: &JsonObject, text: &[String]) -> CliResult<()> {
    let line = record.render();
    if output.json {
        writeln!(stdout, "{line}")?;
    } else {
        for t in text {
            writeln!(stdout, "{t}")?;
        }
    }
    if let Some(path) = &output.out {
        let mut f = fs::OpenOptions::new()
            .create(true)
            .append(true)
            .open(path)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        writeln!(f, "{line}")?;
    }
    Ok(())
}

fn need<T>(value: Option<T>, flag: &str, what: &str) -> CliResult<T> {
    value.ok_or_else(|| CliError::Usage(format!("{what} needs --{flag}")))
}

fn alpha_flag(value: f64) -> CliResult<Alpha> {
    Ok(Alpha::new(value)?)
}

fn bound_record(bound: &TailBound) -> JsonObject {
    let params = bound
        .provenance()
        .params
        .iter()
        .fold(JsonObject::default(), |o, (k, v)| o.real(k, *v));
    JsonObject::default()
        .string("bound", bound.provenance().bound.name())
        .raw("params", params.render())
        .real("log_value", bound.log_value())
        .real("clipped", bound.clipped())
        .real("raw", bound.raw())
        .boolean("vacuous", bound.is_vacuous())
}

fn cmd_bound<W: Write>(args: &BoundArgs, out: &mut W) -> CliResult<()> {
    let what = format!("{:?}", args.what).to_lowercase();
    let alpha = || -> CliResult<Alpha> { alpha_flag(need(args.alpha, "alpha", &what)?) };
    let x = || need(args.x, "x", &what);
    let n = || need(args.n, "n", &what);
    let v = || need(args.v, "v", &what);
    let c1 = || need(args.c1, "c1", &what);
    let c2 = || need(args.c2, "c2", &what);
    let scalar = |name: &str, value: f64, out: &mut W| -> CliResult<()> {
        let record = JsonObject::default().string("quantity", name).real("value", value);
        emit(out, &args.output, &record, &[sig17(value)])
    };
    let bound = match args.what {
        BoundWhat::Lemma1 => azuma_max_tail_bound(n()?, x()?)?,
        BoundWhat::Lemma2 => freedman_unit_bound(x()?, v()?)?,
        BoundWhat::Theorem1 => theorem1_tail_bound(&BoundParams::new(alpha()?, x()?, n()?).with_c1(c1()?))?,
        BoundWhat::Theorem2 => {
            theorem2_tail_bound(&BoundParams::new(alpha()?, x()?, n()?).with_v(v()?).with_c1(c1()?))?
        }
        BoundWhat::Corollary1 => {
            corollary1_tail_bound(&BoundParams::new(alpha()?, x()?, n()?).with_c1(c1()?).with_c2(c2()?))?
        }
        BoundWhat::Constant => return scalar("constant", theorem1_constant(alpha()?, x()?, c1()?)?, out),
        BoundWhat::Beta => return scalar("beta", truncation_beta(alpha()?), out),
        BoundWhat::Level => return scalar("level", truncation_level(alpha()?, x()?, n()?)?, out),
    };
    let mut text = vec![sig17(bound.clipped())];
    if bound.is_vacuous() {
        text.push(format!("vacuous: raw bound {} exceeds 1", sig17(bound.raw())));
    }
    emit(out, &args.output, &bound_record(&bound), &text)
}

fn cmd_witness<W: Write>(args: &WitnessArgs, out: &mut W) -> CliResult<()> {
    let w = WitnessDistribution::new(alpha_flag(args.alpha)?);
    let base = JsonObject::default().real("alpha", args.alpha);
    match args.what {
        WitnessWhat::Tail => {
            let x = need(args.x, "x", "tail")?;
            let t = w.tail(x);
            let record = base.real("x", x).real("tail", t).real("log_tail", w.log_tail(x));
            emit(out, &args.output, &record, &[sig17(t)])
        }
        WitnessWhat::Quantile => {
            let p = need(args.p, "p", "quantile")?;
            let q = w.quantile(p)?;
            emit(out, &args.output, &base.real("p", p).real("quantile", q), &[sig17(q)])
        }
        WitnessWhat::Sample => {
            let samples: Vec<f64> = (0..args.count).map(|i| w.sample(&mut substream(args.seed, i))).collect();
            let list = format!("[{}]", samples.iter().map(|s| json_real(*s)).collect::<Vec<_>>().join(","));
            let record = base.int("seed", args.seed).raw("samples", list);
            let text: Vec<String> = samples.iter().map(|s| sig17(*s)).collect();
            emit(out, &args.output, &record, &text)
        }
        WitnessWhat::Moment => {
            let m = w.moment();
            emit(out, &args.output, &base.real("moment", m), &[sig17(m)])
        }
    }
}

fn generator(args: &SimulateArgs) -> CliResult<GeneratorSpec> {
    let alpha = || -> CliResult<Alpha> { alpha_flag(need(args.alpha, "alpha", "this generator")?) };
    Ok(match args.generator {
        GeneratorKind::Rademacher => GeneratorSpec::Rademacher,
        GeneratorKind::ThreePoint => GeneratorSpec::ScaledBounded(FiniteLaw::three_point()),
        GeneratorKind::SuperCentered => GeneratorSpec::ScaledBounded(FiniteLaw::super_centered(args.drift)?),
        GeneratorKind::StationaryWitness => GeneratorSpec::StationaryWitness(WitnessDistribution::new(alpha()?)),
        GeneratorKind::TruncatedHeavy => GeneratorSpec::TruncatedHeavy(TruncatedHeavy::new(alpha()?, args.cap)?),
    })
}

fn cmd_simulate<W: Write>(args: &SimulateArgs, out: &mut W) -> CliResult<()> {
    let spec = generator(args)?;
    let event = match args.v {
        Some(v) if !(v > 0.0 && v.is_finite()) => return Err(CoreError::Domain { name: "v", value: v, reason: "must be positive and finite" }.into()),
        Some(v) => Event::JointVariance { level: args.level, v },
        None => Event::MaxAtLeast { level: args.level },
    };
    let base = JsonObject::default()
        .string("generator", &spec.to_string())
        .int("n", args.n)
        .real("level", args.level);
    let base = match args.v {
        Some(v) => base.real("v", v),
        None => base,
    };
    if args.exact {
        let steps = u32::try_from(args.n).unwrap_or(u32::MAX);
        let p = enumerate_exact(&spec, steps, &event, devbound_core::simulate::DEFAULT_ENUMERATION_BUDGET)?;
        return emit(out, &args.output, &base.real("probability", p), &[sig17(p)]);
    }
    let est = mc_tail_estimate_partitioned(&spec, &event, args.n, args.trials, args.seed, args.delta, args.threads)?;
    let record = base
        .int("hits", est.hits)
        .int("trials", est.trials)
        .real("point", est.point)
        .real("upper_cb", est.upper_cb)
        .real("delta", est.delta)
        .int("seed", est.seed);
    let text = vec![
        format!("hits {} of {}", est.hits, est.trials),
        format!("point {}", sig17(est.point)),
        format!("upper_cb {}", sig17(est.upper_cb)),
    ];
    emit(out, &args.output, &record, &text)
}

/// Where verify writes: `--out`, then the environment variable, then the
/// config file's directory.
fn output_dir(args: &VerifyArgs) -> PathBuf {
    args.out
        .clone()
        .or_else(|| std::env::var_os(OUT_DIR_ENV).filter(|s| !s.is_empty()).map(PathBuf::from))
        .unwrap_or_else(|| args.config.parent().map(Path::to_path_buf).unwrap_or_default())
}

fn cmd_verify<W: Write>(args: &VerifyArgs, out: &mut W) -> CliResult<()> {
    let mut config = load_config(&args.config)?;
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if let Some(threads) = args.threads {
        if threads == 0 {
            return Err(CliError::Usage("--threads: must be at least 1".into()));
        }
        config.partitions = threads;
    }
    let dir = output_dir(args);
    let stem = args
        .config
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "verify".to_string());
    let resolve = |p: Option<PathBuf>, default: String| {
        let p = p.unwrap_or_else(|| PathBuf::from(default));
        if p.is_absolute() {
            p
        } else {
            dir.join(p)
        }
    };
    config.output = Some(resolve(config.output.take(), format!("{stem}.jsonl")));
    config.summary = Some(resolve(config.summary.take(), format!("{stem}.summary.csv")));
    let run = run_suite_to_files(&config)?;
    let failures = run.failures();
    if args.json {
        let record = JsonObject::default()
            .int("rows", run.verdicts.len() as u64)
            .int("failures", failures as u64)
            .int("skipped", run.verdicts.iter().filter(|v| !v.is_checked()).count() as u64)
            .int("vacuous", run.verdicts.iter().filter(|v| v.vacuous).count() as u64)
            .string("output", &config.output.as_ref().expect("set above").display().to_string())
            .string("summary", &config.summary.as_ref().expect("set above").display().to_string());
        writeln!(out, "{}", record.render())?;
    } else {
        write_summary_csv(out, &run.summaries)?;
    }
    if failures > 0 {
        return Err(CliError::VerificationFailed { failures, rows: run.verdicts.len() });
    }
    Ok(())
}

fn cmd_certify<W: Write>(args: &CertifyArgs, out: &mut W) -> CliResult<()> {
    let scan = scan_certificates(alpha_flag(args.alpha)?, args.n_max)?;
    let mut record = JsonObject::default().real("alpha", args.alpha).int("n_max", args.n_max);
    record = match scan.n0 {
        Some(n0) => record.int("n0", n0),
        None => record.raw("n0", "null".to_string()),
    };
    if let Some(t) = scan.tightest {
        record = record
            .int("tightest_n", t.n)
            .real("tightest_certificate_log", t.certificate_log)
            .real("tightest_threshold_log", t.threshold_log);
    }
    let text = vec![scan.n0.map_or_else(|| "none".to_string(), |n| n.to_string())];
    emit(out, &args.output, &record, &text)
}

fn cmd_report<W: Write>(args: &ReportArgs, out: &mut W) -> CliResult<()> {
    let file = fs::File::open(&args.input).map_err(|e| CliError::Io(format!("{}: {e}", args.input.display())))?;
    let verdicts = read_jsonl(BufReader::new(file))?;
    let summaries = summarize(&verdicts, &[]);
    match &args.out {
        Some(path) => {
            let mut f = fs::File::create(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            write_summary_csv(&mut f, &summaries)?;
        }
        None => write_summary_csv(out, &summaries)?,
    }
    let failures = verdicts.iter().filter(|v| v.is_failure()).count();
    if failures > 0 {
        return Err(CliError::VerificationFailed { failures, rows: verdicts.len() });
    }
    Ok(())
}

/// Executes an already parsed command.
pub fn execute<W: Write>(cli: &Cli, out: &mut W) -> CliResult<()> {
    match &cli.command {
        Command::Bound(a) => cmd_bound(a, out),
        Command::Witness(a) => cmd_witness(a, out),
        Command::Simulate(a) => cmd_simulate(a, out),
        Command::Verify(a) => cmd_verify(a, out),
        Command::Certify(a) => cmd_certify(a, out),
        Command::Report(a) => cmd_report(a, out),
    }
}

/// Parses `argv`, runs it, and returns the process exit code. Results go to
/// `out`, diagnostics to `err`.
pub fn run<I, T, W, E>(argv: I, out: &mut W, err: &mut E) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
    W: Write,
    E: Write,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{rendered}");
            } else {
                let _ = write!(err, "{rendered}");
            }
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("devbound").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn theorem1_example() {
        let (code, out, _) = call(&["bound", "theorem1", "--alpha", "0.5", "--x", "1", "--c1", "1", "--n", "10000"]);
        assert_eq!(code, 0);
        let value: f64 = out.trim().parse().unwrap();
        assert!((value / (63.25 * (-25f64).exp()) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn domain_error_names_flag() {
        let (code, _, err) = call(&["bound", "theorem1", "--alpha", "1.5", "--x", "1", "--c1", "1", "--n", "10"]);
        assert_eq!(code, 2);
        assert!(err.contains("--alpha"), "{err}");
    }

    #[test]
    fn missing_flag_is_usage_error() {
        let (code, _, err) = call(&["bound", "theorem1", "--alpha", "0.5", "--x", "1", "--n", "10"]);
        assert_eq!(code, 2);
        assert!(err.contains("--c1"), "{err}");
        assert_eq!(call(&["frobnicate"]).0, 2);
        assert_eq!(call(&["bound", "theorem1", "--alpha", "abc"]).0, 2);
        assert_eq!(call(&["--help"]).0, 0);
    }

    #[test]
    fn json_output_is_one_object() {
        let (code, out, _) = call(&["bound", "lemma1", "--n", "100", "--x", "20", "--json"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().count(), 1);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["bound"], "lemma1");
        assert_eq!(v["log_value"].as_f64(), Some(-2.0));
    }

    #[test]
    fn witness_and_certify() {
        let (code, out, _) = call(&["witness", "tail", "--alpha", "0.5", "--x", "2"]);
        assert_eq!(code, 0);
        let t: f64 = out.trim().parse().unwrap();
        assert!((t - 2.0 * std::f64::consts::E / 9.0 * (-4f64).exp()).abs() < 1e-16);
        let (code, out, _) = call(&["certify", "--alpha", "0.5", "--n-max", "1"]);
        assert_eq!((code, out.trim()), (0, "1"));
        let (_, a, _) = call(&["witness", "sample", "--alpha", "0.5", "--count", "3", "--seed", "4"]);
        let (_, b, _) = call(&["witness", "sample", "--alpha", "0.5", "--count", "3", "--seed", "4"]);
        assert_eq!(a, b);
        assert_eq!(a.lines().count(), 3);
    }

    #[test]
    fn simulate_exact_and_sampled() {
        let (code, out, _) = call(&["simulate", "--n", "2", "--level", "2", "--exact"]);
        assert_eq!((code, out.trim().parse::<f64>().unwrap()), (0, 0.25));
        let (code, out, _) = call(&["simulate", "--n", "2", "--level", "2", "--trials", "1000", "--json"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["trials"], 1000);
        let (code, _, err) = call(&["simulate", "--generator", "truncated-heavy", "--n", "2", "--level", "1"]);
        assert_eq!(code, 2, "{err}");
    }
}
