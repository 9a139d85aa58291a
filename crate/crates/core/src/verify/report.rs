//! JSON-lines verdict records and the CSV summary.

use std::io::{BufRead, Write};

use serde_json::Value;

use crate::bounds::{predicted_decay_rate, Alpha, BoundKind};
use crate::error::{Error, Result};
use crate::format::{json_real, parse_real, sig17};

use super::{Direction, OracleKind, VerificationVerdict};

fn json_string(s: &str) -> String {
    serde_json::to_string(s).expect("strings always serialize")
}

fn json_opt_u64(v: Option<u64>) -> String {
    v.map_or_else(|| "null".to_string(), |x| x.to_string())
}

/// Writes one verdict as a single JSON object followed by `\n`.
pub fn write_verdict_line<W: Write + ?Sized>(w: &mut W, v: &VerificationVerdict) -> Result<()> {
    let params = v
        .params
        .iter()
        .map(|(k, x)| format!("{}:{}", json_string(k), json_real(*x)))
        .collect::<Vec<_>>()
        .join(",");
    writeln!(
        w,
        "{{\"suite\":{},\"row\":{},\"bound_name\":{},\"generator\":{},\"params\":{{{}}},\"oracle_kind\":{},\
\"direction\":{},\"oracle_log_value\":{},\"bound_log_value\":{},\"slack_log\":{},\"dominates\":{},\
\"vacuous\":{},\"seed\":{},\"delta\":{},\"hits\":{},\"trials\":{},\"skipped\":{}}}",
        json_string(&v.suite),
        v.row,
        json_string(&v.bound_name),
        json_string(&v.generator),
        params,
        json_string(v.oracle_kind.name()),
        json_string(v.direction.name()),
        json_real(v.oracle_log_value),
        json_real(v.bound_log_value),
        json_real(v.slack_log),
        v.dominates,
        v.vacuous,
        json_opt_u64(v.seed),
        v.delta.map_or_else(|| "null".to_string(), json_real),
        json_opt_u64(v.hits),
        json_opt_u64(v.trials),
        v.skipped.as_deref().map_or_else(|| "null".to_string(), json_string),
    )?;
    Ok(())
}

pub fn write_jsonl<W: Write + ?Sized>(w: &mut W, verdicts: &[VerificationVerdict]) -> Result<()> {
    for v in verdicts {
        write_verdict_line(w, v)?;
    }
    Ok(())
}

fn bad(line: usize, what: &str) -> Error {
    Error::Config(format!("line {line}: {what}"))
}

fn real(obj: &Value, key: &str, line: usize) -> Result<f64> {
    match obj.get(key) {
        Some(Value::Number(n)) => n.as_f64().ok_or_else(|| bad(line, key)),
        Some(Value::String(s)) => parse_real(s).ok_or_else(|| bad(line, key)),
        _ => Err(bad(line, &format!("missing or invalid `{key}`"))),
    }
}

fn string(obj: &Value, key: &str, line: usize) -> Result<String> {
    obj.get(key)
        .and_then(Value::as_str)
        .map(str::to_string)
        .ok_or_else(|| bad(line, &format!("missing or invalid `{key}`")))
}

fn boolean(obj: &Value, key: &str, line: usize) -> Result<bool> {
    obj.get(key)
        .and_then(Value::as_bool)
        .ok_or_else(|| bad(line, &format!("missing or invalid `{key}`")))
}

fn opt_u64(obj: &Value, key: &str) -> Option<u64> {
    obj.get(key).and_then(Value::as_u64)
}

/// Parses verdict records written by [`write_jsonl`]. Blank lines are ignored.
pub fn read_jsonl<R: BufRead>(reader: R) -> Result<Vec<VerificationVerdict>> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let obj: Value = serde_json::from_str(&line).map_err(|e| bad(line_no, &e.to_string()))?;
        let params = match obj.get("params") {
            Some(Value::Object(map)) => map
                .iter()
                .map(|(k, _)| Ok((k.clone(), real(&obj["params"], k, line_no)?)))
                .collect::<Result<Vec<_>>>()?,
            _ => return Err(bad(line_no, "missing or invalid `params`")),
        };
        let oracle_kind = OracleKind::from_name(&string(&obj, "oracle_kind", line_no)?)
            .ok_or_else(|| bad(line_no, "unknown `oracle_kind`"))?;
        let direction = match string(&obj, "direction", line_no)?.as_str() {
            "upper" => Direction::Upper,
            "lower" => Direction::Lower,
            _ => return Err(bad(line_no, "unknown `direction`")),
        };
        out.push(VerificationVerdict {
            suite: string(&obj, "suite", line_no)?,
            row: opt_u64(&obj, "row").ok_or_else(|| bad(line_no, "missing `row`"))?,
            bound_name: string(&obj, "bound_name", line_no)?,
            generator: string(&obj, "generator", line_no)?,
            params,
            oracle_kind,
            direction,
            oracle_log_value: real(&obj, "oracle_log_value", line_no)?,
            bound_log_value: real(&obj, "bound_log_value", line_no)?,
            slack_log: real(&obj, "slack_log", line_no)?,
            dominates: boolean(&obj, "dominates", line_no)?,
            vacuous: boolean(&obj, "vacuous", line_no)?,
            seed: opt_u64(&obj, "seed"),
            delta: obj.get("delta").filter(|d| !d.is_null()).map(|_| real(&obj, "delta", line_no)).transpose()?,
            hits: opt_u64(&obj, "hits"),
            trials: opt_u64(&obj, "trials"),
            skipped: obj.get("skipped").and_then(Value::as_str).map(str::to_string),
        });
    }
    Ok(out)
}

/// Per-suite counts. Counts add, minima take the minimum, so summaries of
/// disjoint row sets combine with [`SuiteSummary::merge`].
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteSummary {
    pub suite: String,
    pub bound: String,
    pub rows: u64,
    pub checked: u64,
    pub dominated: u64,
    pub failures: u64,
    pub vacuous: u64,
    pub skipped: u64,
    pub monte_carlo_rows: u64,
    /// Per-row confidence parameter of the Monte Carlo rows.
    pub delta: Option<f64>,
    /// Smallest margin in log space, oriented so that negative means failure.
    pub min_margin_log: Option<f64>,
    /// Groups of non-vacuous rows (at least two horizons) used in the decay fit.
    pub decay_groups: u64,
    /// Largest relative gap between the fitted and predicted decay rate.
    pub decay_max_rel_error: Option<f64>,
}

impl SuiteSummary {
    fn empty(suite: &str, bound: &str) -> Self {
        SuiteSummary {
            suite: suite.to_string(),
            bound: bound.to_string(),
            rows: 0,
            checked: 0,
            dominated: 0,
            failures: 0,
            vacuous: 0,
            skipped: 0,
            monte_carlo_rows: 0,
            delta: None,
            min_margin_log: None,
            decay_groups: 0,
            decay_max_rel_error: None,
        }
    }

    /// Upper bound on the chance that any Monte Carlo row's confidence bound
    /// undershoots its true probability (union bound over rows).
    pub fn familywise_delta(&self) -> Option<f64> {
        self.delta.map(|d| (d * self.monte_carlo_rows as f64).min(1.0))
    }

    /// Decay check at 10% relative tolerance; `None` when no group qualifies.
    pub fn decay_within_tolerance(&self) -> Option<bool> {
        self.decay_max_rel_error.map(|e| e <= 0.1)
    }

    pub fn merge(&self, other: &SuiteSummary) -> SuiteSummary {
        let min = |a: Option<f64>, b: Option<f64>| match (a, b) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, None) => x,
            (None, y) => y,
        };
        let max = |a: Option<f64>, b: Option<f64>| match (a, b) {
            (Some(x), Some(y)) => Some(x.max(y)),
            (x, None) => x,
            (None, y) => y,
        };
        SuiteSummary {
            suite: self.suite.clone(),
            bound: if self.bound == other.bound { self.bound.clone() } else { "mixed".to_string() },
            rows: self.rows + other.rows,
            checked: self.checked + other.checked,
            dominated: self.dominated + other.dominated,
            failures: self.failures + other.failures,
            vacuous: self.vacuous + other.vacuous,
            skipped: self.skipped + other.skipped,
            monte_carlo_rows: self.monte_carlo_rows + other.monte_carlo_rows,
            delta: max(self.delta, other.delta),
            min_margin_log: min(self.min_margin_log, other.min_margin_log),
            decay_groups: self.decay_groups + other.decay_groups,
            decay_max_rel_error: max(self.decay_max_rel_error, other.decay_max_rel_error),
        }
    }
}

/// Least-squares slope of `y` on `t`.
fn slope(points: &[(f64, f64)]) -> f64 {
    let m = points.len() as f64;
    let (st, sy) = points.iter().fold((0.0, 0.0), |(a, b), (t, y)| (a + t, b + y));
    let (mt, my) = (st / m, sy / m);
    let (num, den) = points
        .iter()
        .fold((0.0, 0.0), |(num, den), (t, y)| (num + (t - mt) * (y - my), den + (t - mt) * (t - mt)));
    num / den
}

type DecayGroup = (String, BoundKind, Alpha, f64, Vec<(f64, f64)>);

/// Fits `log bound` against `n^alpha` over the larger half of the horizons,
/// for each group of non-vacuous rows that share everything but `n`, and
/// returns `(groups, max relative error)`.
fn decay_fit(rows: &[&VerificationVerdict]) -> (u64, Option<f64>) {
    let mut groups: Vec<DecayGroup> = Vec::new();
    for v in rows {
        let Some(kind) = BoundKind::from_name(&v.bound_name) else { continue };
        if v.vacuous || v.direction != Direction::Upper {
            continue;
        }
        let (Some(a), Some(x), Some(n)) = (v.param("alpha"), v.param("x"), v.param("n")) else { continue };
        let Ok(alpha) = Alpha::new(a) else { continue };
        if predicted_decay_rate(kind, alpha, x).is_none() {
            continue;
        }
        let key: String = v
            .params
            .iter()
            .filter(|(k, _)| k != "n")
            .map(|(k, x)| format!("{k}={}", sig17(*x)))
            .chain(std::iter::once(v.generator.clone()))
            .collect::<Vec<_>>()
            .join(";");
        let point = (n.powf(a), v.bound_log_value);
        match groups.iter_mut().find(|g| g.0 == key) {
            Some(g) => g.4.push(point),
            None => groups.push((key, kind, alpha, x, vec![point])),
        }
    }
    let mut count = 0;
    let mut worst: Option<f64> = None;
    for (_, kind, alpha, x, points) in &mut groups {
        if points.len() < 2 {
            continue;
        }
        // Only the larger half of the horizons: at small n a faster-decaying
        // term with a larger prefactor can still dominate.
        points.sort_by(|a, b| a.0.total_cmp(&b.0));
        let start = (points.len() / 2).min(points.len() - 2);
        let tail = &points[start..];
        let predicted = predicted_decay_rate(*kind, *alpha, *x).expect("filtered above");
        let fitted = -slope(tail);
        let err = ((fitted - predicted) / predicted).abs();
        count += 1;
        worst = Some(worst.map_or(err, |w: f64| w.max(err)));
    }
    (count, worst)
}

/// Summarises verdicts per suite, in order of first appearance. Suites in
/// `declared` (name, bound) are listed first even when they produced no rows.
pub fn summarize(verdicts: &[VerificationVerdict], declared: &[(String, String)]) -> Vec<SuiteSummary> {
    let mut order: Vec<(String, String)> = declared.to_vec();
    for v in verdicts {
        if !order.iter().any(|(s, _)| *s == v.suite) {
            order.push((v.suite.clone(), v.bound_name.clone()));
        }
    }
    order
        .iter()
        .map(|(suite, bound)| {
            let rows: Vec<&VerificationVerdict> = verdicts.iter().filter(|v| v.suite == *suite).collect();
            let mut s = SuiteSummary::empty(suite, bound);
            for v in &rows {
                s.rows += 1;
                if !v.is_checked() {
                    s.skipped += 1;
                    continue;
                }
                s.checked += 1;
                if v.dominates {
                    s.dominated += 1;
                } else {
                    s.failures += 1;
                }
                if v.vacuous {
                    s.vacuous += 1;
                }
                if v.oracle_kind == OracleKind::MonteCarloUcb {
                    s.monte_carlo_rows += 1;
                    s.delta = match (s.delta, v.delta) {
                        (Some(a), Some(b)) => Some(a.max(b)),
                        (a, b) => a.or(b),
                    };
                }
                let margin = match v.direction {
                    Direction::Upper => v.slack_log,
                    Direction::Lower => 0.0 - v.slack_log,
                };
                if !margin.is_nan() {
                    s.min_margin_log = Some(s.min_margin_log.map_or(margin, |m| m.min(margin)));
                }
            }
            let (groups, err) = decay_fit(&rows);
            s.decay_groups = groups;
            s.decay_max_rel_error = err;
            s
        })
        .collect()
}

pub const SUMMARY_HEADER: &str = "suite,bound,rows,checked,dominated,failures,vacuous,skipped,monte_carlo_rows,\
delta,familywise_delta,min_margin_log,decay_groups,decay_max_rel_error,decay_within_10pct";

fn opt_real(v: Option<f64>) -> String {
    v.map(sig17).unwrap_or_default()
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Writes the header, one line per suite and a final `total` line.
pub fn write_summary_csv<W: Write + ?Sized>(w: &mut W, summaries: &[SuiteSummary]) -> Result<()> {
    writeln!(w, "{SUMMARY_HEADER}")?;
    let total = summaries
        .iter()
        .fold(None::<SuiteSummary>, |acc, s| Some(acc.map_or_else(|| s.clone(), |a| a.merge(s))))
        .unwrap_or_else(|| SuiteSummary::empty("total", ""));
    let total = SuiteSummary {
        suite: "total".to_string(),
        bound: if summaries.len() == 1 { total.bound } else { "all".to_string() },
        ..total
    };
    for s in summaries.iter().chain(std::iter::once(&total)) {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            csv_field(&s.suite),
            csv_field(&s.bound),
            s.rows,
            s.checked,
            s.dominated,
            s.failures,
            s.vacuous,
            s.skipped,
            s.monte_carlo_rows,
            opt_real(s.delta),
            opt_real(s.familywise_delta()),
            opt_real(s.min_margin_log),
            s.decay_groups,
            opt_real(s.decay_max_rel_error),
            s.decay_within_tolerance().map(|b| b.to_string()).unwrap_or_default(),
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::{theorem1_tail_bound, BoundParams};
    use crate::verify::check_dominance;

    fn sample() -> Vec<VerificationVerdict> {
        let alpha = Alpha::new(0.5).unwrap();
        let mut out = Vec::new();
        for (i, n) in [400u64, 1600, 6400].into_iter().enumerate() {
            let b = theorem1_tail_bound(&BoundParams::new(alpha, 1.0, n).with_c1(1.0)).unwrap();
            let mut v = check_dominance(&b, (1e-7f64).ln(), Direction::Upper);
            v.suite = "t1".into();
            v.row = i as u64;
            v.generator = "rademacher".into();
            v.oracle_kind = OracleKind::MonteCarloUcb;
            v.seed = Some(9);
            v.delta = Some(1e-3);
            v.hits = Some(0);
            v.trials = Some(1000);
            out.push(v);
        }
        let mut skipped = out[0].clone();
        skipped.suite = "other \"q\"".into();
        skipped.skipped = Some("budget, exceeded".into());
        skipped.oracle_log_value = f64::NAN;
        skipped.slack_log = f64::NAN;
        skipped.dominates = false;
        out.push(skipped);
        out
    }

    #[test]
    fn jsonl_round_trip_is_exact() {
        let verdicts = sample();
        let mut buf = Vec::new();
        write_jsonl(&mut buf, &verdicts).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert_eq!(text.lines().count(), verdicts.len());
        assert!(!text.contains('\r'));
        let back = read_jsonl(&buf[..]).unwrap();
        assert_eq!(back.len(), verdicts.len());
        for (a, b) in verdicts.iter().zip(&back) {
            assert_eq!(a.bound_log_value.to_bits(), b.bound_log_value.to_bits());
            assert_eq!(a.params, b.params);
            assert_eq!(a.skipped, b.skipped);
            assert_eq!(a.suite, b.suite);
        }
        let mut again = Vec::new();
        write_jsonl(&mut again, &back).unwrap();
        assert_eq!(buf, again);
    }

    #[test]
    fn summary_counts_and_decay_fit() {
        let s = summarize(&sample(), &[("empty".into(), "lemma1".into())]);
        assert_eq!(s.len(), 3);
        assert_eq!(s[0].rows, 0);
        let t1 = &s[1];
        assert_eq!((t1.rows, t1.checked, t1.failures, t1.skipped), (3, 3, 0, 0));
        assert_eq!(t1.monte_carlo_rows, 3);
        assert_eq!(t1.familywise_delta(), Some(3e-3));
        // log bound = ln C - (1/4) n^{1/2} exactly
        assert_eq!(t1.decay_groups, 1);
        assert!(t1.decay_max_rel_error.unwrap() < 1e-12);
        assert_eq!(s[2].skipped, 1);
    }

    #[test]
    fn merge_is_associative() {
        let s = summarize(&sample(), &[]);
        let left = s[0].merge(&s[1]).merge(&s[0]);
        let right = s[0].merge(&s[1].merge(&s[0]));
        assert_eq!(left, right);
    }

    #[test]
    fn csv_layout() {
        let mut buf = Vec::new();
        write_summary_csv(&mut buf, &summarize(&sample(), &[])).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], SUMMARY_HEADER);
        assert!(lines[2].starts_with("\"other \"\"q\"\"\","));
        assert!(lines.last().unwrap().starts_with("total,all,4,3,3,0,0,1,3,"));
        let cols = SUMMARY_HEADER.split(',').count();
        assert!(lines[1..].iter().all(|l| l.split(',').count() == cols || l.contains('"')));
    }

    #[test]
    fn malformed_lines_report_their_number() {
        let err = read_jsonl("\n{\"suite\": 1}\n".as_bytes()).unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
    }
}
