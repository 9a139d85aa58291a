use std::ops::Range;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::event::{Event, Status};
use super::generator::{GeneratorSpec, StepSource};
use super::rng::StreamFactory;
use crate::error::{Error, Result};
use crate::stats::clopper_pearson_upper;

/// Hit count over a set of trials, each trial on its own substream.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonteCarloEstimate {
    pub hits: u64,
    pub trials: u64,
    pub point: f64,
    /// One-sided Clopper–Pearson upper bound at level `1 - delta`.
    pub upper_cb: f64,
    pub delta: f64,
    pub seed: u64,
    /// Sorted, disjoint half-open ranges of trial (substream) indices covered.
    pub substreams: Vec<(u64, u64)>,
}

impl MonteCarloEstimate {
    fn new(hits: u64, trials: u64, delta: f64, seed: u64, substreams: Vec<(u64, u64)>) -> Self {
        MonteCarloEstimate {
            hits,
            trials,
            point: hits as f64 / trials as f64,
            upper_cb: clopper_pearson_upper(hits, trials, delta),
            delta,
            seed,
            substreams,
        }
    }

    pub fn substream_count(&self) -> u64 {
        self.substreams.iter().map(|(a, b)| b - a).sum()
    }

    /// Pools two estimates of the same seed over disjoint substream ranges.
    /// Associative and commutative.
    pub fn merge(&self, other: &MonteCarloEstimate) -> Result<MonteCarloEstimate> {
        if self.seed != other.seed {
            return Err(Error::Merge("master seeds differ"));
        }
        if self.delta != other.delta {
            return Err(Error::Merge("confidence levels differ"));
        }
        let mut ranges: Vec<(u64, u64)> = self.substreams.iter().chain(&other.substreams).copied().collect();
        ranges.sort_unstable();
        let mut merged: Vec<(u64, u64)> = Vec::with_capacity(ranges.len());
        for (a, b) in ranges {
            match merged.last_mut() {
                Some(last) if a < last.1 => return Err(Error::Merge("substream ranges overlap")),
                Some(last) if a == last.1 => last.1 = b,
                _ => merged.push((a, b)),
            }
        }
        Ok(MonteCarloEstimate::new(
            self.hits + other.hits,
            self.trials + other.trials,
            self.delta,
            self.seed,
            merged,
        ))
    }
}

fn validate(n: u64, delta: f64) -> Result<()> {
    if n == 0 {
        return Err(Error::domain("n", 0.0, "must be at least 1"));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::domain("delta", delta, "must lie in (0, 1)"));
    }
    Ok(())
}

/// Runs one path and reports whether the event occurs, stopping as soon as
/// the outcome is decided.
fn trial<R: Rng + ?Sized>(spec: &GeneratorSpec, event: &Event, n: u64, rng: &mut R) -> bool {
    let mut source = StepSource::new(spec, rng);
    let variance = source.step_variance();
    let bound = source.step_bound();
    let mut sum = 0.0;
    for k in 1..=n {
        sum += source.next(rng);
        match event.status(sum, k as f64 * variance, n - k, bound) {
            Status::Hit => return true,
            Status::Impossible => return false,
            Status::Open => {}
        }
    }
    false
}

/// Estimate over the trials whose indices lie in `range`.
pub fn mc_tail_estimate_range(
    spec: &GeneratorSpec,
    event: &Event,
    n: u64,
    range: Range<u64>,
    seed: u64,
    delta: f64,
) -> Result<MonteCarloEstimate> {
    validate(n, delta)?;
    if range.is_empty() {
        return Err(Error::domain("trials", 0.0, "must be at least 1"));
    }
    let streams = StreamFactory::new(seed);
    let hits = range
        .clone()
        .filter(|&i| trial(spec, event, n, &mut streams.stream(i)))
        .count() as u64;
    Ok(MonteCarloEstimate::new(
        hits,
        range.end - range.start,
        delta,
        seed,
        vec![(range.start, range.end)],
    ))
}

/// Estimate of `P(event)` from `trials` independent paths; trial `i` uses
/// substream `i` of `seed`.
pub fn mc_tail_estimate(
    spec: &GeneratorSpec,
    event: &Event,
    n: u64,
    trials: u64,
    seed: u64,
    delta: f64,
) -> Result<MonteCarloEstimate> {
    mc_tail_estimate_range(spec, event, n, 0..trials, seed, delta)
}

/// Same estimate as [`mc_tail_estimate`], computed as `partitions` contiguous
/// blocks in parallel and merged. The result does not depend on `partitions`.
pub fn mc_tail_estimate_partitioned(
    spec: &GeneratorSpec,
    event: &Event,
    n: u64,
    trials: u64,
    seed: u64,
    delta: f64,
    partitions: usize,
) -> Result<MonteCarloEstimate> {
    validate(n, delta)?;
    if trials == 0 {
        return Err(Error::domain("trials", 0.0, "must be at least 1"));
    }
    let parts = (partitions.max(1) as u64).min(trials);
    let bounds: Vec<Range<u64>> = (0..parts)
        .map(|p| (p * trials / parts)..((p + 1) * trials / parts))
        .collect();
    let pieces = bounds
        .into_par_iter()
        .map(|range| mc_tail_estimate_range(spec, event, n, range, seed, delta))
        .collect::<Result<Vec<_>>>()?;
    let mut iter = pieces.into_iter();
    let first = iter.next().expect("at least one partition");
    iter.try_fold(first, |acc, piece| acc.merge(&piece))
}
