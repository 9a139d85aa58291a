use rand::Rng;
use serde::Serialize;

use super::event::Event;
use super::generator::{GeneratorSpec, StepSource};
use crate::error::{Error, Result};

/// One realised difference sequence with its running statistics.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MartingalePath {
    increments: Vec<f64>,
    partial_sums: Vec<f64>,
    running_max: Vec<f64>,
    predictable_variation: Vec<f64>,
    shared_scale: Option<f64>,
}

impl MartingalePath {
    /// Builds the statistics from increments and the constant conditional
    /// variance `E(X_i^2 | F_{i-1})`; `<S>_k = k * step_variance`.
    pub fn from_increments(increments: Vec<f64>, step_variance: f64, shared_scale: Option<f64>) -> Self {
        let mut partial_sums = Vec::with_capacity(increments.len());
        let mut running_max = Vec::with_capacity(increments.len());
        let mut sum = 0.0;
        let mut max = f64::NEG_INFINITY;
        for &x in &increments {
            sum += x;
            max = max.max(sum);
            partial_sums.push(sum);
            running_max.push(max);
        }
        let predictable_variation = (1..=increments.len()).map(|k| k as f64 * step_variance).collect();
        MartingalePath {
            increments,
            partial_sums,
            running_max,
            predictable_variation,
            shared_scale,
        }
    }

    pub fn len(&self) -> usize {
        self.increments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.increments.is_empty()
    }

    pub fn increments(&self) -> &[f64] {
        &self.increments
    }

    /// `S_k` for `k = 1..=n`.
    pub fn partial_sums(&self) -> &[f64] {
        &self.partial_sums
    }

    /// `max_{j<=k} S_j` for `k = 1..=n`.
    pub fn running_max(&self) -> &[f64] {
        &self.running_max
    }

    /// `<S>_k` for `k = 1..=n`.
    pub fn predictable_variation(&self) -> &[f64] {
        &self.predictable_variation
    }

    /// The per-path draw `X` of a stationary-witness path.
    pub fn shared_scale(&self) -> Option<f64> {
        self.shared_scale
    }

    pub fn satisfies(&self, event: &Event) -> bool {
        event.occurs_on(&self.partial_sums, &self.predictable_variation)
    }
}

/// Draws a path of length `n` from `spec`.
pub fn generate_path<R: Rng + ?Sized>(spec: &GeneratorSpec, n: usize, rng: &mut R) -> Result<MartingalePath> {
    if n == 0 {
        return Err(Error::domain("n", 0.0, "must be at least 1"));
    }
    let mut source = StepSource::new(spec, rng);
    let increments = (0..n).map(|_| source.next(rng)).collect();
    Ok(MartingalePath::from_increments(
        increments,
        source.step_variance(),
        source.shared_scale(),
    ))
}
