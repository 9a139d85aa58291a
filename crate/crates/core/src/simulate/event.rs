use serde::{Deserialize, Serialize};

/// Path events whose probabilities the bounds control.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "kebab-case")]
pub enum Event {
    /// `max_{k<=n} S_k >= level`
    MaxAtLeast { level: f64 },
    /// `S_k >= level and <S>_k <= v^2 for some k <= n`
    JointVariance { level: f64, v: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Status {
    Hit,
    Open,
    Impossible,
}

impl Event {
    pub fn level(&self) -> f64 {
        match *self {
            Event::MaxAtLeast { level } | Event::JointVariance { level, .. } => level,
        }
    }

    /// Whether the event happens at step `k` given `S_k` and `<S>_k`.
    #[inline]
    pub(crate) fn hit(&self, sum: f64, variation: f64) -> bool {
        match *self {
            Event::MaxAtLeast { level } => sum >= level,
            Event::JointVariance { level, v } => sum >= level && variation <= v * v,
        }
    }

    /// Status after step `k` with `remaining` steps left. `step_bound` caps any
    /// single future increment; `<S>` is nondecreasing, so once it exceeds
    /// `v^2` the joint event can no longer occur.
    #[inline]
    pub(crate) fn status(&self, sum: f64, variation: f64, remaining: u64, step_bound: Option<f64>) -> Status {
        if self.hit(sum, variation) {
            return Status::Hit;
        }
        if remaining == 0 {
            return Status::Impossible;
        }
        if let Event::JointVariance { v, .. } = *self {
            if variation > v * v {
                return Status::Impossible;
            }
        }
        if let Some(bound) = step_bound {
            let level = self.level();
            let reach = sum + remaining as f64 * bound.max(0.0);
            // margin keeps rounding in `reach` from pruning a feasible path
            if reach < level - 1e-9 * level.abs().max(1.0) {
                return Status::Impossible;
            }
        }
        Status::Open
    }

    /// Evaluates the event on partial sums and predictable variation.
    pub fn occurs_on(&self, partial_sums: &[f64], variation: &[f64]) -> bool {
        partial_sums
            .iter()
            .zip(variation)
            .any(|(&s, &q)| self.hit(s, q))
    }
}
