use super::event::{Event, Status};
use super::generator::{Atom, GeneratorSpec};
use crate::error::{Error, Result};
use crate::witness::WitnessDistribution;

/// Largest number of paths [`enumerate_exact`] visits by default.
pub const DEFAULT_ENUMERATION_BUDGET: u64 = 1 << 24;

/// Exact `P(event)` over horizon `n` by walking every increment path.
///
/// Subtrees are cut as soon as the event has occurred (their whole mass is
/// added) or can no longer occur, so the work is usually far below the
/// `support^n` paths counted against `budget`. The stationary witness is
/// handled by enumerating the `2^n` sign paths and integrating the shared
/// draw against its closed-form tail.
pub fn enumerate_exact(spec: &GeneratorSpec, n: u32, event: &Event, budget: u64) -> Result<f64> {
    if n == 0 {
        return Err(Error::domain("n", 0.0, "must be at least 1"));
    }
    match spec {
        GeneratorSpec::StationaryWitness(w) => {
            check_budget(2, n, budget)?;
            Ok(enumerate_witness(w, n, event))
        }
        _ => {
            let support = spec.finite_support().ok_or_else(|| {
                Error::UnsupportedSpec(format!("{spec} has no finite increment support"))
            })?;
            check_budget(support.len(), n, budget)?;
            let walker = Walker {
                support: &support,
                variance: support.iter().map(|a| a.value * a.value * a.prob).sum(),
                step_bound: support.iter().map(|a| a.value).fold(f64::NEG_INFINITY, f64::max),
                n: n as u64,
                event,
            };
            Ok(walker.visit(0, 0.0, 1.0))
        }
    }
}

fn check_budget(support: usize, n: u32, budget: u64) -> Result<()> {
    let paths = (support as f64).powi(n as i32);
    if paths > budget as f64 {
        Err(Error::BudgetExceeded { paths, budget })
    } else {
        Ok(())
    }
}

struct Walker<'a> {
    support: &'a [Atom],
    variance: f64,
    step_bound: f64,
    n: u64,
    event: &'a Event,
}

impl Walker<'_> {
    fn visit(&self, depth: u64, sum: f64, mass: f64) -> f64 {
        let k = depth + 1;
        let variation = k as f64 * self.variance;
        self.support
            .iter()
            .map(|atom| {
                let s = sum + atom.value;
                let m = mass * atom.prob;
                match self.event.status(s, variation, self.n - k, Some(self.step_bound)) {
                    Status::Hit => m,
                    Status::Impossible => 0.0,
                    Status::Open => self.visit(k, s, m),
                }
            })
            .sum()
    }
}

/// Probability that the witness draw `X` lands in a union of closed intervals.
fn union_mass(w: &WitnessDistribution, intervals: &mut [(f64, f64)]) -> f64 {
    intervals.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut total = 0.0;
    let mut current: Option<(f64, f64)> = None;
    for &(lo, hi) in intervals.iter() {
        match current {
            Some((clo, chi)) if lo <= chi => current = Some((clo, chi.max(hi))),
            _ => {
                if let Some((clo, chi)) = current {
                    total += w.tail(clo) - w.tail(chi);
                }
                current = Some((lo, hi));
            }
        }
    }
    if let Some((clo, chi)) = current {
        total += w.tail(clo) - w.tail(chi);
    }
    total
}

fn enumerate_witness(w: &WitnessDistribution, n: u32, event: &Event) -> f64 {
    let (level, v) = match *event {
        Event::MaxAtLeast { level } => (level, f64::INFINITY),
        Event::JointVariance { level, v } => (level, v),
    };
    let weight = 0.5f64.powi(n as i32);
    let mut intervals = Vec::with_capacity(n as usize);
    let mut total = 0.0;
    for signs in 0u64..1 << n {
        intervals.clear();
        let mut t = 0i64;
        for k in 1..=n as u64 {
            t += if signs >> (k - 1) & 1 == 1 { 1 } else { -1 };
            // X T_k >= level and k X^2 <= v^2, intersected with X >= 1
            let tf = t as f64;
            let mut lo = 1.0f64;
            let mut hi = v / (k as f64).sqrt();
            if t > 0 {
                lo = lo.max(level / tf);
            } else if t < 0 {
                hi = hi.min(level / tf);
            } else if level > 0.0 {
                continue;
            }
            if lo <= hi {
                intervals.push((lo, hi));
            }
        }
        if !intervals.is_empty() {
            total += weight * union_mass(w, &mut intervals);
        }
    }
    total
}
