//! Exact binomial tails and Clopper–Pearson confidence bounds.

use statrs::distribution::{Beta, ContinuousCDF};
use statrs::function::factorial::ln_binomial;

/// Relative distance below which a real threshold is treated as the nearest
/// integer. `n^b` for integer `n` is often an integer that `powf` misses by an ulp.
const INTEGER_SNAP: f64 = 1e-9;

pub(crate) fn snap_to_integer(s: f64) -> f64 {
    let r = s.round();
    if (s - r).abs() <= INTEGER_SNAP * r.abs().max(1.0) {
        r
    } else {
        s
    }
}

/// `ln P(K >= k)` for `K ~ Binomial(n, 1/2)` and `k > n / 2` (or `k >= n / 2`).
///
/// Sums `C(n, j) / C(n, k)` by the ratio recurrence and stops once the
/// geometric bound on the remainder is below 1e-17 of the partial sum.
fn upper_log_sum(n: u64, k: u64) -> f64 {
    debug_assert!(2 * k >= n && k <= n);
    let mut sum = 1.0f64;
    let mut term = 1.0f64;
    let nf = n as f64;
    let mut j = k;
    while j < n {
        let jf = j as f64;
        let ratio = (nf - jf) / (jf + 1.0);
        term *= ratio;
        sum += term;
        j += 1;
        let next_ratio = (nf - j as f64) / (j as f64 + 1.0);
        if next_ratio < 1.0 && term * next_ratio / (1.0 - next_ratio) < 1e-17 * sum {
            break;
        }
    }
    ln_binomial(n, k) - nf * std::f64::consts::LN_2 + sum.ln()
}

/// `ln P(xi_1 + ... + xi_n >= s)` for independent fair signs `xi_i`.
///
/// The event equals `{#(+1) >= ceil((n + s) / 2)}` exactly; `s` within 1e-9
/// (relative) of an integer is taken to be that integer.
pub fn binomial_log_tail(n: u64, s: f64) -> f64 {
    let nf = n as f64;
    let s = snap_to_integer(s);
    if s <= -nf {
        return 0.0;
    }
    if s > nf {
        return f64::NEG_INFINITY;
    }
    let k_star = ((nf + s) / 2.0).ceil().max(0.0) as u64;
    if 2 * k_star >= n {
        upper_log_sum(n, k_star)
    } else {
        // P(K >= k*) = 1 - P(K <= k* - 1) = 1 - P(K >= n - k* + 1)
        let complement = upper_log_sum(n, n - k_star + 1).exp();
        (-complement).ln_1p()
    }
}

/// `P(xi_1 + ... + xi_n >= s)`; see [`binomial_log_tail`].
pub fn exact_binomial_tail(n: u64, s: f64) -> f64 {
    binomial_log_tail(n, s).exp()
}

/// Exact one-sided Clopper–Pearson upper bound: the `p` at which
/// `P(Binomial(trials, p) <= hits) = delta`.
pub fn clopper_pearson_upper(hits: u64, trials: u64, delta: f64) -> f64 {
    assert!(trials > 0 && hits <= trials, "need 0 <= hits <= trials, trials > 0");
    assert!(delta > 0.0 && delta < 1.0, "delta must lie in (0, 1)");
    if hits == trials {
        return 1.0;
    }
    if hits == 0 {
        // 1 - delta^{1/N}
        return -(delta.ln() / trials as f64).exp_m1();
    }
    let beta = Beta::new((hits + 1) as f64, (trials - hits) as f64).expect("positive shapes");
    beta.inverse_cdf(1.0 - delta)
}

/// Exact one-sided Clopper–Pearson lower bound.
pub fn clopper_pearson_lower(hits: u64, trials: u64, delta: f64) -> f64 {
    assert!(trials > 0 && hits <= trials, "need 0 <= hits <= trials, trials > 0");
    assert!(delta > 0.0 && delta < 1.0, "delta must lie in (0, 1)");
    if hits == 0 {
        return 0.0;
    }
    if hits == trials {
        return (delta.ln() / trials as f64).exp();
    }
    let beta = Beta::new(hits as f64, (trials - hits + 1) as f64).expect("positive shapes");
    beta.inverse_cdf(delta)
}

/// Two-sided Clopper–Pearson interval with total miss probability `delta`.
pub fn clopper_pearson_interval(hits: u64, trials: u64, delta: f64) -> (f64, f64) {
    (
        clopper_pearson_lower(hits, trials, delta / 2.0),
        clopper_pearson_upper(hits, trials, delta / 2.0),
    )
}
