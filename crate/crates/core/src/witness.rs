//! The heavy-tailed law witnessing that the power `alpha` cannot be improved,
//! and the exact lower-bound certificate built from it.
//!
//! `X >= 1` has tail
//!
//! ```text
//! P(X >= x) = 2e / (1 + x^{(1+a)/(1-a)}) * exp(-x^{2a/(1-a)}),   x > 1,
//! ```
//!
//! which equals 1 at `x = 1`. With independent fair signs `xi_i`, the products
//! `X xi_i` form a stationary martingale difference sequence with
//! `E exp(|X|^{2a/(1-a)}) < inf`, yet
//!
//! ```text
//! P(max_k S_k >= n) >= P(xi_1 + ... + xi_n >= n^b) P(X >= n^{1-b}),   b = (1+a)/2,
//! ```
//!
//! and both factors are computed exactly here.

use rand::Rng;
use serde::Serialize;

use crate::bounds::Alpha;
use crate::error::{Error, Result};
use crate::quadrature;
use crate::stats::binomial_log_tail;

const LN_2E: f64 = 1.0 + std::f64::consts::LN_2;

/// `ln(1 + e^z)` without overflow.
fn softplus(z: f64) -> f64 {
    if z > 35.0 {
        z + (-z).exp()
    } else {
        z.exp().ln_1p()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WitnessDistribution {
    alpha: Alpha,
    /// `(1+a)/(1-a)`
    tail_exponent_heavy: f64,
    /// `2a/(1-a)`
    tail_exponent_stretch: f64,
}

impl WitnessDistribution {
    pub fn new(alpha: Alpha) -> Self {
        WitnessDistribution {
            alpha,
            tail_exponent_heavy: alpha.heavy_exponent(),
            tail_exponent_stretch: alpha.stretch_exponent(),
        }
    }

    pub fn alpha(&self) -> Alpha {
        self.alpha
    }

    pub fn tail_exponent_heavy(&self) -> f64 {
        self.tail_exponent_heavy
    }

    pub fn tail_exponent_stretch(&self) -> f64 {
        self.tail_exponent_stretch
    }

    /// `ln P(X >= x)`; zero on `(-inf, 1]`.
    pub fn log_tail(&self, x: f64) -> f64 {
        if x <= 1.0 {
            return 0.0;
        }
        if x == f64::INFINITY {
            return f64::NEG_INFINITY;
        }
        let ln_x = x.ln();
        LN_2E - softplus(self.tail_exponent_heavy * ln_x) - (self.tail_exponent_stretch * ln_x).exp()
    }

    /// `P(X >= x)`.
    pub fn tail(&self, x: f64) -> f64 {
        self.log_tail(x).exp()
    }

    /// Derivative of [`Self::log_tail`] for `x > 1`.
    fn log_tail_slope(&self, x: f64) -> f64 {
        let (h, g) = (self.tail_exponent_heavy, self.tail_exponent_stretch);
        let xh = x.powf(h);
        -(h * xh / (x * (1.0 + xh))) - g * x.powf(g - 1.0)
    }

    /// The `x >= 1` with `P(X >= x) = p`.
    ///
    /// The tail has no closed-form inverse. The root of `log_tail(x) - ln p` is
    /// bracketed by doubling from `[1, 2]` and then refined by Newton steps in
    /// log space, falling back to bisection whenever a step leaves the bracket.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(p > 0.0 && p <= 1.0) {
            return Err(Error::domain("p", p, "must lie in (0, 1]"));
        }
        if p == 1.0 {
            return Ok(1.0);
        }
        let target = p.ln();
        let (mut lo, mut hi) = (1.0f64, 2.0f64);
        while self.log_tail(hi) > target {
            lo = hi;
            hi *= 2.0;
        }
        let mut x = 0.5 * (lo + hi);
        for _ in 0..200 {
            let residual = self.log_tail(x) - target;
            if residual == 0.0 {
                return Ok(x);
            }
            if residual > 0.0 {
                lo = x;
            } else {
                hi = x;
            }
            let newton = x - residual / self.log_tail_slope(x);
            let next = if newton > lo && newton < hi {
                newton
            } else {
                0.5 * (lo + hi)
            };
            if (next - x).abs() <= 4.0 * f64::EPSILON * x || hi - lo <= 4.0 * f64::EPSILON * hi {
                return Ok(next);
            }
            x = next;
        }
        Ok(x)
    }

    /// Inverse-transform draw: `quantile(U)` with `U` uniform on `(0, 1]`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u = 1.0 - rng.random::<f64>();
        self.quantile(u).expect("u lies in (0, 1]")
    }

    /// `E exp(X^{2a/(1-a)}) = e + (4ea/(1-a)) int_1^inf t^{(3a-1)/(1-a)} / (1 + t^{(1+a)/(1-a)}) dt`.
    ///
    /// The integrand behaves like `t^{-2}`; substituting `t = 1/s` turns the
    /// integral into `int_0^1 ds / (1 + s^{(1+a)/(1-a)})` exactly, so no
    /// truncation of the infinite range is needed.
    pub fn moment(&self) -> f64 {
        let a = self.alpha.value();
        let h = self.tail_exponent_heavy;
        let integral = quadrature::integrate(|s| 1.0 / (1.0 + s.powf(h)), 0.0, 1.0, 0.0, 1e-13, 4000);
        let e = std::f64::consts::E;
        e + 4.0 * e * a / (1.0 - a) * integral.value
    }

    /// `E exp(X^power)`; infinite when `power` exceeds the stretch exponent.
    pub fn expected_exp_power(&self, power: f64) -> f64 {
        let g = self.tail_exponent_stretch;
        if power > g * (1.0 + 1e-12) {
            return f64::INFINITY;
        }
        if (power - g).abs() <= 1e-12 * g {
            return self.moment();
        }
        if power == 0.0 {
            return std::f64::consts::E;
        }
        // E h(X) = h(1) + int_1^inf h'(t) P(X >= t) dt
        let integrand = |t: f64| {
            let tp = t.powf(power);
            power * tp / t * (tp + self.log_tail(t)).exp()
        };
        let tail = quadrature::integrate_to_infinity(integrand, 1.0, 0.0, 1e-12, 4000);
        std::f64::consts::E + tail.value
    }
}

/// Exact product lower bound at one horizon.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CertificateRecord {
    pub alpha: Alpha,
    pub n: u64,
    /// `b = (1 + a) / 2`, solving `2b - 1 = a`.
    pub optimality_exponent: f64,
    /// `ln P(xi_1 + ... + xi_n >= n^b)`, exact.
    pub binomial_log_tail: f64,
    /// `ln P(X >= n^{1-b})`, closed form.
    pub witness_log_tail: f64,
    pub certificate_log: f64,
    /// `-3 n^a`
    pub threshold_log: f64,
    /// The large-n binomial estimate `-n^{2b-1}`, for comparison only.
    pub asymptotic_binomial_log: f64,
    pub passes: bool,
}

/// Certificate `P(sum xi >= n^b) P(X >= n^{1-b})` against `exp(-3 n^a)`.
pub fn optimality_certificate(alpha: Alpha, n: u64) -> Result<CertificateRecord> {
    if n == 0 {
        return Err(Error::domain("n", 0.0, "must be at least 1"));
    }
    let a = alpha.value();
    let b = (1.0 + a) / 2.0;
    let nf = n as f64;
    let binomial_log_tail = binomial_log_tail(n, nf.powf(b));
    let witness_log_tail = WitnessDistribution::new(alpha).log_tail(nf.powf(1.0 - b));
    let certificate_log = binomial_log_tail + witness_log_tail;
    let threshold_log = -3.0 * nf.powf(a);
    Ok(CertificateRecord {
        alpha,
        n,
        optimality_exponent: b,
        binomial_log_tail,
        witness_log_tail,
        certificate_log,
        threshold_log,
        asymptotic_binomial_log: -nf.powf(2.0 * b - 1.0),
        passes: certificate_log >= threshold_log,
    })
}

/// Result of scanning the certificate downward from `n_max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CertificateScan {
    pub alpha: Alpha,
    pub n_max: u64,
    /// Smallest `N0` with a passing certificate on all of `[N0, n_max]`.
    pub n0: Option<u64>,
    /// The passing record with the least margin over the threshold.
    pub tightest: Option<CertificateRecord>,
}

/// Scans `n = n_max, n_max - 1, ...` until the certificate first fails.
pub fn scan_certificates(alpha: Alpha, n_max: u64) -> Result<CertificateScan> {
    if n_max == 0 {
        return Err(Error::domain("n_max", 0.0, "must be at least 1"));
    }
    let mut n0 = None;
    let mut tightest: Option<CertificateRecord> = None;
    for n in (1..=n_max).rev() {
        let record = optimality_certificate(alpha, n)?;
        if !record.passes {
            break;
        }
        n0 = Some(n);
        let margin = record.certificate_log - record.threshold_log;
        if tightest.is_none_or(|t| margin < t.certificate_log - t.threshold_log) {
            tightest = Some(record);
        }
    }
    Ok(CertificateScan {
        alpha,
        n_max,
        n0,
        tightest,
    })
}

/// Smallest `N0 <= n_max` such that the certificate passes for every
/// `n in [N0, n_max]`; `None` when it already fails at `n_max`.
pub fn optimality_threshold(alpha: Alpha, n_max: u64) -> Result<Option<u64>> {
    Ok(scan_certificates(alpha, n_max)?.n0)
}
