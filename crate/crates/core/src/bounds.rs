//! Closed-form tail bounds for (super)martingales, evaluated in log space.
//!
//! Every bound is returned as a [`TailBound`]: the natural log of the raw
//! right-hand side (which may exceed zero when the bound is vacuous) together
//! with its value clipped to `(0, 1]` and a record of the inputs.
//!
//! Notation: `S_k = X_1 + ... + X_k`, `<S>_k = sum_i E(X_i^2 | F_{i-1})`.
//!
//! | bound        | event                                   | right-hand side |
//! |--------------|-----------------------------------------|-----------------|
//! | `lemma1`     | `max_k S_k >= x`, `\|X_i\| <= 1`        | `exp(-x^2 / 2n)` |
//! | `lemma2`     | `S_k >= x, <S>_k <= v^2`, `X_i <= 1`    | `exp(-x^2 / 2(v^2 + x/3))` |
//! | `theorem1`   | `max_k S_k >= n x`                      | `C(a, x) exp(-(x/4)^{2a} n^a)` |
//! | `theorem2`   | `S_k >= x, <S>_k <= v^2`                | `exp(-x^2 / 2(v^2 + x^{2-a}/3)) + n C1 exp(-x^a)` |
//! | `corollary1` | `max_k S_k >= n x`                      | `exp(-x^{1+a} n^a / 2(1 + x/3)) + (n C1 + C2) exp(-x^a n^a)` |

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Interpolation point splitting the deviation between the bounded and the
/// heavy part of the two-sided truncation. Fixed; the constant 35 in
/// [`theorem1_constant`] is derived from this choice.
pub const TRUNCATION_SPLIT: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Large-deviation power, restricted to `[0.01, 0.99]`.
///
/// Exponents such as `2a/(1-a)` and `(1-a)/(2a)` blow up at the ends of
/// `(0, 1)`, so construction rejects values outside the closed subinterval.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct Alpha(f64);

impl Alpha {
    pub const MIN: f64 = 0.01;
    pub const MAX: f64 = 0.99;

    pub fn new(value: f64) -> Result<Self> {
        if !(Self::MIN..=Self::MAX).contains(&value) {
            return Err(Error::domain("alpha", value, "must lie in [0.01, 0.99]"));
        }
        Ok(Alpha(value))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// `2a / (1 - a)`: the stretched-exponential moment exponent.
    pub fn stretch_exponent(self) -> f64 {
        2.0 * self.0 / (1.0 - self.0)
    }

    /// `a / (1 - a)`: the exponent on `X_i^+` and `<S>_n / n`.
    pub fn positive_part_exponent(self) -> f64 {
        self.0 / (1.0 - self.0)
    }

    /// `(1 + a) / (1 - a)`: the polynomial factor in the witness tail.
    pub fn heavy_exponent(self) -> f64 {
        (1.0 + self.0) / (1.0 - self.0)
    }
}

impl TryFrom<f64> for Alpha {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        Alpha::new(value)
    }
}

impl<'de> Deserialize<'de> for Alpha {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let raw = f64::deserialize(de)?;
        Alpha::new(raw).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for Alpha {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Inputs shared by the moment-type bounds.
///
/// `x` is the deviation level (per-step units for `theorem1`/`corollary1`,
/// absolute for `theorem2`), `v` the variance threshold on `sqrt(<S>)`, and
/// `c1`, `c2` the moment constants. Zero constants are accepted and give the
/// limiting forms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundParams {
    pub alpha: Alpha,
    pub x: f64,
    pub n: u64,
    pub v: f64,
    pub c1: f64,
    pub c2: f64,
}

impl BoundParams {
    pub fn new(alpha: Alpha, x: f64, n: u64) -> Self {
        BoundParams {
            alpha,
            x,
            n,
            v: 0.0,
            c1: 0.0,
            c2: 0.0,
        }
    }

    pub fn with_v(mut self, v: f64) -> Self {
        self.v = v;
        self
    }

    pub fn with_c1(mut self, c1: f64) -> Self {
        self.c1 = c1;
        self
    }

    pub fn with_c2(mut self, c2: f64) -> Self {
        self.c2 = c2;
        self
    }

    pub fn validate(&self) -> Result<()> {
        positive("x", self.x)?;
        if self.n == 0 {
            return Err(Error::domain("n", 0.0, "must be at least 1"));
        }
        nonnegative("v", self.v)?;
        nonnegative("c1", self.c1)?;
        nonnegative("c2", self.c2)?;
        Ok(())
    }
}

/// Which displayed inequality produced a bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundKind {
    Lemma1,
    Lemma2,
    Theorem1,
    Theorem2,
    Corollary1,
    Certificate,
}

impl BoundKind {
    pub const ALL: [BoundKind; 6] = [
        BoundKind::Lemma1,
        BoundKind::Lemma2,
        BoundKind::Theorem1,
        BoundKind::Theorem2,
        BoundKind::Corollary1,
        BoundKind::Certificate,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BoundKind::Lemma1 => "lemma1",
            BoundKind::Lemma2 => "lemma2",
            BoundKind::Theorem1 => "theorem1",
            BoundKind::Theorem2 => "theorem2",
            BoundKind::Corollary1 => "corollary1",
            BoundKind::Certificate => "certificate",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|kind| kind.name() == name)
    }
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The operation and arguments a [`TailBound`] came from.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Provenance {
    pub bound: BoundKind,
    pub params: Vec<(&'static str, f64)>,
}

impl Provenance {
    pub fn new(bound: BoundKind, params: &[(&'static str, f64)]) -> Self {
        Provenance {
            bound,
            params: params.to_vec(),
        }
    }

    pub fn param(&self, name: &str) -> Option<f64> {
        self.params.iter().find(|(k, _)| *k == name).map(|(_, v)| *v)
    }
}

/// A probability bound carried in log space.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TailBound {
    log_value: f64,
    clipped: f64,
    provenance: Provenance,
}

impl TailBound {
    pub fn from_log(log_value: f64, provenance: Provenance) -> Self {
        // The lower clamp keeps the clipped value a valid (conservative) bound
        // when exp underflows.
        let clipped = log_value.min(0.0).exp().max(f64::MIN_POSITIVE);
        TailBound {
            log_value,
            clipped,
            provenance,
        }
    }

    /// Natural log of the raw, unclipped bound.
    pub fn log_value(&self) -> f64 {
        self.log_value
    }

    /// `min(1, exp(log_value))`, never below the smallest normal `f64`.
    pub fn clipped(&self) -> f64 {
        self.clipped
    }

    /// The raw value; may exceed one and may overflow to infinity.
    pub fn raw(&self) -> f64 {
        self.log_value.exp()
    }

    /// A bound above one carries no information.
    pub fn is_vacuous(&self) -> bool {
        self.log_value > 0.0
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }
}

fn positive(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(name, value, "must be positive and finite"))
    }
}

fn nonnegative(name: &'static str, value: f64) -> Result<()> {
    if value >= 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(name, value, "must be nonnegative and finite"))
    }
}

fn horizon(n: u64) -> Result<f64> {
    if n == 0 {
        Err(Error::domain("n", 0.0, "must be at least 1"))
    } else {
        Ok(n as f64)
    }
}

/// `ln(e^a + e^b)` without overflow; either argument may be `-inf`.
pub fn log_add_exp(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if hi == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    hi + (lo - hi).exp().ln_1p()
}

/// Maximal Azuma–Hoeffding bound for martingale differences with `|X_i| <= 1`:
/// `P(max_{k<=n} S_k >= x) <= exp(-x^2 / (2n))`.
pub fn azuma_max_tail_bound(n: u64, x: f64) -> Result<TailBound> {
    let nf = horizon(n)?;
    nonnegative("x", x)?;
    Ok(TailBound::from_log(
        -x * x / (2.0 * nf),
        Provenance::new(BoundKind::Lemma1, &[("n", nf), ("x", x)]),
    ))
}

/// Stationary point `beta = (3(1-a)/(2a))^{(1-a)/(2a)}` of
/// `g(t) = t^3 exp(-t^{2a/(1-a)})`: `g` increases on `[0, beta]` and decreases after.
pub fn truncation_beta(alpha: Alpha) -> f64 {
    let a = alpha.value();
    (3.0 * (1.0 - a) / (2.0 * a)).powf((1.0 - a) / (2.0 * a))
}

/// Truncation level `u = (x / (4 sqrt(n)))^{1-a}` used to split increments into
/// a bounded part and a heavy part when deriving [`theorem1_tail_bound`].
pub fn truncation_level(alpha: Alpha, x: f64, n: u64) -> Result<f64> {
    positive("x", x)?;
    let nf = horizon(n)?;
    Ok((x / (4.0 * nf.sqrt())).powf(1.0 - alpha.value()))
}

/// The constant
/// `C(a, x) = 2 + 35 C1 (1 / (x^{2a} 16^{1-a}) + (3(1-a)/(2a))^{(1-a)/a} / x^2)`,
/// which does not depend on the horizon `n`.
pub fn theorem1_constant(alpha: Alpha, x: f64, c1: f64) -> Result<f64> {
    positive("x", x)?;
    nonnegative("c1", c1)?;
    let a = alpha.value();
    let beta_sq = (3.0 * (1.0 - a) / (2.0 * a)).powf((1.0 - a) / a);
    let bracket = 1.0 / (x.powf(2.0 * a) * 16f64.powf(1.0 - a)) + beta_sq / (x * x);
    Ok(2.0 + 35.0 * c1 * bracket)
}

/// `P(max_{k<=n} S_k >= n x) <= C(a, x) exp(-(x/4)^{2a} n^a)` for
/// supermartingale differences with `sup_i E exp(|X_i|^{2a/(1-a)}) <= C1`.
pub fn theorem1_tail_bound(params: &BoundParams) -> Result<TailBound> {
    params.validate()?;
    let a = params.alpha.value();
    let constant = theorem1_constant(params.alpha, params.x, params.c1)?;
    let nf = params.n as f64;
    let log_value = constant.ln() - (params.x / 4.0).powf(2.0 * a) * nf.powf(a);
    Ok(TailBound::from_log(
        log_value,
        Provenance::new(
            BoundKind::Theorem1,
            &[("alpha", a), ("x", params.x), ("n", nf), ("c1", params.c1)],
        ),
    ))
}

/// Freedman-type bound for supermartingale differences with `X_i <= 1`:
/// `P(S_k >= x and <S>_k <= v^2 for some k) <= exp(-x^2 / (2(v^2 + x/3)))`.
///
/// `x = 0` gives the bound 1.
pub fn freedman_unit_bound(x: f64, v: f64) -> Result<TailBound> {
    nonnegative("x", x)?;
    positive("v", v)?;
    Ok(TailBound::from_log(
        -x * x / (2.0 * (v * v + x / 3.0)),
        Provenance::new(BoundKind::Lemma2, &[("x", x), ("v", v)]),
    ))
}

/// Joint-event bound under `sup_i E exp((X_i^+)^{a/(1-a)}) <= C1`:
/// `exp(-x^2 / (2(v^2 + x^{2-a}/3))) + n C1 exp(-x^a)`.
pub fn theorem2_tail_bound(params: &BoundParams) -> Result<TailBound> {
    params.validate()?;
    positive("v", params.v)?;
    let a = params.alpha.value();
    let (x, v, nf) = (params.x, params.v, params.n as f64);
    let first = -x * x / (2.0 * (v * v + x.powf(2.0 - a) / 3.0));
    let second = (nf * params.c1).ln() - x.powf(a);
    Ok(TailBound::from_log(
        log_add_exp(first, second),
        Provenance::new(
            BoundKind::Theorem2,
            &[("alpha", a), ("x", x), ("v", v), ("n", nf), ("c1", params.c1)],
        ),
    ))
}

/// Log of the first addend of [`theorem2_tail_bound`] (the bounded part).
pub fn theorem2_bounded_part_log(params: &BoundParams) -> Result<f64> {
    params.validate()?;
    positive("v", params.v)?;
    let (x, v) = (params.x, params.v);
    Ok(-x * x / (2.0 * (v * v + x.powf(2.0 - params.alpha.value()) / 3.0)))
}

/// Bernstein-type bound under the `X_i^+` moment condition (constant `C1`) and
/// `E exp((<S>_n / n)^{a/(1-a)}) <= C2`:
/// `exp(-x^{1+a} n^a / (2(1 + x/3))) + (n C1 + C2) exp(-x^a n^a)`.
pub fn corollary1_tail_bound(params: &BoundParams) -> Result<TailBound> {
    params.validate()?;
    let a = params.alpha.value();
    let (x, nf) = (params.x, params.n as f64);
    let na = nf.powf(a);
    let first = -x.powf(1.0 + a) * na / (2.0 * (1.0 + x / 3.0));
    let second = (nf * params.c1 + params.c2).ln() - x.powf(a) * na;
    Ok(TailBound::from_log(
        log_add_exp(first, second),
        Provenance::new(
            BoundKind::Corollary1,
            &[
                ("alpha", a),
                ("x", x),
                ("n", nf),
                ("c1", params.c1),
                ("c2", params.c2),
            ],
        ),
    ))
}

/// Decay coefficient of the dominant exponential term, i.e. the `c` in
/// `log bound ~ -c n^a` as `n` grows. `None` for bounds without an `n^a` rate.
pub fn predicted_decay_rate(kind: BoundKind, alpha: Alpha, x: f64) -> Option<f64> {
    let a = alpha.value();
    match kind {
        BoundKind::Theorem1 => Some((x / 4.0).powf(2.0 * a)),
        BoundKind::Corollary1 => {
            Some((x.powf(1.0 + a) / (2.0 * (1.0 + x / 3.0))).min(x.powf(a)))
        }
        _ => None,
    }
}
