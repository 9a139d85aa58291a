use std::fmt;

use rand::Rng;
use rand_distr::{Distribution, Exp1};
use serde::Serialize;
use statrs::function::gamma::gamma_li;

use crate::bounds::Alpha;
use crate::error::{Error, Result};
use crate::quadrature;
use crate::witness::WitnessDistribution;

const E: f64 = std::f64::consts::E;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Atom {
    pub value: f64,
    pub prob: f64,
}

/// I.i.d. increments on a finite set with mean `<= 0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FiniteLaw {
    name: String,
    atoms: Vec<Atom>,
    #[serde(skip)]
    cdf: Vec<f64>,
}

impl FiniteLaw {
    pub fn new(name: impl Into<String>, atoms: Vec<Atom>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::Config("finite law needs at least one atom".into()));
        }
        for atom in &atoms {
            if !atom.value.is_finite() {
                return Err(Error::domain("atom value", atom.value, "must be finite"));
            }
            if !(atom.prob > 0.0 && atom.prob <= 1.0) {
                return Err(Error::domain("atom probability", atom.prob, "must lie in (0, 1]"));
            }
        }
        let total: f64 = atoms.iter().map(|a| a.prob).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::domain("total probability", total, "must equal 1"));
        }
        let mean: f64 = atoms.iter().map(|a| a.value * a.prob).sum();
        if mean > 1e-12 {
            return Err(Error::domain("mean increment", mean, "must be <= 0 for a supermartingale"));
        }
        let mut cdf: Vec<f64> = atoms
            .iter()
            .scan(0.0, |acc, a| {
                *acc += a.prob;
                Some(*acc)
            })
            .collect();
        *cdf.last_mut().expect("nonempty") = 1.0;
        Ok(FiniteLaw {
            name: name.into(),
            atoms,
            cdf,
        })
    }

    /// `{-1, 0, +1}` with probabilities `(1/4, 1/2, 1/4)`.
    pub fn three_point() -> Self {
        Self::super_centered(0.0).expect("valid law")
    }

    /// `{-1, 0, +1}` with probabilities `(1/4 - d/2, 1/2, 1/4 + d/2)`; mean `d <= 0`.
    pub fn super_centered(drift: f64) -> Result<Self> {
        if !(-0.5..=0.0).contains(&drift) {
            return Err(Error::domain("drift", drift, "must lie in [-0.5, 0]"));
        }
        let name = if drift == 0.0 {
            "three-point".to_string()
        } else {
            format!("super-centered({drift})")
        };
        let mut atoms = vec![
            Atom { value: -1.0, prob: 0.25 - drift / 2.0 },
            Atom { value: 0.0, prob: 0.5 },
        ];
        if drift > -0.5 {
            atoms.push(Atom { value: 1.0, prob: 0.25 + drift / 2.0 });
        }
        Self::new(name, atoms)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn mean(&self) -> f64 {
        self.atoms.iter().map(|a| a.value * a.prob).sum()
    }

    pub fn second_moment(&self) -> f64 {
        self.atoms.iter().map(|a| a.value * a.value * a.prob).sum()
    }

    pub fn max_value(&self) -> f64 {
        self.atoms.iter().map(|a| a.value).fold(f64::NEG_INFINITY, f64::max)
    }

    /// `E(X 1{|X| <= u})`
    pub fn truncated_mean(&self, u: f64) -> f64 {
        self.atoms
            .iter()
            .filter(|a| a.value.abs() <= u)
            .map(|a| a.value * a.prob)
            .sum()
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u: f64 = rng.random();
        let idx = self.cdf.iter().position(|&c| u < c).unwrap_or(self.cdf.len() - 1);
        self.atoms[idx].value
    }
}

/// Symmetric i.i.d. increments `xi * min(W, cap)` where `xi` is a fair sign and
/// `P(W >= w) = exp(-w^{2a/(1-a)})`.
///
/// The cap keeps `E exp(|X|^{2a/(1-a)}) = 1 + cap^{2a/(1-a)}` finite; without
/// it that moment diverges.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TruncatedHeavy {
    alpha: Alpha,
    cap: f64,
    #[serde(skip)]
    gamma: f64,
    #[serde(skip)]
    cap_power: f64,
}

impl TruncatedHeavy {
    pub const DEFAULT_CAP: f64 = 3.0;

    pub fn new(alpha: Alpha, cap: f64) -> Result<Self> {
        if !(cap > 0.0 && cap.is_finite()) {
            return Err(Error::domain("cap", cap, "must be positive and finite"));
        }
        let gamma = alpha.stretch_exponent();
        Ok(TruncatedHeavy {
            alpha,
            cap,
            gamma,
            cap_power: cap.powf(gamma),
        })
    }

    pub fn alpha(&self) -> Alpha {
        self.alpha
    }

    pub fn cap(&self) -> f64 {
        self.cap
    }

    /// `|X|`, drawn as `E^{1/gamma}` for a standard exponential `E`.
    fn magnitude<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let e: f64 = Exp1.sample(rng);
        if e >= self.cap_power {
            self.cap
        } else if self.gamma == 1.0 {
            e
        } else if self.gamma == 2.0 {
            e.sqrt()
        } else {
            e.powf(1.0 / self.gamma)
        }
    }

    /// `E min(W, cap)^2 = (2/gamma) * lower_gamma(2/gamma, cap^gamma)`.
    pub fn second_moment(&self) -> f64 {
        let s = 2.0 / self.gamma;
        s * gamma_li(s, self.cap_power)
    }

    /// `E exp(min(W, cap)^power) = 1 + int_0^{cap^power} exp(z - z^{gamma/power}) dz`.
    pub fn expected_exp_power(&self, power: f64) -> f64 {
        if power == 0.0 {
            return E;
        }
        if (power - self.gamma).abs() <= 1e-12 * self.gamma {
            return 1.0 + self.cap_power;
        }
        let ratio = self.gamma / power;
        let upper = self.cap.powf(power);
        1.0 + quadrature::integrate(|z| (z - z.powf(ratio)).exp(), 0.0, upper, 0.0, 1e-12, 4000).value
    }
}

/// A generator of supermartingale differences whose conditional law is known
/// in closed form, so centering terms and `<S>_k` are exact.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GeneratorSpec {
    /// Fair `+-1` signs.
    Rademacher,
    /// I.i.d. draws from a finite law with mean `<= 0`.
    ScaledBounded(FiniteLaw),
    /// `X xi_i` with one witness draw `X` per path and fair signs `xi_i`.
    StationaryWitness(WitnessDistribution),
    TruncatedHeavy(TruncatedHeavy),
}

impl GeneratorSpec {
    pub fn kind_name(&self) -> &'static str {
        match self {
            GeneratorSpec::Rademacher => "rademacher",
            GeneratorSpec::ScaledBounded(_) => "scaled-bounded",
            GeneratorSpec::StationaryWitness(_) => "stationary-witness",
            GeneratorSpec::TruncatedHeavy(_) => "truncated-heavy",
        }
    }

    /// Conditional mean `E(X_i | F_{i-1})`, the same at every step.
    pub fn drift(&self) -> f64 {
        match self {
            GeneratorSpec::ScaledBounded(law) => law.mean(),
            _ => 0.0,
        }
    }

    pub fn is_martingale(&self) -> bool {
        self.drift() == 0.0
    }

    /// Finite support with probabilities, when there is one.
    pub fn finite_support(&self) -> Option<Vec<Atom>> {
        match self {
            GeneratorSpec::Rademacher => Some(vec![
                Atom { value: -1.0, prob: 0.5 },
                Atom { value: 1.0, prob: 0.5 },
            ]),
            GeneratorSpec::ScaledBounded(law) => Some(law.atoms.clone()),
            _ => None,
        }
    }

    /// `E(X_i 1{|X_i| <= u} | F_{i-1})`. The witness law needs the path's
    /// shared draw `X` to be known.
    pub fn conditional_truncated_mean(&self, u: f64, shared_scale: Option<f64>) -> Result<f64> {
        match self {
            GeneratorSpec::Rademacher | GeneratorSpec::TruncatedHeavy(_) => Ok(0.0),
            GeneratorSpec::ScaledBounded(law) => Ok(law.truncated_mean(u)),
            GeneratorSpec::StationaryWitness(_) => match shared_scale {
                // +-X with equal probability given X
                Some(_) => Ok(0.0),
                None => Err(Error::UnsupportedSpec(
                    "stationary-witness centering needs the path's shared draw".into(),
                )),
            },
        }
    }

    /// `sup_i E exp(|X_i|^{2a/(1-a)})`, the `C1` of the stretched-exponential bound.
    pub fn stretched_moment(&self, alpha: Alpha) -> f64 {
        let power = alpha.stretch_exponent();
        match self {
            GeneratorSpec::Rademacher => E,
            GeneratorSpec::ScaledBounded(law) => law
                .atoms
                .iter()
                .map(|a| a.prob * a.value.abs().powf(power).exp())
                .sum(),
            GeneratorSpec::StationaryWitness(w) => w.expected_exp_power(power),
            GeneratorSpec::TruncatedHeavy(h) => h.expected_exp_power(power),
        }
    }

    /// `sup_i E exp((X_i^+)^{a/(1-a)})`, the `C1` of the joint-event and Bernstein bounds.
    pub fn positive_part_moment(&self, alpha: Alpha) -> f64 {
        let power = alpha.positive_part_exponent();
        match self {
            GeneratorSpec::Rademacher => (E + 1.0) / 2.0,
            GeneratorSpec::ScaledBounded(law) => law
                .atoms
                .iter()
                .map(|a| a.prob * a.value.max(0.0).powf(power).exp())
                .sum(),
            GeneratorSpec::StationaryWitness(w) => (1.0 + w.expected_exp_power(power)) / 2.0,
            GeneratorSpec::TruncatedHeavy(h) => (1.0 + h.expected_exp_power(power)) / 2.0,
        }
    }

    /// `E exp((<S>_n / n)^{a/(1-a)})`, the `C2` of the Bernstein-type bound.
    pub fn variance_moment(&self, alpha: Alpha) -> f64 {
        let power = alpha.positive_part_exponent();
        match self {
            GeneratorSpec::Rademacher => E,
            GeneratorSpec::ScaledBounded(law) => law.second_moment().powf(power).exp(),
            // <S>_n / n = X^2
            GeneratorSpec::StationaryWitness(w) => w.expected_exp_power(2.0 * power),
            GeneratorSpec::TruncatedHeavy(h) => h.second_moment().powf(power).exp(),
        }
    }
}

impl fmt::Display for GeneratorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeneratorSpec::Rademacher => f.write_str("rademacher"),
            GeneratorSpec::ScaledBounded(law) => f.write_str(&law.name),
            GeneratorSpec::StationaryWitness(w) => write!(f, "stationary-witness(alpha={})", w.alpha()),
            GeneratorSpec::TruncatedHeavy(h) => {
                write!(f, "truncated-heavy(alpha={},cap={})", h.alpha, h.cap)
            }
        }
    }
}

/// Per-path sampling state.
pub(crate) struct StepSource<'a> {
    spec: &'a GeneratorSpec,
    scale: Option<f64>,
    bits: u64,
    bits_left: u32,
}

impl<'a> StepSource<'a> {
    /// Starts a path; draws the shared witness value when the spec has one.
    pub(crate) fn new<R: Rng + ?Sized>(spec: &'a GeneratorSpec, rng: &mut R) -> Self {
        let scale = match spec {
            GeneratorSpec::StationaryWitness(w) => Some(w.sample(rng)),
            _ => None,
        };
        StepSource {
            spec,
            scale,
            bits: 0,
            bits_left: 0,
        }
    }

    pub(crate) fn shared_scale(&self) -> Option<f64> {
        self.scale
    }

    #[inline]
    fn sign<R: Rng + ?Sized>(&mut self, rng: &mut R) -> f64 {
        if self.bits_left == 0 {
            self.bits = rng.next_u64();
            self.bits_left = 64;
        }
        let bit = self.bits & 1;
        self.bits >>= 1;
        self.bits_left -= 1;
        if bit == 1 {
            1.0
        } else {
            -1.0
        }
    }

    #[inline]
    pub(crate) fn next<R: Rng + ?Sized>(&mut self, rng: &mut R) -> f64 {
        match self.spec {
            GeneratorSpec::Rademacher => self.sign(rng),
            GeneratorSpec::ScaledBounded(law) => law.sample(rng),
            GeneratorSpec::StationaryWitness(_) => self.scale.expect("drawn at start") * self.sign(rng),
            GeneratorSpec::TruncatedHeavy(h) => {
                let s = self.sign(rng);
                s * h.magnitude(rng)
            }
        }
    }

    /// `E(X_i^2 | F_{i-1})`, constant along the path.
    pub(crate) fn step_variance(&self) -> f64 {
        match self.spec {
            GeneratorSpec::Rademacher => 1.0,
            GeneratorSpec::ScaledBounded(law) => law.second_moment(),
            GeneratorSpec::StationaryWitness(_) => {
                let x = self.scale.expect("drawn at start");
                x * x
            }
            GeneratorSpec::TruncatedHeavy(h) => h.second_moment(),
        }
    }

    /// Largest possible single increment on this path.
    pub(crate) fn step_bound(&self) -> Option<f64> {
        match self.spec {
            GeneratorSpec::Rademacher => Some(1.0),
            GeneratorSpec::ScaledBounded(law) => Some(law.max_value()),
            GeneratorSpec::StationaryWitness(_) => self.scale,
            GeneratorSpec::TruncatedHeavy(h) => Some(h.cap),
        }
    }
}
