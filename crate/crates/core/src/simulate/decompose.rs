use serde::{Deserialize, Serialize};

use super::generator::GeneratorSpec;
use super::path::MartingalePath;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TruncationMode {
    /// `X'_i = X_i 1{|X_i| <= u} - E(. | F_{i-1})`, `X''_i` likewise on `{|X_i| > u}`,
    /// and the drift `S'''_k = sum_i E(X_i | F_{i-1})`.
    TwoSidedCentered,
    /// `X'_i = X_i 1{X_i <= u}`, `X''_i = X_i 1{X_i > u}`.
    OneSided,
}

/// Split of a path into a bounded part, a large-jump part and (two-sided only)
/// a predictable drift.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Decomposition {
    pub mode: TruncationMode,
    pub u: f64,
    pub primed: Vec<f64>,
    pub double_primed: Vec<f64>,
    /// `S'''_k`; empty in one-sided mode.
    pub drift: Vec<f64>,
}

fn cumulative(xs: &[f64]) -> Vec<f64> {
    xs.iter()
        .scan(0.0, |acc, &x| {
            *acc += x;
            Some(*acc)
        })
        .collect()
}

impl Decomposition {
    pub fn primed_sums(&self) -> Vec<f64> {
        cumulative(&self.primed)
    }

    pub fn double_primed_sums(&self) -> Vec<f64> {
        cumulative(&self.double_primed)
    }

    /// `max_k |S_k - (S'_k + S''_k + S'''_k)|`.
    pub fn reconstruction_error(&self, path: &MartingalePath) -> f64 {
        let p = self.primed_sums();
        let q = self.double_primed_sums();
        path.partial_sums()
            .iter()
            .enumerate()
            .map(|(k, &s)| {
                let drift = self.drift.get(k).copied().unwrap_or(0.0);
                (s - (p[k] + q[k] + drift)).abs()
            })
            .fold(0.0, f64::max)
    }
}

/// Truncates `path` at level `u`.
///
/// Two-sided mode needs the conditional means `E(X_i 1{|X_i| <= u} | F_{i-1})`
/// from `spec`; for the stationary witness this requires the path's shared draw.
pub fn truncate_center(
    path: &MartingalePath,
    spec: &GeneratorSpec,
    u: f64,
    mode: TruncationMode,
) -> Result<Decomposition> {
    if !(u > 0.0 && u.is_finite()) {
        return Err(Error::domain("u", u, "must be positive and finite"));
    }
    let xs = path.increments();
    match mode {
        TruncationMode::OneSided => {
            let (primed, double_primed) = xs
                .iter()
                .map(|&x| if x <= u { (x, 0.0) } else { (0.0, x) })
                .unzip();
            Ok(Decomposition {
                mode,
                u,
                primed,
                double_primed,
                drift: Vec::new(),
            })
        }
        TruncationMode::TwoSidedCentered => {
            let small_mean = spec.conditional_truncated_mean(u, path.shared_scale())?;
            let drift_step = spec.drift();
            let large_mean = drift_step - small_mean;
            let (primed, double_primed) = xs
                .iter()
                .map(|&x| {
                    if x.abs() <= u {
                        (x - small_mean, -large_mean)
                    } else {
                        (-small_mean, x - large_mean)
                    }
                })
                .unzip();
            let drift = (1..=xs.len()).map(|k| k as f64 * drift_step).collect();
            Ok(Decomposition {
                mode,
                u,
                primed,
                double_primed,
                drift,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::Alpha;
    use crate::simulate::generator::{FiniteLaw, TruncatedHeavy};
    use crate::simulate::path::generate_path;
    use crate::simulate::rng::substream;
    use crate::witness::WitnessDistribution;
    use proptest::prelude::*;

    fn witness_spec() -> GeneratorSpec {
        GeneratorSpec::StationaryWitness(WitnessDistribution::new(Alpha::new(0.5).unwrap()))
    }

    #[test]
    fn rademacher_wide_truncation_is_identity() {
        let spec = GeneratorSpec::Rademacher;
        let path = generate_path(&spec, 20, &mut substream(3, 0)).unwrap();
        let d = truncate_center(&path, &spec, 2.0, TruncationMode::TwoSidedCentered).unwrap();
        assert_eq!(d.primed, path.increments());
        assert!(d.double_primed.iter().all(|&x| x == 0.0));
        assert!(d.drift.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn rademacher_narrow_truncation_moves_everything() {
        let spec = GeneratorSpec::Rademacher;
        let path = generate_path(&spec, 20, &mut substream(4, 0)).unwrap();
        let d = truncate_center(&path, &spec, 0.5, TruncationMode::TwoSidedCentered).unwrap();
        assert!(d.primed.iter().all(|&x| x == 0.0));
        assert_eq!(d.double_primed, path.increments());
        assert!(d.drift.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn witness_one_sided_split() {
        let spec = witness_spec();
        for seed in 0..200 {
            let path = generate_path(&spec, 12, &mut substream(seed, 1)).unwrap();
            let d = truncate_center(&path, &spec, 1.0, TruncationMode::OneSided).unwrap();
            for (i, &x) in path.increments().iter().enumerate() {
                let big = if x > 1.0 { x } else { 0.0 };
                assert_eq!(d.double_primed[i], big);
                assert_eq!(d.primed[i], x - big);
                assert!(d.primed[i] <= 1.0);
            }
            assert!(d.reconstruction_error(&path) <= 1e-12);
        }
    }

    #[test]
    fn witness_two_sided_needs_scale() {
        let spec = witness_spec();
        let path = MartingalePath::from_increments(vec![2.0, -2.0], 4.0, None);
        let err = truncate_center(&path, &spec, 1.0, TruncationMode::TwoSidedCentered).unwrap_err();
        assert!(matches!(err, Error::UnsupportedSpec(_)));
        // one-sided needs no conditional law
        assert!(truncate_center(&path, &spec, 1.0, TruncationMode::OneSided).is_ok());
    }

    #[test]
    fn super_centered_drift_is_nonincreasing() {
        let spec = GeneratorSpec::ScaledBounded(FiniteLaw::super_centered(-0.01).unwrap());
        let path = generate_path(&spec, 50, &mut substream(9, 0)).unwrap();
        let d = truncate_center(&path, &spec, 0.5, TruncationMode::TwoSidedCentered).unwrap();
        assert!(d.drift.windows(2).all(|w| w[1] <= w[0]));
        assert!(d.drift[0] < 0.0);
        assert!(d.reconstruction_error(&path) <= 1e-12);
    }

    #[test]
    fn bad_level_rejected() {
        let path = MartingalePath::from_increments(vec![1.0], 1.0, None);
        assert!(truncate_center(&path, &GeneratorSpec::Rademacher, 0.0, TruncationMode::OneSided).is_err());
    }

    proptest! {
        #[test]
        fn reconstruction_and_bounds(seed in any::<u64>(), u in 0.05f64..6.0, which in 0usize..4) {
            let a = Alpha::new(0.5).unwrap();
            let spec = [
                GeneratorSpec::Rademacher,
                GeneratorSpec::ScaledBounded(FiniteLaw::super_centered(-0.01).unwrap()),
                witness_spec(),
                GeneratorSpec::TruncatedHeavy(TruncatedHeavy::new(a, 3.0).unwrap()),
            ][which].clone();
            let path = generate_path(&spec, 64, &mut substream(seed, 0)).unwrap();
            let two = truncate_center(&path, &spec, u, TruncationMode::TwoSidedCentered).unwrap();
            prop_assert!(two.reconstruction_error(&path) <= 1e-12);
            prop_assert!(two.primed.iter().all(|x| x.abs() <= 2.0 * u));
            let one = truncate_center(&path, &spec, u, TruncationMode::OneSided).unwrap();
            prop_assert!(one.reconstruction_error(&path) <= 1e-12);
            prop_assert!(one.primed.iter().all(|&x| x <= u));
            prop_assert!(one.double_primed.iter().all(|&x| x == 0.0 || x > u));
        }
    }
}
