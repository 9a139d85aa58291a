//! Worked examples evaluated through the public API against hand-derived
//! closed forms and brute-force oracles written here.

use std::f64::consts::{E, PI};

use devbound_core::bounds::{
    azuma_max_tail_bound, corollary1_tail_bound, freedman_unit_bound, theorem1_constant, theorem1_tail_bound,
    theorem2_tail_bound, truncation_beta, truncation_level,
};
use devbound_core::simulate::rng::substream;
use devbound_core::simulate::{enumerate_exact, generate_path, mc_tail_estimate, DEFAULT_ENUMERATION_BUDGET};
use devbound_core::stats::exact_binomial_tail;
use devbound_core::verify::{ks_statistic, run_suite, summarize, SuiteConfig};
use devbound_core::witness::{optimality_certificate, optimality_threshold};
use devbound_core::{Alpha, BoundKind, BoundParams, Event, FiniteLaw, GeneratorSpec, SweepConfig, WitnessDistribution};

fn alpha(a: f64) -> Alpha {
    Alpha::new(a).unwrap()
}

fn close(actual: f64, expected: f64, rel: f64) {
    assert!(
        (actual - expected).abs() <= rel * expected.abs(),
        "{actual:e} vs {expected:e} (rel tol {rel:e})"
    );
}

/// `P(max_{k<=n} S_k >= x)` over all `2^n` sign patterns.
fn brute_force_max(n: u32, x: i32) -> f64 {
    let hits = (0u32..1 << n)
        .filter(|bits| {
            let mut s = 0;
            (0..n).any(|i| {
                s += if bits >> i & 1 == 1 { 1 } else { -1 };
                s >= x
            })
        })
        .count();
    hits as f64 / (1u64 << n) as f64
}

#[test]
fn azuma_examples() {
    assert_eq!(azuma_max_tail_bound(8, 0.0).unwrap().clipped(), 1.0);
    close(azuma_max_tail_bound(100, 20.0).unwrap().clipped(), (-2.0f64).exp(), 1e-15);
    let bound = azuma_max_tail_bound(10, 4.0).unwrap();
    close(bound.clipped(), (-0.8f64).exp(), 1e-15);
    let exact = brute_force_max(10, 4);
    assert!(bound.clipped() >= exact);
    let enumerated = enumerate_exact(
        &GeneratorSpec::Rademacher,
        10,
        &Event::MaxAtLeast { level: 4.0 },
        DEFAULT_ENUMERATION_BUDGET,
    )
    .unwrap();
    assert!((enumerated - exact).abs() < 1e-15);
}

#[test]
fn beta_examples() {
    close(truncation_beta(alpha(0.6)), 1.0, 1e-15);
    close(truncation_beta(alpha(0.5)), 1.5f64.sqrt(), 1e-15);
    close(truncation_beta(alpha(1.0 / 3.0)), 3.0, 1e-14);
    // g(t) = t^3 exp(-t^{2a/(1-a)}) peaks at beta
    let g = |t: f64| t.powi(3) * (-t).exp();
    assert!(g(2.9) < g(3.0) && g(3.1) < g(3.0));
}

#[test]
fn theorem1_examples() {
    assert_eq!(theorem1_constant(alpha(0.5), 1.0, 0.0).unwrap(), 2.0);
    close(theorem1_constant(alpha(0.5), 1.0, 1.0).unwrap(), 63.25, 1e-15);
    close(
        theorem1_constant(alpha(1.0 / 3.0), 1.0, 1.0).unwrap(),
        2.0 + 35.0 * (16f64.powf(-2.0 / 3.0) + 9.0),
        1e-14,
    );
    // 1/(4^1 * 16^{1/2}) + (3/2)/16 = 5/32
    close(theorem1_constant(alpha(0.5), 4.0, 1.0).unwrap(), 2.0 + 35.0 * 5.0 / 32.0, 1e-15);

    let b = theorem1_tail_bound(&BoundParams::new(alpha(0.5), 1.0, 10_000).with_c1(1.0)).unwrap();
    close(b.clipped(), 63.25 * (-25.0f64).exp(), 1e-13);
    let b = theorem1_tail_bound(&BoundParams::new(alpha(1.0 / 3.0), 1.0, 1000).with_c1(1.0)).unwrap();
    assert!(b.raw() > 6.0 && b.raw() < 6.2, "{}", b.raw());
    assert_eq!(b.clipped(), 1.0);
    assert!(b.is_vacuous());
    let b = theorem1_tail_bound(&BoundParams::new(alpha(0.5), 4.0, 100).with_c1(1.0)).unwrap();
    close(b.clipped(), 7.46875 * (-10.0f64).exp(), 1e-13);
}

#[test]
fn freedman_examples() {
    assert_eq!(freedman_unit_bound(0.0, 1.0).unwrap().clipped(), 1.0);
    close(freedman_unit_bound(3.0, 1.0).unwrap().clipped(), (-2.25f64).exp(), 1e-15);
}

#[test]
fn theorem2_examples() {
    for a in [0.3, 0.5, 0.7] {
        let b = theorem2_tail_bound(&BoundParams::new(alpha(a), 4.0, 10).with_v(1.0)).unwrap();
        close(b.log_value(), -16.0 / (2.0 * (1.0 + 4f64.powf(2.0 - a) / 3.0)), 1e-14);
    }
    let b = theorem2_tail_bound(&BoundParams::new(alpha(0.5), 4.0, 10).with_v(1.0).with_c1(1.0)).unwrap();
    close(b.raw(), (-16.0f64 / (2.0 * (1.0 + 8.0 / 3.0))).exp() + 10.0 * (-2.0f64).exp(), 1e-14);
    assert_eq!(b.clipped(), 1.0);
    let b = theorem2_tail_bound(&BoundParams::new(alpha(0.5), 16.0, 4).with_v(2.0).with_c1(1.0)).unwrap();
    let expected = (-256.0f64 / (2.0 * (4.0 + 64.0 / 3.0))).exp() + 4.0 * (-4.0f64).exp();
    close(b.clipped(), expected, 1e-14);
    close(b.clipped(), 0.07966, 1e-3);
}

#[test]
fn corollary1_examples() {
    let b = corollary1_tail_bound(&BoundParams::new(alpha(0.5), 1.0, 1)).unwrap();
    close(b.clipped(), (-0.375f64).exp(), 1e-15);
    let b = corollary1_tail_bound(&BoundParams::new(alpha(0.5), 1.0, 100).with_c1(1.0).with_c2(1.0)).unwrap();
    close(b.clipped(), (-3.75f64).exp() + 101.0 * (-10.0f64).exp(), 1e-14);
    let b = corollary1_tail_bound(&BoundParams::new(alpha(1.0 / 3.0), 1.0, 1000).with_c1(1.0).with_c2(1.0)).unwrap();
    close(b.clipped(), (-3.75f64).exp() + 1001.0 * (-10.0f64).exp(), 1e-12);
}

#[test]
fn truncation_level_examples() {
    for a in [0.3, 0.5, 0.7] {
        close(truncation_level(alpha(a), 4.0 * 5f64.sqrt(), 5).unwrap(), 1.0, 1e-15);
    }
    close(truncation_level(alpha(0.5), 4.0, 4).unwrap(), 0.5f64.sqrt(), 1e-15);
    close(truncation_level(alpha(1.0 / 3.0), 1.0, 16).unwrap(), 16f64.powf(-2.0 / 3.0), 1e-14);
}

#[test]
fn witness_examples() {
    for a in [0.3, 0.5, 0.7] {
        let w = WitnessDistribution::new(alpha(a));
        assert_eq!(w.tail(1.0), 1.0);
        assert_eq!(w.tail(0.5), 1.0);
        assert_eq!(w.quantile(1.0).unwrap(), 1.0);
        assert!(w.moment() > E);
    }
    let half = WitnessDistribution::new(alpha(0.5));
    close(half.tail(2.0), 2.0 * E / 9.0 * (-4.0f64).exp(), 1e-14);
    close(half.quantile(2.0 * E / 9.0 * (-4.0f64).exp()).unwrap(), 2.0, 1e-12);
    let third = WitnessDistribution::new(alpha(1.0 / 3.0));
    close(third.tail(3.0), 2.0 * E / 10.0 * (-3.0f64).exp(), 1e-14);
    close(third.moment(), E * (1.0 + PI / 2.0), 1e-12);
    // int_1^inf t / (1 + t^3) dt = pi / (3 sqrt 3) + ln 2 / 3
    close(half.moment(), E * (1.0 + 4.0 * (PI / (3.0 * 3f64.sqrt()) + 2f64.ln() / 3.0)), 1e-10);
}

#[test]
fn witness_sampling_is_deterministic_and_fits_the_law() {
    let w = WitnessDistribution::new(alpha(0.5));
    let draw = |seed| w.sample(&mut substream(seed, 0));
    assert_eq!(draw(11).to_bits(), draw(11).to_bits());
    let mut rng = substream(5, 3);
    let mut xs: Vec<f64> = (0..100_000).map(|_| w.sample(&mut rng)).collect();
    xs.sort_by(f64::total_cmp);
    assert!(ks_statistic(&xs, |x| w.tail(x)).unwrap() <= 1.63 / 100_000f64.sqrt());
}

#[test]
fn binomial_examples() {
    assert_eq!(exact_binomial_tail(1, 0.0), 0.5);
    close(exact_binomial_tail(4, 4.0), 1.0 / 16.0, 1e-15);
    close(exact_binomial_tail(16, 8.0), 2517.0 / 65536.0, 1e-14);
    close(brute_force_sum_at_least(16, 8), 2517.0 / 65536.0, 1e-15);
}

fn brute_force_sum_at_least(n: u32, s: i32) -> f64 {
    let hits = (0u32..1 << n)
        .filter(|bits| 2 * bits.count_ones() as i32 - n as i32 >= s)
        .count();
    hits as f64 / (1u64 << n) as f64
}

#[test]
fn certificate_examples() {
    for a in [0.3, 0.5, 0.7] {
        close(optimality_certificate(alpha(a), 1).unwrap().certificate_log.exp(), 0.5, 1e-15);
        assert_eq!(optimality_threshold(alpha(a), 1).unwrap(), Some(1));
    }
    let r = optimality_certificate(alpha(0.5), 16).unwrap();
    close(r.certificate_log.exp(), 2517.0 / 65536.0 * 2.0 * E / 9.0 * (-4.0f64).exp(), 1e-12);
    close(r.threshold_log, -12.0, 1e-15);
    assert!(r.passes);
    // n = 4: n^b = 2^{1.5}, so the binomial factor is P(S_4 >= 2.83) = 1/16;
    // the witness factor is the tail at sqrt 2
    let r = optimality_certificate(alpha(0.5), 4).unwrap();
    let sqrt2 = 2f64.sqrt();
    let witness = 2.0 * E / (1.0 + sqrt2.powi(3)) * (-sqrt2.powi(2)).exp();
    close(r.certificate_log.exp(), witness / 16.0, 1e-12);
    assert!(r.passes);
    for a in [0.3, 0.5] {
        let n0 = optimality_threshold(alpha(a), 10_000).unwrap().expect("finite N0");
        assert!((n0..=10_000).all(|n| optimality_certificate(alpha(a), n).unwrap().passes));
    }
}

#[test]
fn enumeration_examples() {
    let max = |n, level| {
        enumerate_exact(&GeneratorSpec::Rademacher, n, &Event::MaxAtLeast { level }, DEFAULT_ENUMERATION_BUDGET).unwrap()
    };
    assert_eq!(max(1, 1.0), 0.5);
    assert_eq!(max(2, 2.0), 0.25);
    // 27 paths of {-1, 0, 1} with weights (1, 2, 1)/4; <S>_k = k/2 <= 3 always
    let mut weight = 0u32;
    for path in 0..27u32 {
        let steps = [path % 3, path / 3 % 3, path / 9];
        let mut s = 0i32;
        let mut w = 1u32;
        let mut hit = false;
        for &d in &steps {
            s += d as i32 - 1;
            w *= if d == 1 { 2 } else { 1 };
            hit |= s >= 2;
        }
        if hit {
            weight += w;
        }
    }
    let spec = GeneratorSpec::ScaledBounded(FiniteLaw::three_point());
    let exact = enumerate_exact(&spec, 3, &Event::JointVariance { level: 2.0, v: 3f64.sqrt() }, 1000).unwrap();
    close(exact, weight as f64 / 64.0, 1e-15);
}

#[test]
fn monte_carlo_examples() {
    let event = Event::MaxAtLeast { level: 1.0 };
    let est = mc_tail_estimate(&GeneratorSpec::Rademacher, &event, 1, 1_000_000, 42, 1e-3).unwrap();
    let (lo, hi) = devbound_core::stats::clopper_pearson_interval(est.hits, est.trials, 1e-3);
    assert!(lo <= 0.5 && 0.5 <= hi);
    let impossible = Event::MaxAtLeast { level: 5.0 };
    let est = mc_tail_estimate(&GeneratorSpec::Rademacher, &impossible, 4, 1000, 1, 1e-3).unwrap();
    assert_eq!(est.hits, 0);
    close(est.upper_cb, 1.0 - 1e-3f64.powf(1.0 / 1000.0), 1e-12);
}

#[test]
fn path_examples() {
    let path = generate_path(&GeneratorSpec::Rademacher, 5, &mut substream(3, 0)).unwrap();
    assert!(path.increments().iter().all(|x| x.abs() == 1.0));
    assert_eq!(path.predictable_variation()[4], 5.0);
    let spec = GeneratorSpec::StationaryWitness(WitnessDistribution::new(alpha(0.5)));
    let path = generate_path(&spec, 8, &mut substream(3, 0)).unwrap();
    let x = path.shared_scale().unwrap();
    assert_eq!(path.predictable_variation()[7] / 8.0, x * x);
    let differ = (0..100u64)
        .filter(|&s| {
            let a = generate_path(&GeneratorSpec::Rademacher, 3, &mut substream(2 * s, 0)).unwrap();
            let b = generate_path(&GeneratorSpec::Rademacher, 3, &mut substream(2 * s + 1, 0)).unwrap();
            a.increments() != b.increments()
        })
        .count();
    assert!(differ >= 80, "{differ}");
}

#[test]
fn sweep_examples() {
    let mut lemma1 = SuiteConfig::new(BoundKind::Lemma1);
    lemma1.n = Some(devbound_core::verify::Grid::Range { from: 4, to: 20, step: 1 });
    let config = SweepConfig {
        suites: vec![lemma1],
        ..SweepConfig::default()
    };
    let verdicts = run_suite(&config).unwrap();
    assert_eq!(verdicts.len(), (4..=20).sum::<usize>());
    assert!(verdicts.iter().all(|v| v.dominates));

    let mut empty = SuiteConfig::new(BoundKind::Theorem2);
    empty.n = Some(devbound_core::verify::Grid::List(vec![]));
    let config = SweepConfig {
        suites: vec![empty],
        ..SweepConfig::default()
    };
    let verdicts = run_suite(&config).unwrap();
    assert!(verdicts.is_empty());
    let summary = summarize(&verdicts, &[("theorem2".into(), "theorem2".into())]);
    assert_eq!(summary.len(), 1);
    assert_eq!(summary[0].rows, 0);
}
