//! Acceptance suite: one test per library-level criterion, each
//! printing a single pass line (run with `--nocapture` to see them).
//! The remaining criterion (inclusion table via the command line)
//! lives in the CLI crate's own acceptance suite.

mod common;

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use riesz_uncertain::convergence::{
    as_gap, moment_decay_fit, riesz_gap, markov_check, slow_osc_gap, tail_stats, GapKind, Verdict,
};
use riesz_uncertain::orlicz::{OrliczPhi, OrliczSpec};
use riesz_uncertain::scalar::KahanSum;
use riesz_uncertain::scenarios::{corpus, oscillating_counterexample};
use riesz_uncertain::summability::{
    inverse_transform_at, riesz_row, tauberian_condition_profile, transform_sequence, WeightRule,
    WeightSequence,
};
use riesz_uncertain::uncertainty::{expected_value, UncertainSequence};
use riesz_uncertain::Weights;

#[test]
fn criterion_1_counterexample_reproduction() {
    let scenario = oscillating_counterexample().unwrap();
    let start = Instant::now();

    let transformed = transform_sequence(&scenario.sequence, &scenario.weights).unwrap();
    for n in 1..=10_000usize {
        let got = transformed.term(n).unwrap().value(0);
        let want = if n % 2 == 1 {
            0.5 + 1.0 / (2.0 * n as f64)
        } else {
            0.5
        };
        assert!(
            (got - want).abs() <= 1e-12,
            "transform at {n}: got {got}, want {want}"
        );
    }

    let report = scenario.classify().unwrap();
    assert_eq!(report.class_verdict("f"), Some(Verdict::Fail));
    assert_eq!(report.class_verdict("f_R"), Some(Verdict::Pass));

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    println!("criterion 1 (counterexample reproduction): pass in {elapsed:?}");
}

#[test]
fn criterion_2_markov_orlicz_inequality() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xA11CE);
    let phis = [OrliczPhi::Identity, OrliczPhi::Power(2.0), OrliczPhi::Expm1];
    let start = Instant::now();
    let mut checked = 0usize;
    while checked < 1000 {
        let space = common::random_space(&mut rng, 8);
        let var = common::random_variable(&mut rng, space.atom_count(), 5.0);
        let max_abs = var.values().iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
        if max_abs <= 0.0 {
            continue;
        }
        let spec = OrliczSpec::new(phis[checked % phis.len()].clone(), 1.0).unwrap();
        let mut t = rng.gen_range(0.0..max_abs);
        if t <= 0.0 {
            t = max_abs;
        }
        let (lhs, rhs) = markov_check(&space, &var, &spec, t).unwrap();
        assert!(
            lhs <= rhs + 1e-12,
            "instance {checked}: lhs {lhs} above rhs {rhs} at t {t}"
        );
        checked += 1;
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 30.0, "took {elapsed:?}");
    println!("criterion 2 (Markov bound, {checked} instances): pass in {elapsed:?}");
}

#[test]
fn criterion_3_riesz_measure_gap_below_mean_gap() {
    let scenarios = corpus().unwrap();
    let mut checked = 0usize;
    for scenario in &scenarios {
        for n in 1..=scenario.sequence.horizon() {
            let mean = riesz_gap(
                &GapKind::Mean,
                &scenario.sequence,
                &scenario.weights,
                n,
                &scenario.orlicz,
            )
            .unwrap();
            for &epsilon in &scenario.config.epsilon_grid {
                let measure = riesz_gap(
                    &GapKind::Measure { epsilon },
                    &scenario.sequence,
                    &scenario.weights,
                    n,
                    &scenario.orlicz,
                )
                .unwrap();
                assert!(
                    measure <= mean / epsilon + 1e-12,
                    "{} at n {n}, eps {epsilon}: measure {measure} above mean {mean}",
                    scenario.name
                );
                checked += 1;
            }
        }
    }
    println!("criterion 3 (measure below mean over eps): pass across {checked} checks");
}

#[test]
fn criterion_4_transform_inverse_roundtrip() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xB0B);
    let start = Instant::now();
    for instance in 0..100 {
        let space = common::random_space(&mut rng, 4);
        let atom_count = space.atom_count();
        let len = 1000usize;
        let terms = (0..len)
            .map(|_| common::random_variable(&mut rng, atom_count, 10.0))
            .collect();
        let limit = common::random_variable(&mut rng, atom_count, 10.0);
        let seq = UncertainSequence::new(space, terms, limit).unwrap();
        let weights =
            Weights::new((0..len).map(|_| rng.gen_range(0.05..2.0)).collect()).unwrap();
        let transformed = transform_sequence(&seq, &weights).unwrap();
        for n in 1..=len {
            let inverted = inverse_transform_at(&transformed, &weights, n).unwrap();
            let original = seq.term(n).unwrap();
            for a in 0..atom_count {
                assert!(
                    (inverted.value(a) - original.value(a)).abs() <= 1e-9,
                    "instance {instance}, n {n}, atom {a}"
                );
            }
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "took {elapsed:?}");
    println!("criterion 4 (transform-inverse roundtrip): pass in {elapsed:?}");
}

#[test]
fn criterion_5_rows_are_stochastic() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED);
    for instance in 0..100 {
        let len = 1000usize;
        let weights =
            Weights::new((0..len).map(|_| rng.gen_range(0.01..3.0)).collect()).unwrap();
        for n in 1..=len {
            let row = riesz_row(&weights, n).unwrap();
            let mut sum = KahanSum::new();
            for entry in row {
                sum.add(entry);
            }
            assert!(
                (sum.value() - 1.0f64).abs() <= 1e-12,
                "instance {instance}, row {n}: sum {}",
                sum.value()
            );
        }
    }
    println!("criterion 5 (row stochasticity): pass across 100 weight draws");
}

#[test]
fn criterion_6_tauberian_evidence() {
    let harmonic: WeightSequence<f64> =
        WeightSequence::from_rule(&WeightRule::Harmonic, 10_000).unwrap();
    let profile = tauberian_condition_profile(&harmonic, 10_000).unwrap();
    assert!(profile.holds, "harmonic weight condition should hold");
    let last = *profile.values.last().unwrap();
    assert!((last - 0.102).abs() < 5e-3, "profile end {last}");

    let scenario = corpus()
        .unwrap()
        .into_iter()
        .find(|s| s.name == "block_oscillating_tauberian")
        .unwrap();
    let horizon = scenario.sequence.horizon();

    // Slow oscillation passes at a fine epsilon on both window sizes.
    for lambda in [0.5, 1.0] {
        let top = (horizon as f64 / (1.0 + lambda)).floor() as usize;
        let values: Vec<f64> = (1..=top)
            .map(|n| slow_osc_gap(&scenario.sequence, n, lambda, 1e-3).unwrap())
            .collect();
        let stats = tail_stats(&values, 0.1, 1e-6).unwrap();
        assert_eq!(stats.verdict, Verdict::Pass, "lambda {lambda}");
    }

    // The raw almost-sure gap sits below 1e-2 across the final tenth.
    for n in (horizon - horizon / 10 + 1)..=horizon {
        let gap = as_gap(&scenario.sequence, n).unwrap();
        assert!(gap < 1e-2, "as gap at {n} is {gap}");
    }

    // Unit weights break the weight condition: the profile is flat 1.
    let constant: WeightSequence<f64> =
        WeightSequence::from_rule(&WeightRule::Constant(1.0), 10_000).unwrap();
    let profile = tauberian_condition_profile(&constant, 10_000).unwrap();
    assert!(!profile.holds);
    assert!(profile.values.iter().all(|&v| (v - 1.0).abs() <= 1e-12));

    println!("criterion 6 (Tauberian evidence): pass");
}

#[test]
fn criterion_8_moment_decay_fit() {
    let scenario = corpus()
        .unwrap()
        .into_iter()
        .find(|s| s.name == "impulse_cesaro")
        .unwrap();
    let samples: Vec<usize> = (1..=16).map(|i| 50 * i).collect();
    let fit = moment_decay_fit(&scenario.sequence, &scenario.weights, 2.0, &samples).unwrap();
    assert!(!fit.infinite_decay);
    assert_eq!(fit.samples_used, 16);
    assert!(
        (fit.delta_hat - 1.0).abs() <= 0.05,
        "delta hat {}",
        fit.delta_hat
    );
    assert!(fit.max_residual < 1e-6, "residual {}", fit.max_residual);
    println!(
        "criterion 8 (moment decay fit): pass with delta {:.6}, residual {:.3e}",
        fit.delta_hat, fit.max_residual
    );
}

#[test]
fn criterion_9_quadrature_oracle_agreement() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x04AC1E);
    for instance in 0..200 {
        let space = common::random_space(&mut rng, 8);
        let var = common::random_variable(&mut rng, space.atom_count(), 5.0);
        let exact = expected_value(&space, &var).unwrap();
        let oracle = common::quadrature_expected_value(&space, &var, 1e-5);
        assert!(
            (exact - oracle).abs() <= 1e-4,
            "instance {instance}: exact {exact}, quadrature {oracle}"
        );
    }
    println!("criterion 9 (quadrature oracle agreement): pass across 200 instances");
}
