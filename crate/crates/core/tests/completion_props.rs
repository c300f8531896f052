mod common;

use common::*;
use tkrylov::completion::CompletionRun;
use tkrylov::{
    apply_mask, complete, generate_mask, relative_error, Algorithm, CompletionConfig, Error, FillInit, Mask,
    MaskPattern, SketchParams,
};

#[test]
fn recovers_exact_low_rank_with_half_missing() {
    let x = low_rank(60, 60, 3, 3, 1);
    let mask = generate_mask(60, 60, 3, MaskPattern::Random, 0.5, 2).unwrap();
    let observed = apply_mask(&x, &mask).unwrap();
    let cfg = CompletionConfig::new(SketchParams::new(3, 2, 1, 3), 100, Algorithm::BlockKrylov);
    let out = complete(&observed, &mask, &cfg).unwrap();
    assert_eq!(out.trace.len(), 100);
    assert!(out.trace.last().unwrap().relative_error < 1e-3);
    assert!(relative_error(&x, &out.recovered).unwrap() < 1e-2);
}

#[test]
fn full_observation_reduces_to_one_factorization() {
    let x = low_rank(20, 15, 4, 2, 4);
    let mask = Mask::all_observed(20, 15, 4);
    let cfg = CompletionConfig::new(SketchParams::new(2, 2, 1, 5), 1, Algorithm::Power);
    let out = complete(&x, &mask, &cfg).unwrap();
    assert!(rel(&x, &out.recovered) < 1e-10);
}

#[test]
fn fill_keeps_observed_entries() {
    let x = randn(16, 12, 3, 6);
    let mask = generate_mask(16, 12, 3, MaskPattern::Rows, 0.25, 7).unwrap();
    let observed = apply_mask(&x, &mask).unwrap();
    for init in [FillInit::ZeroFill, FillInit::MeanFill] {
        let mut cfg = CompletionConfig::new(SketchParams::new(3, 2, 1, 8), 3, Algorithm::BlockKrylov);
        cfg.init = init;
        let mut run = CompletionRun::new(&observed, &mask, cfg).unwrap();
        for _ in 0..3 {
            run.step().unwrap();
            let kept = apply_mask(run.fill(), &mask).unwrap();
            assert_eq!(kept.data(), observed.data());
        }
        assert_eq!(run.iteration(), 3);
        assert!(run.estimate().is_some());
    }
}

#[test]
fn deterministic_under_fixed_seed() {
    let x = randn(18, 18, 3, 9);
    let mask = generate_mask(18, 18, 3, MaskPattern::Random, 0.4, 10).unwrap();
    let observed = apply_mask(&x, &mask).unwrap();
    let cfg = CompletionConfig::new(SketchParams::new(4, 2, 1, 11), 5, Algorithm::Power);
    let a = complete(&observed, &mask, &cfg).unwrap();
    let b = complete(&observed, &mask, &cfg).unwrap();
    assert_eq!(a.recovered.data(), b.recovered.data());
}

#[test]
fn zero_missing_ratio_with_full_rank_is_exact() {
    let x = randn(8, 8, 2, 12);
    let mask = generate_mask(8, 8, 2, MaskPattern::Random, 0.0, 1).unwrap();
    assert_eq!(mask.observed_count(), 8 * 8 * 2);
    let cfg = CompletionConfig::new(SketchParams::new(8, 0, 0, 2), 1, Algorithm::BlockKrylov);
    let out = complete(&x, &mask, &cfg).unwrap();
    assert!(rel(&x, &out.recovered) < 1e-10);
}

#[test]
fn mask_patterns_hide_whole_tubes() {
    for pattern in [MaskPattern::Random, MaskPattern::Rows, MaskPattern::Columns] {
        let mask = generate_mask(10, 12, 3, pattern, 0.3, 5).unwrap();
        for i in 0..10 {
            for j in 0..12 {
                let first = mask.is_observed(i, j, 0);
                assert!((1..3).all(|k| mask.is_observed(i, j, k) == first));
            }
        }
    }
    let rows = generate_mask(10, 12, 3, MaskPattern::Rows, 0.3, 5).unwrap();
    assert_eq!(rows.observed_count(), 7 * 12 * 3);
}

#[test]
fn invalid_configuration() {
    let x = randn(6, 6, 2, 13);
    let mask = Mask::all_observed(6, 6, 2);
    let cfg = CompletionConfig::new(SketchParams::new(2, 1, 1, 0), 0, Algorithm::Power);
    assert!(matches!(complete(&x, &mask, &cfg), Err(Error::Config(_))));
    assert!(matches!(generate_mask(6, 6, 2, MaskPattern::Random, 1.0, 0), Err(Error::Value(_))));
    let wrong = Mask::all_observed(6, 5, 2);
    let cfg = CompletionConfig::new(SketchParams::new(2, 1, 1, 0), 1, Algorithm::Power);
    assert!(complete(&x, &wrong, &cfg).is_err());
}
