//! Dynamic-programming distances checked against exhaustive and recursive
//! reference implementations that share no code with the library.

mod common;

use common::{brute_force_warping, erp_reference, random_series};
use tsgen::distance::{dk, dtw, erp};
use tsgen::random::RandomSource;
use tsgen::TimeSeries;

fn ts(v: &[f64]) -> TimeSeries {
    TimeSeries::from_scalars(v).unwrap()
}

#[test]
fn hand_examples_match_reference() {
    let x = ts(&[0.0, 2.0]);
    let y = ts(&[0.0, 1.0, 2.0]);
    let (sum, max) = brute_force_warping(&x, &y);
    assert_eq!(sum, 1.0);
    assert_eq!(max, 1.0);
    assert_eq!(erp_reference(&x, &y, &[0.0]), 1.0);
    assert_eq!(dtw(&x, &y).unwrap(), sum);
    assert_eq!(dk(&x, &y).unwrap(), max);

    let (sum, _) = brute_force_warping(&ts(&[0.0, 0.0, 1.0]), &ts(&[0.0, 1.0]));
    assert_eq!(sum, 0.0);
}

#[test]
fn dp_equals_enumeration_on_short_series() {
    let mut rng = RandomSource::from_seed(2024);
    for _ in 0..300 {
        let dim = 1 + (rng.unit() * 3.0) as usize;
        let len = 1 + (rng.unit() * 6.0) as usize;
        let x = random_series(&mut rng, len, dim);
        let len = 1 + (rng.unit() * 6.0) as usize;
        let y = random_series(&mut rng, len, dim);
        let (sum, max) = brute_force_warping(&x, &y);
        assert!((dtw(&x, &y).unwrap() - sum).abs() <= 1e-9);
        assert!((dk(&x, &y).unwrap() - max).abs() <= 1e-9);
        let gap = vec![0.0; dim];
        assert!((erp(&x, &y, &gap).unwrap() - erp_reference(&x, &y, &gap)).abs() <= 1e-9);
    }
}

#[test]
fn erp_with_nonzero_gap() {
    let mut rng = RandomSource::from_seed(7);
    for _ in 0..100 {
        let len = 1 + (rng.unit() * 5.0) as usize;
        let x = random_series(&mut rng, len, 2);
        let len = 1 + (rng.unit() * 5.0) as usize;
        let y = random_series(&mut rng, len, 2);
        let gap = [rng.standard_normal(), rng.standard_normal()];
        assert!((erp(&x, &y, &gap).unwrap() - erp_reference(&x, &y, &gap)).abs() <= 1e-9);
    }
}
