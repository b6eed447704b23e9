//! Corpus shared by the integration tests.
#![allow(dead_code)]

use hgtf::signal::{generate, TimeGrid};
use hgtf::{Axis, Complex64, Signal};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `t in [-32, 32)`, `dt = 1/16`, 1024 samples.
pub fn corpus_grid() -> TimeGrid {
    TimeGrid::centered(64.0, 1.0 / 16.0).unwrap()
}

pub fn gaussian() -> Signal {
    generate("gaussian_pulse", &[("sigma", 1.0)], corpus_grid()).unwrap()
}

pub fn chirp() -> Signal {
    generate(
        "linear_chirp",
        &[("rate", 1.0), ("sigma", 3.0)],
        corpus_grid(),
    )
    .unwrap()
}

pub fn two_tones() -> Signal {
    generate(
        "two_tones",
        &[("omega1", 2.0), ("omega2", 6.0), ("sigma", 3.0)],
        corpus_grid(),
    )
    .unwrap()
}

pub fn corpus() -> Vec<(&'static str, Signal)> {
    vec![
        ("gaussian", gaussian()),
        ("chirp", chirp()),
        ("two_tones", two_tones()),
    ]
}

/// Smooth random signal: a few Gaussian packets with seeded parameters.
pub fn random_packets(seed: u64, grid: TimeGrid) -> Signal {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let packets: Vec<(f64, f64, f64, Complex64)> = (0..4)
        .map(|_| {
            (
                rng.gen_range(-4.0..4.0),
                rng.gen_range(0.6..1.5),
                rng.gen_range(-6.0..6.0),
                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            )
        })
        .collect();
    Signal::from_fn(grid, |t| {
        packets
            .iter()
            .map(|&(c, s, w, a)| {
                a * (-(t - c).powi(2) / (4.0 * s * s)).exp() * Complex64::cis(w * t)
            })
            .sum()
    })
    .unwrap()
}

pub fn random_complex(seed: u64, len: usize) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..len)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect()
}

pub fn max_abs_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn rms_relative(reference: &[Complex64], other: &[Complex64]) -> f64 {
    let num: f64 = reference
        .iter()
        .zip(other)
        .map(|(a, b)| (a - b).norm_sqr())
        .sum();
    let den: f64 = reference.iter().map(|a| a.norm_sqr()).sum();
    (num / den).sqrt()
}

pub fn axis(min: f64, max: f64, count: usize) -> Axis {
    Axis::from_range(min, max, count).unwrap()
}
