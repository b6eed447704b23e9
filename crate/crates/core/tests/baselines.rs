mod common;

use hgtf::baselines::{
    gabor_delta_t, gabor_transform, imaginary_residue, oversample2, stft, wigner_ville,
    wigner_ville_complex, Window,
};
use hgtf::signal::TimeGrid;
use hgtf::transform::{analyze, default_time_axis, energy_density, full_omega_axis};
use hgtf::{Complex64, Error, GridKind, Signal, WindowSpec};
use proptest::prelude::*;

use common::*;

#[test]
fn wigner_bound_realness_and_energy() {
    for (name, s) in corpus() {
        let e = s.energy();
        let (ta, wa) = (default_time_axis(&s), full_omega_axis(&s));
        let raw = wigner_ville_complex(&s, &ta, &wa).unwrap();
        assert!(imaginary_residue(&raw) <= 1e-10, "{name}");
        let w = wigner_ville(&s, &ta, &wa).unwrap();
        assert_eq!(w.kind(), GridKind::Wigner);
        assert!(
            w.max().max(-w.min()) <= e / std::f64::consts::PI + 1e-6,
            "{name}"
        );
        assert!((w.integral() - e).abs() < 1e-3 * e, "{name}");
    }
}

#[test]
fn two_tone_interference_goes_negative() {
    let s = two_tones();
    let w = wigner_ville(&s, &default_time_axis(&s), &full_omega_axis(&s)).unwrap();
    assert!(w.min() < -1e-3 * w.max());
    assert!(
        (w.min() / w.max() + 0.95953).abs() < 1e-4,
        "{}",
        w.min() / w.max()
    );
}

#[test]
fn gaussian_wigner_is_positive_blob() {
    let s = gaussian();
    let w = wigner_ville(&s, &default_time_axis(&s), &full_omega_axis(&s)).unwrap();
    assert!(w.min() > -1e-12 * w.max());
    let (i, j) = w.argmax();
    assert_eq!((w.t_axis().value(i), w.omega_axis().value(j)), (0.0, 0.0));
}

#[test]
fn wigner_time_must_be_on_half_step_grid() {
    let s = gaussian();
    let off = axis(0.01, 1.01, 3);
    assert!(matches!(
        wigner_ville(&s, &off, &axis(-1.0, 1.0, 3)),
        Err(Error::Axis(_))
    ));
    let half = axis(-s.dt() / 2.0, 1.0 - s.dt() / 2.0, 3);
    let _ = wigner_ville(&s, &half, &axis(-1.0, 1.0, 3));
}

#[test]
fn oversampling_preserves_energy_and_samples() {
    let s = chirp();
    let o = oversample2(&s);
    assert_eq!(o.len(), 2 * s.len());
    assert_eq!(o.dt(), s.dt() / 2.0);
    assert!((o.energy() - s.energy()).abs() < 1e-12);
    for (j, v) in s.samples().iter().enumerate() {
        assert!((o.samples()[2 * j] - v).norm() < 1e-12);
    }
}

#[test]
fn gabor_equals_order_zero_transform() {
    let s = random_packets(11, TimeGrid::centered(32.0, 1.0 / 32.0).unwrap());
    let (ta, wa) = (axis(-8.0, 8.0, 65), axis(-10.0, 10.0, 81));
    let g = gabor_transform(&s, &ta, &wa).unwrap();
    let spec = WindowSpec::new(0, gabor_delta_t()).unwrap();
    let a = analyze(&s, &spec, &ta, &wa).unwrap();
    assert_eq!(g.kind(), GridKind::Gabor);
    assert!(max_abs_diff(g.values(), a.values()) <= 1e-10);
}

#[test]
fn gabor_energy_identity_on_chirp() {
    let s = chirp();
    let g = gabor_transform(&s, &default_time_axis(&s), &full_omega_axis(&s)).unwrap();
    let e = energy_density(&g).unwrap().integral();
    assert!((e - s.energy()).abs() < 1e-3 * s.energy(), "{e}");
}

#[test]
fn gabor_pulse_blob() {
    let s = gaussian();
    let g = gabor_transform(&s, &axis(-4.0, 4.0, 33), &axis(-4.0, 4.0, 33)).unwrap();
    let (i, j) = energy_density(&g).unwrap().argmax();
    assert_eq!((i, j), (16, 16));
}

#[test]
fn zero_signal_zero_gabor() {
    let z = Signal::new(vec![Complex64::new(0.0, 0.0); 128], -4.0, 1.0 / 16.0).unwrap();
    let g = gabor_transform(&z, &axis(-2.0, 2.0, 5), &axis(-2.0, 2.0, 5)).unwrap();
    assert!(g.values().iter().all(|c| c.norm() == 0.0));
}

#[test]
fn stft_with_custom_window() {
    let s = chirp();
    let sigma: f64 = 0.8;
    let norm = (2.0 * std::f64::consts::PI).powf(-0.25) / sigma.sqrt();
    let w = Window::new("gauss", 14.0 * sigma, move |t: f64| {
        Complex64::new(norm * (-t * t / (4.0 * sigma * sigma)).exp(), 0.0)
    })
    .unwrap();
    let (ta, wa) = (axis(-4.0, 4.0, 17), axis(-6.0, 6.0, 25));
    let via_stft = stft(&s, &w, &ta, &wa).unwrap();
    let spec = WindowSpec::new(0, sigma).unwrap();
    let via_hgf = analyze(&s, &spec, &ta, &wa).unwrap();
    assert!(max_abs_diff(via_stft.values(), via_hgf.values()) < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn gabor_is_linear(seed in any::<u64>(), re in -2.0f64..2.0, im in -2.0f64..2.0) {
        let g = TimeGrid::centered(16.0, 1.0 / 16.0).unwrap();
        let (a, b) = (random_packets(seed, g), random_packets(seed ^ 5, g));
        let lambda = Complex64::new(re, im);
        let (ta, wa) = (axis(-6.0, 6.0, 25), axis(-8.0, 8.0, 33));
        let ga = gabor_transform(&a, &ta, &wa).unwrap();
        let gb = gabor_transform(&b, &ta, &wa).unwrap();
        let gc = gabor_transform(&a.combine(lambda, &b, Complex64::new(1.0, 0.0)).unwrap(), &ta, &wa).unwrap();
        let expected: Vec<Complex64> = ga.values().iter().zip(gb.values()).map(|(x, y)| lambda * x + y).collect();
        prop_assert!(max_abs_diff(&expected, gc.values()) < 1e-12);
    }

    #[test]
    fn wigner_is_real_and_bounded(seed in any::<u64>()) {
        let s = random_packets(seed, TimeGrid::centered(32.0, 1.0 / 16.0).unwrap());
        let (ta, wa) = (axis(-8.0, 8.0, 33), full_omega_axis(&s));
        prop_assert!(imaginary_residue(&wigner_ville_complex(&s, &ta, &wa).unwrap()) <= 1e-10);
        let w = wigner_ville(&s, &ta, &wa).unwrap();
        prop_assert!(w.max().max(-w.min()) <= s.energy() / std::f64::consts::PI + 1e-6);
    }
}
