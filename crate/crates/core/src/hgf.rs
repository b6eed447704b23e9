//! Harmonic Gaussian functions: Hermite-Gaussian atoms centered at a
//! time-frequency point `(T, Omega)` with width parameter `delta_t`.
//!
//! With `x = (t - T) / (sqrt(2) delta_t)`,
//!
//! ```text
//! phi_n(t) = h_n(x) (sqrt(2) delta_t)^{-1/2} exp(i Omega t)
//! ```
//!
//! where `h_n` is the normalized Hermite function. The Gaussian factor is
//! `exp(-((t - T) / (2 delta_t))^2)`, the only form under which the family is
//! orthonormal with time variance `(2n+1) delta_t^2`. The Fourier pair is
//!
//! ```text
//! phi~_n(w) = (-i)^n h_n((w - Omega) / (sqrt(2) delta_omega))
//!             (sqrt(2) delta_omega)^{-1/2} exp(-i T (w - Omega))
//! ```
//!
//! with `delta_t * delta_omega = 1/2`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{invalid, Diagnostic, Result};
use crate::hermite::{hermite_eval, hermite_fn_eval};
use crate::signal::MomentReport;

/// Order `n` and width `delta_t` of one analysis family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowSpec {
    order: usize,
    delta_t: f64,
}

impl WindowSpec {
    pub fn new(order: usize, delta_t: f64) -> Result<Self> {
        if !(delta_t.is_finite() && delta_t > 0.0) {
            return Err(invalid(
                "delta_t",
                format!("must be finite and > 0, got {delta_t}"),
            ));
        }
        Ok(Self { order, delta_t })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn delta_t(&self) -> f64 {
        self.delta_t
    }

    /// Always `1 / (2 delta_t)`.
    pub fn delta_omega(&self) -> f64 {
        0.5 / self.delta_t
    }

    pub fn with_order(&self, order: usize) -> Self {
        Self { order, ..*self }
    }

    /// `sqrt(2n+1) delta_t`.
    pub fn sigma_t(&self) -> f64 {
        self.spread_factor() * self.delta_t
    }

    /// `sqrt(2n+1) delta_omega`.
    pub fn sigma_omega(&self) -> f64 {
        self.spread_factor() * self.delta_omega()
    }

    fn spread_factor(&self) -> f64 {
        (2.0 * self.order as f64 + 1.0).sqrt()
    }

    fn time_scale(&self) -> f64 {
        std::f64::consts::SQRT_2 * self.delta_t
    }

    fn freq_scale(&self) -> f64 {
        std::f64::consts::SQRT_2 * self.delta_omega()
    }

    /// Real envelope `|phi_n(T + u)|` with sign: `h_n(u / s) / sqrt(s)`,
    /// `s = sqrt(2) delta_t`.
    pub fn envelope(&self, u: f64) -> f64 {
        let s = self.time_scale();
        hermite_fn_eval(self.order, u / s) / s.sqrt()
    }

    /// Real spectral envelope `h_n(v / s) / sqrt(s)`, `s = sqrt(2) delta_omega`.
    pub fn spectral_envelope(&self, v: f64) -> f64 {
        let s = self.freq_scale();
        hermite_fn_eval(self.order, v / s) / s.sqrt()
    }

    /// Half-width `(sqrt(2n+1) + 8) sqrt(2) delta_t` beyond which the window
    /// is below 1e-14 of its scale.
    pub fn time_halfwidth(&self) -> f64 {
        (self.spread_factor() + 8.0) * self.time_scale()
    }

    /// Frequency-domain counterpart of [`Self::time_halfwidth`].
    pub fn freq_halfwidth(&self) -> f64 {
        (self.spread_factor() + 8.0) * self.freq_scale()
    }

    /// Largest sample step allowed by the adequacy rule, `delta_t / 8`.
    pub fn max_step(&self) -> f64 {
        self.delta_t / 8.0
    }

    /// Step part of the adequacy rule.
    pub fn check_step(&self, dt: f64) -> Option<Diagnostic> {
        let limit = self.max_step();
        (dt > limit * (1.0 + 1e-12)).then_some(Diagnostic::Undersampled { step: dt, limit })
    }

    /// Full adequacy rule: step at most `delta_t / 8` and `[first, last]`
    /// covering `center +- time_halfwidth`.
    pub fn is_adequate(&self, first: f64, last: f64, dt: f64, center: f64) -> bool {
        let hw = self.time_halfwidth();
        self.check_step(dt).is_none() && first <= center - hw && last >= center + hw
    }
}

/// Time-frequency location of an atom.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TfPoint {
    pub time: f64,
    pub omega: f64,
}

impl TfPoint {
    pub fn new(time: f64, omega: f64) -> Result<Self> {
        if !(time.is_finite() && omega.is_finite()) {
            return Err(invalid("point", "T and Omega must be finite"));
        }
        Ok(Self { time, omega })
    }
}

/// `(-i)^n`.
pub(crate) fn neg_i_pow(n: usize) -> Complex64 {
    match n % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, -1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, 1.0),
    }
}

/// Harmonic Gaussian function `phi_n(t, T, Omega, delta_t)`.
pub fn phi(spec: &WindowSpec, point: &TfPoint, t: f64) -> Complex64 {
    Complex64::from_polar(1.0, point.omega * t) * spec.envelope(t - point.time)
}

/// Closed-form Fourier transform of [`phi`].
pub fn phi_ft(spec: &WindowSpec, point: &TfPoint, omega: f64) -> Complex64 {
    let v = omega - point.omega;
    neg_i_pow(spec.order) * spec.spectral_envelope(v) * Complex64::from_polar(1.0, -point.time * v)
}

/// `I_n(a, b) = int H_n(x) exp(-(a x^2 + i b x)) dx` in closed form,
/// `(-i)^n sqrt(pi/a) ((1-a)/a)^{n/2} H_n(b / (2 sqrt(a(1-a)))) exp(-b^2/(4a))`,
/// for `0 < a < 1`.
pub fn integral_in(a: f64, b: f64, n: usize) -> Result<Complex64> {
    if !(a > 0.0 && a < 1.0) {
        return Err(invalid("a", format!("must lie in (0, 1), got {a}")));
    }
    if !b.is_finite() {
        return Err(invalid("b", "must be finite"));
    }
    let ratio = (1.0 - a) / a;
    let arg = b / (2.0 * (a * (1.0 - a)).sqrt());
    let magnitude = (PI / a).sqrt()
        * ratio.powf(n as f64 / 2.0)
        * hermite_eval(n, arg)
        * (-b * b / (4.0 * a)).exp();
    Ok(neg_i_pow(n) * magnitude)
}

/// Moments of `phi_n`: time moments from samples on an adequate grid,
/// frequency moments from the closed-form transform on a matching grid.
pub fn window_moments(spec: &WindowSpec, point: &TfPoint) -> MomentReport {
    let dt = spec.max_step() / 2.0;
    let hw = spec.time_halfwidth();
    let nt = (2.0 * hw / dt).ceil() as usize + 1;
    let t0 = point.time - hw;
    let dw = spec.delta_omega() / 16.0;
    let hw_w = spec.freq_halfwidth();
    let nw = (2.0 * hw_w / dw).ceil() as usize + 1;
    let w0 = point.omega - hw_w;
    let time = (0..nt).map(move |j| {
        let t = t0 + j as f64 * dt;
        (t, phi(spec, point, t).norm_sqr())
    });
    let freq = (0..nw).map(move |k| {
        let w = w0 + k as f64 * dw;
        (w, phi_ft(spec, point, w).norm_sqr())
    });
    MomentReport::from_densities(time, dt, freq, dw).expect("window has unit energy")
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn quad_in(a: f64, b: f64, n: usize) -> Complex64 {
        let h = 1e-3;
        let pts = (24.0 / h) as usize + 1;
        (0..pts)
            .map(|i| {
                let x = -12.0 + i as f64 * h;
                Complex64::from_polar(hermite_eval(n, x) * (-a * x * x).exp(), -b * x)
            })
            .sum::<Complex64>()
            * h
    }

    #[test]
    fn spec_rejects_bad_width() {
        assert!(WindowSpec::new(0, 0.0).is_err());
        assert!(WindowSpec::new(0, f64::NAN).is_err());
        let s = WindowSpec::new(3, 0.25).unwrap();
        assert_eq!(s.delta_t() * s.delta_omega(), 0.5);
        assert_relative_eq!(s.sigma_t() * s.sigma_omega(), 3.5, max_relative = 1e-15);
    }

    #[test]
    fn phi_values() {
        let s = WindowSpec::new(0, 0.7).unwrap();
        let p = TfPoint::new(1.5, 2.0).unwrap();
        let v = phi(&s, &p, 1.5);
        assert_relative_eq!(
            v.norm(),
            1.0 / ((2.0 * PI).sqrt() * 0.7).sqrt(),
            max_relative = 1e-14
        );
        assert_relative_eq!(v.arg(), 3.0, max_relative = 1e-14);
        assert_eq!(phi(&s.with_order(1), &p, 1.5).norm(), 0.0);
        let s2 = WindowSpec::new(2, 1.0).unwrap();
        let origin = TfPoint::new(0.0, 0.0).unwrap();
        assert!(phi(&s2, &origin, 1.0).norm() < 1e-15);
    }

    #[test]
    fn phi_matches_raw_polynomial_form() {
        // H_n(x) exp(-((t-T)/(2 dt))^2) / sqrt(2^n n! sqrt(2 pi) dt) at small n.
        let s = WindowSpec::new(4, 0.8).unwrap();
        let p = TfPoint::new(0.3, 0.0).unwrap();
        for &t in &[-1.0, 0.0, 0.9, 2.2] {
            let x = (t - 0.3) / (2f64.sqrt() * 0.8);
            let norm = (16.0 * 24.0 * (2.0 * PI).sqrt() * 0.8).sqrt();
            let want = hermite_eval(4, x) * (-((t - 0.3) / 1.6).powi(2)).exp() / norm;
            assert_relative_eq!(phi(&s, &p, t).re, want, max_relative = 1e-12);
        }
    }

    #[test]
    fn phi_ft_values() {
        let s = WindowSpec::new(0, 0.5).unwrap();
        let p = TfPoint::new(2.0, -1.0).unwrap();
        let v = phi_ft(&s, &p, -1.0);
        assert_relative_eq!(
            v.norm(),
            1.0 / ((2.0 * PI).sqrt() * 1.0).sqrt(),
            max_relative = 1e-14
        );
        assert_eq!(v.arg(), 0.0);
        assert_eq!(phi_ft(&s.with_order(1), &p, -1.0).norm(), 0.0);
    }

    #[test]
    fn phase_is_minus_i_to_the_n() {
        let p = TfPoint::new(1.0, 2.0).unwrap();
        for n in 0..8 {
            let s = WindowSpec::new(n, 0.6).unwrap();
            let w = 2.0 + 0.01;
            let x = (w - 2.0) / (2f64.sqrt() * s.delta_omega());
            let v = phi_ft(&s, &p, w) * Complex64::from_polar(1.0, 1.0 * (w - 2.0));
            let target = -(n as f64) * PI / 2.0;
            let h = hermite_fn_eval(n, x);
            let phase = if h > 0.0 { v.arg() } else { (-v).arg() };
            let diff = (phase - target).rem_euclid(2.0 * PI);
            assert!(diff.min(2.0 * PI - diff) < 1e-9, "n={n}");
        }
    }

    #[test]
    fn integral_in_closed_form() {
        assert_relative_eq!(
            integral_in(0.5, 0.0, 0).unwrap().re,
            (2.0 * PI).sqrt(),
            max_relative = 1e-15
        );
        assert_eq!(integral_in(0.5, 0.0, 1).unwrap().norm(), 0.0);
        let want = quad_in(0.5, 1.0, 2);
        assert!((integral_in(0.5, 1.0, 2).unwrap() - want).norm() < 1e-10);
        for n in 0..=6 {
            for &b in &[0.0, 0.5, 1.0, 2.0] {
                let d = integral_in(0.5, b, n).unwrap() - quad_in(0.5, b, n);
                assert!(d.norm() < 1e-8, "n={n} b={b} diff={d}");
            }
        }
        for &a in &[0.3, 0.8] {
            let d = integral_in(a, 1.3, 3).unwrap() - quad_in(a, 1.3, 3);
            assert!(d.norm() < 1e-8, "a={a}");
        }
        assert!(integral_in(0.0, 1.0, 1).is_err());
        assert!(integral_in(1.0, 1.0, 1).is_err());
    }

    #[test]
    fn moment_laws() {
        let s = WindowSpec::new(0, 1.0).unwrap();
        let m = window_moments(&s, &TfPoint::new(0.0, 0.0).unwrap());
        assert!((m.sigma_t - 1.0).abs() < 1e-10);
        assert!((m.sigma_omega - 0.5).abs() < 1e-10);
        assert!((m.uncertainty_product - 0.5).abs() < 1e-10);

        let s = WindowSpec::new(3, 0.5).unwrap();
        let m = window_moments(&s, &TfPoint::new(5.0, 0.0).unwrap());
        assert!((m.sigma_t - 7f64.sqrt() * 0.5).abs() < 1e-9);
        assert!((m.sigma_omega - 7f64.sqrt()).abs() < 1e-9);
        assert!((m.mu_t - 5.0).abs() < 1e-10);
        assert!((m.energy - 1.0).abs() < 1e-10);
    }

    #[test]
    fn adequacy_rule() {
        let s = WindowSpec::new(2, 1.0).unwrap();
        assert!(s.check_step(0.125).is_none());
        assert!(s.check_step(0.2).is_some());
        let hw = s.time_halfwidth();
        assert!(s.is_adequate(-hw - 0.1, hw + 0.1, 0.1, 0.0));
        assert!(!s.is_adequate(-hw + 0.1, hw + 0.1, 0.1, 0.0));
    }
}
