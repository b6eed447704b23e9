//! Reference distributions: the Wigner-Ville distribution and the
//! short-time Fourier (Gabor) transform.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::axis::Axis;
use crate::error::{invalid, Error, Result};
use crate::fourier::{fft_forward, fft_inverse, ChirpZ};
use crate::hgf::WindowSpec;
use crate::signal::Signal;
use crate::transform::{windowed_transform, ComplexGrid, GridKind, RealGrid, TfGrid};

/// Band-limited 2x oversampling: `out[2j] = x[j]`, odd samples interpolated
/// through the zero-padded spectrum.
pub fn oversample2(signal: &Signal) -> Signal {
    let n = signal.len();
    let mut spec = signal.samples().to_vec();
    fft_forward(&mut spec);
    let mut padded = vec![Complex64::new(0.0, 0.0); 2 * n];
    let half = n / 2;
    if n.is_multiple_of(2) {
        padded[..half].copy_from_slice(&spec[..half]);
        padded[2 * n - half + 1..].copy_from_slice(&spec[half + 1..]);
        // Split the Nyquist bin between +/- frequencies.
        padded[half] = spec[half] * 0.5;
        padded[2 * n - half] = spec[half] * 0.5;
    } else {
        padded[..=half].copy_from_slice(&spec[..=half]);
        padded[2 * n - half..].copy_from_slice(&spec[half + 1..]);
    }
    fft_inverse(&mut padded);
    let inv = 1.0 / n as f64;
    padded.iter_mut().for_each(|c| *c *= inv);
    Signal::new(padded, signal.t0(), signal.dt() / 2.0).expect("finite input stays finite")
}

/// Wigner-Ville distribution before the imaginary part is discarded.
///
/// `W(T, w) = 1/(2 pi) int conj(psi(T - u/2)) psi(T + u/2) exp(-i w u) du`
/// with `u` stepped by `dt`, so `T +- u/2` always lands on the 2x oversampled
/// grid. Every `T` must lie on that half-step grid.
pub fn wigner_ville_complex(
    signal: &Signal,
    t_axis: &Axis,
    omega_axis: &Axis,
) -> Result<ComplexGrid> {
    let fine = oversample2(signal);
    let x = fine.samples();
    let n_fine = x.len();
    let (t0, half_dt) = (fine.t0(), fine.dt());
    let dt = signal.dt();

    let centers = (0..t_axis.len())
        .map(|i| {
            let pos = (t_axis.value(i) - t0) / half_dt;
            let m = pos.round();
            if (pos - m).abs() > 1e-6 || m < 0.0 || m >= n_fine as f64 {
                Err(Error::Axis(format!(
                    "T = {} is not on the half-step grid of the signal",
                    t_axis.value(i)
                )))
            } else {
                Ok(m as usize)
            }
        })
        .collect::<Result<Vec<usize>>>()?;

    let max_lag = n_fine - 1;
    let n_lags = 2 * max_lag + 1;
    let engine = ChirpZ::new(n_lags, -(max_lag as f64) * dt, dt, omega_axis);
    let scale = dt / (2.0 * PI);
    let rows: Vec<Vec<Complex64>> = centers
        .par_iter()
        .map(|&m| {
            let reach = m.min(n_fine - 1 - m);
            let mut lag = vec![Complex64::new(0.0, 0.0); n_lags];
            for k in 0..=reach {
                lag[max_lag + k] = x[m - k].conj() * x[m + k];
                lag[max_lag - k] = x[m + k].conj() * x[m - k];
            }
            let mut row = engine.eval(&lag);
            row.iter_mut().for_each(|v| *v *= scale);
            row
        })
        .collect();
    let mut grid = TfGrid::from_parts(
        rows.concat(),
        *t_axis,
        *omega_axis,
        None,
        GridKind::Wigner,
        signal.grid(),
    )?;
    grid.push_diagnostic(signal.leakage());
    Ok(grid)
}

/// Largest `|Im W|` relative to the largest `|W|`.
pub fn imaginary_residue(raw: &ComplexGrid) -> f64 {
    let peak = raw.values().iter().fold(0.0f64, |m, v| m.max(v.norm()));
    if peak == 0.0 {
        return 0.0;
    }
    raw.values().iter().fold(0.0f64, |m, v| m.max(v.im.abs())) / peak
}

/// Real Wigner-Ville distribution on `t_axis x omega_axis`.
pub fn wigner_ville(signal: &Signal, t_axis: &Axis, omega_axis: &Axis) -> Result<RealGrid> {
    let raw = wigner_ville_complex(signal, t_axis, omega_axis)?;
    debug_assert!(imaginary_residue(&raw) <= 1e-10);
    let mut out = TfGrid::from_parts(
        raw.values().iter().map(|v| v.re).collect(),
        *t_axis,
        *omega_axis,
        None,
        GridKind::Wigner,
        *raw.source(),
    )?;
    for d in raw.diagnostics() {
        out.push_diagnostic(Some(d.clone()));
    }
    Ok(out)
}

/// A window function `g(t)` and the half-width outside which it is negligible.
pub struct Window {
    name: String,
    g: Box<dyn Fn(f64) -> Complex64 + Send + Sync>,
    halfwidth: f64,
}

impl fmt::Debug for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Window")
            .field("name", &self.name)
            .field("halfwidth", &self.halfwidth)
            .finish()
    }
}

impl Window {
    pub fn new(
        name: impl Into<String>,
        halfwidth: f64,
        g: impl Fn(f64) -> Complex64 + Send + Sync + 'static,
    ) -> Result<Self> {
        if !(halfwidth.is_finite() && halfwidth > 0.0) {
            return Err(invalid(
                "halfwidth",
                format!("must be > 0, got {halfwidth}"),
            ));
        }
        Ok(Self {
            name: name.into(),
            g: Box::new(g),
            halfwidth,
        })
    }

    /// `g(t) = 2^{1/4} exp(-pi t^2)`.
    pub fn gabor() -> Self {
        Self::new("gabor", 6.0, |t| {
            Complex64::new(2f64.powf(0.25) * (-PI * t * t).exp(), 0.0)
        })
        .expect("constant half-width")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn eval(&self, t: f64) -> Complex64 {
        (self.g)(t)
    }

    pub fn halfwidth(&self) -> f64 {
        self.halfwidth
    }

    /// `int |g|^2 dt` over the support by a fine rectangle rule.
    pub fn norm_sqr(&self) -> f64 {
        const POINTS: usize = 16_001;
        let step = 2.0 * self.halfwidth / (POINTS - 1) as f64;
        (0..POINTS)
            .map(|i| self.eval(-self.halfwidth + i as f64 * step).norm_sqr())
            .sum::<f64>()
            * step
    }
}

/// `Psi(T, Omega) = 1/sqrt(2 pi) int psi(t) conj(g(t - T)) exp(-i Omega t) dt`.
///
/// The window must satisfy `int |g|^2 = 1` within 1e-8, otherwise the energy
/// identity fails and the call is rejected.
pub fn stft(
    signal: &Signal,
    window: &Window,
    t_axis: &Axis,
    omega_axis: &Axis,
) -> Result<ComplexGrid> {
    let norm = window.norm_sqr();
    if (norm - 1.0).abs() > 1e-8 {
        return Err(Error::UnnormalizedWindow { norm });
    }
    let conj_window = |u: f64| window.eval(u).conj();
    let values = windowed_transform(signal, t_axis, omega_axis, &conj_window, window.halfwidth());
    let mut grid = TfGrid::from_parts(
        values,
        *t_axis,
        *omega_axis,
        None,
        GridKind::Gabor,
        signal.grid(),
    )?;
    grid.push_diagnostic(signal.leakage());
    Ok(grid)
}

/// Width parameter at which the order-0 harmonic Gaussian equals the Gabor function.
pub fn gabor_delta_t() -> f64 {
    0.5 / PI.sqrt()
}

/// Gabor transform: [`stft`] with [`Window::gabor`].
pub fn gabor_transform(signal: &Signal, t_axis: &Axis, omega_axis: &Axis) -> Result<ComplexGrid> {
    let mut grid = stft(signal, &Window::gabor(), t_axis, omega_axis)?;
    grid.set_spec(WindowSpec::new(0, gabor_delta_t())?);
    Ok(grid)
}
