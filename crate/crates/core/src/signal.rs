//! Uniformly sampled signals, the continuous Fourier transform on a grid,
//! energy and moment functionals, and the synthetic test corpus.
//!
//! The angular-frequency convention is the symmetric one,
//!
//! ```text
//! F(w) = 1/sqrt(2 pi) int f(t) exp(-i w t) dt
//! f(t) = 1/sqrt(2 pi) int F(w) exp(+i w t) dw
//! ```
//!
//! approximated by the rectangle rule, so grid values approximate the
//! continuous transform rather than a bare DFT.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::axis::Axis;
use crate::error::{invalid, Diagnostic, Error, Result};
use crate::fourier::{cis_fraction, cis_turns, fft_forward, fft_inverse};
use crate::hgf::{phi, TfPoint, WindowSpec};

/// Time grid `t0 + j dt`, `j < len`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    pub t0: f64,
    pub dt: f64,
    pub len: usize,
}

impl TimeGrid {
    pub fn new(t0: f64, dt: f64, len: usize) -> Result<Self> {
        if !t0.is_finite() {
            return Err(invalid("t0", "must be finite"));
        }
        if !(dt.is_finite() && dt > 0.0) {
            return Err(invalid("dt", format!("must be finite and > 0, got {dt}")));
        }
        if len < 2 {
            return Err(Error::TooShort(len));
        }
        Ok(Self { t0, dt, len })
    }

    /// Grid of step `dt` centered on zero and spanning roughly `span`.
    pub fn centered(span: f64, dt: f64) -> Result<Self> {
        if !(span.is_finite() && span > 0.0) {
            return Err(invalid("span", format!("must be > 0, got {span}")));
        }
        let len = (span / dt).round() as usize;
        Self::new(-((len / 2) as f64) * dt, dt, len)
    }

    pub fn time(&self, j: usize) -> f64 {
        self.t0 + j as f64 * self.dt
    }

    pub fn axis(&self) -> Axis {
        Axis::new(self.t0, self.dt, self.len).expect("validated grid")
    }
}

/// A uniformly sampled complex signal.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    samples: Vec<Complex64>,
    t0: f64,
    dt: f64,
}

impl Signal {
    pub fn new(samples: Vec<Complex64>, t0: f64, dt: f64) -> Result<Self> {
        TimeGrid::new(t0, dt, samples.len())?;
        if let Some(index) = samples
            .iter()
            .position(|c| !(c.re.is_finite() && c.im.is_finite()))
        {
            return Err(Error::NonFinite { index });
        }
        Ok(Self { samples, t0, dt })
    }

    pub fn from_fn(grid: TimeGrid, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        let samples = (0..grid.len).map(|j| f(grid.time(j))).collect();
        Self::new(samples, grid.t0, grid.dt)
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<Complex64> {
        self.samples
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn time(&self, j: usize) -> f64 {
        self.t0 + j as f64 * self.dt
    }

    pub fn grid(&self) -> TimeGrid {
        TimeGrid {
            t0: self.t0,
            dt: self.dt,
            len: self.samples.len(),
        }
    }

    /// Rectangle-rule `int |psi|^2 dt`.
    pub fn energy(&self) -> f64 {
        self.samples.iter().map(|c| c.norm_sqr()).sum::<f64>() * self.dt
    }

    pub fn scaled(&self, factor: Complex64) -> Signal {
        Signal {
            samples: self.samples.iter().map(|&c| c * factor).collect(),
            ..*self
        }
    }

    /// `a * self + b * other` on a shared grid.
    pub fn combine(&self, a: Complex64, other: &Signal, b: Complex64) -> Result<Signal> {
        if self.grid() != other.grid() {
            return Err(Error::LengthMismatch(
                "signals live on different grids".into(),
            ));
        }
        let samples = self
            .samples
            .iter()
            .zip(&other.samples)
            .map(|(&x, &y)| a * x + b * y)
            .collect();
        Ok(Signal { samples, ..*self })
    }

    /// Largest endpoint magnitude relative to the peak magnitude.
    pub fn leakage_ratio(&self) -> f64 {
        let peak = self.samples.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if peak == 0.0 {
            return 0.0;
        }
        let first = self.samples[0].norm();
        let last = self.samples[self.samples.len() - 1].norm();
        first.max(last) / peak
    }

    pub fn leakage(&self) -> Option<Diagnostic> {
        let ratio = self.leakage_ratio();
        (ratio > 1e-10).then_some(Diagnostic::Leakage { ratio })
    }
}

/// Samples of the continuous Fourier transform on `omega0 + k domega`.
///
/// `t0` is the time origin of the dual grid, needed to invert exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    values: Vec<Complex64>,
    omega0: f64,
    domega: f64,
    t0: f64,
    leakage: Option<Diagnostic>,
}

impl Spectrum {
    pub fn new(values: Vec<Complex64>, omega0: f64, domega: f64, t0: f64) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::TooShort(values.len()));
        }
        if !(domega.is_finite() && domega > 0.0) {
            return Err(invalid(
                "domega",
                format!("must be finite and > 0, got {domega}"),
            ));
        }
        if !(omega0.is_finite() && t0.is_finite()) {
            return Err(invalid("origin", "omega0 and t0 must be finite"));
        }
        if let Some(index) = values
            .iter()
            .position(|c| !(c.re.is_finite() && c.im.is_finite()))
        {
            return Err(Error::NonFinite { index });
        }
        Ok(Self {
            values,
            omega0,
            domega,
            t0,
            leakage: None,
        })
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    pub fn domega(&self) -> f64 {
        self.domega
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn omega(&self, k: usize) -> f64 {
        self.omega0 + k as f64 * self.domega
    }

    pub fn axis(&self) -> Axis {
        Axis::new(self.omega0, self.domega, self.values.len()).expect("validated spectrum")
    }

    /// Leakage warning inherited from the originating signal.
    pub fn leakage(&self) -> Option<&Diagnostic> {
        self.leakage.as_ref()
    }

    /// Rectangle-rule `int |F|^2 dw`.
    pub fn energy(&self) -> f64 {
        self.values.iter().map(|c| c.norm_sqr()).sum::<f64>() * self.domega
    }
}

/// `t0 domega / (2 pi)`: the per-bin phase of the time origin, in turns.
/// Shared by both directions so their phases cancel exactly.
fn phase_turns(t0: f64, domega: f64) -> f64 {
    t0 * domega / (2.0 * PI)
}

/// Index of the zero frequency on the centered grid of length `n`.
fn zero_bin(n: usize) -> usize {
    n / 2
}

/// Continuous-transform approximation on the centered grid
/// `w_k = (k - floor(N/2)) * 2 pi / (N dt)`, covering `[-pi/dt, pi/dt)`.
pub fn forward_ft(signal: &Signal) -> Spectrum {
    let n = signal.len();
    let dt = signal.dt;
    let domega = 2.0 * PI / (n as f64 * dt);
    let m0 = zero_bin(n);
    let mut buf = signal.samples.clone();
    fft_forward(&mut buf);
    let scale = dt / (2.0 * PI).sqrt();
    let theta = phase_turns(signal.t0, domega);
    let values = (0..n)
        .map(|k| {
            let q = (k + n - m0) % n;
            buf[q] * scale * cis_turns(m0 as f64 - k as f64, theta)
        })
        .collect();
    Spectrum {
        values,
        omega0: -(m0 as f64) * domega,
        domega,
        t0: signal.t0,
        leakage: signal.leakage(),
    }
}

/// Inverse of [`forward_ft`]: rectangle rule of the inverse transform on the
/// time grid `t0 + j dt`, `dt = 2 pi / (N domega)`.
pub fn inverse_ft(spectrum: &Spectrum) -> Signal {
    let n = spectrum.len();
    let domega = spectrum.domega;
    let dt = 2.0 * PI / (n as f64 * domega);
    let t0 = spectrum.t0;
    let theta = phase_turns(t0, domega);
    let mut buf: Vec<Complex64> = spectrum
        .values
        .iter()
        .enumerate()
        .map(|(k, &v)| v * cis_turns(k as f64, theta))
        .collect();
    fft_inverse(&mut buf);
    let scale = domega / (2.0 * PI).sqrt();
    let bins = spectrum.omega0 / domega;
    let on_grid = bins.fract() == 0.0 && bins.abs() < 1e15;
    let samples = buf
        .iter()
        .enumerate()
        .map(|(j, &v)| {
            let phase = if on_grid {
                cis_turns(bins, theta) * cis_fraction(bins as i64 * j as i64, n)
            } else {
                Complex64::from_polar(1.0, spectrum.omega0 * (t0 + j as f64 * dt))
            };
            v * scale * phase
        })
        .collect();
    Signal { samples, t0, dt }
}

/// Energy, centroids, spreads and their product.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentReport {
    pub energy: f64,
    pub mu_t: f64,
    pub sigma_t: f64,
    pub mu_omega: f64,
    pub sigma_omega: f64,
    pub uncertainty_product: f64,
}

impl MomentReport {
    pub(crate) fn from_densities(
        time: impl Iterator<Item = (f64, f64)> + Clone,
        dt: f64,
        freq: impl Iterator<Item = (f64, f64)> + Clone,
        domega: f64,
    ) -> Result<Self> {
        let (energy, mu_t, sigma_t) = centroid_spread(time, dt)?;
        let (_, mu_omega, sigma_omega) = centroid_spread(freq, domega)?;
        Ok(Self {
            energy,
            mu_t,
            sigma_t,
            mu_omega,
            sigma_omega,
            uncertainty_product: sigma_t * sigma_omega,
        })
    }
}

fn centroid_spread(
    points: impl Iterator<Item = (f64, f64)> + Clone,
    step: f64,
) -> Result<(f64, f64, f64)> {
    let mass: f64 = points.clone().map(|(_, w)| w).sum::<f64>() * step;
    if !(mass > 0.0) {
        return Err(Error::ZeroEnergy);
    }
    let mean = points.clone().map(|(x, w)| x * w).sum::<f64>() * step / mass;
    let var = points.map(|(x, w)| (x - mean).powi(2) * w).sum::<f64>() * step / mass;
    Ok((mass, mean, var.max(0.0).sqrt()))
}

/// Time moments from the samples, frequency moments from [`forward_ft`].
pub fn moments(signal: &Signal) -> Result<MomentReport> {
    let spectrum = forward_ft(signal);
    MomentReport::from_densities(
        signal
            .samples
            .iter()
            .enumerate()
            .map(|(j, c)| (signal.time(j), c.norm_sqr())),
        signal.dt,
        spectrum
            .values
            .iter()
            .enumerate()
            .map(|(k, c)| (spectrum.omega(k), c.norm_sqr())),
        spectrum.domega,
    )
}

/// Synthetic test signals. All envelopes are Gaussian with `|psi|^2` having
/// standard deviation `sigma`, normalized so a single component has unit energy:
///
/// * `GaussianPulse`: `A (2pi)^{-1/4} sigma^{-1/2} exp(-(t-c)^2/(4 sigma^2) + i omega t)`
/// * `LinearChirp`: unit Gaussian envelope times
///   `exp(i (omega0 (t-c) + rate (t-c)^2 / 2))`; instantaneous frequency
///   `omega0 + rate (t - c)`
/// * `TwoTones`: unit Gaussian envelope times `w1 e^{i omega1 t} + w2 e^{i omega2 t}`
///   (energy close to `w1^2 + w2^2` once the tones are separated)
/// * `HarmonicGaussian`: a harmonic Gaussian function
/// * `ImpulseLike`: unit Gaussian pulse of width `width >= 2 dt`
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Generator {
    GaussianPulse {
        sigma: f64,
        center: f64,
        omega: f64,
        amplitude: f64,
    },
    LinearChirp {
        rate: f64,
        omega0: f64,
        center: f64,
        sigma: f64,
    },
    TwoTones {
        omega1: f64,
        omega2: f64,
        weight1: f64,
        weight2: f64,
        center: f64,
        sigma: f64,
    },
    HarmonicGaussian {
        spec: WindowSpec,
        point: TfPoint,
    },
    ImpulseLike {
        center: f64,
        width: f64,
    },
}

impl Generator {
    pub const KINDS: [&'static str; 5] = [
        "gaussian_pulse",
        "linear_chirp",
        "two_tones",
        "harmonic_gaussian",
        "impulse_like",
    ];

    /// Builds a generator from a kind name and `key = value` parameters.
    /// Unspecified parameters take their defaults; unknown keys are rejected.
    pub fn from_params(kind: &str, params: &[(&str, f64)]) -> Result<Self> {
        let kind = match kind {
            "gaussian" | "pulse" => "gaussian_pulse",
            "chirp" => "linear_chirp",
            "tones" => "two_tones",
            "hgf" => "harmonic_gaussian",
            "impulse" => "impulse_like",
            k => k,
        };
        let allowed: &[&str] = match kind {
            "gaussian_pulse" => &["sigma", "center", "omega", "amplitude"],
            "linear_chirp" => &["rate", "omega0", "center", "sigma"],
            "two_tones" => &["omega1", "omega2", "weight1", "weight2", "center", "sigma"],
            "harmonic_gaussian" => &["n", "delta_t", "T", "Omega"],
            "impulse_like" => &["center", "width"],
            other => {
                return Err(invalid(
                    "kind",
                    format!(
                        "unknown generator `{other}`, expected one of {:?}",
                        Self::KINDS
                    ),
                ))
            }
        };
        for (key, value) in params {
            if !allowed.contains(key) {
                return Err(invalid(
                    "params",
                    format!("`{key}` is not a parameter of {kind}"),
                ));
            }
            if !value.is_finite() {
                return Err(invalid("params", format!("`{key}` must be finite")));
            }
        }
        let get = |key: &str, default: f64| {
            params
                .iter()
                .rev()
                .find(|(k, _)| *k == key)
                .map_or(default, |(_, v)| *v)
        };
        let generator = match kind {
            "gaussian_pulse" => Generator::GaussianPulse {
                sigma: get("sigma", 1.0),
                center: get("center", 0.0),
                omega: get("omega", 0.0),
                amplitude: get("amplitude", 1.0),
            },
            "linear_chirp" => Generator::LinearChirp {
                rate: get("rate", 1.0),
                omega0: get("omega0", 0.0),
                center: get("center", 0.0),
                sigma: get("sigma", 2.0),
            },
            "two_tones" => Generator::TwoTones {
                omega1: get("omega1", 2.0),
                omega2: get("omega2", 6.0),
                weight1: get("weight1", 1.0),
                weight2: get("weight2", 1.0),
                center: get("center", 0.0),
                sigma: get("sigma", 3.0),
            },
            "harmonic_gaussian" => {
                let n = get("n", 0.0);
                if n < 0.0 || n.fract() != 0.0 {
                    return Err(invalid(
                        "n",
                        format!("must be a non-negative integer, got {n}"),
                    ));
                }
                Generator::HarmonicGaussian {
                    spec: WindowSpec::new(n as usize, get("delta_t", 1.0))?,
                    point: TfPoint::new(get("T", 0.0), get("Omega", 0.0))?,
                }
            }
            _ => Generator::ImpulseLike {
                center: get("center", 0.0),
                width: get("width", f64::NAN),
            },
        };
        Ok(generator)
    }

    pub fn generate(&self, grid: TimeGrid) -> Result<Signal> {
        let grid = TimeGrid::new(grid.t0, grid.dt, grid.len)?;
        match *self {
            Generator::GaussianPulse {
                sigma,
                center,
                omega,
                amplitude,
            } => {
                positive("sigma", sigma)?;
                Signal::from_fn(grid, |t| {
                    gaussian_envelope(t, center, sigma) * amplitude * Complex64::cis(omega * t)
                })
            }
            Generator::LinearChirp {
                rate,
                omega0,
                center,
                sigma,
            } => {
                positive("sigma", sigma)?;
                Signal::from_fn(grid, |t| {
                    let u = t - center;
                    gaussian_envelope(t, center, sigma)
                        * Complex64::cis(omega0 * u + 0.5 * rate * u * u)
                })
            }
            Generator::TwoTones {
                omega1,
                omega2,
                weight1,
                weight2,
                center,
                sigma,
            } => {
                positive("sigma", sigma)?;
                Signal::from_fn(grid, |t| {
                    gaussian_envelope(t, center, sigma)
                        * (weight1 * Complex64::cis(omega1 * t)
                            + weight2 * Complex64::cis(omega2 * t))
                })
            }
            Generator::HarmonicGaussian { spec, point } => {
                Signal::from_fn(grid, |t| phi(&spec, &point, t))
            }
            Generator::ImpulseLike { center, width } => {
                if !(width >= 2.0 * grid.dt) {
                    return Err(invalid(
                        "width",
                        format!("must be at least 2 dt = {}, got {width}", 2.0 * grid.dt),
                    ));
                }
                Signal::from_fn(grid, |t| gaussian_envelope(t, center, width).into())
            }
        }
    }
}

fn positive(name: &'static str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(invalid(name, format!("must be > 0, got {v}")))
    }
}

/// `(2 pi)^{-1/4} sigma^{-1/2} exp(-(t - c)^2 / (4 sigma^2))`, unit energy.
fn gaussian_envelope(t: f64, center: f64, sigma: f64) -> f64 {
    let u = (t - center) / sigma;
    (2.0 * PI).powf(-0.25) / sigma.sqrt() * (-0.25 * u * u).exp()
}

/// Convenience wrapper over [`Generator::from_params`] and [`Generator::generate`].
pub fn generate(kind: &str, params: &[(&str, f64)], grid: TimeGrid) -> Result<Signal> {
    Generator::from_params(kind, params)?.generate(grid)
}
