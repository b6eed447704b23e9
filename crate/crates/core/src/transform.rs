//! Order-n time-frequency representations `Psi_n(T, Omega)`, their energy
//! densities and marginals.
//!
//! `Psi_n(T, Omega) = 1/sqrt(2 pi) int conj(phi_n(t, T, Omega)) psi(t) dt`.
//! Since `conj(phi_n) = envelope(t - T) exp(-i Omega t)` with a real
//! envelope, each `T` slice is one chirp-z transform of the windowed signal.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::axis::Axis;
use crate::error::{Diagnostic, Error, Result};
use crate::fourier::ChirpZ;
use crate::hgf::{neg_i_pow, phi, TfPoint, WindowSpec};
use crate::signal::{forward_ft, Signal, TimeGrid};

/// Largest default axis length.
pub const DEFAULT_AXIS_POINTS: usize = 512;

/// What a [`TfGrid`] holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridKind {
    /// Complex `Psi_n` values.
    PsiN,
    /// `|Psi_n|^2` (or `|STFT|^2`), real and non-negative.
    EnergyDensity,
    /// Wigner-Ville distribution, real and possibly negative.
    Wigner,
    /// Complex short-time Fourier / Gabor transform values.
    Gabor,
}

/// Values on a `(T, Omega)` grid, stored row-major with `T` as the slow index.
#[derive(Debug, Clone, PartialEq)]
pub struct TfGrid<V> {
    values: Vec<V>,
    t_axis: Axis,
    omega_axis: Axis,
    spec: Option<WindowSpec>,
    kind: GridKind,
    source: TimeGrid,
    diagnostics: Vec<Diagnostic>,
}

pub type ComplexGrid = TfGrid<Complex64>;
pub type RealGrid = TfGrid<f64>;

impl<V: Copy> TfGrid<V> {
    pub(crate) fn from_parts(
        values: Vec<V>,
        t_axis: Axis,
        omega_axis: Axis,
        spec: Option<WindowSpec>,
        kind: GridKind,
        source: TimeGrid,
    ) -> Result<Self> {
        if values.len() != t_axis.len() * omega_axis.len() {
            return Err(Error::LengthMismatch(format!(
                "{} values for a {}x{} grid",
                values.len(),
                t_axis.len(),
                omega_axis.len()
            )));
        }
        Ok(Self {
            values,
            t_axis,
            omega_axis,
            spec,
            kind,
            source,
            diagnostics: Vec::new(),
        })
    }

    pub fn values(&self) -> &[V] {
        &self.values
    }

    pub fn get(&self, t_index: usize, omega_index: usize) -> V {
        self.values[t_index * self.omega_axis.len() + omega_index]
    }

    /// Values at fixed `T`, over all `Omega`.
    pub fn t_slice(&self, t_index: usize) -> &[V] {
        let n = self.omega_axis.len();
        &self.values[t_index * n..(t_index + 1) * n]
    }

    pub fn t_axis(&self) -> &Axis {
        &self.t_axis
    }

    pub fn omega_axis(&self) -> &Axis {
        &self.omega_axis
    }

    pub fn spec(&self) -> Option<&WindowSpec> {
        self.spec.as_ref()
    }

    pub fn kind(&self) -> GridKind {
        self.kind
    }

    /// Time grid of the analyzed signal.
    pub fn source(&self) -> &TimeGrid {
        &self.source
    }

    pub fn diagnostics(&self) -> &[Diagnostic] {
        &self.diagnostics
    }

    pub(crate) fn set_spec(&mut self, spec: WindowSpec) {
        self.spec = Some(spec);
    }

    pub(crate) fn push_diagnostic(&mut self, d: Option<Diagnostic>) {
        self.diagnostics.extend(d);
    }

    pub(crate) fn cell_area(&self) -> f64 {
        self.t_axis.step() * self.omega_axis.step()
    }

    fn map<W>(&self, kind: GridKind, f: impl Fn(V) -> W) -> TfGrid<W> {
        TfGrid {
            values: self.values.iter().map(|&v| f(v)).collect(),
            t_axis: self.t_axis,
            omega_axis: self.omega_axis,
            spec: self.spec,
            kind,
            source: self.source,
            diagnostics: self.diagnostics.clone(),
        }
    }
}

impl ComplexGrid {
    pub fn scaled(&self, factor: Complex64) -> ComplexGrid {
        self.map(self.kind, |v| v * factor)
    }

    /// Largest boundary `|value|^2` relative to the peak.
    pub fn boundary_ratio(&self) -> f64 {
        self.map(GridKind::EnergyDensity, |v| v.norm_sqr())
            .boundary_ratio()
    }

    /// Coverage warning when boundary cells exceed `1e-8` of the peak.
    pub fn coverage(&self) -> Option<Diagnostic> {
        coverage_of(self.boundary_ratio())
    }
}

impl RealGrid {
    /// Rectangle-rule integral over the plane.
    pub fn integral(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.cell_area()
    }

    /// `int . dOmega` for every `T`.
    pub fn integrate_omega(&self) -> Vec<f64> {
        let d = self.omega_axis.step();
        (0..self.t_axis.len())
            .map(|i| self.t_slice(i).iter().sum::<f64>() * d)
            .collect()
    }

    /// `int . dT` for every `Omega`.
    pub fn integrate_time(&self) -> Vec<f64> {
        let n = self.omega_axis.len();
        let d = self.t_axis.step();
        let mut out = vec![0.0; n];
        for row in self.values.chunks(n) {
            for (o, v) in out.iter_mut().zip(row) {
                *o += v;
            }
        }
        out.iter_mut().for_each(|v| *v *= d);
        out
    }

    pub fn max(&self) -> f64 {
        self.values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// `(t_index, omega_index)` of the largest value.
    pub fn argmax(&self) -> (usize, usize) {
        let n = self.omega_axis.len();
        let (idx, _) =
            self.values
                .iter()
                .enumerate()
                .fold(
                    (0, f64::NEG_INFINITY),
                    |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc },
                );
        (idx / n, idx % n)
    }

    /// Largest `|value|` on the outer rows and columns relative to the peak `|value|`.
    pub fn boundary_ratio(&self) -> f64 {
        let (nt, nw) = (self.t_axis.len(), self.omega_axis.len());
        let peak = self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if peak == 0.0 {
            return 0.0;
        }
        let mut edge = 0.0f64;
        for i in 0..nt {
            for j in 0..nw {
                if i == 0 || j == 0 || i + 1 == nt || j + 1 == nw {
                    edge = edge.max(self.get(i, j).abs());
                }
            }
        }
        edge / peak
    }

    pub fn coverage(&self) -> Option<Diagnostic> {
        coverage_of(self.boundary_ratio())
    }
}

fn coverage_of(boundary_ratio: f64) -> Option<Diagnostic> {
    (boundary_ratio > 1e-8).then_some(Diagnostic::Coverage { boundary_ratio })
}

/// Signal time grid decimated to at most [`DEFAULT_AXIS_POINTS`] points.
pub fn default_time_axis(signal: &Signal) -> Axis {
    let n = signal.len();
    let stride = n.div_ceil(DEFAULT_AXIS_POINTS);
    Axis::new(signal.t0(), stride as f64 * signal.dt(), n.div_ceil(stride)).expect("valid signal")
}

/// Centered frequency grid of [`forward_ft`], decimated to at most
/// [`DEFAULT_AXIS_POINTS`] points and always containing `Omega = 0`.
pub fn default_omega_axis(signal: &Signal) -> Axis {
    let n = signal.len();
    let domega = 2.0 * PI / (n as f64 * signal.dt());
    let m0 = n / 2;
    let stride = n.div_ceil(DEFAULT_AXIS_POINTS);
    let first = m0 % stride;
    let count = (n - 1 - first) / stride + 1;
    Axis::new(
        (first as f64 - m0 as f64) * domega,
        stride as f64 * domega,
        count,
    )
    .expect("valid signal")
}

/// The full centered frequency grid of [`forward_ft`].
pub fn full_omega_axis(signal: &Signal) -> Axis {
    forward_ft(signal).axis()
}

/// `1/sqrt(2 pi) sum_t psi(t) window(t - T) exp(-i Omega t) dt` on the grid,
/// where `window` already includes any conjugation. Samples with
/// `|t - T| > halfwidth` are skipped.
pub(crate) fn windowed_transform(
    signal: &Signal,
    t_axis: &Axis,
    omega_axis: &Axis,
    window: &(dyn Fn(f64) -> Complex64 + Sync),
    halfwidth: f64,
) -> Vec<Complex64> {
    let n = signal.len();
    let (t0, dt) = (signal.t0(), signal.dt());
    let engine = ChirpZ::new(n, t0, dt, omega_axis);
    let scale = dt / (2.0 * PI).sqrt();
    let samples = signal.samples();
    let rows: Vec<Vec<Complex64>> = (0..t_axis.len())
        .into_par_iter()
        .map(|i| {
            let center = t_axis.value(i);
            let lo = (((center - halfwidth - t0) / dt).floor().max(0.0) as usize).min(n);
            let hi = (((center + halfwidth - t0) / dt).ceil() + 1.0).clamp(0.0, n as f64) as usize;
            let mut buf = vec![Complex64::new(0.0, 0.0); n];
            for j in lo..hi.max(lo) {
                buf[j] = samples[j] * window(t0 + j as f64 * dt - center);
            }
            let mut row = engine.eval(&buf);
            row.iter_mut().for_each(|v| *v *= scale);
            row
        })
        .collect();
    rows.concat()
}

/// Envelope cut-off `(sqrt(2n+1) + 12) sqrt(2) delta_t`; beyond it the
/// window is below 1e-30 of its scale.
fn envelope_cutoff(spec: &WindowSpec) -> f64 {
    ((2.0 * spec.order() as f64 + 1.0).sqrt() + 12.0) * std::f64::consts::SQRT_2 * spec.delta_t()
}

fn spectral_cutoff(spec: &WindowSpec) -> f64 {
    envelope_cutoff(spec) / spec.delta_t() * spec.delta_omega()
}

/// Computes `Psi_n` on `t_axis x omega_axis` (time-domain route).
pub fn analyze(
    signal: &Signal,
    spec: &WindowSpec,
    t_axis: &Axis,
    omega_axis: &Axis,
) -> Result<ComplexGrid> {
    let window = |u: f64| Complex64::new(spec.envelope(u), 0.0);
    let values = windowed_transform(signal, t_axis, omega_axis, &window, envelope_cutoff(spec));
    let mut grid = TfGrid::from_parts(
        values,
        *t_axis,
        *omega_axis,
        Some(*spec),
        GridKind::PsiN,
        signal.grid(),
    )?;
    grid.push_diagnostic(spec.check_step(signal.dt()));
    grid.push_diagnostic(signal.leakage());
    let coverage = grid.coverage();
    grid.push_diagnostic(coverage);
    Ok(grid)
}

/// [`analyze`] on the default axes.
pub fn analyze_default(signal: &Signal, spec: &WindowSpec) -> Result<ComplexGrid> {
    analyze(
        signal,
        spec,
        &default_time_axis(signal),
        &default_omega_axis(signal),
    )
}

/// Frequency-domain route:
/// `Psi_n = 1/sqrt(2 pi) int conj(phi~_n(w, T, Omega)) psi~(w) dw`.
///
/// Independent of [`analyze`] apart from the shared chirp-z engine; each
/// `Omega` slice is one transform over the `T` axis.
pub fn analyze_spectral(
    signal: &Signal,
    spec: &WindowSpec,
    t_axis: &Axis,
    omega_axis: &Axis,
) -> Result<ComplexGrid> {
    let spectrum = forward_ft(signal);
    let n = spectrum.len();
    let (w0, dw) = (spectrum.omega0(), spectrum.domega());
    let engine = ChirpZ::new(n, w0, dw, t_axis);
    let phase = neg_i_pow(spec.order()).conj();
    let scale = dw / (2.0 * PI).sqrt();
    let cutoff = spectral_cutoff(spec);
    let values = spectrum.values();
    let columns: Vec<Vec<Complex64>> = (0..omega_axis.len())
        .into_par_iter()
        .map(|j| {
            let center = omega_axis.value(j);
            let buf: Vec<Complex64> = values
                .iter()
                .enumerate()
                .map(|(k, &v)| {
                    let u = w0 + k as f64 * dw - center;
                    if u.abs() > cutoff {
                        Complex64::new(0.0, 0.0)
                    } else {
                        v * spec.spectral_envelope(u)
                    }
                })
                .collect();
            let col = engine.eval_conj(&buf);
            col.iter()
                .enumerate()
                .map(|(i, &c)| {
                    let t = t_axis.value(i);
                    c * phase * Complex64::from_polar(scale, -t * center)
                })
                .collect()
        })
        .collect();
    let (nt, nw) = (t_axis.len(), omega_axis.len());
    let mut grid_values = vec![Complex64::new(0.0, 0.0); nt * nw];
    for (j, col) in columns.iter().enumerate() {
        for (i, &v) in col.iter().enumerate() {
            grid_values[i * nw + j] = v;
        }
    }
    TfGrid::from_parts(
        grid_values,
        *t_axis,
        *omega_axis,
        Some(*spec),
        GridKind::PsiN,
        signal.grid(),
    )
}

/// `Psi_n(T, Omega)` at a single point by direct rectangle-rule quadrature.
pub fn analyze_point(signal: &Signal, spec: &WindowSpec, point: &TfPoint) -> Complex64 {
    let sum: Complex64 = signal
        .samples()
        .iter()
        .enumerate()
        .map(|(j, &v)| phi(spec, point, signal.time(j)).conj() * v)
        .sum();
    sum * signal.dt() / (2.0 * PI).sqrt()
}

/// `|Psi|^2` cell by cell.
pub fn energy_density(grid: &ComplexGrid) -> Result<RealGrid> {
    match grid.kind() {
        GridKind::PsiN | GridKind::Gabor => Ok(grid.map(GridKind::EnergyDensity, |v| v.norm_sqr())),
        found => Err(Error::WrongKind {
            expected: GridKind::PsiN,
            found,
        }),
    }
}

/// Rectangle-rule `int int |Psi|^2 dT dOmega`. Check [`ComplexGrid::coverage`]
/// before trusting it as the signal energy.
pub fn energy_of_grid(grid: &ComplexGrid) -> f64 {
    grid.values().iter().map(|v| v.norm_sqr()).sum::<f64>() * grid.cell_area()
}

/// Which variable a [`Marginal`] is a function of.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MarginalAxis {
    Time,
    Frequency,
}

/// A one-dimensional energy density along `T` or `Omega`.
#[derive(Debug, Clone, PartialEq)]
pub struct Marginal {
    pub axis: Axis,
    pub values: Vec<f64>,
    pub spec: WindowSpec,
    pub which: MarginalAxis,
}

impl Marginal {
    pub fn integral(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.axis.step()
    }
}

/// Instantaneous power at order n:
/// `p_n(T) = int |phi_n(t, T)|^2 |psi(t)|^2 dt`, by direct quadrature.
pub fn marginal_time(signal: &Signal, spec: &WindowSpec, t_axis: &Axis) -> Result<Marginal> {
    let power: Vec<f64> = signal.samples().iter().map(|c| c.norm_sqr()).collect();
    let (t0, dt) = (signal.t0(), signal.dt());
    let values = smooth(
        &power,
        t0,
        dt,
        t_axis,
        |u| spec.envelope(u).powi(2),
        envelope_cutoff(spec),
    );
    Ok(Marginal {
        axis: *t_axis,
        values,
        spec: *spec,
        which: MarginalAxis::Time,
    })
}

/// Spectral energy at order n:
/// `rho_n(Omega) = int |phi~_n(w, Omega)|^2 |psi~(w)|^2 dw`, by direct quadrature.
pub fn marginal_freq(signal: &Signal, spec: &WindowSpec, omega_axis: &Axis) -> Result<Marginal> {
    let spectrum = forward_ft(signal);
    let power: Vec<f64> = spectrum.values().iter().map(|c| c.norm_sqr()).collect();
    let cutoff = spectral_cutoff(spec);
    let values = smooth(
        &power,
        spectrum.omega0(),
        spectrum.domega(),
        omega_axis,
        |u| spec.spectral_envelope(u).powi(2),
        cutoff,
    );
    Ok(Marginal {
        axis: *omega_axis,
        values,
        spec: *spec,
        which: MarginalAxis::Frequency,
    })
}

fn smooth(
    density: &[f64],
    x0: f64,
    dx: f64,
    at: &Axis,
    kernel: impl Fn(f64) -> f64 + Sync,
    cutoff: f64,
) -> Vec<f64> {
    (0..at.len())
        .into_par_iter()
        .map(|i| {
            let c = at.value(i);
            density
                .iter()
                .enumerate()
                .filter_map(|(j, &p)| {
                    let u = x0 + j as f64 * dx - c;
                    (u.abs() <= cutoff).then(|| kernel(u) * p)
                })
                .sum::<f64>()
                * dx
        })
        .collect()
}
