//! Recovery of a signal from its harmonic Gaussian coefficients, either by
//! summing the basis series at one `(T, Omega)` or by integrating one order-n
//! grid over the plane.

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fourier::ChirpZ;
use crate::hermite::hermite_fn_sweep;
use crate::hgf::{TfPoint, WindowSpec};
use crate::signal::{Signal, TimeGrid};
use crate::transform::{ComplexGrid, GridKind};

/// Upper bound for [`default_order`].
pub const MAX_AUTO_ORDER: usize = 256;

/// Tail threshold for [`default_order`], relative to the largest coefficient.
pub const TAIL_THRESHOLD: f64 = 1e-8;

/// Evaluates `coeff_n * phi_n(t)` summed or collected over `n <= n_max`
/// for a single `t`, sharing one Hermite sweep.
fn sweep_at(
    spec: &WindowSpec,
    point: &TfPoint,
    n_max: usize,
    t: f64,
) -> Option<(Vec<f64>, Complex64)> {
    let s = SQRT_2 * spec.delta_t();
    let x = (t - point.time) / s;
    let cutoff = (2.0 * n_max as f64 + 1.0).sqrt() + 12.0;
    if x.abs() > cutoff {
        return None;
    }
    let inv_sqrt_s = 1.0 / s.sqrt();
    let h: Vec<f64> = hermite_fn_sweep(n_max, x)
        .into_iter()
        .map(|v| v * inv_sqrt_s)
        .collect();
    Some((h, Complex64::from_polar(1.0, point.omega * t)))
}

/// Checks that `signal` resolves orders up to `n_max` around `point`.
pub fn check_adequacy(signal: &Signal, point: &TfPoint, spec: &WindowSpec) -> Result<()> {
    let dt = signal.dt();
    if let Some(d) = spec.check_step(dt) {
        return Err(Error::InadequateSampling(d.to_string()));
    }
    let last = signal.time(signal.len() - 1);
    if !spec.is_adequate(signal.t0(), last, dt, point.time) {
        return Err(Error::InadequateSampling(format!(
            "grid [{}, {last}] does not span T +- {} for order {}",
            signal.t0(),
            spec.time_halfwidth(),
            spec.order()
        )));
    }
    // The window spectrum must fit below the Nyquist frequency.
    let band = spec.freq_halfwidth();
    if band > PI / dt {
        return Err(Error::InadequateSampling(format!(
            "order {} needs |w - Omega| up to {band}, above Nyquist {}",
            spec.order(),
            PI / dt
        )));
    }
    Ok(())
}

/// `C_n = int conj(phi_n(t, T, Omega)) psi(t) dt = sqrt(2 pi) Psi_n(T, Omega)`
/// for `n = 0 ..= n_max`.
pub fn coefficients_at(
    signal: &Signal,
    point: &TfPoint,
    delta_t: f64,
    n_max: usize,
) -> Result<Vec<Complex64>> {
    let spec = WindowSpec::new(n_max, delta_t)?;
    check_adequacy(signal, point, &spec)?;
    Ok(raw_coefficients(signal, point, &spec, n_max))
}

fn raw_coefficients(
    signal: &Signal,
    point: &TfPoint,
    spec: &WindowSpec,
    n_max: usize,
) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); n_max + 1];
    for (j, &v) in signal.samples().iter().enumerate() {
        if let Some((h, carrier)) = sweep_at(spec, point, n_max, signal.time(j)) {
            let z = carrier.conj() * v;
            for (c, hn) in out.iter_mut().zip(&h) {
                *c += z * *hn;
            }
        }
    }
    out.iter_mut().for_each(|c| *c *= signal.dt());
    out
}

/// Smallest `n` with `|C_n|, |C_{n+1}|, |C_{n+2}|` all below
/// [`TAIL_THRESHOLD`] times the largest coefficient, or `None` if the
/// slice never reaches such a tail.
pub fn tail_order(coeffs: &[Complex64]) -> Option<usize> {
    let peak = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if peak == 0.0 {
        return Some(0);
    }
    let small = |c: &Complex64| c.norm() < TAIL_THRESHOLD * peak;
    coeffs.windows(3).position(|w| w.iter().all(small))
}

/// Default truncation order at `point`: the [`tail_order`] of the coefficient
/// sequence, capped at [`MAX_AUTO_ORDER`] (or by the largest order the
/// sampling resolves).
pub fn default_order(signal: &Signal, point: &TfPoint, delta_t: f64) -> Result<usize> {
    let mut top = MAX_AUTO_ORDER + 2;
    loop {
        let spec = WindowSpec::new(top, delta_t)?;
        if check_adequacy(signal, point, &spec).is_ok() {
            break;
        }
        if top == 2 {
            return Err(Error::InadequateSampling(
                "grid does not resolve even order 2 at this point".into(),
            ));
        }
        top -= 1;
    }
    let spec = WindowSpec::new(top, delta_t)?;
    let coeffs = raw_coefficients(signal, point, &spec, top);
    Ok(tail_order(&coeffs).unwrap_or(top - 2).min(MAX_AUTO_ORDER))
}

/// `sum_n C_n phi_n(t, T, Omega, delta_t)` on `grid`.
pub fn reconstruct_series(
    coeffs: &[Complex64],
    point: &TfPoint,
    delta_t: f64,
    grid: TimeGrid,
) -> Result<Signal> {
    let grid = TimeGrid::new(grid.t0, grid.dt, grid.len)?;
    if coeffs.is_empty() {
        return Signal::new(vec![Complex64::new(0.0, 0.0); grid.len], grid.t0, grid.dt);
    }
    let n_max = coeffs.len() - 1;
    let spec = WindowSpec::new(n_max, delta_t)?;
    let samples = (0..grid.len)
        .into_par_iter()
        .map(|j| match sweep_at(&spec, point, n_max, grid.time(j)) {
            Some((h, carrier)) => {
                carrier
                    * coeffs
                        .iter()
                        .zip(&h)
                        .map(|(c, hn)| c * hn)
                        .sum::<Complex64>()
            }
            None => Complex64::new(0.0, 0.0),
        })
        .collect();
    Signal::new(samples, grid.t0, grid.dt)
}

/// `1/sqrt(2 pi) sum_T sum_Omega Psi_n(T, Omega) phi_n(t, T, Omega) dT dOmega`
/// on the analyzed signal's time grid.
pub fn reconstruct_integral(grid: &ComplexGrid) -> Result<Signal> {
    let spec = match (grid.kind(), grid.spec()) {
        (GridKind::PsiN | GridKind::Gabor, Some(spec)) => *spec,
        (found, _) => {
            return Err(Error::WrongKind {
                expected: GridKind::PsiN,
                found,
            })
        }
    };
    let source = *grid.source();
    let (t_axis, omega_axis) = (*grid.t_axis(), *grid.omega_axis());
    let out_axis = source.axis();
    let engine = ChirpZ::new(
        omega_axis.len(),
        omega_axis.start(),
        omega_axis.step(),
        &out_axis,
    );
    let scale = t_axis.step() * omega_axis.step() / (2.0 * PI).sqrt();
    let cutoff = ((2.0 * spec.order() as f64 + 1.0).sqrt() + 12.0) * SQRT_2 * spec.delta_t();

    // Fixed chunking keeps the summation order independent of thread count.
    const CHUNK: usize = 16;
    let chunks: Vec<usize> = (0..t_axis.len()).step_by(CHUNK).collect();
    let partials: Vec<Vec<Complex64>> = chunks
        .par_iter()
        .map(|&start| {
            let mut acc = vec![Complex64::new(0.0, 0.0); source.len];
            for i in start..(start + CHUNK).min(t_axis.len()) {
                let center = t_axis.value(i);
                let carrier_sum = engine.eval_conj(grid.t_slice(i));
                for (m, a) in acc.iter_mut().enumerate() {
                    let u = source.time(m) - center;
                    if u.abs() <= cutoff {
                        *a += carrier_sum[m] * spec.envelope(u);
                    }
                }
            }
            acc
        })
        .collect();
    let mut samples = vec![Complex64::new(0.0, 0.0); source.len];
    for part in &partials {
        for (s, p) in samples.iter_mut().zip(part) {
            *s += p;
        }
    }
    samples.iter_mut().for_each(|s| *s *= scale);
    Signal::new(samples, source.t0, source.dt)
}

/// `||a - b|| / ||a||` over shared samples.
pub fn relative_l2_error(reference: &Signal, estimate: &Signal) -> Result<f64> {
    if reference.len() != estimate.len() {
        return Err(Error::LengthMismatch(format!(
            "{} vs {} samples",
            reference.len(),
            estimate.len()
        )));
    }
    let num: f64 = reference
        .samples()
        .iter()
        .zip(estimate.samples())
        .map(|(a, b)| (a - b).norm_sqr())
        .sum();
    let den: f64 = reference.samples().iter().map(|a| a.norm_sqr()).sum();
    if den == 0.0 {
        return Ok(if num == 0.0 { 0.0 } else { f64::INFINITY });
    }
    Ok((num / den).sqrt())
}

/// Per-order energy `|C_n|^2 = 2 pi |Psi_n(T, Omega)|^2`.
pub fn order_energies(coeffs: &[Complex64]) -> Vec<f64> {
    coeffs.iter().map(|c| c.norm_sqr()).collect()
}
