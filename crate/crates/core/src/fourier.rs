//! FFT-backed evaluation of non-normalized DFT sums on uniform grids.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::axis::Axis;

/// Unnormalized forward FFT in place (`X_q = sum_j x_j e^{-2 pi i q j / N}`).
pub(crate) fn fft_forward(buf: &mut [Complex64]) {
    FftPlanner::new().plan_fft_forward(buf.len()).process(buf);
}

/// Unnormalized inverse FFT in place (`x_j = sum_q X_q e^{+2 pi i q j / N}`).
pub(crate) fn fft_inverse(buf: &mut [Complex64]) {
    FftPlanner::new().plan_fft_inverse(buf.len()).process(buf);
}

/// Evaluates `X_k = sum_j x_j exp(-i w_k t_j)` for input times
/// `t_j = t0 + j dt` (`j < n_in`) and an arbitrary uniform output axis `w_k`,
/// using the chirp-z (Bluestein) factorization `kj = (k^2 + j^2 - (k-j)^2) / 2`.
///
/// Plans and chirps are built once; `eval` is thread-safe and can be called
/// for every slice of a grid.
pub(crate) struct ChirpZ {
    n_in: usize,
    n_out: usize,
    in_twiddle: Vec<Complex64>,
    out_twiddle: Vec<Complex64>,
    kernel_spectrum: Vec<Complex64>,
    fft: Arc<dyn Fft<f64>>,
    ifft: Arc<dyn Fft<f64>>,
    scratch_len: usize,
}

impl ChirpZ {
    pub(crate) fn new(n_in: usize, t0: f64, dt: f64, out: &Axis) -> Self {
        let n_out = out.len();
        let beta = out.step() * dt;
        let w0 = out.start();
        let len = (n_in + n_out - 1).next_power_of_two();
        let chirp = |m: i64| {
            let m = m as f64;
            Complex64::from_polar(1.0, 0.5 * beta * m * m)
        };

        let in_twiddle = (0..n_in)
            .map(|j| Complex64::from_polar(1.0, -w0 * j as f64 * dt) * chirp(j as i64).conj())
            .collect();
        let out_twiddle = (0..n_out)
            .map(|k| Complex64::from_polar(1.0, -out.value(k) * t0) * chirp(k as i64).conj())
            .collect();

        let mut planner = FftPlanner::new();
        let fft = planner.plan_fft_forward(len);
        let ifft = planner.plan_fft_inverse(len);

        let mut kernel = vec![Complex64::new(0.0, 0.0); len];
        for (m, slot) in kernel.iter_mut().enumerate().take(n_out) {
            *slot = chirp(m as i64);
        }
        for m in 1..n_in {
            kernel[len - m] = chirp(-(m as i64));
        }
        fft.process(&mut kernel);
        let inv_len = 1.0 / len as f64;
        kernel.iter_mut().for_each(|c| *c *= inv_len);

        let scratch_len = fft
            .get_inplace_scratch_len()
            .max(ifft.get_inplace_scratch_len());
        Self {
            n_in,
            n_out,
            in_twiddle,
            out_twiddle,
            kernel_spectrum: kernel,
            fft,
            ifft,
            scratch_len,
        }
    }

    pub(crate) fn eval(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.n_in, "chirp-z input length");
        let len = self.kernel_spectrum.len();
        let mut buf = vec![Complex64::new(0.0, 0.0); len];
        for ((b, &xi), &w) in buf.iter_mut().zip(x).zip(&self.in_twiddle) {
            *b = xi * w;
        }
        let mut scratch = vec![Complex64::new(0.0, 0.0); self.scratch_len];
        self.fft.process_with_scratch(&mut buf, &mut scratch);
        for (b, k) in buf.iter_mut().zip(&self.kernel_spectrum) {
            *b *= k;
        }
        self.ifft.process_with_scratch(&mut buf, &mut scratch);
        buf.truncate(self.n_out);
        for (b, w) in buf.iter_mut().zip(&self.out_twiddle) {
            *b *= w;
        }
        buf
    }

    /// `sum_j x_j exp(+i w_k t_j)`.
    pub(crate) fn eval_conj(&self, x: &[Complex64]) -> Vec<Complex64> {
        let xc: Vec<Complex64> = x.iter().map(|c| c.conj()).collect();
        let mut out = self.eval(&xc);
        out.iter_mut().for_each(|c| *c = c.conj());
        out
    }
}

/// `exp(2 pi i a b)` for integer-valued `a`, with `a b` reduced modulo 1
/// exactly so large products keep full phase accuracy.
pub(crate) fn cis_turns(a: f64, b: f64) -> Complex64 {
    let p = a * b;
    let e = a.mul_add(b, -p);
    let f = (p - p.round()) + e;
    Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * f)
}

/// `exp(2 pi i m / n)` for integer `m`.
pub(crate) fn cis_fraction(m: i64, n: usize) -> Complex64 {
    let r = m.rem_euclid(n as i64) as f64 / n as f64;
    Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * r)
}
