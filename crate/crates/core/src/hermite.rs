//! Hermite polynomials and normalized Hermite functions.
//!
//! Physicists' convention: `H_0 = 1`, `H_1 = 2x`, `H_{n+1} = 2x H_n - 2n H_{n-1}`.
//! Everything downstream works with the normalized Hermite function
//!
//! ```text
//! h_n(x) = H_n(x) exp(-x^2/2) / sqrt(2^n n! sqrt(pi))
//! ```
//!
//! which stays bounded by `pi^{-1/4}` for every `n`, whereas `H_n` and the
//! normalizer overflow separately well before `n = 200`.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::error::{invalid, Error, Result};

/// Largest degree accepted by [`hermite_coeffs`].
pub const MAX_EXACT_DEGREE: usize = 64;

const RESCALE_ABOVE: f64 = 1e150;
const RESCALE_LN: f64 = 345.387_763_949_106_9; // ln(1e150)

/// Evaluates `H_n(x)` by the three-term upward recurrence.
pub fn hermite_eval(n: usize, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 2.0 * x;
    for k in 1..n {
        let next = 2.0 * x * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Exact integer coefficients of `H_n(x) = sum_k coeffs[k] x^k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HermiteCoeffs {
    n: usize,
    coeffs: Vec<BigInt>,
}

impl HermiteCoeffs {
    pub fn degree(&self) -> usize {
        self.n
    }

    /// Coefficients of `x^0 ..= x^n`.
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn leading(&self) -> &BigInt {
        &self.coeffs[self.n]
    }

    /// Coefficients rounded to the nearest `f64`.
    pub fn to_f64(&self) -> Vec<f64> {
        self.coeffs
            .iter()
            .map(|c| c.to_f64().unwrap_or(f64::NAN))
            .collect()
    }

    /// Evaluates `sum_k a_k x^k` term by term in `f64`.
    pub fn eval(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        let mut pow = 1.0;
        for c in self.to_f64() {
            acc += c * pow;
            pow *= x;
        }
        acc
    }

    /// `sum_k |a_k| |x|^k`, the natural scale of rounding error in [`Self::eval`].
    pub fn abs_eval(&self, x: f64) -> f64 {
        let ax = x.abs();
        let mut acc = 0.0;
        let mut pow = 1.0;
        for c in self.to_f64() {
            acc += c.abs() * pow;
            pow *= ax;
        }
        acc
    }
}

/// Builds the coefficient table of `H_n` by expanding the recurrence
/// `H_{n+1} = 2x H_n - 2n H_{n-1}` on polynomials.
pub fn hermite_coeffs(n: usize) -> Result<HermiteCoeffs> {
    if n > MAX_EXACT_DEGREE {
        return Err(Error::DegreeOutOfRange(n));
    }
    let mut prev: Vec<BigInt> = vec![BigInt::from(1)];
    if n == 0 {
        return Ok(HermiteCoeffs { n, coeffs: prev });
    }
    let mut cur: Vec<BigInt> = vec![BigInt::zero(), BigInt::from(2)];
    for k in 1..n {
        let mut next = vec![BigInt::zero(); k + 2];
        for (i, c) in cur.iter().enumerate() {
            next[i + 1] += c * 2;
        }
        let two_k = BigInt::from(2 * k);
        for (i, c) in prev.iter().enumerate() {
            next[i] -= c * &two_k;
        }
        prev = cur;
        cur = next;
    }
    Ok(HermiteCoeffs { n, coeffs: cur })
}

/// Normalized Hermite function `h_n(x)`.
///
/// Uses the normalized recurrence
/// `h_{k+1} = x sqrt(2/(k+1)) h_k - sqrt(k/(k+1)) h_{k-1}` on a mantissa with
/// a separately tracked log-scale, so the Gaussian factor never underflows
/// before the polynomial growth has been applied.
pub fn hermite_fn_eval(n: usize, x: f64) -> f64 {
    let mut out = 0.0;
    sweep(n, x, |k, v| {
        if k == n {
            out = v;
        }
    });
    out
}

/// `h_0(x) ..= h_{n_max}(x)` in one pass.
pub fn hermite_fn_sweep(n_max: usize, x: f64) -> Vec<f64> {
    let mut out = vec![0.0; n_max + 1];
    sweep(n_max, x, |k, v| out[k] = v);
    out
}

fn sweep(n_max: usize, x: f64, mut emit: impl FnMut(usize, f64)) {
    let mut log_scale = -0.5 * x * x - 0.25 * std::f64::consts::PI.ln();
    let mut prev = 0.0;
    let mut cur = 1.0;
    emit(0, cur * log_scale.exp());
    for k in 0..n_max {
        let kf = k as f64;
        let next = x * (2.0 / (kf + 1.0)).sqrt() * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE_ABOVE {
            cur /= RESCALE_ABOVE;
            prev /= RESCALE_ABOVE;
            log_scale += RESCALE_LN;
        }
        emit(k + 1, cur * log_scale.exp());
    }
}

/// Rectangle-rule approximation of `int h_n(x) h_m(x) dx` on
/// `quad_points` uniform nodes spanning `[-quad_halfwidth, quad_halfwidth]`.
pub fn hermite_orthogonality_check(
    n: usize,
    m: usize,
    quad_points: usize,
    quad_halfwidth: f64,
) -> Result<f64> {
    if quad_points < 2 {
        return Err(invalid("quad_points", "need at least 2 nodes"));
    }
    let needed = (2.0 * n.max(m) as f64 + 1.0).sqrt() + 8.0;
    if !(quad_halfwidth >= needed) {
        return Err(Error::InadequateSampling(format!(
            "half-width {quad_halfwidth} does not cover the support (needs >= {needed})"
        )));
    }
    let step = 2.0 * quad_halfwidth / (quad_points - 1) as f64;
    if step > 0.1 {
        return Err(Error::UnderResolved { step, limit: 0.1 });
    }
    let top = n.max(m);
    let sum: f64 = (0..quad_points)
        .map(|i| {
            let x = -quad_halfwidth + i as f64 * step;
            let h = hermite_fn_sweep(top, x);
            h[n] * h[m]
        })
        .sum();
    Ok(sum * step)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn low_degree_values() {
        assert_eq!(hermite_eval(0, 3.7), 1.0);
        assert_eq!(hermite_eval(1, 2.0), 4.0);
        assert_eq!(hermite_eval(2, 1.0), 2.0);
    }

    #[test]
    fn degree_ten_matches_expansion() {
        let c = hermite_coeffs(10).unwrap();
        assert_relative_eq!(hermite_eval(10, 0.3), c.eval(0.3), max_relative = 1e-12);
    }

    #[test]
    fn coefficient_tables() {
        assert_eq!(hermite_coeffs(0).unwrap().coeffs(), &[BigInt::from(1)]);
        assert_eq!(
            hermite_coeffs(2).unwrap().coeffs(),
            &[BigInt::from(-2), BigInt::from(0), BigInt::from(4)]
        );
        assert_eq!(*hermite_coeffs(6).unwrap().leading(), BigInt::from(64));
        assert!(matches!(
            hermite_coeffs(65),
            Err(Error::DegreeOutOfRange(65))
        ));
    }

    #[test]
    fn coefficient_invariants_hold_up_to_64() {
        for n in 0..=MAX_EXACT_DEGREE {
            let c = hermite_coeffs(n).unwrap();
            assert_eq!(*c.leading(), BigInt::from(2).pow(n as u32));
            if n >= 1 {
                assert!(c.coeffs()[n - 1].is_zero());
            }
            for (k, a) in c.coeffs().iter().enumerate() {
                if (n - k) % 2 == 1 {
                    assert!(a.is_zero(), "n={n} k={k}");
                }
            }
        }
    }

    #[test]
    fn derivative_form_of_recurrence() {
        // H_n = 2x H_{n-1} - H'_{n-1}, read coefficient-wise.
        for n in 1..=40 {
            let c = hermite_coeffs(n).unwrap();
            let p = hermite_coeffs(n - 1).unwrap();
            let at = |k: usize| p.coeffs().get(k).cloned().unwrap_or_default();
            assert_eq!(c.coeffs()[0], -at(1));
            for k in 1..n {
                let want = at(k - 1) * 2 - at(k + 1) * BigInt::from(k + 1);
                assert_eq!(c.coeffs()[k], want, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn recurrence_agrees_with_table() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 0..=40 {
            let c = hermite_coeffs(n).unwrap();
            for _ in 0..100 {
                let x: f64 = rng.gen_range(-5.0..5.0);
                let err = (hermite_eval(n, x) - c.eval(x)).abs();
                assert!(err <= 1e-9 * c.abs_eval(x), "n={n} x={x} err={err}");
            }
        }
    }

    #[test]
    fn parity() {
        for n in 0..25 {
            for &x in &[0.1, 0.7, 1.9, 3.3] {
                let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                assert_eq!(hermite_eval(n, -x), sign * hermite_eval(n, x));
                assert_eq!(hermite_fn_eval(n, -x), sign * hermite_fn_eval(n, x));
            }
        }
    }

    #[test]
    fn generating_function() {
        for &y in &[0.1f64, 0.25] {
            for &x in &[0.0f64, 1.0, 2.0] {
                let mut fact = 1.0;
                let mut sum = 0.0;
                for n in 0..=30 {
                    if n > 0 {
                        fact *= n as f64;
                    }
                    sum += hermite_eval(n, x) * y.powi(n as i32) / fact;
                }
                let g = (2.0 * x * y - y * y).exp();
                assert!((g - sum).abs() <= 1e-10, "x={x} y={y}");
            }
        }
    }

    #[test]
    fn normalized_function_values() {
        assert_relative_eq!(
            hermite_fn_eval(0, 0.0),
            0.7511255444649425,
            max_relative = 1e-15
        );
        assert_eq!(hermite_fn_eval(1, 0.0), 0.0);
        let x: f64 = 1.25;
        let direct =
            hermite_eval(3, x) * (-x * x / 2.0).exp() / (48.0 * std::f64::consts::PI.sqrt()).sqrt();
        assert_relative_eq!(hermite_fn_eval(3, x), direct, max_relative = 1e-13);
    }

    #[test]
    fn sweep_matches_single_evaluation() {
        let all = hermite_fn_sweep(50, 2.3);
        for (n, v) in all.iter().enumerate() {
            assert_eq!(*v, hermite_fn_eval(n, 2.3));
        }
    }

    #[test]
    fn no_overflow_at_high_order() {
        for n in [100usize, 500, 2000, 10_000] {
            for &x in &[0.0, 1.0, 10.0, 30.0, 50.0, -50.0] {
                let v = hermite_fn_eval(n, x);
                assert!(v.is_finite() && v.abs() <= 1.0, "n={n} x={x} v={v}");
            }
        }
        // Past the turning point sqrt(2n+1) ~ 63 the function is still
        // resolvable at x = 50 for n = 2000.
        assert!(hermite_fn_eval(2000, 50.0).abs() > 1e-4);
    }

    #[test]
    fn orthogonality_values() {
        assert!((hermite_orthogonality_check(0, 0, 401, 20.0).unwrap() - 1.0).abs() < 1e-10);
        assert!(hermite_orthogonality_check(0, 1, 401, 20.0).unwrap().abs() < 1e-12);
        let coarse = hermite_orthogonality_check(7, 7, 801, 20.0).unwrap();
        let fine = hermite_orthogonality_check(7, 7, 1601, 20.0).unwrap();
        assert!((coarse - fine).abs() < 1e-8);
        assert!((fine - 1.0).abs() < 1e-8);
    }

    #[test]
    fn orthogonality_rejects_bad_quadrature() {
        assert!(matches!(
            hermite_orthogonality_check(0, 0, 101, 20.0),
            Err(Error::UnderResolved { .. })
        ));
        assert!(matches!(
            hermite_orthogonality_check(20, 0, 10_001, 9.0),
            Err(Error::InadequateSampling(_))
        ));
    }

    #[test]
    fn gram_matrix_is_identity() {
        let hw = 20.0;
        let pts = 4001;
        let step = 2.0 * hw / (pts - 1) as f64;
        let mut gram = [[0.0f64; 13]; 13];
        for i in 0..pts {
            let h = hermite_fn_sweep(12, -hw + i as f64 * step);
            for (row, ha) in gram.iter_mut().zip(&h) {
                for (cell, hb) in row.iter_mut().zip(&h) {
                    *cell += ha * hb * step;
                }
            }
        }
        for (a, row) in gram.iter().enumerate() {
            for (b, &cell) in row.iter().enumerate() {
                let want = if a == b { 1.0 } else { 0.0 };
                assert!((cell - want).abs() < 1e-8, "({a},{b})");
            }
        }
    }
}
