//! Taylor expansion of the modulation constraint and its rigorous error band.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::poly::Polynomial;

/// Expansion point and radius covering the quarter period `[0, 1/4]`.
const ALPHA0: f64 = 0.125;
const RADIUS: f64 = 0.125;

/// Truncated Taylor series of `cos(2 pi alpha)` around 1/8, together with the
/// modulation-band half-width absorbing the truncation error.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaylorApprox {
    k: u32,
    d: usize,
    coeffs: Vec<f64>,
    delta_m: f64,
}

impl TaylorApprox {
    pub fn order(&self) -> u32 {
        self.k
    }

    pub fn pulse_number(&self) -> usize {
        self.d
    }

    pub fn expansion_point(&self) -> f64 {
        ALPHA0
    }

    pub fn radius(&self) -> f64 {
        RADIUS
    }

    /// Coefficients of `Gamma_k` in powers of `(alpha - 1/8)`.
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Modulation-band half-width `Delta m_k`.
    pub fn delta_m(&self) -> f64 {
        self.delta_m
    }

    /// Evaluate `Gamma_k` at a scalar angle.
    pub fn gamma(&self, alpha: f64) -> f64 {
        let u = alpha - ALPHA0;
        let mut acc = 0.0;
        for &c in self.coeffs.iter().rev() {
            acc = acc * u + c;
        }
        acc
    }

    /// `Gamma_k(x_i)` as a polynomial in `dimension` variables.
    pub fn gamma_polynomial(&self, dimension: usize, var: usize) -> Polynomial {
        let shifted = Polynomial::variable(dimension, var)
            .sub(&Polynomial::constant(dimension, ALPHA0))
            .unwrap();
        let mut out = Polynomial::constant(dimension, self.coeffs[0]);
        let mut power = Polynomial::constant(dimension, 1.0);
        for &c in &self.coeffs[1..] {
            power = power.multiply(&shifted).unwrap();
            out = out.add(&power.scale(c)).unwrap();
        }
        out
    }
}

/// Taylor data for order `k` and pulse number `d`.
///
/// `coeffs[n] = (2 pi)^n cos(pi/4 + n pi/2) / n!` and
/// `delta_m = (4 d / pi) (2 pi)^(k+1) r^(k+1) / (k+1)!` with `r = 1/8`.
pub fn taylor_expansion(k: u32, d: usize) -> TaylorApprox {
    assert!(d >= 1, "pulse number must be positive");
    let mut coeffs = Vec::with_capacity(k as usize + 1);
    let mut factorial = 1.0;
    for n in 0..=k {
        if n > 0 {
            factorial *= n as f64;
        }
        let deriv = (2.0 * PI).powi(n as i32) * (2.0 * PI * ALPHA0 + n as f64 * PI / 2.0).cos();
        coeffs.push(deriv / factorial);
    }
    TaylorApprox {
        k,
        d,
        coeffs,
        delta_m: delta_m(k, d),
    }
}

/// `Delta m_k` alone; cheap enough for sweeps over large `k` and `d`.
pub fn delta_m(k: u32, d: usize) -> f64 {
    let mut band = 4.0 * d as f64 / PI;
    for i in 1..=(k + 1) {
        band *= 2.0 * PI * RADIUS / i as f64;
    }
    band
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn order_zero() {
        let t = taylor_expansion(0, 1);
        assert_relative_eq!(t.coeffs()[0], 0.5f64.sqrt(), epsilon = 1e-15);
        assert_relative_eq!(t.delta_m(), 1.0, epsilon = 1e-12);
        let t3 = taylor_expansion(0, 3);
        assert_relative_eq!(t3.delta_m(), 3.0, epsilon = 1e-12);
    }

    #[test]
    fn order_one_slope() {
        let t = taylor_expansion(1, 1);
        assert_relative_eq!(t.coeffs()[1], -(2.0f64.sqrt()) * PI, epsilon = 1e-12);
    }

    #[test]
    fn order_five_band() {
        assert_relative_eq!(delta_m(5, 1), 4.151e-4, epsilon = 5e-7);
    }

    #[test]
    fn coeffs_match_symbolic_derivatives() {
        // d^n/da^n cos(2 pi a) cycles cos -> -sin -> -cos -> sin
        let t = taylor_expansion(7, 1);
        let a0 = t.expansion_point();
        let base = 2.0 * PI * a0;
        let cycle = [base.cos(), -base.sin(), -base.cos(), base.sin()];
        let mut factorial = 1.0;
        for n in 0..=7usize {
            if n > 0 {
                factorial *= n as f64;
            }
            let expected = (2.0 * PI).powi(n as i32) * cycle[n % 4] / factorial;
            assert_relative_eq!(t.coeffs()[n], expected, epsilon = 1e-10);
        }
    }

    #[test]
    fn remainder_bound_dominates_taylor_error() {
        for k in 0..=10u32 {
            let t = taylor_expansion(k, 1);
            let bound = delta_m(k, 1) * PI / 4.0; // (2 pi)^{k+1} r^{k+1} / (k+1)!
            for i in 0..=10_000 {
                let a = 0.25 * i as f64 / 10_000.0;
                let err = ((2.0 * PI * a).cos() - t.gamma(a)).abs();
                assert!(
                    err <= bound * (1.0 + 1e-12),
                    "k={k} alpha={a}: err {err} > bound {bound}"
                );
            }
        }
    }

    #[test]
    fn delta_m_strictly_decreasing_and_vanishing() {
        for d in 1..=50 {
            let mut prev = delta_m(0, d);
            for k in 1..=30 {
                let cur = delta_m(k, d);
                assert!(cur < prev, "k={k} d={d}");
                prev = cur;
            }
            assert!(delta_m(25, d) / d as f64 < 1e-12);
        }
    }

    #[test]
    fn gamma_polynomial_matches_scalar_eval() {
        let t = taylor_expansion(5, 2);
        let g = t.gamma_polynomial(2, 1);
        for a in [0.0, 0.07, 0.125, 0.2, 0.25] {
            assert_relative_eq!(
                g.evaluate(&[0.9, a]).unwrap(),
                t.gamma(a),
                epsilon = 1e-12
            );
        }
    }
}
