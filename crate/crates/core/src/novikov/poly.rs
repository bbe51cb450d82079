//! Univariate polynomials over the Novikov field.

use serde::{Deserialize, Serialize};

use super::rational::{Order, Rational};
use super::scalar::NovikovScalar;

/// Polynomial with coefficients indexed by degree `0..=d`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NovikovPolynomial {
    coeffs: Vec<NovikovScalar>,
}

impl NovikovPolynomial {
    /// Trims exactly-zero leading coefficients; a leading coefficient that is
    /// merely truncated to zero is kept (the solver reports it).
    pub fn new(mut coeffs: Vec<NovikovScalar>) -> Self {
        while coeffs.len() > 1 && coeffs.last().map_or(false, |c| c.is_exact_zero()) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(NovikovScalar::zero());
        }
        NovikovPolynomial { coeffs }
    }

    pub fn coeffs(&self) -> &[NovikovScalar] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn evaluate(&self, x: &NovikovScalar) -> NovikovScalar {
        let mut acc = NovikovScalar::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    pub fn derivative(&self) -> NovikovPolynomial {
        if self.coeffs.len() <= 1 {
            return NovikovPolynomial::new(vec![NovikovScalar::zero()]);
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c.scale(num_complex::Complex64::new(k as f64, 0.0)))
            .collect();
        NovikovPolynomial::new(coeffs)
    }

    /// `p(T^gamma * (z + x))` as a polynomial in `x`, used by the Puiseux
    /// recursion. Coefficients are computed exactly in truncated arithmetic.
    pub fn shift_scale(&self, gamma: Rational, z: num_complex::Complex64) -> NovikovPolynomial {
        let d = self.degree();
        let mut out = vec![NovikovScalar::zero(); d + 1];
        // binomial expansion of (z + x)^i, scaled by T^{gamma * i}
        let mut binom = vec![vec![0f64; d + 1]; d + 1];
        for i in 0..=d {
            binom[i][0] = 1.0;
            for j in 1..=i {
                binom[i][j] = binom[i - 1][j - 1] + if j <= i - 1 { binom[i - 1][j] } else { 0.0 };
            }
        }
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_empty() && c.order() == Order::Infinite {
                continue;
            }
            let scaled = c.shift(gamma.scale(i as i64));
            let mut zpow = num_complex::Complex64::new(1.0, 0.0);
            // (z + x)^i = sum_j C(i,j) z^{i-j} x^j; build powers from the top
            let mut zpows = vec![num_complex::Complex64::new(1.0, 0.0); i + 1];
            for k in 1..=i {
                zpow *= z;
                zpows[k] = zpow;
            }
            for j in 0..=i {
                let w = zpows[i - j] * binom[i][j];
                out[j] = out[j].add(&scaled.scale(w));
            }
        }
        NovikovPolynomial::new(out)
    }
}
