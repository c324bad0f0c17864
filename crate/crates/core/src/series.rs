//! Truncated power series in one variable with an explicit expansion center.
//!
//! Everything downstream (the one- and two-dimensional renormalization
//! operators, the inverse-branch machinery) is built on these. Series are
//! plain polynomials of fixed order; recentering is exact, composition and
//! inversion truncate to the working order.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance below which a derivative at the center is treated as singular
/// for compositional inversion.
pub const TOL_INV: f64 = 1e-10;

/// Default truncation order for univariate work.
pub const DEFAULT_ORDER: usize = 40;

/// A truncated power series sum_k coeffs[k] (y - center)^k.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnivariateSeries {
    pub center: f64,
    pub coeffs: Vec<f64>,
}

impl UnivariateSeries {
    pub fn new(center: f64, coeffs: Vec<f64>) -> Self {
        assert!(!coeffs.is_empty(), "series needs at least one coefficient");
        assert!(
            coeffs.iter().all(|c| c.is_finite()),
            "series coefficients must be finite"
        );
        Self { center, coeffs }
    }

    /// Constant series of the given order.
    pub fn constant(value: f64, center: f64, order: usize) -> Self {
        let mut coeffs = vec![0.0; order + 1];
        coeffs[0] = value;
        Self { center, coeffs }
    }

    /// The identity map y |-> y expanded about `center`.
    pub fn identity(center: f64, order: usize) -> Self {
        let mut coeffs = vec![0.0; order + 1];
        coeffs[0] = center;
        if order >= 1 {
            coeffs[1] = 1.0;
        }
        Self { center, coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of (y - center)^k, zero beyond the truncation order.
    pub fn coeff(&self, k: usize) -> f64 {
        self.coeffs.get(k).copied().unwrap_or(0.0)
    }

    /// Horner evaluation.
    pub fn eval(&self, y: f64) -> f64 {
        let t = y - self.center;
        let mut acc = 0.0;
        for &c in self.coeffs.iter().rev() {
            acc = acc * t + c;
        }
        acc
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        let t = z - self.center;
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            acc = acc * t + c;
        }
        acc
    }

    /// Derivative as a series (order drops by one, floor at constant).
    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Self::constant(0.0, self.center, 0);
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| k as f64 * c)
            .collect();
        Self { center: self.center, coeffs }
    }

    /// Antiderivative with zero constant term.
    pub fn antiderivative(&self) -> Self {
        let mut coeffs = vec![0.0; self.coeffs.len() + 1];
        for (k, &c) in self.coeffs.iter().enumerate() {
            coeffs[k + 1] = c / (k + 1) as f64;
        }
        Self { center: self.center, coeffs }
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            center: self.center,
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.center, other.center, "add requires matching centers");
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) + other.coeff(k)).collect();
        Self { center: self.center, coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1.0))
    }

    /// Product truncated to the larger of the two orders.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.center, other.center, "mul requires matching centers");
        let n = self.order().max(other.order());
        let mut coeffs = vec![0.0; n + 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                if i + j > n {
                    break;
                }
                coeffs[i + j] += a * b;
            }
        }
        Self { center: self.center, coeffs }
    }

    /// Exact polynomial shift to a new expansion center (repeated synthetic
    /// division; no truncation error).
    pub fn recenter(&self, new_center: f64) -> Self {
        let shift = new_center - self.center;
        if shift == 0.0 {
            return self.clone();
        }
        let mut coeffs = self.coeffs.clone();
        let n = coeffs.len();
        // Taylor shift: repeatedly divide by (t - shift).
        for k in 0..n {
            for i in (k..n - 1).rev() {
                let next = coeffs[i + 1];
                coeffs[i] += shift * next;
            }
        }
        Self { center: new_center, coeffs }
    }

    /// Truncate (or zero-pad) to the given order.
    pub fn truncate(&self, order: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(order + 1, 0.0);
        Self { center: self.center, coeffs }
    }

    /// Composition f(g(y)) truncated to max(order f, order g).
    ///
    /// The constant term of `g` must equal the center of `f`; callers mixing
    /// expansion points recenter explicitly first.
    pub fn compose(&self, g: &Self) -> Result<Self> {
        let inner = g.coeff(0);
        if (inner - self.center).abs() > 1e-9 {
            return Err(Error::CenterMismatch {
                inner,
                outer: self.center,
            });
        }
        let n = self.order().max(g.order());
        // u = g - f.center as a series with (near) zero constant term; the
        // residual constant is kept so round-off in g's head stays accounted.
        let mut u = g.truncate(n);
        u.coeffs[0] -= self.center;
        let mut acc = UnivariateSeries::constant(0.0, g.center, n);
        for &c in self.coeffs.iter().rev() {
            acc = acc.mul(&u);
            acc.coeffs[0] += c;
        }
        Ok(acc)
    }

    /// f(scale * y) about y = center/scale... kept simple: returns the series
    /// of y |-> f(lambda * y) about 0 when f is centered at 0.
    pub fn compose_scale(&self, lambda: f64) -> Self {
        assert_eq!(self.center, 0.0, "compose_scale expects center 0");
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, &c)| c * lambda.powi(k as i32))
            .collect();
        Self { center: 0.0, coeffs }
    }

    /// Compositional inverse about the center: returns g with
    /// g(f(y)) = y + O((y-center)^{N+1}); g is centered at f(center).
    pub fn invert(&self) -> Result<Self> {
        let a1 = self.coeff(1);
        if a1.abs() <= TOL_INV {
            return Err(Error::SingularDerivative {
                deriv: a1,
                tol: TOL_INV,
            });
        }
        let n = self.order();
        let a0 = self.coeff(0);
        // p = f - a0 has zero constant term; build its powers once.
        let mut p = self.clone();
        p.coeffs[0] = 0.0;
        p.center = 0.0; // treat as formal series in t = y - center
        let mut powers: Vec<UnivariateSeries> = Vec::with_capacity(n + 1);
        let mut acc = UnivariateSeries::constant(1.0, 0.0, n);
        powers.push(acc.clone());
        for _ in 1..=n {
            acc = acc.mul(&p);
            powers.push(acc.clone());
        }
        let mut b = vec![0.0; n + 1]; // inverse coefficients, b[0] stays 0
        if n >= 1 {
            b[1] = 1.0 / a1;
        }
        for m in 2..=n {
            let mut s = 0.0;
            for j in 1..m {
                s += b[j] * powers[j].coeff(m);
            }
            b[m] = -s / a1.powi(m as i32);
        }
        let mut coeffs = b;
        coeffs[0] = self.center;
        Ok(Self { center: a0, coeffs })
    }

    /// Max absolute coefficient, used as the Newton residual norm.
    pub fn coeff_norm(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Series reciprocal 1/f, for a nonzero constant term.
    pub fn reciprocal(&self) -> Self {
        let c0 = self.coeff(0);
        assert!(c0.abs() > 1e-14, "reciprocal of series with zero head");
        let n = self.order();
        let mut r = Self::constant(1.0 / c0, self.center, n);
        let two = Self::constant(2.0, self.center, n);
        let mut correct = 1usize;
        while correct <= n {
            let sr = self.mul(&r);
            r = r.mul(&two.sub(&sr));
            correct *= 2;
        }
        r
    }
}
