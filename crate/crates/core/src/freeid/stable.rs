//! Voiculescu transforms of the freely stable family.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{FreeError, Result};

const ARG_TOLERANCE: f64 = 1e-12;

/// Index and skewness of a freely stable law, together with a positive
/// multiplier applied to its transform (1 for the canonical representative).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StableParams {
    alpha: f64,
    b: Complex64,
    multiplier: f64,
}

/// Logarithm on the closed upper half-plane with `arg z` in `[0, pi]`.
pub(crate) fn log_upper(z: Complex64) -> Complex64 {
    Complex64::new(z.norm().ln(), z.im.abs().atan2(z.re))
}

fn arg_in(arg: f64, lo: f64, hi: f64) -> bool {
    [arg, arg + 2.0 * PI, arg - 2.0 * PI]
        .iter()
        .any(|a| *a >= lo - ARG_TOLERANCE && *a <= hi + ARG_TOLERANCE)
}

impl StableParams {
    /// Validates `(alpha, b)` against the classification:
    ///
    /// * `alpha = 2`: `phi(z) = 1/z`, `b` ignored;
    /// * `1 < alpha < 2`: `phi(z) = b z^(1-alpha)`, `|b| = 1`, `arg b` in `[(alpha-2)pi, 0]`;
    /// * `0 < alpha < 1`: same form, `arg b` in `[pi, (1+alpha)pi]`;
    /// * `alpha = 1`: `phi(z) = -2bi + (2(2b-1)/pi) log z` with real `b` in `[0, 1]`.
    pub fn new(alpha: f64, b: Complex64) -> Result<Self> {
        let invalid = |msg: String| Err(FreeError::InvalidStableParameters(msg));
        if !(alpha > 0.0 && alpha <= 2.0) {
            return invalid(format!("alpha = {alpha} outside (0, 2]"));
        }
        if alpha == 2.0 {
            return Ok(Self {
                alpha,
                b: Complex64::new(1.0, 0.0),
                multiplier: 1.0,
            });
        }
        if alpha == 1.0 {
            if b.im.abs() > ARG_TOLERANCE || !(0.0..=1.0).contains(&b.re) {
                return invalid(format!("alpha = 1 requires real b in [0, 1], got {b}"));
            }
            return Ok(Self {
                alpha,
                b: Complex64::new(b.re, 0.0),
                multiplier: 1.0,
            });
        }
        if (b.norm() - 1.0).abs() > 1e-12 {
            return invalid(format!("|b| = {} must be 1", b.norm()));
        }
        let arg = b.im.atan2(b.re);
        let (lo, hi) = if alpha > 1.0 {
            ((alpha - 2.0) * PI, 0.0)
        } else {
            (PI, (1.0 + alpha) * PI)
        };
        if !arg_in(arg, lo, hi) {
            return invalid(format!("arg b = {arg} outside [{lo}, {hi}] for alpha = {alpha}"));
        }
        Ok(Self {
            alpha,
            b,
            multiplier: 1.0,
        })
    }

    /// `b` given in polar form `modulus * e^{i theta}`.
    pub fn polar(alpha: f64, modulus: f64, theta: f64) -> Result<Self> {
        Self::new(alpha, Complex64::from_polar(modulus, theta))
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn b(&self) -> Complex64 {
        self.b
    }

    pub fn multiplier(&self) -> f64 {
        self.multiplier
    }

    /// Same law type with the transform multiplied by `c > 0`.
    pub fn times(&self, c: f64) -> Self {
        Self {
            multiplier: self.multiplier * c,
            ..*self
        }
    }

    /// `phi(z)` on the closed upper half-plane (principal branches).
    pub fn phi(&self, z: Complex64) -> Complex64 {
        let base = if self.alpha == 2.0 {
            1.0 / z
        } else if self.alpha == 1.0 {
            let b = self.b.re;
            Complex64::new(0.0, -2.0 * b) + (2.0 * (2.0 * b - 1.0) / PI) * log_upper(z)
        } else {
            self.b * ((1.0 - self.alpha) * log_upper(z)).exp()
        };
        self.multiplier * base
    }

    /// `phi'(z)`.
    pub fn phi_prime(&self, z: Complex64) -> Complex64 {
        let base = if self.alpha == 2.0 {
            -1.0 / (z * z)
        } else if self.alpha == 1.0 {
            Complex64::new(2.0 * (2.0 * self.b.re - 1.0) / PI, 0.0) / z
        } else {
            self.b * (1.0 - self.alpha) * (-self.alpha * log_upper(z)).exp()
        };
        self.multiplier * base
    }

    /// Location shift `s` with `phi_{2 phi}(t) = c^{-1} s_phi((t - s)/c)`,
    /// `c = 2^{1/alpha}`; nonzero only for the logarithmic family.
    pub fn doubling_shift(&self) -> f64 {
        if self.alpha == 1.0 {
            2.0 * self.multiplier * (2.0 * (2.0 * self.b.re - 1.0) / PI) * 2f64.ln()
        } else {
            0.0
        }
    }
    /// Largest `|s_{2 phi}(t) - c^{-1} s_phi((t - s)/c)|` over `grid`, with
    /// `c = 2^{1/alpha}` and `s` the [`doubling_shift`](Self::doubling_shift).
    pub fn max_dilation_error(&self, grid: &[f64]) -> Result<f64> {
        super::validate_grid(grid)?;
        let law = super::FreeIdLaw::new(super::PhiSpec::Stable(*self));
        let doubled = law.scaled_phi(2.0);
        let scale = 2f64.powf(1.0 / self.alpha);
        let shift = self.doubling_shift();
        grid.iter().try_fold(0.0f64, |worst, &t| {
            let lhs = doubled.density_at(t)?;
            let rhs = law.density_at((t - shift) / scale)? / scale;
            Ok(worst.max((lhs - rhs).abs()))
        })
    }
}
