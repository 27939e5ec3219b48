//! Freely infinitely divisible laws.
//!
//! A law is described by its Voiculescu transform `phi`, either through a
//! generating pair `(gamma, sigma)` or through the closed form of a freely
//! stable law. Everything else is derived from `H(z) = z + phi(z)`, the
//! inverse of `F = 1/G`: interior values of `F` by inverting `H`, boundary
//! values through the curve `x + i u(x)` that `F` maps the real line onto.

mod boundary;
mod density;
mod stable;

use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{FreeError, Result};
use crate::measures::{DiscreteMeasure, GeneratingPair, WeightedNodeSet};
use crate::transforms::{nevanlinna_derivative, nevanlinna_eval, POLE_PROXIMITY};

pub use boundary::{BoundaryCurve, CurveSample};
pub use density::{uniform_grid, DensityTable, DEFAULT_EXCLUSION_RADIUS};
pub(crate) use density::{is_excluded, validate_grid};
pub use stable::StableParams;

/// Iteration cap of the fixed-point phase of [`FreeIdLaw::invert_h`].
pub const FIXED_POINT_CAP: usize = 10_000;

/// Source of the Voiculescu transform.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum PhiSpec {
    Pair(GeneratingPair),
    Stable(StableParams),
}

/// Zero and atom data of `F` on the real line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AtomReport {
    /// `int (1 + t^2)/t^2 dsigma`, possibly infinite.
    pub l: f64,
    pub t_nu: Option<f64>,
    pub atom_mass: f64,
    pub has_zero: bool,
}

/// A freely infinitely divisible law with a lazily built boundary curve.
#[derive(Debug, Clone)]
pub struct FreeIdLaw {
    phi: PhiSpec,
    degenerate: bool,
    curve: OnceLock<BoundaryCurve>,
}

impl FreeIdLaw {
    /// Wraps a transform spec. A pair with `sigma = 0` is the point mass at
    /// `gamma`; it is accepted and flagged degenerate.
    pub fn new(phi: PhiSpec) -> Self {
        let degenerate = match &phi {
            PhiSpec::Pair(p) => p.sigma.is_zero(),
            PhiSpec::Stable(_) => false,
        };
        Self {
            phi,
            degenerate,
            curve: OnceLock::new(),
        }
    }

    pub fn from_pair(pair: GeneratingPair) -> Self {
        Self::new(PhiSpec::Pair(pair))
    }

    pub fn stable(alpha: f64, b: Complex64) -> Result<Self> {
        Ok(Self::new(PhiSpec::Stable(StableParams::new(alpha, b)?)))
    }

    /// Standard semicircle law, pair `(0, delta_0)`.
    pub fn semicircle() -> Self {
        let sigma = WeightedNodeSet::new(&[(0.0, 1.0)]).expect("valid node");
        Self::from_pair(GeneratingPair::new(0.0, sigma))
    }

    /// Marchenko-Pastur law of rate `lambda`.
    pub fn marchenko_pastur(lambda: f64) -> Result<Self> {
        Ok(Self::from_pair(compound_poisson_pair(
            lambda,
            &DiscreteMeasure::point_mass(1.0),
        )?))
    }

    /// Cauchy law, `phi = -i`.
    pub fn cauchy() -> Self {
        Self::stable(1.0, Complex64::new(0.5, 0.0)).expect("valid stable parameters")
    }

    pub fn spec(&self) -> &PhiSpec {
        &self.phi
    }

    pub fn pair(&self) -> Option<&GeneratingPair> {
        match &self.phi {
            PhiSpec::Pair(p) => Some(p),
            PhiSpec::Stable(_) => None,
        }
    }

    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    /// The law whose transform is `c * phi` (the `c`-fold free power for integer `c`).
    pub fn scaled_phi(&self, c: f64) -> Self {
        match &self.phi {
            PhiSpec::Pair(p) => Self::from_pair(p.scaled(c)),
            PhiSpec::Stable(s) => Self::new(PhiSpec::Stable(s.times(c))),
        }
    }

    pub(crate) fn require_nondegenerate(&self) -> Result<()> {
        if self.degenerate {
            Err(FreeError::DegenerateLaw)
        } else {
            Ok(())
        }
    }

    /// `phi(z)` without domain or pole checks; used inside solvers.
    pub(crate) fn phi_raw(&self, z: Complex64) -> Complex64 {
        match &self.phi {
            PhiSpec::Pair(p) => {
                let mut acc = Complex64::new(p.gamma, 0.0);
                for &(t, w) in p.sigma.nodes() {
                    acc += w * (1.0 + t * z) / (z - t);
                }
                acc
            }
            PhiSpec::Stable(s) => s.phi(z),
        }
    }

    pub(crate) fn h_raw(&self, z: Complex64) -> Complex64 {
        z + self.phi_raw(z)
    }

    pub(crate) fn h_prime_raw(&self, z: Complex64) -> Complex64 {
        match &self.phi {
            PhiSpec::Pair(p) => {
                let mut acc = Complex64::new(1.0, 0.0);
                for &(t, w) in p.sigma.nodes() {
                    let d = z - t;
                    acc -= w * (1.0 + t * t) / (d * d);
                }
                acc
            }
            PhiSpec::Stable(s) => 1.0 + s.phi_prime(z),
        }
    }

    fn check_domain(z: Complex64) -> Result<()> {
        if !(z.im >= 0.0) || !z.re.is_finite() || !z.im.is_finite() {
            return Err(FreeError::OutsideDomain(format!("{z}")));
        }
        Ok(())
    }

    /// Voiculescu transform on the closed upper half-plane.
    pub fn phi_eval(&self, z: Complex64) -> Result<Complex64> {
        Self::check_domain(z)?;
        match &self.phi {
            PhiSpec::Pair(p) => nevanlinna_eval(p, z),
            PhiSpec::Stable(s) => {
                if z.norm() < POLE_PROXIMITY && s.alpha() >= 1.0 {
                    return Err(FreeError::OutsideDomain("stable transform at 0".into()));
                }
                Ok(s.phi(z))
            }
        }
    }

    /// `H(z) = z + phi(z)`.
    pub fn h_eval(&self, z: Complex64) -> Result<Complex64> {
        Ok(z + self.phi_eval(z)?)
    }

    /// `H'(z) = 1 + phi'(z)`.
    pub fn h_prime(&self, z: Complex64) -> Result<Complex64> {
        Self::check_domain(z)?;
        match &self.phi {
            PhiSpec::Pair(p) => Ok(1.0 + nevanlinna_derivative(p, z)?),
            PhiSpec::Stable(s) => Ok(1.0 + s.phi_prime(z)),
        }
    }

    /// Membership in `Omega = {z : Im H(z) > 0}`.
    pub fn in_omega(&self, z: Complex64) -> Result<bool> {
        if !(z.im > 0.0) {
            return Err(FreeError::OutsideDomain(format!("{z}")));
        }
        Ok(self.h_eval(z)?.im > 0.0)
    }

    /// `g(x) = int (1 + t^2)/(t - x)^2 dsigma(t)`; `x` lies in the open set
    /// where `F` has positive imaginary part iff `g(x) > 1`. Stable laws
    /// report `+inf`.
    pub fn g_of_x(&self, x: f64) -> f64 {
        match &self.phi {
            PhiSpec::Pair(p) => g_of_pair(p, x),
            PhiSpec::Stable(_) => f64::INFINITY,
        }
    }

    /// `F(w)` for `Im w > 0`, the unique solution of `H(z) = w` in the upper
    /// half-plane.
    ///
    /// Runs the fixed-point map `z -> w - phi(z)` from `z = w` and switches to
    /// damped Newton on `H(z) - w` when the contraction stalls.
    pub fn invert_h(&self, w: Complex64) -> Result<Complex64> {
        if !(w.im > 0.0) || !w.re.is_finite() || !w.im.is_finite() {
            return Err(FreeError::OutsideDomain(format!("{w}")));
        }
        if self.degenerate {
            let gamma = self.pair().map(|p| p.gamma).unwrap_or(0.0);
            return Ok(w - gamma);
        }
        let mut z = w;
        let mut window_start_step = f64::INFINITY;
        let mut converged = false;
        for m in 0..FIXED_POINT_CAP {
            let next = w - self.phi_raw(z);
            if !next.re.is_finite() || !next.im.is_finite() {
                break;
            }
            let step = (next - z).norm();
            z = next;
            if step < 1e-13 * (1.0 + z.norm()) {
                converged = true;
                break;
            }
            if m % 50 == 0 {
                // Contraction ratio above 0.999 per step over the last 50 steps.
                if m > 0 && step > 0.999f64.powi(50) * window_start_step {
                    break;
                }
                window_start_step = step;
            }
        }
        if !converged {
            z = self.newton_h(w, z)?;
        }
        let residual = (self.h_raw(z) - w).norm();
        if residual > 1e-11 * (1.0 + w.norm()) || !(z.im > 0.0) {
            z = self.newton_h(w, z)?;
        }
        Ok(z)
    }

    fn newton_h(&self, w: Complex64, start: Complex64) -> Result<Complex64> {
        let fail = || FreeError::NoConvergence { re: w.re, im: w.im };
        let mut z = if start.im > 0.0 { start } else { w };
        let mut r = self.h_raw(z) - w;
        for _ in 0..200 {
            if r.norm() < 1e-13 * (1.0 + w.norm()) {
                return Ok(z);
            }
            let d = self.h_prime_raw(z);
            if d.norm() == 0.0 || !d.re.is_finite() {
                return Err(fail());
            }
            let step = r / d;
            let mut lambda = 1.0;
            let mut accepted = false;
            for _ in 0..60 {
                let cand = z - lambda * step;
                if cand.im > 0.0 {
                    let rc = self.h_raw(cand) - w;
                    if rc.norm() < r.norm() {
                        z = cand;
                        r = rc;
                        accepted = true;
                        break;
                    }
                }
                lambda *= 0.5;
            }
            if !accepted {
                break;
            }
        }
        if r.norm() < 1e-11 * (1.0 + w.norm()) {
            Ok(z)
        } else {
            Err(fail())
        }
    }

    /// Zero of `F` and atom mass from `L = int (1 + t^2)/t^2 dsigma`:
    /// `F` vanishes iff `L <= 1`, at `t_nu = gamma - int dsigma/t`, and the
    /// atom there has mass `1 - L`.
    pub fn atom_report(&self) -> Result<AtomReport> {
        self.require_nondegenerate()?;
        let pair = match &self.phi {
            PhiSpec::Pair(p) => p,
            PhiSpec::Stable(_) => {
                return Ok(AtomReport {
                    l: f64::INFINITY,
                    t_nu: None,
                    atom_mass: 0.0,
                    has_zero: false,
                })
            }
        };
        let mut l = 0.0;
        let mut inverse_moment = 0.0;
        for &(t, w) in pair.sigma.nodes() {
            if w == 0.0 {
                continue;
            }
            if t.abs() < POLE_PROXIMITY {
                l = f64::INFINITY;
                break;
            }
            l += w * (1.0 + t * t) / (t * t);
            inverse_moment += w / t;
        }
        let has_zero = l <= 1.0 + 1e-12;
        Ok(AtomReport {
            l,
            t_nu: has_zero.then(|| pair.gamma - inverse_moment),
            atom_mass: if has_zero { (1.0 - l).max(0.0) } else { 0.0 },
            has_zero,
        })
    }
}

pub(crate) fn g_of_pair(p: &GeneratingPair, x: f64) -> f64 {
    let mut g = 0.0;
    for &(t, w) in p.sigma.nodes() {
        if w == 0.0 {
            continue;
        }
        let d = t - x;
        if d.abs() < POLE_PROXIMITY {
            return f64::INFINITY;
        }
        g += w * (1.0 + t * t) / (d * d);
    }
    g
}

/// Generating pair of the compound free Poisson law with rate `lambda` and
/// jump distribution `jump`.
pub fn compound_poisson_pair(lambda: f64, jump: &DiscreteMeasure) -> Result<GeneratingPair> {
    if !(lambda > 0.0) {
        return Err(FreeError::InvalidMeasure(format!("rate {lambda} must be positive")));
    }
    if jump.atoms().iter().all(|a| a.0 == 0.0) {
        return Err(FreeError::ZeroJump);
    }
    let mut gamma = 0.0;
    let mut nodes = Vec::new();
    for &(t, m) in jump.atoms() {
        let q = 1.0 + t * t;
        gamma += lambda * m * t / q;
        let w = lambda * m * t * t / q;
        if w > 0.0 {
            nodes.push((t, w));
        }
    }
    Ok(GeneratingPair::new(gamma, WeightedNodeSet::new(&nodes)?))
}

#[cfg(test)]
mod tests;
