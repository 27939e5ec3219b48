//! Free convolution powers `mu^{boxplus k}` of a discrete measure through
//! subordination.
//!
//! `F_{mu^k} = F_mu o omega`, where `omega = F_rho` and `rho` is the freely
//! infinitely divisible law with `phi_rho = (k - 1) E_mu`. Equivalently
//! `F_{mu^k}(w) = omega(w) + (omega(w) - w)/(k - 1)`.

mod oracle;

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{FreeError, Result};
use crate::freeid::{DensityTable, FreeIdLaw};
use crate::measures::{DiscreteMeasure, GeneratingPair, MomentVector, MAX_MOMENT_ORDER};
use crate::roots::gauss_legendre;
use crate::transforms::{f_transform, nevanlinna_pair, self_energy, POLE_PROXIMITY};

pub use oracle::omega_oracle_smallcase;

/// Relative tolerance between the two expressions of `F_{mu^k}`.
pub const SUBORDINATION_TOLERANCE: f64 = 1e-9;
/// Atoms lighter than this are not reported.
pub const ATOM_REPORT_THRESHOLD: f64 = 1e-6;
/// Heights used to extrapolate `iy G(t + iy)` to `y = 0`.
pub const ATOM_LADDER: [f64; 3] = [1e-2, 1e-3, 1e-4];

const QUADRATURE_PANEL_ORDER: usize = 24;
const QUADRATURE_TOLERANCE: f64 = 1e-12;
const QUADRATURE_MAX_DEPTH: u32 = 40;

struct Interval {
    mid: f64,
    half: f64,
}

/// `(k - 1)` times the Nevanlinna pair of `E_mu`.
pub fn rho_pair(mu: &DiscreteMeasure, k: u32) -> Result<GeneratingPair> {
    if k < 2 {
        return Err(FreeError::InvalidPower(k));
    }
    if mu.is_point_mass() {
        return Err(FreeError::DegenerateLaw);
    }
    Ok(nevanlinna_pair(mu)?.scaled((k - 1) as f64))
}

/// The `k`-fold free convolution power of a discrete measure.
#[derive(Debug, Clone)]
pub struct ConvPow {
    base: DiscreteMeasure,
    k: u32,
    rho: FreeIdLaw,
}

impl ConvPow {
    pub fn new(base: DiscreteMeasure, k: u32) -> Result<Self> {
        let rho = FreeIdLaw::from_pair(rho_pair(&base, k)?);
        let km1 = (k - 1) as f64;
        for z in [
            Complex64::new(0.0, 1.0),
            Complex64::new(1.0, 2.0),
            Complex64::new(-3.0, 0.5),
            Complex64::new(0.1, 10.0),
            Complex64::new(2.0, 0.1),
        ] {
            let expected = km1 * self_energy(&base, z)?;
            let gap = (rho.phi_eval(z)? - expected).norm();
            if gap > 1e-10 * (1.0 + expected.norm()) {
                return Err(FreeError::RootFindingFailure(format!(
                    "subordination pair misses (k-1)E at {z} by {gap:e}"
                )));
            }
        }
        Ok(Self { base, k, rho })
    }

    pub fn base(&self) -> &DiscreteMeasure {
        &self.base
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// The subordination law `rho`.
    pub fn rho(&self) -> &FreeIdLaw {
        &self.rho
    }

    /// `omega(w) = F_rho(w)`: interior values by inverting `H_rho`, boundary
    /// values (real `w`, `boundary = true`) from the boundary curve of `rho`.
    pub fn omega(&self, w: Complex64, boundary: bool) -> Result<Complex64> {
        if boundary {
            if w.im != 0.0 {
                return Err(FreeError::OutsideDomain(format!("boundary point {w} is not real")));
            }
            self.rho.f_at_real(w.re)
        } else {
            self.rho.invert_h(w)
        }
    }

    /// `F_{mu^k}(w) = omega + (omega - w)/(k - 1)`, cross-checked against
    /// `F_mu(omega)`.
    pub fn f_convpow(&self, w: Complex64, boundary: bool) -> Result<Complex64> {
        let omega = self.omega(w, boundary)?;
        let mismatch = |gap: f64| FreeError::SubordinationMismatch {
            re: w.re,
            im: w.im,
            gap,
        };
        let on_atom = self
            .base
            .atoms()
            .iter()
            .map(|a| (omega - a.0).norm())
            .fold(f64::INFINITY, f64::min);
        if on_atom < POLE_PROXIMITY {
            return Err(mismatch(on_atom));
        }
        let f = omega + (omega - w) / (self.k - 1) as f64;
        let via_base = f_transform(&self.base, omega)?;
        let gap = (via_base - f).norm();
        if !(gap < SUBORDINATION_TOLERANCE * (1.0 + f.norm())) {
            return Err(mismatch(gap));
        }
        Ok(f)
    }

    /// Density of the absolutely continuous part at real `t`.
    pub fn density_at(&self, t: f64) -> Result<f64> {
        let f = self.f_convpow(Complex64::new(t, 0.0), true)?;
        if f.im <= 0.0 {
            return Ok(0.0);
        }
        Ok(f.im / (PI * f.norm_sqr()))
    }

    /// Density on `grid`, skipping points in the open interval `excluded`,
    /// annotated with the atom when there is one.
    pub fn density_table(&self, grid: &[f64], excluded: Option<(f64, f64)>) -> Result<DensityTable> {
        DensityTable::tabulate(grid.to_vec(), excluded, self.atom(), |t| self.density_at(t))
    }

    /// The atom of `mu^k`, if any.
    ///
    /// `F_{mu^k}` vanishes where `omega` meets an atom `a` of `mu` on the real
    /// line, which requires `a` to lie in the region where `rho`'s boundary
    /// curve touches the axis. The location is `H_rho(a)` and the mass is the
    /// limit of `iy G(t + iy)`, extrapolated from [`ATOM_LADDER`].
    pub fn atom(&self) -> Option<(f64, f64)> {
        let mut best: Option<(f64, f64)> = None;
        for &(a, _) in self.base.atoms() {
            if !(self.rho.g_of_x(a) < 1.0 - 1e-12) {
                continue;
            }
            let t = self.rho.h_raw(Complex64::new(a, 0.0)).re;
            let Some(mass) = self.extrapolated_mass(t) else {
                continue;
            };
            if mass > ATOM_REPORT_THRESHOLD && best.map_or(true, |b| mass > b.1) {
                best = Some((t, mass));
            }
        }
        best
    }

    /// Richardson extrapolation of `Re(iy G(t + iy))` in `y^2`: near an atom
    /// the density vanishes, so only even powers of `y` remain. The expansion
    /// converges for `y` below the distance to the support, so the ladder is
    /// shrunk when the support comes within 0.1 of `t`.
    fn extrapolated_mass(&self, t: f64) -> Option<f64> {
        let gap = self
            .support_intervals()
            .ok()?
            .iter()
            .flat_map(|&(lo, hi)| [lo, hi])
            .map(|e| (e - t).abs())
            .fold(f64::INFINITY, f64::min);
        let shrink = (10.0 * gap).min(1.0);
        let mut values = [0.0; 3];
        for (v, &y) in values.iter_mut().zip(&ATOM_LADDER) {
            let y = y * shrink;
            let f = self.f_convpow(Complex64::new(t, y), false).ok()?;
            *v = (Complex64::new(0.0, y) / f).re;
        }
        let r = (ATOM_LADDER[0] / ATOM_LADDER[1]).powi(2);
        let first = (r * values[1] - values[0]) / (r - 1.0);
        let second = (r * values[2] - values[1]) / (r - 1.0);
        let r2 = r * r;
        Some((r2 * second - first) / (r2 - 1.0))
    }

    /// Support intervals of the absolutely continuous part.
    pub fn support_intervals(&self) -> Result<Vec<(f64, f64)>> {
        self.rho.support_intervals()
    }

    /// Moments `m_1..m_order` of `mu^k`: the density is integrated over each
    /// support interval after `t = c - h cos(theta)`, which smooths the
    /// square-root edges, by adaptive Gauss-Legendre panels in `theta`; the
    /// atom is added separately.
    pub fn moments_by_quadrature(&self, order: usize) -> Result<MomentVector> {
        if order == 0 || order > MAX_MOMENT_ORDER {
            return Err(FreeError::OrderTooLarge(order));
        }
        let rule = gauss_legendre(QUADRATURE_PANEL_ORDER);
        let mut acc = vec![0.0; order];
        for (lo, hi) in self.support_intervals()? {
            let interval = Interval {
                mid: 0.5 * (lo + hi),
                half: 0.5 * (hi - lo),
            };
            let whole = self.panel(&rule, &interval, 0.0, PI, order)?;
            let part = self.adaptive(&rule, &interval, 0.0, PI, whole, order, 0)?;
            for (a, p) in acc.iter_mut().zip(part) {
                *a += p;
            }
        }
        if let Some((t, mass)) = self.atom() {
            let mut power = 1.0;
            for m in acc.iter_mut() {
                power *= t;
                *m += mass * power;
            }
        }
        MomentVector::new(acc)
    }

    fn panel(
        &self,
        rule: &(Vec<f64>, Vec<f64>),
        interval: &Interval,
        a: f64,
        b: f64,
        order: usize,
    ) -> Result<Vec<f64>> {
        let mut out = vec![0.0; order];
        let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
        for (x, w) in rule.0.iter().zip(&rule.1) {
            let theta = mid + half * x;
            let t = interval.mid - interval.half * theta.cos();
            let weight = half * w * interval.half * theta.sin() * self.density_at(t)?;
            let mut power = 1.0;
            for m in out.iter_mut() {
                power *= t;
                *m += weight * power;
            }
        }
        Ok(out)
    }

    #[allow(clippy::too_many_arguments)]
    fn adaptive(
        &self,
        rule: &(Vec<f64>, Vec<f64>),
        interval: &Interval,
        a: f64,
        b: f64,
        whole: Vec<f64>,
        order: usize,
        depth: u32,
    ) -> Result<Vec<f64>> {
        let m = 0.5 * (a + b);
        let left = self.panel(rule, interval, a, m, order)?;
        let right = self.panel(rule, interval, m, b, order)?;
        let split: Vec<f64> = left.iter().zip(&right).map(|(l, r)| l + r).collect();
        let converged = split
            .iter()
            .zip(&whole)
            .all(|(s, w)| (s - w).abs() <= QUADRATURE_TOLERANCE * (1.0 + s.abs()));
        if converged || depth >= QUADRATURE_MAX_DEPTH {
            return Ok(split);
        }
        let l = self.adaptive(rule, interval, a, m, left, order, depth + 1)?;
        let r = self.adaptive(rule, interval, m, b, right, order, depth + 1)?;
        Ok(l.iter().zip(&r).map(|(x, y)| x + y).collect())
    }

    /// Cauchy transform of `mu^k` at an interior point.
    pub fn cauchy_transform(&self, w: Complex64) -> Result<Complex64> {
        Ok(1.0 / self.f_convpow(w, false)?)
    }
}
