//! The boundary curve `x + i u(x)` of `Omega = F(C+)` and the boundary values
//! of `F` on the real line.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{g_of_pair, FreeIdLaw, PhiSpec};
use crate::error::{FreeError, Result};
use crate::roots::{bisect_increasing, expand_bracket};

const U_MAX_STEPS: usize = 200;
/// Bracket doublings allowed when solving `H(x + i u(x)) = t` for `x`.
const F_BOUNDARY_MAX_DOUBLINGS: u32 = 60;
/// Smallest `y` probed when bracketing the stable-law curve equation.
const STABLE_Y_FLOOR: f64 = 1.0 / (1u64 << 60) as f64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveSample {
    pub x: f64,
    pub u: f64,
    /// The real point `H(x + i u)`.
    pub t: f64,
}

/// Samples of the graph of `u` with their images under `H`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryCurve {
    pub samples: Vec<CurveSample>,
}

impl BoundaryCurve {
    /// Index `i` with `t_i <= t <= t_{i+1}`, when `t` is inside the sampled range.
    fn bracket(&self, t: f64) -> Option<(f64, f64)> {
        let s = &self.samples;
        if s.len() < 2 || t < s[0].t || t > s[s.len() - 1].t {
            return None;
        }
        let idx = s.partition_point(|p| p.t <= t);
        let hi = idx.min(s.len() - 1).max(1);
        Some((s[hi - 1].x, s[hi].x))
    }
}

impl FreeIdLaw {
    /// The unique `y > 0` solving `int (1 + t^2)/((t - x)^2 + y^2) dsigma = 1`,
    /// or 0 when there is none.
    pub fn u_of_x(&self, x: f64) -> Result<f64> {
        self.require_nondegenerate()?;
        Ok(self.u_raw(x))
    }

    pub(crate) fn u_raw(&self, x: f64) -> f64 {
        match &self.phi {
            PhiSpec::Pair(p) => {
                if g_of_pair(p, x) <= 1.0 {
                    return 0.0;
                }
                let mut bound = 0.0;
                for &(t, w) in p.sigma.nodes() {
                    bound += w * (1.0 + t * t);
                }
                let y_max = bound.sqrt();
                let excess = |y: f64| {
                    let y2 = y * y;
                    let mut s = 0.0;
                    for &(t, w) in p.sigma.nodes() {
                        let d = t - x;
                        s += w * (1.0 + t * t) / (d * d + y2);
                    }
                    1.0 - s
                };
                bisect_increasing(excess, 0.0, y_max, 0.0, U_MAX_STEPS)
            }
            PhiSpec::Stable(s) => {
                // Im H(x + iy)/y = 1 + Im phi/y increases with y.
                let ratio = |y: f64| 1.0 + s.phi(Complex64::new(x, y)).im / y;
                let mut lo = 1.0;
                let mut hi = 1.0;
                if ratio(1.0) < 0.0 {
                    while ratio(hi) < 0.0 {
                        lo = hi;
                        hi *= 2.0;
                        if hi > 1e300 {
                            return hi;
                        }
                    }
                } else {
                    while ratio(lo) >= 0.0 {
                        hi = lo;
                        lo *= 0.5;
                        if lo < STABLE_Y_FLOOR {
                            return 0.0;
                        }
                    }
                }
                bisect_increasing(ratio, lo, hi, 0.0, U_MAX_STEPS)
            }
        }
    }

    /// `Re H(x + i u(x))`, strictly increasing in `x`.
    pub(crate) fn t_of_x(&self, x: f64) -> f64 {
        let u = self.u_raw(x);
        self.h_raw(Complex64::new(x, u)).re
    }

    /// Samples the curve on `n_samples` uniform points of `[x_lo, x_hi]`.
    pub fn boundary_curve(&self, x_lo: f64, x_hi: f64, n_samples: usize) -> Result<BoundaryCurve> {
        self.require_nondegenerate()?;
        if !(x_lo < x_hi) || n_samples < 2 {
            return Err(FreeError::InvalidGrid(format!(
                "[{x_lo}, {x_hi}] with {n_samples} samples"
            )));
        }
        let step = (x_hi - x_lo) / (n_samples - 1) as f64;
        let mut samples: Vec<CurveSample> = Vec::with_capacity(n_samples);
        for i in 0..n_samples {
            let x = if i + 1 == n_samples { x_hi } else { x_lo + step * i as f64 };
            let u = self.u_raw(x);
            let h = self.h_raw(Complex64::new(x, u));
            if !(h.im.abs() < 1e-9) || !h.re.is_finite() {
                return Err(FreeError::CurveMonotonicityViolation(x));
            }
            if let Some(prev) = samples.last() {
                if !(h.re > prev.t) {
                    return Err(FreeError::CurveMonotonicityViolation(x));
                }
            }
            samples.push(CurveSample { x, u, t: h.re });
        }
        Ok(BoundaryCurve { samples })
    }

    /// Builds and stores a curve used to seed [`FreeIdLaw::f_boundary`]
    /// brackets. Later calls keep the first curve.
    pub fn cache_curve(&self, x_lo: f64, x_hi: f64, n_samples: usize) -> Result<&BoundaryCurve> {
        if let Some(c) = self.curve.get() {
            return Ok(c);
        }
        let curve = self.boundary_curve(x_lo, x_hi, n_samples)?;
        Ok(self.curve.get_or_init(|| curve))
    }

    pub fn cached_curve(&self) -> Option<&BoundaryCurve> {
        self.curve.get()
    }

    /// Boundary value `F(t) = x + i u(x)`, found by bisection on the
    /// increasing map `x -> H(x + i u(x))`.
    pub fn f_boundary(&self, t: f64) -> Result<(f64, f64)> {
        self.require_nondegenerate()?;
        if !t.is_finite() {
            return Err(FreeError::BracketExpansionFailure(t));
        }
        let target = |x: f64| self.t_of_x(x) - t;
        let (lo, hi) = match self.curve.get().and_then(|c| c.bracket(t)) {
            Some(b) => b,
            None => expand_bracket(target, t, F_BOUNDARY_MAX_DOUBLINGS)
                .ok_or(FreeError::BracketExpansionFailure(t))?,
        };
        let x = bisect_increasing(target, lo, hi, 0.0, 400);
        let u = self.u_raw(x);
        let miss = (self.h_raw(Complex64::new(x, u)) - t).norm();
        if !(miss < 1e-10 * (1.0 + t.abs())) {
            return Err(FreeError::BracketExpansionFailure(t));
        }
        Ok((x, u))
    }

    /// `F(t)` on the real line as a complex number.
    pub fn f_at_real(&self, t: f64) -> Result<Complex64> {
        let (x, u) = self.f_boundary(t)?;
        Ok(Complex64::new(x, u))
    }

    /// Connected components of `{x : g(x) > 1}`, the set where `u > 0`.
    /// Only defined for laws given by a generating pair.
    pub fn curve_components(&self) -> Result<Vec<(f64, f64)>> {
        self.require_nondegenerate()?;
        let p = match &self.phi {
            PhiSpec::Pair(p) => p,
            PhiSpec::Stable(_) => {
                return Err(FreeError::InvalidMeasure(
                    "curve components need a finite node set".into(),
                ))
            }
        };
        let nodes: Vec<(f64, f64)> = p
            .sigma
            .nodes()
            .iter()
            .filter(|n| n.1 > 0.0)
            .map(|&(t, w)| (t, w * (1.0 + t * t)))
            .collect();
        let g = |x: f64| nodes.iter().map(|&(t, c)| c / ((t - x) * (t - x))).sum::<f64>();
        let dg = |x: f64| nodes.iter().map(|&(t, c)| 2.0 * c / (t - x).powi(3)).sum::<f64>();

        let first = nodes[0].0;
        let last = nodes[nodes.len() - 1].0;
        let mut width = 1.0;
        while g(first - width) >= 1.0 {
            width *= 2.0;
        }
        let left = bisect_increasing(|x| g(x) - 1.0, first - width, first, 0.0, 400);
        width = 1.0;
        while g(last + width) >= 1.0 {
            width *= 2.0;
        }
        let right = bisect_increasing(|x| 1.0 - g(x), last, last + width, 0.0, 400);

        let mut components = Vec::new();
        let mut open = left;
        for pair in nodes.windows(2) {
            let (a, b) = (pair[0].0, pair[1].0);
            // g is convex on the gap; locate its minimum through g'.
            let xm = bisect_increasing(dg, a, b, 0.0, 400);
            if g(xm) > 1.0 {
                continue;
            }
            let r1 = bisect_increasing(|x| 1.0 - g(x), a, xm, 0.0, 400);
            let r2 = bisect_increasing(|x| g(x) - 1.0, xm, b, 0.0, 400);
            components.push((open, r1));
            open = r2;
        }
        components.push((open, right));
        Ok(components)
    }

    /// Support intervals of the density, the images under `H` of
    /// [`FreeIdLaw::curve_components`].
    pub fn support_intervals(&self) -> Result<Vec<(f64, f64)>> {
        Ok(self
            .curve_components()?
            .into_iter()
            .map(|(a, b)| {
                (
                    self.h_raw(Complex64::new(a, 0.0)).re,
                    self.h_raw(Complex64::new(b, 0.0)).re,
                )
            })
            .collect())
    }
}
