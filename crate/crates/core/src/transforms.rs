//! Exact transforms of discrete measures: Cauchy transform `G`, `F = 1/G`,
//! self-energy `E = z - F`, the Nevanlinna pair of `E`, and Boolean powers.
//!
//! For a measure with `m` atoms, `G` has exactly `m - 1` real zeros, one
//! strictly between each pair of consecutive atoms. `E` is therefore the real
//! rational function `mean + sum_j c_j / (z - t_j)` with `c_j = 1/|G'(t_j)|`,
//! and every quantity here is computed from that closed form.

use num_complex::Complex64;

use crate::error::{FreeError, Result};
use crate::measures::{DiscreteMeasure, GeneratingPair, WeightedNodeSet};
use crate::roots::bisect_increasing;

/// Points closer than this to an atom or a sigma node are treated as poles.
pub const POLE_PROXIMITY: f64 = 1e-13;

/// Largest admissible imaginary residual when recovering `gamma`.
pub const GAMMA_RESIDUAL_TOLERANCE: f64 = 1e-10;

fn check_closed_upper(z: Complex64) -> Result<()> {
    if !(z.im >= 0.0) || !z.re.is_finite() || !z.im.is_finite() {
        return Err(FreeError::OutsideDomain(format!("{z}")));
    }
    Ok(())
}

/// Cauchy transform `G(z) = sum_i m_i / (z - a_i)` for `Im z >= 0`.
pub fn cauchy_g(mu: &DiscreteMeasure, z: Complex64) -> Result<Complex64> {
    check_closed_upper(z)?;
    let mut g = Complex64::new(0.0, 0.0);
    for &(a, m) in mu.atoms() {
        let d = z - a;
        if d.norm() < POLE_PROXIMITY {
            return Err(FreeError::PoleAtAtom(a));
        }
        g += m / d;
    }
    Ok(g)
}

/// Real Cauchy transform off the atoms.
pub(crate) fn cauchy_g_real(mu: &DiscreteMeasure, x: f64) -> f64 {
    mu.atoms().iter().map(|&(a, m)| m / (x - a)).sum()
}

/// `F = 1/G`.
pub fn f_transform(mu: &DiscreteMeasure, z: Complex64) -> Result<Complex64> {
    let g = cauchy_g(mu, z)?;
    let f = 1.0 / g;
    if g == Complex64::new(0.0, 0.0) || !f.re.is_finite() || !f.im.is_finite() {
        return Err(FreeError::ZeroCauchyTransform(z.re));
    }
    Ok(f)
}

/// Self-energy `E(z) = z - F(z)`.
pub fn self_energy(mu: &DiscreteMeasure, z: Complex64) -> Result<Complex64> {
    Ok(z - f_transform(mu, z)?)
}

/// Real zeros of `G`, one in each gap between consecutive atoms.
pub fn cauchy_zeros(mu: &DiscreteMeasure) -> Result<Vec<f64>> {
    let atoms = mu.atoms();
    atoms
        .windows(2)
        .map(|w| {
            let (lo, hi) = (w[0].0, w[1].0);
            // G runs from +inf to -inf across the gap.
            let t = bisect_increasing(|x| -cauchy_g_real(mu, x), lo, hi, 0.0, 400);
            if t > lo && t < hi {
                Ok(t)
            } else {
                Err(FreeError::RootFindingFailure(format!(
                    "zero of G not bracketed in ({lo}, {hi})"
                )))
            }
        })
        .collect()
}

/// Poles `t_j` of `E` with their (positive) residues `c_j = 1/|G'(t_j)|`.
pub fn self_energy_poles(mu: &DiscreteMeasure) -> Result<Vec<(f64, f64)>> {
    Ok(cauchy_zeros(mu)?
        .into_iter()
        .map(|t| {
            let dg: f64 = mu.atoms().iter().map(|&(a, m)| m / (t - a).powi(2)).sum();
            (t, 1.0 / dg)
        })
        .collect())
}

/// `gamma + int (1 + t z)/(z - t) dsigma(t)` over a node set.
pub fn nevanlinna_eval(pair: &GeneratingPair, z: Complex64) -> Result<Complex64> {
    let mut acc = Complex64::new(pair.gamma, 0.0);
    for &(t, w) in pair.sigma.nodes() {
        if w == 0.0 {
            continue;
        }
        let d = z - t;
        if d.norm() < POLE_PROXIMITY {
            return Err(FreeError::PoleAtSigmaNode(t));
        }
        acc += w * (1.0 + t * z) / d;
    }
    Ok(acc)
}

/// Derivative of [`nevanlinna_eval`] in `z`: `-int (1 + t^2)/(z - t)^2 dsigma`.
pub fn nevanlinna_derivative(pair: &GeneratingPair, z: Complex64) -> Result<Complex64> {
    let mut acc = Complex64::new(0.0, 0.0);
    for &(t, w) in pair.sigma.nodes() {
        if w == 0.0 {
            continue;
        }
        let d = z - t;
        if d.norm() < POLE_PROXIMITY {
            return Err(FreeError::PoleAtSigmaNode(t));
        }
        acc -= w * (1.0 + t * t) / (d * d);
    }
    Ok(acc)
}

/// The pair `(gamma, sigma)` with `E_mu(z) = gamma + int (1 + t z)/(z - t) dsigma`.
///
/// `sigma` sits on the zeros of `G` with weights `c_j / (1 + t_j^2)`.
pub fn nevanlinna_pair(mu: &DiscreteMeasure) -> Result<GeneratingPair> {
    if mu.is_point_mass() {
        return Ok(GeneratingPair::point(mu.atoms()[0].0));
    }
    let poles = self_energy_poles(mu)?;
    let nodes: Vec<_> = poles.iter().map(|&(t, c)| (t, c / (1.0 + t * t))).collect();
    let sigma = WeightedNodeSet::new(&nodes)?;
    let i = Complex64::new(0.0, 1.0);
    let partial = nevanlinna_eval(&GeneratingPair::new(0.0, sigma.clone()), i)?;
    let residual = self_energy(mu, i)? - partial;
    if residual.im.abs() > GAMMA_RESIDUAL_TOLERANCE {
        return Err(FreeError::RootFindingFailure(format!(
            "inconsistent Nevanlinna extraction, residual {:e}",
            residual.im
        )));
    }
    Ok(GeneratingPair::new(residual.re, sigma))
}

/// The `k`-fold Boolean convolution power, the measure with
/// `F(z) = z - k E_mu(z)`.
pub fn boolean_power(mu: &DiscreteMeasure, k: u32) -> Result<DiscreteMeasure> {
    if k == 0 {
        return Err(FreeError::InvalidMeasure("Boolean power k must be >= 1".into()));
    }
    if k == 1 {
        return Ok(mu.clone());
    }
    let kf = k as f64;
    let shift = kf * mu.mean();
    let poles = self_energy_poles(mu)?;
    if poles.is_empty() {
        return Ok(DiscreteMeasure::point_mass(shift));
    }
    // F_k(x) = x - k mean - sum k c_j/(x - t_j) is increasing between poles.
    let fk = |x: f64| x - shift - poles.iter().map(|&(t, c)| kf * c / (x - t)).sum::<f64>();
    let dfk = |x: f64| 1.0 + poles.iter().map(|&(t, c)| kf * c / (x - t).powi(2)).sum::<f64>();

    let first = poles[0].0;
    let last = poles[poles.len() - 1].0;
    let mut lo = first - 1.0;
    let mut steps = 0;
    while fk(lo) >= 0.0 {
        lo = first - 2.0 * (first - lo);
        steps += 1;
        if steps > 200 {
            return Err(FreeError::RootFindingFailure("left Boolean atom".into()));
        }
    }
    let mut hi = last + 1.0;
    steps = 0;
    while fk(hi) <= 0.0 {
        hi = last + 2.0 * (hi - last);
        steps += 1;
        if steps > 200 {
            return Err(FreeError::RootFindingFailure("right Boolean atom".into()));
        }
    }

    let mut edges = Vec::with_capacity(poles.len() + 2);
    edges.push(lo);
    edges.extend(poles.iter().map(|p| p.0));
    edges.push(hi);
    let mut atoms = Vec::with_capacity(poles.len() + 1);
    for w in edges.windows(2) {
        let root = bisect_increasing(fk, w[0], w[1], 0.0, 400);
        atoms.push((root, 1.0 / dfk(root)));
    }
    let total: f64 = atoms.iter().map(|a| a.1).sum();
    if (total - 1.0).abs() > 1e-10 {
        return Err(FreeError::RootFindingFailure(format!(
            "Boolean power masses sum to {total}"
        )));
    }
    DiscreteMeasure::new(&atoms)
}

/// `F` of the Boolean law with Nevanlinna data `pair`: `z - E(z)`.
pub fn boolean_id_f(pair: &GeneratingPair, z: Complex64) -> Result<Complex64> {
    Ok(z - nevanlinna_eval(pair, z)?)
}
