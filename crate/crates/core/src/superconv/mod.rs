//! Density convergence experiments for triangular arrays `(mu_n, k_n)`:
//! distances between the densities of `mu_n^{boxplus k_n}` and the limit law,
//! together with transform-level diagnostics.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::convpow::ConvPow;
use crate::error::{FreeError, Result};
use crate::freeid::{compound_poisson_pair, is_excluded, validate_grid, AtomReport, DensityTable, FreeIdLaw, PhiSpec};
use crate::measures::DiscreteMeasure;
use crate::transforms::{boolean_power, self_energy};

/// Height of the point `i y0` where the transform diagnostics are evaluated.
pub const DIAGNOSTIC_HEIGHT: f64 = 4.0;
/// Tolerance on the mean and variance of a central-limit base.
pub const STANDARDIZATION_TOLERANCE: f64 = 1e-12;
/// Label of the `phi_diag` field: it compares `k E_{mu_n}` with `phi`, a
/// Boolean proxy for `k phi_{mu_n}`.
pub const PHI_DIAG_LABEL: &str = "booleanized-phi diagnostic";

/// A triangular array of identically distributed rows.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Scheme {
    /// Row `n` is `base` dilated by `1/sqrt(n)`, repeated `n` times.
    FreeClt { base: DiscreteMeasure },
    /// Row `n` is `(1 - lambda/n) delta_0 + (lambda/n) jump`, repeated `n` times.
    FreePoisson { lambda: f64, jump: DiscreteMeasure },
    /// Explicit rows; row `n` is the `n`-th entry (1-based).
    Custom { rows: Vec<(DiscreteMeasure, u32)> },
}

impl Scheme {
    pub fn free_clt(base: DiscreteMeasure) -> Result<Self> {
        let s = Self::FreeClt { base };
        s.validate()?;
        Ok(s)
    }

    pub fn free_poisson(lambda: f64, jump: DiscreteMeasure) -> Result<Self> {
        let s = Self::FreePoisson { lambda, jump };
        s.validate()?;
        Ok(s)
    }

    pub fn custom(rows: Vec<(DiscreteMeasure, u32)>) -> Result<Self> {
        let s = Self::Custom { rows };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Scheme::FreeClt { base } => {
                if base.mean().abs() > STANDARDIZATION_TOLERANCE
                    || (base.variance() - 1.0).abs() > STANDARDIZATION_TOLERANCE
                {
                    return Err(FreeError::InvalidMeasure(format!(
                        "central-limit base needs mean 0 and variance 1, got {} and {}",
                        base.mean(),
                        base.variance()
                    )));
                }
            }
            Scheme::FreePoisson { lambda, jump } => {
                compound_poisson_pair(*lambda, jump)?;
            }
            Scheme::Custom { rows } => {
                if rows.windows(2).any(|w| w[0].1 >= w[1].1) {
                    return Err(FreeError::InvalidMeasure(
                        "custom rows need strictly increasing k".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Row `n` of the array and its number of summands.
    pub fn row(&self, n: usize) -> Result<(DiscreteMeasure, u32)> {
        let unavailable = || FreeError::RowUnavailable(n);
        if n == 0 {
            return Err(unavailable());
        }
        let k = u32::try_from(n).map_err(|_| unavailable())?;
        match self {
            Scheme::FreeClt { base } => Ok((base.dilate(1.0 / (n as f64).sqrt()), k)),
            Scheme::FreePoisson { lambda, jump } => {
                let nf = n as f64;
                if nf <= *lambda {
                    return Err(unavailable());
                }
                let rate = lambda / nf;
                let mut raw = vec![(0.0, 1.0 - rate)];
                raw.extend(jump.atoms().iter().map(|&(t, m)| (t, rate * m)));
                Ok((DiscreteMeasure::new(&raw)?, k))
            }
            Scheme::Custom { rows } => rows.get(n - 1).cloned().ok_or_else(unavailable),
        }
    }

    /// The limit law of the built-in schemes.
    pub fn target(&self) -> Result<FreeIdLaw> {
        match self {
            Scheme::FreeClt { .. } => Ok(FreeIdLaw::semicircle()),
            Scheme::FreePoisson { lambda, jump } => {
                Ok(FreeIdLaw::from_pair(compound_poisson_pair(*lambda, jump)?))
            }
            Scheme::Custom { .. } => Err(FreeError::TargetRequired),
        }
    }
}

/// `(int_{grid \ U} |s_a - s_b|^p dt)^{1/p}` by the composite trapezoid rule
/// over segments whose ends both lie outside `U`.
pub fn lp_distance(a: &DensityTable, b: &DensityTable, p: f64, excluded: Option<(f64, f64)>) -> Result<f64> {
    if !(p > 1.0) || !p.is_finite() {
        return Err(FreeError::InvalidExponent(p));
    }
    if a.grid() != b.grid() {
        return Err(FreeError::GridMismatch);
    }
    let grid = a.grid();
    let diff = |i: usize| -> Option<f64> {
        if is_excluded(excluded, grid[i]) {
            return None;
        }
        Some((a.values()[i]? - b.values()[i]?).abs().powf(p))
    };
    let mut acc = 0.0;
    for i in 1..grid.len() {
        if let (Some(l), Some(r)) = (diff(i - 1), diff(i)) {
            acc += 0.5 * (grid[i] - grid[i - 1]) * (l + r);
        }
    }
    Ok(acc.powf(1.0 / p))
}

/// `2 int_M^inf (7/(pi t))^p dt`, the contribution of `|t| > M` to the
/// `p`-th power of the `L^p` distance, valid for `M >= 9 |F(i)|`.
pub fn tail_bound(p: f64, cutoff: f64, f_at_i_abs: f64) -> Result<f64> {
    if !(p > 1.0) || !p.is_finite() {
        return Err(FreeError::InvalidExponent(p));
    }
    let required = 9.0 * f_at_i_abs;
    if !(cutoff > 0.0) || cutoff < required {
        return Err(FreeError::CutoffTooSmall { cutoff, required });
    }
    if cutoff.is_infinite() {
        return Ok(0.0);
    }
    Ok(2.0 * (7.0 / PI).powf(p) * cutoff.powf(1.0 - p) / (p - 1.0))
}

/// Grid summary in the report.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

/// Distances and diagnostics of one row.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RowReport {
    pub n: usize,
    pub k: u32,
    pub sup_error: f64,
    /// `L^p` distances keyed by `p`.
    pub lp: BTreeMap<String, f64>,
    /// `|omega_n(i) - F_nu(i)|`.
    pub rho_diag: f64,
    /// `|k E_{mu_n}(i y0) - phi_nu(i y0)|`.
    pub phi_diag: f64,
    /// `|E_{mu_n^{uplus k}}(i y0) - phi_nu(i y0)|`.
    pub boolean_diag: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub scheme: Scheme,
    pub target: PhiSpec,
    pub target_atoms: AtomReport,
    pub grid: GridSpec,
    pub excluded: Option<[f64; 2]>,
    pub phi_diag_label: &'static str,
    pub rows: Vec<RowReport>,
}

/// Runs the array for each `n` in `n_list` against `target` (or the built-in
/// limit of `scheme`), comparing densities on `grid` outside `excluded`.
pub fn run(
    scheme: &Scheme,
    target: Option<&FreeIdLaw>,
    n_list: &[usize],
    grid: &[f64],
    excluded: Option<(f64, f64)>,
    p_list: &[f64],
) -> Result<ConvergenceReport> {
    scheme.validate()?;
    validate_grid(grid)?;
    if let Some(&p) = p_list.iter().find(|&&p| !(p > 1.0)) {
        return Err(FreeError::InvalidExponent(p));
    }
    let owned;
    let target = match target {
        Some(t) => t,
        None => {
            owned = scheme.target()?;
            &owned
        }
    };
    let atoms = target.atom_report()?;
    if let Some(t_nu) = atoms.t_nu {
        if !is_excluded(excluded, t_nu) {
            return Err(FreeError::MissingExclusion(t_nu));
        }
    }
    let target_table = target.density_table(grid, excluded)?;
    let i = Complex64::new(0.0, 1.0);
    let probe = Complex64::new(0.0, DIAGNOSTIC_HEIGHT);
    let f_nu_i = target.invert_h(i)?;
    let phi_nu = target.phi_eval(probe)?;

    let rows = n_list
        .par_iter()
        .map(|&n| -> Result<RowReport> {
            let (mu, k) = scheme.row(n)?;
            let cp = ConvPow::new(mu.clone(), k)?;
            let table = cp.density_table(grid, excluded)?;
            let sup_error = table
                .values()
                .iter()
                .zip(target_table.values())
                .filter_map(|(a, b)| Some((a.as_ref()? - b.as_ref()?).abs()))
                .fold(0.0, f64::max);
            let mut lp = BTreeMap::new();
            for &p in p_list {
                lp.insert(format!("{p}"), lp_distance(&table, &target_table, p, excluded)?);
            }
            let kf = k as f64;
            let rho_diag = (cp.omega(i, false)? - f_nu_i).norm();
            let phi_diag = (kf * self_energy(&mu, probe)? - phi_nu).norm();
            let boolean = boolean_power(&mu, k)?;
            let boolean_diag = (self_energy(&boolean, probe)? - phi_nu).norm();
            Ok(RowReport {
                n,
                k,
                sup_error,
                lp,
                rho_diag,
                phi_diag,
                boolean_diag,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(ConvergenceReport {
        scheme: scheme.clone(),
        target: target.spec().clone(),
        target_atoms: atoms,
        grid: GridSpec {
            lo: grid[0],
            hi: grid[grid.len() - 1],
            n: grid.len(),
        },
        excluded: excluded.map(|(lo, hi)| [lo, hi]),
        phi_diag_label: PHI_DIAG_LABEL,
        rows,
    })
}

#[cfg(test)]
mod tests;
