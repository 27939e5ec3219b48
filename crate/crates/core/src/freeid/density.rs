use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::FreeIdLaw;
use crate::error::{FreeError, Result};

/// Half-width of the default open interval excluded around the zero of `F`.
pub const DEFAULT_EXCLUSION_RADIUS: f64 = 0.05;

/// Density samples on a grid. Points inside the open `excluded` interval
/// carry no value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityTable {
    grid: Vec<f64>,
    values: Vec<Option<f64>>,
    excluded: Option<(f64, f64)>,
    atom: Option<(f64, f64)>,
}

pub(crate) fn validate_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(FreeError::InvalidGrid("empty grid".into()));
    }
    if grid.iter().any(|t| !t.is_finite()) || grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(FreeError::InvalidGrid("grid must be finite and strictly increasing".into()));
    }
    Ok(())
}

pub(crate) fn is_excluded(excluded: Option<(f64, f64)>, t: f64) -> bool {
    matches!(excluded, Some((lo, hi)) if lo < t && t < hi)
}

/// `n` uniform points on `[lo, hi]` including both ends.
pub fn uniform_grid(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    if !(lo < hi) || n < 2 {
        return Err(FreeError::InvalidGrid(format!("{lo}:{hi}:{n}")));
    }
    let step = (hi - lo) / (n - 1) as f64;
    Ok((0..n)
        .map(|i| if i + 1 == n { hi } else { lo + step * i as f64 })
        .collect())
}

impl DensityTable {
    /// Evaluates `density` on every grid point outside `excluded`, in parallel.
    pub fn tabulate<F>(
        grid: Vec<f64>,
        excluded: Option<(f64, f64)>,
        atom: Option<(f64, f64)>,
        density: F,
    ) -> Result<Self>
    where
        F: Fn(f64) -> Result<f64> + Sync,
    {
        validate_grid(&grid)?;
        let values = grid
            .par_iter()
            .map(|&t| {
                if is_excluded(excluded, t) {
                    Ok(None)
                } else {
                    density(t).map(Some)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            grid,
            values,
            excluded,
            atom,
        })
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[Option<f64>] {
        &self.values
    }

    pub fn excluded(&self) -> Option<(f64, f64)> {
        self.excluded
    }

    /// `(location, mass)` of the atom, when there is one.
    pub fn atom(&self) -> Option<(f64, f64)> {
        self.atom
    }

    /// Grid points that carry a value.
    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.grid
            .iter()
            .zip(&self.values)
            .filter_map(|(&t, v)| v.map(|v| (t, v)))
    }

    /// Composite trapezoid integral of `f(t, s(t))` over segments whose both
    /// ends carry a value.
    pub fn trapezoid<F: Fn(f64, f64) -> f64>(&self, f: F) -> f64 {
        let mut acc = 0.0;
        for i in 1..self.grid.len() {
            if let (Some(a), Some(b)) = (self.values[i - 1], self.values[i]) {
                let (ta, tb) = (self.grid[i - 1], self.grid[i]);
                acc += 0.5 * (tb - ta) * (f(ta, a) + f(tb, b));
            }
        }
        acc
    }

    /// Trapezoid mass of the tabulated density.
    pub fn mass(&self) -> f64 {
        self.trapezoid(|_, s| s)
    }
}

impl FreeIdLaw {
    /// Density of the absolutely continuous part at `t`,
    /// `(1/pi) Im F(t) / |F(t)|^2`.
    pub fn density_at(&self, t: f64) -> Result<f64> {
        self.require_nondegenerate()?;
        if let Some(t_nu) = self.atom_report()?.t_nu {
            if (t - t_nu).abs() < 1e-13 {
                return Err(FreeError::EvaluationAtSingularity(t));
            }
        }
        let (x, u) = self.f_boundary(t)?;
        if u == 0.0 {
            return Ok(0.0);
        }
        Ok(u / (PI * (x * x + u * u)))
    }

    /// Density on `grid`, skipping points in the open interval `excluded`,
    /// annotated with the atom when the law has one.
    pub fn density_table(&self, grid: &[f64], excluded: Option<(f64, f64)>) -> Result<DensityTable> {
        let report = self.atom_report()?;
        let atom = match report.t_nu {
            Some(t) if report.atom_mass > 0.0 => Some((t, report.atom_mass)),
            _ => None,
        };
        DensityTable::tabulate(grid.to_vec(), excluded, atom, |t| self.density_at(t))
    }

    /// Open interval of radius [`DEFAULT_EXCLUSION_RADIUS`] around the zero
    /// of `F`, if it has one.
    pub fn default_exclusion(&self) -> Result<Option<(f64, f64)>> {
        Ok(self
            .atom_report()?
            .t_nu
            .map(|t| (t - DEFAULT_EXCLUSION_RADIUS, t + DEFAULT_EXCLUSION_RADIUS)))
    }
}
