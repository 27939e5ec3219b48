//! Finite measures, generating pairs and the moment/free-cumulant recursion.

use serde::{Deserialize, Serialize};

use crate::error::{FreeError, Result};
use crate::roots::gauss_legendre;

/// Masses must sum to one within this tolerance before renormalization.
pub const MASS_TOLERANCE: f64 = 1e-9;

/// Highest moment order accepted by [`moments`].
pub const MAX_MOMENT_ORDER: usize = 32;

/// A probability measure with finitely many atoms, stored sorted by position
/// with duplicates merged.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteMeasure {
    atoms: Vec<(f64, f64)>,
}

impl DiscreteMeasure {
    /// Builds the canonical form of a list of `(position, mass)` pairs.
    ///
    /// Masses are renormalized only when they already sum to one within
    /// [`MASS_TOLERANCE`].
    pub fn new(raw: &[(f64, f64)]) -> Result<Self> {
        if raw.is_empty() {
            return Err(FreeError::EmptyMeasure);
        }
        for &(position, mass) in raw {
            if !position.is_finite() {
                return Err(FreeError::InvalidMeasure(format!("position {position}")));
            }
            if !(mass > 0.0) || !mass.is_finite() {
                return Err(FreeError::NonpositiveMass { position, mass });
            }
        }
        let mut atoms = raw.to_vec();
        atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(atoms.len());
        for (p, m) in atoms {
            match merged.last_mut() {
                Some(last) if last.0 == p => last.1 += m,
                _ => merged.push((p, m)),
            }
        }
        let total: f64 = merged.iter().map(|a| a.1).sum();
        if (total - 1.0).abs() > MASS_TOLERANCE {
            return Err(FreeError::MassNotNormalized(total));
        }
        if (total - 1.0).abs() > 1e-12 {
            for a in &mut merged {
                a.1 /= total;
            }
        }
        Ok(Self { atoms: merged })
    }

    pub fn point_mass(position: f64) -> Self {
        Self {
            atoms: vec![(position, 1.0)],
        }
    }

    pub fn atoms(&self) -> &[(f64, f64)] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn is_point_mass(&self) -> bool {
        self.atoms.len() == 1
    }

    pub fn mean(&self) -> f64 {
        self.atoms.iter().map(|(p, m)| p * m).sum()
    }

    pub fn variance(&self) -> f64 {
        let mean = self.mean();
        self.atoms.iter().map(|(p, m)| m * (p - mean).powi(2)).sum()
    }

    /// Law of `c X` for `X` distributed as `self`; `c` must be nonzero.
    pub fn dilate(&self, c: f64) -> Self {
        let raw: Vec<_> = self.atoms.iter().map(|&(p, m)| (c * p, m)).collect();
        Self::new(&raw).expect("dilation preserves validity")
    }
}

/// A finite nonnegative measure on finitely many nodes.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct WeightedNodeSet {
    nodes: Vec<(f64, f64)>,
    total_mass: f64,
}

impl WeightedNodeSet {
    pub fn new(raw: &[(f64, f64)]) -> Result<Self> {
        for &(t, w) in raw {
            if !t.is_finite() || !w.is_finite() || w < 0.0 {
                return Err(FreeError::InvalidMeasure(format!("node {t} with weight {w}")));
            }
        }
        let mut nodes = raw.to_vec();
        nodes.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(nodes.len());
        for (t, w) in nodes {
            match merged.last_mut() {
                Some(last) if last.0 == t => last.1 += w,
                _ => merged.push((t, w)),
            }
        }
        let total_mass = merged.iter().map(|n| n.1).sum();
        Ok(Self {
            nodes: merged,
            total_mass,
        })
    }

    /// The zero measure.
    pub fn zero() -> Self {
        Self::default()
    }

    /// Discretizes `density` on consecutive panels `[b_i, b_{i+1}]` with an
    /// `order`-point Gauss-Legendre rule on each panel.
    pub fn from_density<F>(density: F, breakpoints: &[f64], order: usize) -> Result<Self>
    where
        F: Fn(f64) -> f64,
    {
        let (x, w) = gauss_legendre(order);
        let mut raw = Vec::with_capacity(order * breakpoints.len());
        for pair in breakpoints.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            let half = 0.5 * (b - a);
            let mid = 0.5 * (a + b);
            for (xi, wi) in x.iter().zip(&w) {
                let t = mid + half * xi;
                let weight = half * wi * density(t);
                if weight > 0.0 {
                    raw.push((t, weight));
                }
            }
        }
        Self::new(&raw)
    }

    pub fn nodes(&self) -> &[(f64, f64)] {
        &self.nodes
    }

    pub fn total_mass(&self) -> f64 {
        self.total_mass
    }

    pub fn is_zero(&self) -> bool {
        self.nodes.iter().all(|n| n.1 == 0.0)
    }

    pub fn scaled(&self, c: f64) -> Self {
        let raw: Vec<_> = self.nodes.iter().map(|&(t, w)| (t, c * w)).collect();
        Self::new(&raw).expect("nonnegative scaling preserves validity")
    }
}

/// Shift and Levy measure of the free Levy-Khintchine representation
/// `phi(z) = gamma + int (1 + t z)/(z - t) dsigma(t)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratingPair {
    pub gamma: f64,
    pub sigma: WeightedNodeSet,
}

impl GeneratingPair {
    pub fn new(gamma: f64, sigma: WeightedNodeSet) -> Self {
        Self { gamma, sigma }
    }

    /// The pair of the point mass at `a`.
    pub fn point(a: f64) -> Self {
        Self::new(a, WeightedNodeSet::zero())
    }

    /// `(c gamma, c sigma)`, the pair whose transform is `c` times this one.
    pub fn scaled(&self, c: f64) -> Self {
        Self::new(c * self.gamma, self.sigma.scaled(c))
    }
}

/// Moments or cumulants of orders `1..=N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentVector(Vec<f64>);

impl MomentVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(FreeError::InvalidMeasure("empty moment vector".into()));
        }
        Ok(Self(values))
    }

    /// Entry of order `j`, 1-based.
    pub fn get(&self, j: usize) -> f64 {
        self.0[j - 1]
    }

    pub fn order(&self) -> usize {
        self.0.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self(self.0.iter().map(|v| c * v).collect())
    }
}

/// Raw moments `m_1..m_N` of a discrete measure.
pub fn moments(mu: &DiscreteMeasure, order: usize) -> Result<MomentVector> {
    if order == 0 {
        return Err(FreeError::InvalidMeasure("moment order must be positive".into()));
    }
    if order > MAX_MOMENT_ORDER {
        return Err(FreeError::OrderTooLarge(order));
    }
    let mut values = vec![0.0; order];
    for &(p, m) in mu.atoms() {
        let mut power = 1.0;
        for v in values.iter_mut() {
            power *= p;
            *v += m * power;
        }
    }
    MomentVector::new(values)
}

/// `table[s][j]` = coefficient of `x^j` in `(sum_i m_i x^i)^s` with `m_0 = 1`,
/// for `s <= n` and `j <= n`.
fn power_table(m: &[f64], n: usize) -> Vec<Vec<f64>> {
    let mut series = vec![1.0; n + 1];
    series[1..=n].copy_from_slice(&m[..n]);
    let mut table = vec![vec![0.0; n + 1]; n + 1];
    table[0][0] = 1.0;
    for s in 1..=n {
        for j in 0..=n {
            let mut acc = 0.0;
            for i in 0..=j {
                acc += table[s - 1][i] * series[j - i];
            }
            table[s][j] = acc;
        }
    }
    table
}

/// Free cumulants from moments via the non-crossing recursion
/// `m_n = sum_s kappa_s [x^{n-s}] M(x)^s`.
pub fn free_cumulants(m: &MomentVector) -> MomentVector {
    let n = m.order();
    // M(x)^s only involves m_1..m_{n-s}, so the table over all orders is
    // available up front.
    let table = power_table(m.values(), n);
    let mut kappa = vec![0.0; n];
    for order in 1..=n {
        let mut rest = 0.0;
        for s in 1..order {
            rest += kappa[s - 1] * table[s][order - s];
        }
        kappa[order - 1] = m.get(order) - rest;
    }
    MomentVector(kappa)
}

/// Inverse of [`free_cumulants`].
pub fn moments_from_cumulants(kappa: &MomentVector) -> MomentVector {
    let n = kappa.order();
    let mut m = vec![0.0; n];
    for order in 1..=n {
        // Recompute the powers with the moments known so far; entries of
        // order >= `order` are still zero and never reach index order - s.
        let table = power_table(&m, order);
        let mut acc = 0.0;
        for s in 1..=order {
            acc += kappa.get(s) * table[s][order - s];
        }
        m[order - 1] = acc;
    }
    MomentVector(m)
}

/// Parses the node-list syntax `t1:w1,t2:w2,...`.
pub fn parse_node_list(text: &str) -> Result<Vec<(f64, f64)>> {
    let text = text.trim();
    if text.is_empty() {
        return Err(FreeError::Parse("empty node list".into()));
    }
    text.split(',')
        .map(|item| {
            let (t, w) = item
                .split_once(':')
                .ok_or_else(|| FreeError::Parse(format!("expected t:w, got {item:?}")))?;
            let t: f64 = t
                .trim()
                .parse()
                .map_err(|_| FreeError::Parse(format!("bad position {t:?}")))?;
            let w: f64 = w
                .trim()
                .parse()
                .map_err(|_| FreeError::Parse(format!("bad weight {w:?}")))?;
            Ok((t, w))
        })
        .collect()
}
