//! Closed-form subordination for bases with two or three atoms.
//!
//! With `G_mu = N/D`, `D(z) = prod (z - a_i)`, the equation
//! `z + (k - 1)(z - F_mu(z)) = w` clears to the monic polynomial
//! `(k z - w) N(z) - (k - 1) D(z) = 0` of degree equal to the atom count.

use num_complex::Complex64;

use crate::error::{FreeError, Result};
use crate::measures::DiscreteMeasure;

type Poly = Vec<Complex64>;

fn mul_linear(p: &[Complex64], root: Complex64) -> Poly {
    // p(z) (z - root), ascending coefficients.
    let mut out = vec![Complex64::new(0.0, 0.0); p.len() + 1];
    for (i, &c) in p.iter().enumerate() {
        out[i + 1] += c;
        out[i] -= c * root;
    }
    out
}

fn eval(p: &[Complex64], z: Complex64) -> Complex64 {
    p.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

fn derivative(p: &[Complex64]) -> Poly {
    p.iter().enumerate().skip(1).map(|(i, &c)| c * i as f64).collect()
}

fn quadratic_roots(b: Complex64, c: Complex64) -> [Complex64; 2] {
    let s = (b * b - 4.0 * c).sqrt();
    let plus = b + s;
    let minus = b - s;
    let q = if plus.norm() >= minus.norm() { -0.5 * plus } else { -0.5 * minus };
    if q.norm() == 0.0 {
        return [q, q];
    }
    [q, c / q]
}

fn cubic_roots(b: Complex64, c: Complex64, d: Complex64) -> [Complex64; 3] {
    let shift = b / 3.0;
    let p = c - b * b / 3.0;
    let q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
    let disc = (q / 2.0).powi(2) + (p / 3.0).powi(3);
    let s = disc.sqrt();
    let (plus, minus) = (-q / 2.0 + s, -q / 2.0 - s);
    let big = if plus.norm() >= minus.norm() { plus } else { minus };
    let u = big.powf(1.0 / 3.0);
    let unity = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
    let mut roots = [Complex64::new(0.0, 0.0); 3];
    let mut rot = Complex64::new(1.0, 0.0);
    for r in roots.iter_mut() {
        let uk = u * rot;
        let vk = if uk.norm() == 0.0 { Complex64::new(0.0, 0.0) } else { -p / (3.0 * uk) };
        *r = uk + vk - shift;
        rot *= unity;
    }
    roots
}

fn polish(p: &[Complex64], z: Complex64) -> Complex64 {
    let dp = derivative(p);
    let mut z = z;
    for _ in 0..8 {
        let d = eval(&dp, z);
        if d.norm() == 0.0 {
            break;
        }
        let step = eval(p, z) / d;
        if !step.re.is_finite() || !step.im.is_finite() {
            break;
        }
        z -= step;
        if step.norm() <= 1e-16 * (1.0 + z.norm()) {
            break;
        }
    }
    z
}

/// `omega(w)` for a base with two or three atoms, from the closed-form roots
/// of the cleared subordination equation.
///
/// For `Im w > 0` the admissible root is the one with `Im z >= Im w`. For
/// real `w` it is the root in the open upper half-plane if there is one,
/// otherwise the real root where `H_rho` is nondecreasing.
pub fn omega_oracle_smallcase(mu: &DiscreteMeasure, k: u32, w: Complex64) -> Result<Complex64> {
    let n = mu.len();
    if !(2..=3).contains(&n) {
        return Err(FreeError::InvalidMeasure(format!(
            "small-case oracle needs 2 or 3 atoms, got {n}"
        )));
    }
    if k < 2 {
        return Err(FreeError::InvalidPower(k));
    }
    if !(w.im >= 0.0) {
        return Err(FreeError::OutsideDomain(format!("{w}")));
    }
    let kf = k as f64;
    let one = Complex64::new(1.0, 0.0);
    let atoms = mu.atoms();

    let mut denominator: Poly = vec![one];
    for &(a, _) in atoms {
        denominator = mul_linear(&denominator, Complex64::new(a, 0.0));
    }
    let mut numerator: Poly = vec![Complex64::new(0.0, 0.0); n];
    for (i, &(_, m)) in atoms.iter().enumerate() {
        let mut term: Poly = vec![Complex64::new(m, 0.0)];
        for (j, &(a, _)) in atoms.iter().enumerate() {
            if j != i {
                term = mul_linear(&term, Complex64::new(a, 0.0));
            }
        }
        for (acc, c) in numerator.iter_mut().zip(term) {
            *acc += c;
        }
    }
    // (k z - w) N(z) - (k - 1) D(z)
    let mut poly: Poly = vec![Complex64::new(0.0, 0.0); n + 1];
    for (i, &c) in numerator.iter().enumerate() {
        poly[i + 1] += kf * c;
        poly[i] -= w * c;
    }
    for (acc, &c) in poly.iter_mut().zip(&denominator) {
        *acc -= (kf - 1.0) * c;
    }
    let lead = poly[n];
    let monic: Poly = poly.iter().map(|c| c / lead).collect();

    let raw: Vec<Complex64> = if n == 2 {
        quadratic_roots(monic[1], monic[0]).to_vec()
    } else {
        cubic_roots(monic[2], monic[1], monic[0]).to_vec()
    };
    let roots: Vec<Complex64> = raw.into_iter().map(|z| polish(&monic, z)).collect();

    let pick = |candidates: Vec<Complex64>| -> Result<Complex64> {
        match candidates.as_slice() {
            [z] => Ok(*z),
            _ => Err(FreeError::NoAdmissibleRoot(format!(
                "{} candidates among {roots:?} for w = {w}",
                candidates.len()
            ))),
        }
    };

    let scale = 1e-10 * (1.0 + w.norm());
    if w.im > 0.0 {
        return pick(roots.iter().copied().filter(|z| z.im >= w.im - scale).collect());
    }
    let upper: Vec<Complex64> = roots.iter().copied().filter(|z| z.im > scale).collect();
    if !upper.is_empty() {
        return pick(upper);
    }
    // H_rho'(x) = k - (k - 1) F_mu'(x) with F_mu' = -G'/G^2.
    let nondecreasing = |x: f64| {
        let g: f64 = atoms.iter().map(|&(a, m)| m / (x - a)).sum();
        let dg: f64 = atoms.iter().map(|&(a, m)| -m / (x - a).powi(2)).sum();
        kf + (kf - 1.0) * dg / (g * g) >= -1e-9
    };
    pick(roots
        .iter()
        .filter(|z| z.im.abs() <= scale && nondecreasing(z.re))
        .map(|z| Complex64::new(z.re, 0.0))
        .collect())
}
