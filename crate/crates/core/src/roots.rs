//! Bracketed root finding for monotone real functions.

/// Bisection for a function that is negative near `lo` and positive near `hi`.
///
/// The endpoints are never evaluated, so `lo`/`hi` may be poles. Iterates
/// until the bracket is narrower than `tol` or floating point resolution is
/// exhausted, with a hard cap of `max_iter` halvings.
pub fn bisect_increasing<F>(mut f: F, mut lo: f64, mut hi: f64, tol: f64, max_iter: usize) -> f64
where
    F: FnMut(f64) -> f64,
{
    for _ in 0..max_iter {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let v = f(mid);
        if v == 0.0 {
            return mid;
        }
        if v < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= tol {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Expands `[x0 - 2^j, x0 + 2^j]` until an increasing function changes sign
/// across the interval. Returns the bracket, or `None` after `max_doublings`.
pub fn expand_bracket<F>(mut f: F, x0: f64, max_doublings: u32) -> Option<(f64, f64)>
where
    F: FnMut(f64) -> f64,
{
    let mut width = 1.0;
    for _ in 0..=max_doublings {
        let lo = x0 - width;
        let hi = x0 + width;
        if f(lo) <= 0.0 && f(hi) >= 0.0 {
            return Some((lo, hi));
        }
        width *= 2.0;
    }
    None
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(order: usize) -> (Vec<f64>, Vec<f64>) {
    let n = order;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        // Tricomi initial guess, then Newton on P_n.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}
