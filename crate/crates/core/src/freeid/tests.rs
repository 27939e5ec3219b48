use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn mp(lambda: f64) -> FreeIdLaw {
    FreeIdLaw::marchenko_pastur(lambda).unwrap()
}

fn semicircle_density(t: f64) -> f64 {
    (4.0 - t * t).max(0.0).sqrt() / (2.0 * PI)
}

fn mp_density(lambda: f64, t: f64) -> f64 {
    let r = 4.0 * lambda - (t - 1.0 - lambda).powi(2);
    r.max(0.0).sqrt() / (2.0 * PI * t)
}

fn multi_node_law() -> FreeIdLaw {
    let sigma = WeightedNodeSet::new(&[(-1.0, 0.3), (0.5, 0.4), (2.0, 0.2)]).unwrap();
    FreeIdLaw::from_pair(GeneratingPair::new(0.1, sigma))
}

#[test]
fn make_law_examples() {
    let cauchy = FreeIdLaw::stable(1.0, c(0.5, 0.0)).unwrap();
    assert!((cauchy.phi_eval(c(0.3, 2.0)).unwrap() - c(0.0, -1.0)).norm() < 1e-15);
    let bad = FreeIdLaw::stable(1.5, Complex64::from_polar(1.0, PI / 4.0));
    assert!(matches!(bad, Err(FreeError::InvalidStableParameters(_))));
    let point = FreeIdLaw::from_pair(GeneratingPair::point(2.0));
    assert!(point.is_degenerate());
    assert_eq!(point.u_of_x(0.0), Err(FreeError::DegenerateLaw));
    assert!(!FreeIdLaw::semicircle().is_degenerate());
}

#[test]
fn phi_examples() {
    let sc = FreeIdLaw::semicircle();
    assert!((sc.phi_eval(c(0.0, 1.0)).unwrap() - c(0.0, -1.0)).norm() < 1e-15);
    let s2 = FreeIdLaw::stable(2.0, c(1.0, 0.0)).unwrap();
    assert!((s2.phi_eval(c(0.0, 2.0)).unwrap() - c(0.0, -0.5)).norm() < 1e-15);
    let z = c(0.0, 2.0);
    let expected = 0.5 + 0.5 * (1.0 + 2.0 * c(0.0, 1.0)) / (z - 1.0);
    assert!((mp(1.0).phi_eval(z).unwrap() - expected).norm() < 1e-15);
    assert!(matches!(
        mp(1.0).phi_eval(c(1.0, 0.0)),
        Err(FreeError::PoleAtSigmaNode(_))
    ));
}

#[test]
fn h_examples() {
    let sc = FreeIdLaw::semicircle();
    assert!(sc.h_eval(c(0.0, 1.0)).unwrap().norm() < 1e-15);
    assert!((sc.h_prime(c(0.0, 1.0)).unwrap() - c(2.0, 0.0)).norm() < 1e-15);
    for x in [-0.9, -0.3, 0.0, 0.4, 0.8] {
        let h = sc.h_eval(c(x, (1.0 - x * x).sqrt())).unwrap();
        assert!((h - c(2.0 * x, 0.0)).norm() < 1e-14);
    }
}

#[test]
fn h_does_not_raise_imaginary_part() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let laws = [FreeIdLaw::semicircle(), mp(0.5), multi_node_law(), FreeIdLaw::cauchy()];
    for law in &laws {
        for _ in 0..200 {
            let z = c(rng.gen_range(-5.0..5.0), rng.gen_range(0.01..5.0));
            let h = law.h_eval(z).unwrap();
            assert!(h.im <= z.im + 1e-12);
            assert!(law.phi_eval(z).unwrap().im <= 1e-12);
        }
    }
}

#[test]
fn g_examples() {
    let sc = FreeIdLaw::semicircle();
    assert!((sc.g_of_x(0.5) - 4.0).abs() < 1e-15);
    assert!((sc.g_of_x(2.0) - 0.25).abs() < 1e-15);
    assert_eq!(mp(1.0).g_of_x(1.0), f64::INFINITY);
    assert_eq!(FreeIdLaw::cauchy().g_of_x(3.0), f64::INFINITY);
}

#[test]
fn u_examples() {
    let sc = FreeIdLaw::semicircle();
    assert!((sc.u_of_x(0.0).unwrap() - 1.0).abs() < 1e-13);
    assert!((sc.u_of_x(0.6).unwrap() - 0.8).abs() < 1e-13);
    assert_eq!(sc.u_of_x(1.5).unwrap(), 0.0);
    assert!((mp(1.0).u_of_x(1.0).unwrap() - 1.0).abs() < 1e-13);
}

#[test]
fn u_solves_unit_integral_equation() {
    let law = multi_node_law();
    let p = law.pair().unwrap().clone();
    for i in 0..200 {
        let x = -3.0 + 6.0 * i as f64 / 199.0;
        let y = law.u_of_x(x).unwrap();
        if y > 0.0 {
            let s: f64 = p
                .sigma
                .nodes()
                .iter()
                .map(|&(t, w)| w * (1.0 + t * t) / ((t - x).powi(2) + y * y))
                .sum();
            assert!((s - 1.0).abs() < 1e-11, "x = {x}: {s}");
        } else {
            assert!(law.g_of_x(x) <= 1.0);
        }
    }
}

#[test]
fn boundary_curve_examples() {
    let curve = FreeIdLaw::semicircle().boundary_curve(-1.0, 1.0, 21).unwrap();
    for s in &curve.samples {
        assert!((s.t - 2.0 * s.x).abs() < 1e-13);
        assert!((s.u - (1.0 - s.x * s.x).max(0.0).sqrt()).abs() < 1e-7);
    }
    let mp_curve = mp(1.0).boundary_curve(0.0, 2.0, 41).unwrap();
    assert!(mp_curve.samples[0].t.abs() < 1e-12);
    assert!((mp_curve.samples[40].t - 4.0).abs() < 1e-12);
    let point = FreeIdLaw::from_pair(GeneratingPair::point(0.0));
    assert_eq!(point.boundary_curve(0.0, 1.0, 3), Err(FreeError::DegenerateLaw));
}

#[test]
fn curve_samples_are_continuous() {
    let law = multi_node_law();
    let curve = law.boundary_curve(-3.0, 3.0, 601).unwrap();
    // u has square-root behaviour at the ends of its support, so jumps are
    // bounded by a multiple of sqrt(dx) rather than dx.
    let dx: f64 = 6.0 / 600.0;
    let scale = law.pair().unwrap().sigma.total_mass().sqrt() * 4.0;
    for w in curve.samples.windows(2) {
        let jump = (w[1].u - w[0].u).abs();
        assert!(jump <= scale * dx.sqrt(), "{jump} at x = {}", w[0].x);
    }
}

#[test]
fn invert_h_examples() {
    let sc = FreeIdLaw::semicircle();
    let z = sc.invert_h(c(0.0, 2.0)).unwrap();
    assert!((z - c(0.0, 1.0 + 2f64.sqrt())).norm() < 1e-12);
    let z = sc.invert_h(c(0.0, 1.0)).unwrap();
    assert!((z - c(0.0, (1.0 + 5f64.sqrt()) / 2.0)).norm() < 1e-12);
    let cauchy = FreeIdLaw::cauchy();
    for w in [c(0.0, 1.0), c(-3.0, 0.01), c(7.0, 2.0)] {
        assert!((cauchy.invert_h(w).unwrap() - (w + c(0.0, 1.0))).norm() < 1e-13);
    }
    assert!(matches!(sc.invert_h(c(1.0, 0.0)), Err(FreeError::OutsideDomain(_))));
}

#[test]
fn invert_h_consistency() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let laws = [
        FreeIdLaw::semicircle(),
        mp(1.0),
        mp(0.5),
        multi_node_law(),
        FreeIdLaw::cauchy(),
        FreeIdLaw::stable(1.5, Complex64::from_polar(1.0, -PI / 4.0)).unwrap(),
        FreeIdLaw::stable(0.7, Complex64::from_polar(1.0, 1.2 * PI)).unwrap(),
        FreeIdLaw::stable(1.0, c(0.2, 0.0)).unwrap(),
    ];
    for law in &laws {
        for _ in 0..100 {
            let w = c(rng.gen_range(-6.0..6.0), rng.gen_range(1e-3..4.0));
            let z = law.invert_h(w).unwrap();
            assert!(z.im > 0.0);
            assert!((law.h_raw(z) - w).norm() < 1e-10 * (1.0 + w.norm()));
            assert!(law.in_omega(z).unwrap());
        }
    }
}

#[test]
fn f_boundary_examples() {
    let sc = FreeIdLaw::semicircle();
    let (x, u) = sc.f_boundary(1.0).unwrap();
    assert!((x - 0.5).abs() < 1e-12 && (u - 0.75f64.sqrt()).abs() < 1e-7);
    let (x, u) = sc.f_boundary(3.0).unwrap();
    assert!((x - (3.0 + 5f64.sqrt()) / 2.0).abs() < 1e-12);
    assert_eq!(u, 0.0);
    let (x, u) = mp(1.0).f_boundary(0.0).unwrap();
    assert!(x.abs() < 1e-12 && u == 0.0);
}

#[test]
fn f_boundary_composes_with_h() {
    let laws = [FreeIdLaw::semicircle(), mp(2.0), multi_node_law(), FreeIdLaw::cauchy()];
    for law in &laws {
        for i in 0..101 {
            let t = -6.0 + 12.0 * i as f64 / 100.0;
            let (x, u) = law.f_boundary(t).unwrap();
            assert!((law.h_raw(c(x, u)) - t).norm() < 1e-10);
        }
    }
}

#[test]
fn f_boundary_uses_cached_curve() {
    let law = multi_node_law();
    let fresh = law.f_boundary(0.7).unwrap();
    law.cache_curve(-4.0, 4.0, 200).unwrap();
    assert!(law.cached_curve().is_some());
    let seeded = law.f_boundary(0.7).unwrap();
    assert!((fresh.0 - seeded.0).abs() < 1e-12);
    assert!((fresh.1 - seeded.1).abs() < 1e-9);
}

#[test]
fn f_boundary_is_monotone() {
    let laws = [FreeIdLaw::semicircle(), mp(0.5), multi_node_law()];
    for law in &laws {
        let mut prev = f64::NEG_INFINITY;
        for i in 0..401 {
            let t = -5.0 + 10.0 * i as f64 / 400.0;
            let (x, _) = law.f_boundary(t).unwrap();
            assert!(x > prev, "t = {t}");
            prev = x;
        }
    }
}

#[test]
fn derivative_bound_on_curve() {
    let law = multi_node_law();
    let p = law.pair().unwrap().clone();
    let curve = law.boundary_curve(-3.0, 4.0, 400).unwrap();
    let mut checked = 0;
    for s in curve.samples.iter().filter(|s| s.u > 0.0) {
        let z = c(s.x, s.u);
        let integral: Complex64 = p
            .sigma
            .nodes()
            .iter()
            .map(|&(t, w)| w * (1.0 + t * t) / ((z - t) * (z - t)))
            .sum();
        assert!(integral.norm() < 1.0);
        assert!(law.h_prime(z).unwrap().norm() > 0.0);
        checked += 1;
    }
    assert!(checked > 100);
}

#[test]
fn density_examples() {
    let sc = FreeIdLaw::semicircle();
    assert!((sc.density_at(0.0).unwrap() - 1.0 / PI).abs() < 1e-12);
    assert!(sc.density_at(2.0).unwrap().abs() < 1e-7);
    assert!(sc.density_at(-2.0).unwrap().abs() < 1e-7);
    assert!((mp(1.0).density_at(1.0).unwrap() - 3f64.sqrt() / (2.0 * PI)).abs() < 1e-12);
    assert!(matches!(
        mp(1.0).density_at(0.0),
        Err(FreeError::EvaluationAtSingularity(_))
    ));
}

#[test]
fn density_table_examples() {
    let grid = uniform_grid(-1.95, 1.95, 1001).unwrap();
    let table = FreeIdLaw::semicircle().density_table(&grid, None).unwrap();
    for (t, s) in table.points() {
        assert!((s - semicircle_density(t)).abs() < 1e-9);
    }
    assert_eq!(table.atom(), None);

    let grid = uniform_grid(0.1, 2.8, 271).unwrap();
    let law = mp(0.5);
    let table = law.density_table(&grid, law.default_exclusion().unwrap()).unwrap();
    assert_eq!(table.excluded(), Some((-0.05, 0.05)));
    let (loc, mass) = table.atom().unwrap();
    assert!(loc.abs() < 1e-15 && (mass - 0.5).abs() < 1e-12);
    for (t, s) in table.points() {
        assert!((s - mp_density(0.5, t)).abs() < 1e-9);
    }

    let grid = uniform_grid(-10.0, 10.0, 401).unwrap();
    let table = FreeIdLaw::cauchy().density_table(&grid, None).unwrap();
    for (t, s) in table.points() {
        assert!((s - 1.0 / (PI * (1.0 + t * t))).abs() < 1e-9);
    }
}

#[test]
fn density_table_skips_excluded_points() {
    let grid = uniform_grid(-0.5, 3.0, 36).unwrap();
    let table = mp(1.0).density_table(&grid, Some((-0.1, 0.1))).unwrap();
    for (&t, v) in table.grid().iter().zip(table.values()) {
        assert_eq!(v.is_none(), t > -0.1 && t < 0.1);
    }
    assert!(matches!(
        FreeIdLaw::semicircle().density_table(&[1.0, 0.0], None),
        Err(FreeError::InvalidGrid(_))
    ));
}

#[test]
fn normalization() {
    let cases = [
        (FreeIdLaw::semicircle(), -2.0, 2.0),
        (mp(2.0), 0.0, 6.0),
        (multi_node_law(), -8.0, 8.0),
    ];
    for (law, lo, hi) in cases {
        let grid = uniform_grid(lo, hi, 20001).unwrap();
        let table = law.density_table(&grid, None).unwrap();
        let total = table.mass();
        if law.pair().unwrap().sigma.nodes().len() == 1 {
            assert!(total > 1.0 - 1e-4 && total < 1.0 + 1e-6, "{total}");
        }
        assert!(table.values().iter().all(|v| v.unwrap() >= 0.0));
        assert!(total < 1.0 + 1e-6);
    }
    let law = mp(0.5);
    let grid = uniform_grid(0.05, 3.0, 20001).unwrap();
    let table = law.density_table(&grid, None).unwrap();
    let total = table.mass() + table.atom().unwrap().1;
    assert!(total > 1.0 - 1e-4 && total < 1.0 + 1e-6, "{total}");
}

#[test]
fn atom_report_examples() {
    let r = mp(0.5).atom_report().unwrap();
    assert_eq!((r.l, r.t_nu, r.atom_mass, r.has_zero), (0.5, Some(0.0), 0.5, true));
    let r = mp(1.0).atom_report().unwrap();
    assert_eq!((r.l, r.t_nu, r.atom_mass, r.has_zero), (1.0, Some(0.0), 0.0, true));
    let r = FreeIdLaw::semicircle().atom_report().unwrap();
    assert_eq!(r.l, f64::INFINITY);
    assert!(!r.has_zero && r.t_nu.is_none());
    let r = FreeIdLaw::cauchy().atom_report().unwrap();
    assert_eq!(r.l, f64::INFINITY);
}

#[test]
fn atom_mass_matches_boundary_behaviour() {
    // Near an atom of mass m at t_nu, Im G(t_nu + i y) ~ -m / y.
    let law = mp(0.3);
    let r = law.atom_report().unwrap();
    let y = 1e-7;
    let g = 1.0 / law.invert_h(c(r.t_nu.unwrap(), y)).unwrap();
    assert!((-g.im * y - r.atom_mass).abs() < 1e-5);
}

#[test]
fn compound_poisson_examples() {
    let p = compound_poisson_pair(1.0, &DiscreteMeasure::point_mass(1.0)).unwrap();
    assert_eq!(p.gamma, 0.5);
    assert_eq!(p.sigma.nodes(), &[(1.0, 0.5)]);
    let p = compound_poisson_pair(0.5, &DiscreteMeasure::point_mass(1.0)).unwrap();
    assert_eq!(p.gamma, 0.25);
    assert_eq!(p.sigma.nodes(), &[(1.0, 0.25)]);
    let jump = DiscreteMeasure::new(&[(-1.0, 0.5), (1.0, 0.5)]).unwrap();
    let p = compound_poisson_pair(1.0, &jump).unwrap();
    assert_eq!(p.gamma, 0.0);
    assert_eq!(p.sigma.nodes(), &[(-1.0, 0.25), (1.0, 0.25)]);
    assert_eq!(
        compound_poisson_pair(1.0, &DiscreteMeasure::point_mass(0.0)),
        Err(FreeError::ZeroJump)
    );
}

#[test]
fn in_omega_examples() {
    let sc = FreeIdLaw::semicircle();
    assert!(sc.in_omega(c(0.0, 2.0)).unwrap());
    assert!(!sc.in_omega(c(0.0, 0.5)).unwrap());
    let x = 0.3;
    let u = sc.u_of_x(x).unwrap();
    assert!(sc.in_omega(c(x, u + 1e-6)).unwrap());
}

#[test]
fn lipschitz_lower_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let laws = [FreeIdLaw::semicircle(), mp(1.0), FreeIdLaw::cauchy(), mp(0.5)];
    for law in &laws {
        let sample = |rng: &mut ChaCha8Rng| {
            let re = rng.gen_range(-5.0..5.0);
            if rng.gen_bool(0.5) {
                (c(re, 0.0), law.f_at_real(re).unwrap())
            } else {
                let w = c(re, rng.gen_range(1e-3..3.0));
                (w, law.invert_h(w).unwrap())
            }
        };
        for _ in 0..200 {
            let (w1, f1) = sample(&mut rng);
            let (w2, f2) = sample(&mut rng);
            assert!((f1 - f2).norm() >= 0.5 * (w1 - w2).norm() * (1.0 - 1e-9));
        }
    }
}

#[test]
fn tail_bound() {
    let laws = [FreeIdLaw::semicircle(), mp(1.0), FreeIdLaw::cauchy(), mp(0.5)];
    for law in &laws {
        let fi = law.invert_h(c(0.0, 1.0)).unwrap().norm();
        let mut prev = f64::INFINITY;
        for t in [10.0, 20.0, 50.0, 100.0, 1000.0] {
            if t <= 6.0 * fi {
                continue;
            }
            for tt in [t, -t] {
                let s = law.density_at(tt).unwrap();
                assert!(s * PI * t < 3.0);
            }
            let s = law.density_at(t).unwrap();
            assert!(s <= prev);
            prev = s;
        }
    }
}

#[test]
fn semicircle_matches_stable_index_two() {
    let pair = FreeIdLaw::semicircle();
    let stable = FreeIdLaw::stable(2.0, c(1.0, 0.0)).unwrap();
    for i in 0..201 {
        let t = -2.5 + 5.0 * i as f64 / 200.0;
        let a = pair.density_at(t).unwrap();
        let b = stable.density_at(t).unwrap();
        assert!((a - b).abs() < 1e-10, "t = {t}");
    }
}

#[test]
fn stable_dilation() {
    let params = [
        (2.0, c(1.0, 0.0)),
        (1.5, Complex64::from_polar(1.0, -PI / 4.0)),
        (0.7, Complex64::from_polar(1.0, 1.2 * PI)),
        (1.0, c(0.2, 0.0)),
        (1.0, c(0.9, 0.0)),
    ];
    for (alpha, b) in params {
        let law = FreeIdLaw::stable(alpha, b).unwrap();
        let doubled = law.scaled_phi(2.0);
        let scale = 2f64.powf(1.0 / alpha);
        let shift = match law.spec() {
            PhiSpec::Stable(s) => s.doubling_shift(),
            PhiSpec::Pair(_) => unreachable!(),
        };
        for i in 0..81 {
            let t = -3.0 + 6.0 * i as f64 / 80.0;
            let lhs = doubled.density_at(t).unwrap();
            let rhs = law.density_at((t - shift) / scale).unwrap() / scale;
            assert!((lhs - rhs).abs() < 1e-8, "alpha {alpha}, t {t}: {lhs} vs {rhs}");
        }
        let params = StableParams::new(alpha, b).unwrap();
        let grid = uniform_grid(-3.0, 3.0, 81).unwrap();
        assert!(params.max_dilation_error(&grid).unwrap() < 1e-8);
    }
}

#[test]
fn discretized_cauchy_sigma_approaches_cauchy() {
    // The Cauchy law has phi = -i = int (1 + tz)/(z - t) dsigma with
    // dsigma = dt / (pi (1 + t^2)). Substituting t = tan(theta) turns sigma
    // into the uniform law on (-pi/2, pi/2).
    let order = 64;
    let (nodes, weights) = crate::roots::gauss_legendre(order);
    let mut sigma_nodes = Vec::new();
    let panels = 40;
    for p in 0..panels {
        let a = -PI / 2.0 + PI * p as f64 / panels as f64;
        let b = a + PI / panels as f64;
        for (x, w) in nodes.iter().zip(&weights) {
            let theta = 0.5 * (a + b) + 0.5 * (b - a) * x;
            sigma_nodes.push((theta.tan(), 0.5 * (b - a) * w / PI));
        }
    }
    let approx = FreeIdLaw::from_pair(GeneratingPair::new(
        0.0,
        WeightedNodeSet::new(&sigma_nodes).unwrap(),
    ));
    let exact = FreeIdLaw::cauchy();
    for w in [c(0.0, 1.0), c(1.0, 2.0), c(-2.0, 0.5)] {
        let d = (approx.invert_h(w).unwrap() - exact.invert_h(w).unwrap()).norm();
        assert!(d < 1e-3, "{w}: {d}");
    }
}
