use super::*;
use crate::freeid::uniform_grid;

fn bernoulli() -> DiscreteMeasure {
    DiscreteMeasure::new(&[(-1.0, 0.5), (1.0, 0.5)]).unwrap()
}

fn poisson(lambda: f64) -> Scheme {
    Scheme::free_poisson(lambda, DiscreteMeasure::point_mass(1.0)).unwrap()
}

#[test]
fn scheme_row_examples() {
    let clt = Scheme::free_clt(bernoulli()).unwrap();
    let (mu, k) = clt.row(4).unwrap();
    assert_eq!(k, 4);
    assert_eq!(mu.atoms(), &[(-0.5, 0.5), (0.5, 0.5)]);

    let (mu, k) = poisson(1.0).row(8).unwrap();
    assert_eq!(k, 8);
    assert_eq!(mu.atoms(), &[(0.0, 0.875), (1.0, 0.125)]);

    assert_eq!(poisson(2.0).row(2), Err(FreeError::RowUnavailable(2)));
    let custom = Scheme::custom(vec![(bernoulli(), 2), (bernoulli(), 5)]).unwrap();
    assert_eq!(custom.row(2).unwrap().1, 5);
    assert_eq!(custom.row(3), Err(FreeError::RowUnavailable(3)));
}

#[test]
fn scheme_validation() {
    let skewed = DiscreteMeasure::new(&[(-1.0, 0.4), (1.0, 0.6)]).unwrap();
    assert!(matches!(Scheme::free_clt(skewed), Err(FreeError::InvalidMeasure(_))));
    assert_eq!(
        Scheme::free_poisson(1.0, DiscreteMeasure::point_mass(0.0)),
        Err(FreeError::ZeroJump)
    );
    assert!(Scheme::custom(vec![(bernoulli(), 5), (bernoulli(), 5)]).is_err());
}

#[test]
fn target_examples() {
    let clt = Scheme::free_clt(bernoulli()).unwrap();
    assert_eq!(clt.target().unwrap().spec(), FreeIdLaw::semicircle().spec());
    let mp = poisson(1.0).target().unwrap();
    let pair = mp.pair().unwrap();
    assert_eq!(pair.gamma, 0.5);
    assert_eq!(pair.sigma.nodes(), &[(1.0, 0.5)]);
    let custom = Scheme::custom(vec![(bernoulli(), 2)]).unwrap();
    assert_eq!(custom.target().err(), Some(FreeError::TargetRequired));
}

#[test]
fn lp_distance_examples() {
    let grid = uniform_grid(0.2, 1.8, 161).unwrap();
    let sc = FreeIdLaw::semicircle().density_table(&grid, None).unwrap();
    assert_eq!(lp_distance(&sc, &sc, 2.0, None).unwrap(), 0.0);
    assert_eq!(lp_distance(&sc, &sc, 1.0, None), Err(FreeError::InvalidExponent(1.0)));
    let mp = FreeIdLaw::marchenko_pastur(1.0).unwrap().density_table(&grid, None).unwrap();
    let d = lp_distance(&sc, &mp, 2.0, None).unwrap();
    // Independent composite trapezoid on the closed forms.
    let f = |t: f64| {
        let a = (4.0 - t * t).sqrt() / (2.0 * PI);
        let b = (4.0 - (t - 2.0).powi(2)).max(0.0).sqrt() / (2.0 * PI * t);
        (a - b).powi(2)
    };
    let mut acc = 0.0;
    for w in grid.windows(2) {
        acc += 0.5 * (w[1] - w[0]) * (f(w[0]) + f(w[1]));
    }
    assert!(d > 0.0 && (d - acc.sqrt()).abs() < 1e-9);
    let other = FreeIdLaw::semicircle()
        .density_table(&uniform_grid(0.2, 1.8, 160).unwrap(), None)
        .unwrap();
    assert_eq!(lp_distance(&sc, &other, 2.0, None), Err(FreeError::GridMismatch));
}

#[test]
fn tail_bound_examples() {
    let m = 7.0 / PI;
    assert!((tail_bound(2.0, m, 0.0).unwrap() - 2.0 * 7.0 / PI).abs() < 1e-14);
    assert!(tail_bound(2.0, 1e12, 0.0).unwrap() < 1e-10);
    assert_eq!(tail_bound(2.0, f64::INFINITY, 0.0).unwrap(), 0.0);
    assert_eq!(tail_bound(1.0, m, 0.0), Err(FreeError::InvalidExponent(1.0)));
    assert!(matches!(
        tail_bound(2.0, 1.0, 1.0),
        Err(FreeError::CutoffTooSmall { .. })
    ));
}

#[test]
fn free_clt_run() {
    let clt = Scheme::free_clt(bernoulli()).unwrap();
    let grid = uniform_grid(-1.9, 1.9, 201).unwrap();
    let report = run(&clt, None, &[4, 16, 64], &grid, None, &[2.0]).unwrap();
    let rows = &report.rows;
    assert_eq!(rows.iter().map(|r| r.n).collect::<Vec<_>>(), vec![4, 16, 64]);
    assert!(rows[2].sup_error < rows[0].sup_error);
    assert!(rows[2].lp["2"] < rows[0].lp["2"]);
    assert!(rows[2].rho_diag < rows[0].rho_diag);
    for r in rows {
        assert!(r.sup_error.is_finite() && r.sup_error >= 0.0);
        // k E_{mu_n} = 1/z exactly for the dilated Bernoulli rows.
        assert!(r.phi_diag < 1e-12 && r.boolean_diag < 1e-12);
    }
}

#[test]
fn clt_rows_match_oracle() {
    let clt = Scheme::free_clt(bernoulli()).unwrap();
    for n in [4, 16] {
        let (mu, k) = clt.row(n).unwrap();
        let cp = ConvPow::new(mu.clone(), k).unwrap();
        for i in 0..21 {
            let t = -1.9 + 3.8 * i as f64 / 20.0;
            let omega = crate::convpow::omega_oracle_smallcase(&mu, k, Complex64::new(t, 0.0)).unwrap();
            assert!((cp.omega(Complex64::new(t, 0.0), true).unwrap() - omega).norm() < 1e-7);
        }
    }
}

#[test]
fn free_poisson_run() {
    let scheme = poisson(1.0);
    let grid = uniform_grid(0.2, 3.8, 181).unwrap();
    let report = run(&scheme, None, &[8, 32, 128], &grid, Some((-0.1, 0.1)), &[2.0, 3.0]).unwrap();
    assert_eq!(report.target_atoms.l, 1.0);
    assert_eq!(report.target_atoms.atom_mass, 0.0);
    assert_eq!(report.target_atoms.t_nu, Some(0.0));
    let (first, last) = (&report.rows[0], &report.rows[2]);
    assert!(last.sup_error < first.sup_error);
    assert!(last.lp["2"] < first.lp["2"]);
    assert!(last.lp["3"] < first.lp["3"]);
    assert!(last.rho_diag < first.rho_diag);
    assert!(last.phi_diag < first.phi_diag);
    assert!(last.boolean_diag < first.boolean_diag);
}

#[test]
fn missing_exclusion() {
    let grid = uniform_grid(0.2, 2.8, 11).unwrap();
    assert_eq!(
        run(&poisson(0.5), None, &[8], &grid, None, &[2.0]).err(),
        Some(FreeError::MissingExclusion(0.0))
    );
    assert_eq!(
        run(&poisson(1.0), None, &[8], &grid, Some((0.1, 0.2)), &[2.0]).err(),
        Some(FreeError::MissingExclusion(0.0))
    );
}

#[test]
fn custom_scheme_needs_target() {
    let scheme = Scheme::custom(vec![(bernoulli().dilate(0.5), 4)]).unwrap();
    let grid = uniform_grid(-1.0, 1.0, 11).unwrap();
    assert_eq!(
        run(&scheme, None, &[1], &grid, None, &[2.0]).err(),
        Some(FreeError::TargetRequired)
    );
    let sc = FreeIdLaw::semicircle();
    let report = run(&scheme, Some(&sc), &[1], &grid, None, &[2.0]).unwrap();
    assert_eq!(report.rows[0].k, 4);
}
