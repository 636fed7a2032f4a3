use hilbert_spectra::series::PowerSeries;
use hilbert_spectra::spectral::*;

#[test]
fn multiplier_identity_grid() {
    let schedule = TruncationSchedule::default();
    for k in 0..3 {
        let f = PowerSeries::<f64>::monomial(k);
        for t in [0.0, 0.5, 1.0] {
            let c = multiplier_identity_residual(&f, t, &schedule).unwrap();
            println!(
                "z^{k} t={t}: raw {:.3e} extrapolated {:.3e} slope {:.4}",
                c.raw_residuals.last().unwrap(),
                c.extrapolated_residual,
                c.fitted_slope
            );
            assert!(c.extrapolated_residual <= MULTIPLIER_TOL, "{c:?}");
            assert!((c.fitted_slope + 0.5).abs() <= 0.15, "{c:?}");
        }
    }
}

#[test]
fn zero_polynomial_has_zero_multiplier_residual() {
    let zero = PowerSeries::new(vec![0.0]).unwrap();
    let c = multiplier_identity_residual(&zero, 1.0, &TruncationSchedule::default()).unwrap();
    assert_eq!(c.raw_residuals.last().copied(), Some(0.0));
}

#[test]
fn printed_weight_is_not_orthogonal() {
    let s = orthogonality_summary(10, DEFAULT_ORTHOGONALITY_T_MAX, WeightKind::Printed).unwrap();
    assert!((s.i00 - std::f64::consts::PI).abs() < 1e-8);
    assert!(s.max_off_diagonal > 0.1);
}

#[test]
fn dual_hahn_weight_orthonormal_to_ten() {
    let s = orthogonality_summary(10, DEFAULT_ORTHOGONALITY_T_MAX, WeightKind::DualHahn).unwrap();
    println!("{s:?}");
    assert!(s.max_off_diagonal <= 1e-6 && s.diagonal_spread <= 1e-4 && (s.k - 1.0).abs() < 1e-6);
}
