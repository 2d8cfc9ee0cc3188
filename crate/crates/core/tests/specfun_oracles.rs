//! Quadrature-oracle checks of the special-function layer. The oracle
//! evaluates the integral representation of K directly and never shares a
//! code path with the library's series/continued-fraction/expansion
//! implementation.

mod common;

use common::{density_weighted_quadrature, log_bessel_k_quadrature};
use hmmdr::specfun::{
    gig_conditional_moments, gig_log_density, log_bessel_k, log_bessel_k_asymptotic, GigParams,
};

#[test]
fn bessel_matches_quadrature_on_the_moderate_grid() {
    for lam in -5..=5 {
        for &x in &[0.1, 1.0, 10.0, 50.0] {
            let got = log_bessel_k(lam as f64, x).unwrap();
            let want = log_bessel_k_quadrature(lam as f64, x);
            let diff = (got - want).abs();
            assert!(
                diff <= 1e-10,
                "lambda={lam} x={x}: log-space difference {diff:.3e}"
            );
        }
    }
}

#[test]
fn frozen_value_from_quadrature_oracle() {
    // K_0(1): frozen after computing with the quadrature oracle.
    let oracle = log_bessel_k_quadrature(0.0, 1.0);
    assert!((oracle.exp() - 0.421_024_438_240_708_3).abs() < 1e-12);
    assert!((log_bessel_k(0.0, 1.0).unwrap() - oracle).abs() < 1e-12);
}

#[test]
fn asymptotic_branch_agrees_with_quadrature_in_its_region() {
    for &(nu, x) in &[
        (50.0, 100.0),
        (60.0, 0.5),
        (60.0, 10.0),
        (100.0, 100.0),
        (5.0, 100.0),
        (0.5, 80.0),
        (0.0, 60.0),
        (200.0, 300.0),
    ] {
        let got = log_bessel_k_asymptotic(nu, x).unwrap();
        let want = log_bessel_k_quadrature(nu, x);
        let diff = (got - want).abs();
        assert!(
            diff <= 1e-8,
            "asymptotic lambda={nu} x={x}: log-space difference {diff:.3e}"
        );
    }
}

#[test]
fn asymptotic_branch_survives_where_naive_evaluation_overflows() {
    // exp(log K) would overflow/underflow f64, the log itself must not.
    let v = log_bessel_k(200.0, 300.0).unwrap();
    assert!(v.is_finite());
    assert!(v < -200.0, "K_200(300) is astronomically small, got log {v}");
    let w = log_bessel_k(500.0, 0.3).unwrap();
    assert!(w.is_finite());
    assert!(w > 700.0, "K_500(0.3) is astronomically large, got log {w}");
}

#[test]
fn recurrence_identity_on_the_invariant_grid() {
    // exp(log K) satisfies K_{v+1} = K_{v-1} + (2v/x) K_v to 1e-8 relative.
    for lam in -10..=10 {
        for &x in &[0.1, 0.5, 2.0, 7.5, 20.0, 50.0] {
            let nu = lam as f64;
            let km = log_bessel_k(nu - 1.0, x).unwrap();
            let k0 = log_bessel_k(nu, x).unwrap();
            let kp = log_bessel_k(nu + 1.0, x).unwrap();
            // compare on the scale of K_{v+1}
            let lhs = 1.0f64;
            let rhs = (km - kp).exp() + 2.0 * nu / x * (k0 - kp).exp();
            assert!(
                (lhs - rhs).abs() <= 1e-8,
                "recurrence residual {:.3e} at lambda={nu} x={x}",
                (lhs - rhs).abs()
            );
        }
    }
}

#[test]
fn gig_density_normalizes_on_a_parameter_grid() {
    for &omega in &[0.3, 1.0, 2.0, 8.0] {
        for &lambda in &[-2.5, -0.5, 0.0, 0.5, 3.0] {
            let p = GigParams::with_unit_eta(omega, lambda).unwrap();
            let mass = density_weighted_quadrature(
                &|y| gig_log_density(y, &p).unwrap(),
                &|_| 1.0,
            );
            assert!(
                (mass - 1.0).abs() <= 1e-6,
                "mass {mass} for omega={omega} lambda={lambda}"
            );
        }
    }
}

#[test]
fn gig_density_matches_inverse_gaussian_special_case() {
    // lambda = -1/2, eta = 1 is inverse Gaussian with unit mean and shape
    // omega; at y = 1 its density is sqrt(omega / (2 pi)).
    for &omega in &[0.5, 1.0, 4.0] {
        let p = GigParams::with_unit_eta(omega, -0.5).unwrap();
        let got = gig_log_density(1.0, &p).unwrap();
        let want = 0.5 * (omega / (2.0 * std::f64::consts::PI)).ln();
        assert!((got - want).abs() < 1e-12, "omega={omega}: {got} vs {want}");
    }
    // And at a few other support points against the explicit IG density.
    let omega = 2.0;
    let p = GigParams::with_unit_eta(omega, -0.5).unwrap();
    for &y in &[0.4, 1.7, 3.0] {
        let got = gig_log_density(y, &p).unwrap();
        let ig = 0.5 * (omega / (2.0 * std::f64::consts::PI * y.powi(3))).ln()
            - omega * (y - 1.0).powi(2) / (2.0 * y);
        assert!((got - ig).abs() < 1e-12, "y={y}: {got} vs {ig}");
    }
}

#[test]
fn conditional_moments_match_quadrature() {
    let cases = [
        (1.0, 2.0, 1.0),
        (4.0, 4.0, -0.5),
        (0.7, 3.3, 2.2),
        (5.0, 0.4, -3.1),
        (2.5, 2.5, 0.0),
        (10.0, 1.0, 4.0),
    ];
    for &(psi, chi, lam) in &cases {
        let m = gig_conditional_moments(psi, chi, lam).unwrap();
        // Unnormalized conditional log-density; normalization cancels in the
        // ratios below.
        let ln_f = move |y: f64| (lam - 1.0) * y.ln() - 0.5 * (psi * y + chi / y);
        let mass = density_weighted_quadrature(&ln_f, &|_| 1.0);
        let ey = density_weighted_quadrature(&ln_f, &|y| y) / mass;
        let einv = density_weighted_quadrature(&ln_f, &|y| 1.0 / y) / mass;
        let elog = density_weighted_quadrature(&ln_f, &|y| y.ln()) / mass;
        assert!(
            (m.y - ey).abs() <= 1e-6 * ey.abs().max(1.0),
            "E[Y] {} vs {} at ({psi},{chi},{lam})",
            m.y,
            ey
        );
        assert!(
            (m.y_inv - einv).abs() <= 1e-6 * einv.abs().max(1.0),
            "E[1/Y] {} vs {} at ({psi},{chi},{lam})",
            m.y_inv,
            einv
        );
        assert!(
            (m.log_y - elog).abs() <= 1e-6 * elog.abs().max(1.0),
            "E[log Y] {} vs {} at ({psi},{chi},{lam})",
            m.log_y,
            elog
        );
    }
}
