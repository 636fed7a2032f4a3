use hilbert_spectra::hilbert::{eigenfunction_eval, LatentParameter};
use hilbert_spectra::mehler_fock::{
    general_mu_transform_eval, kernel_identity_residual, mf_forward, round_trip, transform_representation_residual,
    ForwardRoute, PhiZ,
};
use num_complex::Complex64;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn z_grid() -> [Complex64; 5] {
    [c(0.0, 0.0), c(0.4, 0.0), c(-0.4, 0.0), c(0.0, 0.5), c(0.3, 0.3)]
}

#[test]
fn kernel_identity_grid() {
    for t in [0.0, 0.5, 1.0, 2.0] {
        for y in [1.0, 2.0, 5.0] {
            let tol = if t < 2.0 { 1e-7 } else { 1e-6 };
            let k = kernel_identity_residual(t, y).unwrap();
            assert!(k.residual <= tol, "t={t} y={y}: {k:?}");
        }
    }
}

#[test]
fn transform_representation_grid() {
    for t in [0.0, 0.5, 1.0, 2.0] {
        for z in z_grid() {
            let r = transform_representation_residual(t, z).unwrap();
            assert!(r <= 1e-6, "t={t} z={z}: {r:e}");
        }
    }
}

#[test]
fn general_mu_grid() {
    for mu in [0.1, 0.3, 0.5] {
        let mu = LatentParameter::real(mu).unwrap();
        for z in z_grid() {
            let got = general_mu_transform_eval(mu, z).unwrap();
            let want = eigenfunction_eval(mu, z).unwrap();
            assert!((got - want).norm() <= 1e-6, "{mu:?} z={z}: {got} vs {want}");
        }
    }
}

#[test]
fn forward_transform_real_for_real_z() {
    for z in [0.0, 0.3, -0.5, 0.8] {
        let phi = PhiZ::new(c(z, 0.0)).unwrap();
        for t in [0.0, 0.5, 1.0, 2.0, 3.0] {
            let v = mf_forward(&phi.as_function(), t, 1e-11).unwrap().value;
            assert!(v.im.abs() <= 1e-10);
        }
    }
}

#[test]
fn round_trips() {
    for z in [0.0, 0.3, -0.5] {
        for x in [1.2, 2.0, 5.0] {
            for route in [ForwardRoute::ClosedForm, ForwardRoute::Quadrature] {
                let rt = round_trip(c(z, 0.0), x, route, 40.0, 1e-6).unwrap();
                assert!(rt.residual <= 1e-4, "z={z} x={x} {route:?}: {rt:?}");
            }
        }
    }
}
