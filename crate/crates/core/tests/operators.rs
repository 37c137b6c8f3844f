use polar_maass::geometry::UpperHalfPoint;
use polar_maass::operators::{
    apply_d, apply_laplacian, apply_xi, d_phi_closed, xi_phi_closed, FieldSample, StencilParams,
};
use polar_maass::series::{phi_summand, psi_summand};
use polar_maass::verify::{all_passed, check_bol_identity, check_laplacian_factorization, check_single_term_suite};
use polar_maass::{BigFloat, Cx, PrecisionGuard, Real};
use proptest::prelude::*;
use std::f64::consts::PI;

proptest! {
    #![proptest_config(ProptestConfig { cases: 32, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn holomorphic_exponentials(k in 2i64..=3, ar in -1.0f64..1.0, ai in -1.0f64..1.0, x in -0.5f64..0.5, y in 0.8f64..1.5) {
        let alpha = Cx::from_f64(ar, ai);
        let f = FieldSample::new(2 - 2 * k, {
            let alpha = alpha.clone();
            move |w: &UpperHalfPoint<f64>| Ok((alpha.clone() * w.value()).exp())
        });
        let z = UpperHalfPoint::from_f64(x, y).unwrap();
        let order = (2 * k - 1) as u32;
        let d = apply_d(&f, k, &z, &StencilParams::for_order(order, 53)).unwrap();
        let want = alpha.powi(2 * k - 1) * (alpha.clone() * z.value()).exp() * Cx::from_f64(0.0, 2.0 * PI).powi(1 - 2 * k);
        prop_assert!((d - &want).abs() <= 1e-6 * want.abs().max(1e-3));
        let xi = apply_xi(&f, 1 - k, &z, &StencilParams::for_order(1, 53)).unwrap();
        prop_assert!(xi.abs() <= 1e-9);
    }
}

#[test]
fn summand_images_at_extended_precision() {
    let _g = PrecisionGuard::new(128);
    let base = UpperHalfPoint::<BigFloat>::from_f64(0.13, 1.21).unwrap();
    let z = UpperHalfPoint::<BigFloat>::from_f64(0.52, 0.83).unwrap();
    let scale = (z.value() - base.value()).abs().to_f64();
    for k in [2i64, 3] {
        for n in [-2i64, 0, 1, 3] {
            let phi = FieldSample::new(2 - 2 * k, |w: &UpperHalfPoint<BigFloat>| phi_summand(k, n, &base, w));
            let order = (2 * k - 1) as u32;
            let xi = apply_xi(&phi, 1 - k, &z, &StencilParams::for_order(1, 128).scaled(scale)).unwrap();
            let d = apply_d(&phi, k, &z, &StencilParams::for_order(order, 128).scaled(scale)).unwrap();
            for (got, want) in
                [(xi, xi_phi_closed(k, n, &base, &z).unwrap()), (d, d_phi_closed(k, n, &base, &z).unwrap())]
            {
                let e = ((got - &want).abs() / want.abs()).to_f64();
                assert!(e <= 1e-12, "k={k} n={n}: {e:e}");
            }
            let lap = apply_laplacian(&phi, 1 - k, &z, &StencilParams::for_order(2, 128).scaled(scale)).unwrap();
            let size = phi.eval(&z).unwrap().abs().to_f64();
            assert!(lap.abs().to_f64() <= 1e-12 * size, "k={k} n={n}");
            let psi = FieldSample::new(2 * k, |w: &UpperHalfPoint<BigFloat>| psi_summand(k, n, &base, w));
            let xi_psi = apply_xi(&psi, k, &z, &StencilParams::for_order(1, 128).scaled(scale)).unwrap();
            assert!(
                xi_psi.abs().to_f64()
                    <= 1e-12 * psi.eval(&z).unwrap().abs().to_f64() * z.y().to_f64().powi(2 * k as i32)
            );
        }
    }
}

#[test]
fn single_term_suite_at_double_precision() {
    let reports = check_single_term_suite(11, 24, 53);
    assert_eq!(reports.len(), 5 * 24);
    assert!(all_passed(&reports), "{:?}", reports.iter().find(|r| !r.passed));
}

#[test]
fn bol_and_factorization_on_smooth_fields() {
    let bol = check_bol_identity(5, 2);
    assert!(all_passed(&bol), "{bol:?}");
    let fac = check_laplacian_factorization(5, 6);
    assert_eq!(fac.len(), 12);
    assert!(all_passed(&fac), "{:?}", fac.iter().find(|r| !r.passed));
}

#[test]
fn stencil_validation() {
    assert!(StencilParams::new(0.0, 1, 8).is_err());
    assert!(StencilParams::new(0.1, 1, 3).is_err());
    assert!(StencilParams::new(0.1, 0, 4).is_ok());
}
