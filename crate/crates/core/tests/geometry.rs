use polar_maass::geometry::{
    elliptic_x, enumerate_sl2, hyperbolic_distance, moebius_apply, r_squared, reduce_to_fundamental_domain,
    stabilizer_order, UnimodularMatrix, UpperHalfPoint,
};
use polar_maass::{BigFloat, Cx, PrecisionGuard, Real};
use proptest::prelude::*;

fn point(x: f64, y: f64) -> UpperHalfPoint<BigFloat> {
    UpperHalfPoint::from_f64(x, y).unwrap()
}

fn point_strategy() -> impl Strategy<Value = (f64, f64)> {
    (-3.0f64..3.0, 0.05f64..4.0)
}

/// Products of the generators with every entry bounded by 20.
fn matrix_strategy() -> impl Strategy<Value = UnimodularMatrix> {
    prop::collection::vec((0u8..3, -3i64..=3), 1..8).prop_map(|steps| {
        let mut m = UnimodularMatrix::IDENTITY;
        for (g, t) in steps {
            let next = match g {
                0 => m.mul(&UnimodularMatrix::S),
                _ => m.mul(&UnimodularMatrix::translation(t)),
            };
            if [next.a, next.b, next.c, next.d].iter().all(|e| e.abs() <= 20) {
                m = next;
            }
        }
        m
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn x_is_inside_the_disc_and_matches_distance((x1, y1) in point_strategy(), (x2, y2) in point_strategy()) {
        let _g = PrecisionGuard::new(128);
        let (z, rho) = (point(x1, y1), point(x2, y2));
        let x = elliptic_x(&rho, &z).abs();
        prop_assert!(x < BigFloat::one());
        let half_d = hyperbolic_distance(&z, &rho).mul_2exp(-1);
        let tanh = (half_d.exp() - (-half_d.clone()).exp()) / (half_d.exp() + (-half_d).exp());
        prop_assert!((x - tanh).abs().to_f64() <= 1e-25);
    }

    #[test]
    fn distance_is_invariant((x1, y1) in point_strategy(), (x2, y2) in point_strategy(), m in matrix_strategy()) {
        let _g = PrecisionGuard::new(128);
        let (z, rho) = (point(x1, y1), point(x2, y2));
        let d0 = hyperbolic_distance(&z, &rho);
        let d1 = hyperbolic_distance(&moebius_apply(&m, &z), &moebius_apply(&m, &rho));
        prop_assert!((d0.clone() - d1).abs().to_f64() <= 1e-25 * (1.0 + d0.to_f64()));
    }

    #[test]
    fn reduction_lands_in_the_fundamental_domain((x, y) in point_strategy()) {
        let _g = PrecisionGuard::new(128);
        let z = point(x, y);
        let (w, m) = reduce_to_fundamental_domain(&z);
        prop_assert!(w.x().to_f64().abs() <= 0.5 + 1e-30);
        prop_assert!(w.value().norm_sqr().to_f64() >= 1.0 - 1e-30);
        let mz = moebius_apply(&m, &z);
        prop_assert!((mz.value() - w.value()).abs().to_f64() < 1e-30);
    }
}

#[test]
fn radius_is_invariant_under_the_stabilizer() {
    let _g = PrecisionGuard::new(128);
    let i = UpperHalfPoint::new(Cx::<BigFloat>::i()).unwrap();
    let h = BigFloat::from_i64(3).sqrt().mul_2exp(-1);
    let rho = UpperHalfPoint::new(Cx::new(BigFloat::from_f64(0.5), h)).unwrap();
    // S fixes i; ST^{-1} has order 3 in PSL2(Z) and fixes e^{iπ/3}
    let st = UnimodularMatrix::S.mul(&UnimodularMatrix::translation(-1));
    assert!((moebius_apply(&st, &rho).value() - rho.value()).abs().to_f64() < 1e-35);
    for (x, y) in [(0.3, 0.7), (-1.2, 2.1), (0.05, 0.4)] {
        let z = point(x, y);
        for (m, base) in [(UnimodularMatrix::S, &i), (st, &rho)] {
            let a = r_squared(base, &z);
            let b = r_squared(base, &moebius_apply(&m, &z));
            assert!((a.clone() - b).abs().to_f64() < 1e-30 * (1.0 + a.to_f64()));
        }
    }
    assert_eq!(stabilizer_order(&i), 2);
    assert_eq!(stabilizer_order(&rho), 3);
    assert_eq!(stabilizer_order(&point(0.11, 1.31)), 1);
}

#[test]
fn enumeration_is_deterministic() {
    let a = enumerate_sl2(12, 7).unwrap();
    let b = enumerate_sl2(12, 7).unwrap();
    assert_eq!(a, b);
    assert!(a.iter().all(|m| m.a * m.d - m.b * m.c == 1));
    for (i, m) in a.iter().enumerate() {
        assert!(!a[i + 1..].iter().any(|o| o.projectively_eq(m)));
    }
}
