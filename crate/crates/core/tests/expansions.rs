use polar_maass::expansions::{
    elliptic_eval, extract_expansion, extract_many, EllipticExpansion, ExpansionKind, ExtractionParams,
};
use polar_maass::geometry::UpperHalfPoint;
use polar_maass::operators::FieldSample;
use polar_maass::series::{LatticeSum, SeriesKind, TruncationParams};
use polar_maass::{BigFloat, Cx, PrecisionGuard, Real};
use proptest::prelude::*;
use std::collections::BTreeMap;

fn coefficient_strategy() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((0.5f64..2.0, 0.0f64..std::f64::consts::TAU), 17)
}

fn synthetic(
    rho: &UpperHalfPoint<BigFloat>,
    weight: i64,
    kind: ExpansionKind,
    plus: &[(f64, f64)],
    minus: &[(f64, f64)],
) -> EllipticExpansion<BigFloat> {
    let polar = |(m, t): &(f64, f64)| Cx::from_polar(&BigFloat::from_f64(*m), &BigFloat::from_f64(*t));
    let c_plus: BTreeMap<_, _> = (-8..=8).zip(plus.iter().map(polar)).collect();
    let c_minus: BTreeMap<_, _> = (-8..=8).zip(minus.iter().map(polar)).filter(|(n, _)| n % 3 != 0).collect();
    EllipticExpansion {
        rho: rho.clone(),
        weight,
        kind,
        c_plus,
        c_minus,
        n_range: (-8, 8),
        radius_used: BigFloat::zero(),
        residual: BigFloat::zero(),
        params: ExtractionParams::default(),
    }
}

fn worst_relative(a: &EllipticExpansion<BigFloat>, b: &EllipticExpansion<BigFloat>) -> f64 {
    let mut worst = 0.0f64;
    for n in -8..=8 {
        for (x, y) in [(a.c_plus_at(n), b.c_plus_at(n)), (a.c_minus_at(n), b.c_minus_at(n))] {
            let scale = x.abs();
            let e = (x - &y).abs();
            worst = worst.max(if scale.is_zero() { e } else { e / &scale }.to_f64());
        }
    }
    worst
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 12, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn harmonic_round_trip(k in 2i64..=3, plus in coefficient_strategy(), minus in coefficient_strategy(), x in -0.4f64..0.4, y in 0.9f64..1.6) {
        let _g = PrecisionGuard::new(128);
        let rho = UpperHalfPoint::<BigFloat>::from_f64(x, y).unwrap();
        let truth = synthetic(&rho, 2 - 2 * k, ExpansionKind::Harmonic, &plus, &minus);
        let field = FieldSample::new(truth.weight, |z: &UpperHalfPoint<BigFloat>| elliptic_eval(&truth, z));
        let got = extract_expansion(&field, &rho, ExpansionKind::Harmonic, -8..=8, &ExtractionParams::default()).unwrap();
        let e = worst_relative(&truth, &got);
        prop_assert!(e <= 1e-20, "worst relative error {e:e}");
    }

    #[test]
    fn meromorphic_round_trip(k in 2i64..=4, plus in coefficient_strategy()) {
        let _g = PrecisionGuard::new(128);
        let rho = UpperHalfPoint::<BigFloat>::from_f64(-0.2, 1.1).unwrap();
        let truth = synthetic(&rho, 2 * k, ExpansionKind::Meromorphic, &plus, &[]);
        let field = FieldSample::new(truth.weight, |z: &UpperHalfPoint<BigFloat>| elliptic_eval(&truth, z));
        let got = extract_expansion(&field, &rho, ExpansionKind::Meromorphic, -8..=8, &ExtractionParams::default()).unwrap();
        prop_assert!(worst_relative(&truth, &got) <= 1e-20);
    }
}

#[test]
#[allow(clippy::reversed_empty_ranges)]
fn extraction_rejects_bad_parameters() {
    let rho = UpperHalfPoint::<f64>::from_f64(0.0, 1.2).unwrap();
    let field = FieldSample::new(4, |_: &UpperHalfPoint<f64>| Ok(Cx::from_f64(1.0, 0.0)));
    for params in [
        ExtractionParams { radius: 1.0, ..Default::default() },
        ExtractionParams { radius: 0.3, radius2: 0.3, m_quad: 64 },
        ExtractionParams { m_quad: 2, ..Default::default() },
    ] {
        assert!(extract_expansion(&field, &rho, ExpansionKind::Meromorphic, 0..=1, &params).is_err());
    }
    // M_quad = 64 resolves |n| < 32 only
    assert!(extract_expansion(&field, &rho, ExpansionKind::Meromorphic, -32..=0, &ExtractionParams::default()).is_err());
    let empty =
        extract_expansion(&field, &rho, ExpansionKind::Meromorphic, 1..=0, &ExtractionParams::default()).unwrap();
    assert!(empty.c_plus.is_empty() && empty.c_minus.is_empty());
}

fn psi_expansion(n_cd: i64, radius: f64) -> (EllipticExpansion<f64>, f64) {
    let base = UpperHalfPoint::from_f64(0.11, 1.31).unwrap();
    let rho = UpperHalfPoint::from_f64(-0.23, 0.97).unwrap();
    let l =
        LatticeSum::new(&TruncationParams { precision_bits: 53, ..TruncationParams::with_bounds(n_cd, n_cd) }).unwrap();
    let f = |z: &UpperHalfPoint<f64>| {
        Ok(l.eval_many(SeriesKind::Psi, 2, &[-1], &base, z)?.into_iter().map(|v| v.value).collect())
    };
    let tail = l.eval_many(SeriesKind::Psi, 2, &[-1], &base, &rho).unwrap()[0].tail_estimate;
    let params = ExtractionParams { radius, radius2: 0.04, m_quad: 64 };
    (extract_many(&f, &rho, 4, ExpansionKind::Meromorphic, -3..=3, &params).unwrap().remove(0), tail)
}

#[test]
fn psi_coefficients_do_not_depend_on_the_radius() {
    for n_cd in [10, 20, 40] {
        // an orbit point of the base lies at |X| < 0.2 around this center
        let (a, tail) = psi_expansion(n_cd, 0.06);
        let (b, _) = psi_expansion(n_cd, 0.1);
        let scale = (0..=3).map(|n| a.c_plus_at(n).abs()).fold(0.0, f64::max);
        let gap = (-3..=3).map(|n| (a.c_plus_at(n) - &b.c_plus_at(n)).abs()).fold(0.0, f64::max);
        println!("N_cd {n_cd}: gap {gap:e} scale {scale:e} tail {tail:e}");
        assert!(gap <= tail * scale.max(1.0), "N_cd {n_cd}: gap {gap:e}, tail {tail:e}");
    }
}

#[test]
fn harmonic_series_has_no_nonmeromorphic_part_at_nonnegative_indices() {
    let base = UpperHalfPoint::from_f64(0.11, 1.31).unwrap();
    let rho = UpperHalfPoint::from_f64(-0.23, 0.97).unwrap();
    let params = ExtractionParams { radius: 0.1, radius2: 0.06, m_quad: 64 };
    let mut previous = f64::INFINITY;
    for n_cd in [10, 20, 40] {
        let l = LatticeSum::new(&TruncationParams { precision_bits: 53, ..TruncationParams::with_bounds(n_cd, n_cd) })
            .unwrap();
        let f = |z: &UpperHalfPoint<f64>| {
            Ok(l.eval_many(SeriesKind::P, 2, &[-1, -2], &base, z)?.into_iter().map(|v| v.value).collect())
        };
        let exps = extract_many(&f, &rho, -2, ExpansionKind::Harmonic, -3..=3, &params).unwrap();
        let tail = l
            .eval_many(SeriesKind::P, 2, &[-1, -2], &base, &rho)
            .unwrap()
            .iter()
            .map(|v| v.tail_estimate)
            .fold(0.0, f64::max);
        let worst = exps.iter().map(|e| (0..=3).map(|n| e.c_minus_at(n).abs()).fold(0.0, f64::max)).fold(0.0, f64::max);
        let size = exps.iter().map(|e| e.c_minus_at(-1).abs()).fold(0.0, f64::max);
        println!("N_cd {n_cd}: c_minus(n>=0) {worst:e}, c_minus(-1) {size:e}, tail {tail:e}");
        assert!(worst <= tail, "N_cd {n_cd}: {worst:e} vs tail {tail:e}");
        assert!(worst <= previous);
        previous = worst;
    }
}
