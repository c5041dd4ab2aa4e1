use eisenkron_padic::{kummer_check, moments, restrict_unit_s, KummerViolation, MeasureMoments, TruncatedSeries2};
use proptest::prelude::*;

const P: u64 = 5;

#[test]
fn unit_dirac_passes() {
    for a in [1i64, 2, 3, 7, 24] {
        let col: Vec<i64> = (0..=12u32).map(|k| a.pow(k) % 15625).collect();
        let mm = MeasureMoments::from_column(P, 6, &col).unwrap();
        let report = kummer_check(&mm).unwrap();
        assert!(report.passed(), "a = {a}: {:?}", report.violations);
        assert!(report.congruences_checked > 0 && report.mahler_checked > 0);
    }
}

#[test]
fn identity_grid_fails() {
    let col: Vec<i64> = (0..=12).collect();
    let mm = MeasureMoments::from_column(P, 6, &col).unwrap();
    let report = kummer_check(&mm).unwrap();
    assert!(!report.passed());
    assert!(report.violations.contains(&KummerViolation::Congruence { k: 0, k2: 4, l: 0, exp: 1 }));
}

#[test]
fn dirac_at_p_fails_only_kummer() {
    // supported on pZ_p: still a measure, but not on the units
    let col: Vec<i64> = (0..=8u32).map(|k| 5i64.pow(k) % 15625).collect();
    let report = kummer_check(&MeasureMoments::from_column(P, 6, &col).unwrap()).unwrap();
    assert!(report.violations.iter().all(|v| matches!(v, KummerViolation::Congruence { .. })));
    assert!(!report.passed());
}

#[test]
fn short_grids_are_rejected() {
    let mm = MeasureMoments::from_column(P, 6, &[1, 1, 1]).unwrap();
    assert!(kummer_check(&mm).is_err());
    assert!(MeasureMoments::new(P, 6, vec![vec![1, 2], vec![3]]).is_err());
}

#[test]
fn grid_series_round_trip() {
    let mm = MeasureMoments::new(P, 4, vec![vec![1, 2], vec![3, 700]]).unwrap();
    let s = mm.to_series().unwrap();
    assert_eq!(s.get(1, 1), 700 % 625);
    assert_eq!(s.get(1, 0), 3);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn restricted_measures_pass(c in proptest::collection::vec(0i64..15625, 9 * 3)) {
        let f = TruncatedSeries2::from_coeffs(P, 6, 8, 2, &c).unwrap();
        let r = restrict_unit_s(&f).unwrap();
        let report = kummer_check(&moments(&r, 12, 2).unwrap()).unwrap();
        prop_assert!(report.passed(), "violations: {:?}", report.violations.len());
        // Mahler integrality holds for any measure
        let full = kummer_check(&moments(&f, 12, 2).unwrap()).unwrap();
        let only_kummer = full.violations.iter().all(|v| matches!(v, KummerViolation::Congruence { .. }));
        prop_assert!(only_kummer);
    }
}
