use levy_mart::constants::{
    burkholder_constant, choi_alpha2, choi_constant_approx, constant_report, cpbb_bounds, p_star,
    IntervalCase,
};
use proptest::prelude::*;

// Frozen to 20 digits from an independent 50-digit evaluation.
const HALF_LOG: f64 = -0.283_109_584_758_486_406_49;
const ALPHA2: f64 = 0.009_075_889_932_781_910_71;
const CHOI_2: f64 = 0.721_428_360_207_904_548_87;
const CHOI_3: f64 = 1.219_915_711_885_774_230_42;

#[test]
fn choi_expansion_frozen_values() {
    assert!((choi_alpha2::<f64>() - ALPHA2).abs() < 1e-16);
    let c2 = choi_constant_approx(2.0).unwrap();
    assert!((c2.constant - HALF_LOG).abs() < 1e-16);
    assert!((c2.value - CHOI_2).abs() < 1e-15);
    assert!(c2.asymptotic);
    let c3 = choi_constant_approx(3.0).unwrap();
    assert!((c3.value - CHOI_3).abs() < 1e-15);
    assert!((c3.leading - 1.5).abs() < 1e-16 && (c3.correction - ALPHA2 / 3.0).abs() < 1e-16);
}

#[test]
fn report_bundles_interval_bounds() {
    let r = constant_report(3.0, Some((0.0, 2.0))).unwrap();
    assert_eq!((r.p_star, r.burkholder), (3.0, 2.0));
    let (_, _, bounds) = r.interval.unwrap();
    assert_eq!(bounds.case, IntervalCase::OneSided);
    assert!((bounds.value.unwrap() - 2.0 * CHOI_3).abs() < 1e-14);
    // the one-sided value sits inside the sandwich
    assert!(bounds.lower <= bounds.value.unwrap() && bounds.value.unwrap() <= bounds.upper);
    assert!(constant_report(0.5, None).is_err());
}

proptest! {
    #[test]
    fn sandwich_is_ordered(p in 1.01f64..12.0, b in -5.0f64..5.0, w in 1e-3f64..6.0) {
        let r = cpbb_bounds(p, b, b + w).unwrap();
        prop_assert!(r.lower <= r.upper * (1.0 + 1e-15));
        if let Some(v) = r.value {
            prop_assert!(v.is_finite());
        }
    }

    #[test]
    fn burkholder_is_self_dual(p in 1.01f64..30.0) {
        let q = p / (p - 1.0);
        let (a, b) = (burkholder_constant(p).unwrap(), burkholder_constant(q).unwrap());
        prop_assert!((a - b).abs() <= 1e-12 * a.max(1.0));
        prop_assert!(p_star(p).unwrap() >= 2.0 - 1e-15);
    }

    #[test]
    fn symmetric_interval_collapses(p in 1.01f64..12.0, a in 1e-3f64..10.0) {
        let r = cpbb_bounds(p, -a, a).unwrap();
        prop_assert_eq!(r.case, IntervalCase::Symmetric);
        prop_assert_eq!(r.lower, r.upper);
        prop_assert!((r.lower - a * burkholder_constant(p).unwrap()).abs() <= 1e-14 * r.lower.max(1.0));
    }
}
