use proptest::prelude::*;
use sseq_core::chart::Bidegree;
use sseq_core::k1::moore_orders;
use sseq_core::periodic::{
    band_census, c2_periodic_pattern, cofiber_overlay, tile, ytilde_pattern, YTILDE_BASE,
};
use sseq_core::vline::{reference, verify_banded, Condition, Witness};

proptest! {
    #[test]
    fn tile_commutes_with_shift(lo in -40i32..40, len in 0i32..40, dn in -20i32..20, ds in -20i32..20) {
        let p = c2_periodic_pattern();
        let base = Bidegree::new(0, 0);
        let hi = lo + len;
        let moved = tile(&p, base.shifted(dn, ds), lo + dn..=hi + dn, None);
        prop_assert_eq!(moved, tile(&p, base, lo..=hi, None).shift(dn, ds));
    }

    #[test]
    fn overlay_counts_add(lo in 20i32..40, len in 0i32..12, dn in -3i32..3, ds in -3i32..3) {
        let y = tile(&ytilde_pattern(), YTILDE_BASE, lo..=lo + len, None);
        let c = tile(&c2_periodic_pattern(), Bidegree::new(0, 0), lo..=lo + len, None);
        let over = cofiber_overlay(&y, (dn, ds), &c).unwrap();
        let shifted = y.shift(dn, ds);
        prop_assert_eq!(over.class_count(), y.class_count() + c.class_count());
        for cls in over.classes() {
            let pos = cls.position;
            let expect = shifted.classes_at(pos).len() + c.classes_at(pos).len();
            prop_assert_eq!(over.classes_at(pos).len(), expect);
        }
    }
}

#[test]
fn census_order_duality() {
    let chart = tile(&c2_periodic_pattern(), Bidegree::new(0, 0), 25..=97, None);
    let census = band_census(&chart, &reference::c2(), 25..=97);
    assert_eq!(census.len(), 73);
    for (n, count) in census {
        assert_eq!(1u64 << count, moore_orders()[n.rem_euclid(8) as usize], "stem {n}");
    }
}

#[test]
fn c2_chart_satisfies_the_band() {
    let chart = tile(&c2_periodic_pattern(), Bidegree::new(0, 0), 25..=80, None);
    let report = verify_banded(&chart, &reference::c2(), 25..=80, &moore_orders());
    assert!(report.passed(), "{report}");
}

#[test]
fn tighter_band_fails_the_gap_condition() {
    let chart = tile(&c2_periodic_pattern(), Bidegree::new(0, 0), 25..=80, None);
    let mut params = reference::c2();
    params.b = sseq_core::Rational::new(-1, 2);
    let report = verify_banded(&chart, &params, 25..=80, &moore_orders());
    let gap = report.condition(Condition::FiltrationIsomorphism);
    assert!(!gap.passed());
    let stems: Vec<i32> = gap
        .witnesses
        .iter()
        .map(|w| match w {
            Witness::Class(c) => c.position.stem,
            other => panic!("unexpected witness {other:?}"),
        })
        .collect();
    assert!(stems.iter().any(|n| n.rem_euclid(8) == 1));
    for n in 25..=80 {
        if n % 8 == 1 {
            assert!(stems.contains(&n), "stem {n}");
        }
    }
}
