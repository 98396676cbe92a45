mod common;

use proptest::prelude::*;
use sseq_core::periodic::{band_census, c2_periodic_pattern, tile};
use sseq_core::vline::reference;
use sseq_core::{Bidegree, Rational};
use sseq_tools::render::{render_svg, GuideLine, LineStyle, RenderOptions};

#[test]
fn intro_example_pages() {
    let chart = common::intro_chart();
    let page3 = render_svg(&chart, &RenderOptions { page: 3, ..Default::default() }).unwrap();
    assert_eq!(common::count(&page3, "<circle"), 4);
    assert_eq!(common::count(&page3, "marker-end="), 1);
    let page4 = render_svg(&chart, &RenderOptions { page: 4, ..Default::default() }).unwrap();
    assert_eq!(common::count(&page4, "<circle"), 2);
    assert_eq!(common::count(&page4, "marker-end="), 0);
}

#[test]
fn c2_band_with_guides() {
    let chart = tile(&c2_periodic_pattern(), Bidegree::new(0, 0), 25..=40, None);
    let guide = |m: Rational, c: Rational, style| GuideLine { slope: m, intercept: c, style };
    let options = RenderOptions {
        page: 2,
        x_range: Some((25, 40)),
        y_range: Some((8, 22)),
        guides: vec![
            guide(Rational::new(1, 2), Rational::new(-3, 2), LineStyle::Solid),
            guide(Rational::new(1, 2), Rational::from_integer(0), LineStyle::Dashed),
            guide(Rational::new(1, 5), Rational::from_integer(5), LineStyle::Dotted),
        ],
        ..Default::default()
    };
    let svg = render_svg(&chart, &options).unwrap();
    let census: u32 = band_census(&chart, &reference::c2(), 25..=40).values().sum();
    assert_eq!(common::count(&svg, "<circle") as u32, census);
    assert_eq!(common::count(&svg, "class=\"guide\""), 3);
    assert_eq!(common::count(&svg, "stroke-dasharray=\"2,3\""), 1 + 2 * 2);
    assert_eq!(svg, render_svg(&chart, &options).unwrap());
}

#[test]
fn guides_outside_the_range_are_dropped() {
    let chart = common::intro_chart();
    let options = RenderOptions {
        guides: vec![GuideLine { slope: Rational::from_integer(0), intercept: Rational::from_integer(50), style: LineStyle::Solid }],
        ..Default::default()
    };
    let svg = render_svg(&chart, &options).unwrap();
    assert_eq!(common::count(&svg, "class=\"guide\""), 0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn element_counts_match_visibility(recipe in common::recipe(), page in 2u32..8) {
        let chart = common::build(&recipe);
        let visible = chart.visible_classes(page);
        let crowded = visible.iter().fold(std::collections::BTreeMap::new(), |mut m, (r, _)| {
            *m.entry(r.position).or_insert(0) += 1;
            m
        });
        prop_assume!(crowded.values().all(|&n| n <= 6));
        let options = RenderOptions { page, x_range: Some((-500, 500)), y_range: Some((-500, 500)), ..Default::default() };
        let svg = render_svg(&chart, &options).unwrap();
        let (ds, ls) = chart.visible_edges(page, None);
        prop_assert_eq!(common::count(&svg, "<circle"), visible.len());
        prop_assert_eq!(common::count(&svg, "marker-end="), ds.len());
        prop_assert_eq!(common::count(&svg, "class=\"structline\""), ls.len());
        prop_assert_eq!(render_svg(&chart, &options).unwrap(), svg);
    }
}
