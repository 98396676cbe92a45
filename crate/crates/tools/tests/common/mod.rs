#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;
use sseq_core::chart::{NewClass, Options};
use sseq_core::tau::BigradedDims;
use sseq_core::{Bidegree, Chart, ClassRef, Grading};

#[derive(Clone, Debug)]
pub enum Op {
    Class { stem: i32, filtration: i32, name: Option<String>, tag: Option<String>, options: Options },
    Differential { page: u32, source: usize, target: usize },
    Replace { class: usize, options: Options },
    Line { source: usize, target: usize, label: Option<String>, page: Option<u32>, options: Options },
}

#[derive(Clone, Debug)]
pub struct Recipe {
    pub grading: Grading,
    pub lax: bool,
    pub ops: Vec<Op>,
}

fn grading() -> impl Strategy<Value = Grading> {
    prop_oneof![
        Just(Grading::Adams),
        Just(Grading::SerreCohomological),
        Just(Grading::SerreHomological),
        (-2i32..3, -2i32..3, -2i32..3, -2i32..3).prop_map(|(a, b, c, d)| Grading::Custom {
            stem_slope: a,
            stem_offset: b,
            filtration_slope: c,
            filtration_offset: d,
        }),
    ]
}

fn value() -> impl Strategy<Value = String> {
    prop_oneof![
        "[a-z0-9]{1,6}",
        Just(String::new()),
        Just("two words".to_string()),
        Just("quote\"inside".to_string()),
        Just("back\\slash".to_string()),
        Just("#hash".to_string()),
        Just("\"leading".to_string()),
        Just("line\nbreak\r".to_string()),
        Just("a=b".to_string()),
        Just("η·2".to_string()),
    ]
}

fn options() -> impl Strategy<Value = Options> {
    prop::collection::btree_map("[a-z][a-z_-]{0,4}", value(), 0..3)
}

fn op() -> impl Strategy<Value = Op> {
    let index = 0usize..64;
    prop_oneof![
        4 => (-3i32..6, -3i32..6, prop::option::of("[a-z][A-Za-z0-9_^{}/-]{0,5}"), prop::option::of("[a-z]{1,4}"), options())
            .prop_map(|(stem, filtration, name, tag, options)| Op::Class { stem, filtration, name, tag, options }),
        3 => (2u32..6, index.clone(), index.clone())
            .prop_map(|(page, source, target)| Op::Differential { page, source, target }),
        1 => (index.clone(), options()).prop_map(|(class, options)| Op::Replace { class, options }),
        2 => (index.clone(), index, prop::option::of(value()), prop::option::of(0u32..8), options())
            .prop_map(|(source, target, label, page, options)| Op::Line { source, target, label, page, options }),
    ]
}

pub fn recipe() -> impl Strategy<Value = Recipe> {
    (grading(), any::<bool>(), prop::collection::vec(op(), 0..40))
        .prop_map(|(grading, lax, ops)| Recipe { grading, lax, ops })
}

/// Applies the recipe, skipping operations the chart rejects. In strict mode
/// a differential's target is placed where the grading requires.
pub fn build(recipe: &Recipe) -> Chart {
    let mut chart = Chart::new(recipe.grading);
    chart.set_strict_degree(!recipe.lax);
    let mut refs: Vec<ClassRef> = Vec::new();
    let mut names = BTreeSet::new();
    for op in &recipe.ops {
        match op {
            Op::Class { stem, filtration, name, tag, options } => {
                let name = name.clone().filter(|n| names.insert(n.clone()));
                let r = chart.add_class_with(
                    Bidegree::new(*stem, *filtration),
                    NewClass { name, tag: tag.clone(), options: options.clone() },
                );
                refs.push(r);
            }
            Op::Differential { page, source, target } if !refs.is_empty() => {
                let s = refs[source % refs.len()];
                let t = if recipe.lax {
                    refs[target % refs.len()]
                } else {
                    let (dn, ds) = recipe.grading.displacement(*page);
                    let pos = s.position.shifted(dn, ds);
                    let stacked = chart.classes_at(pos).len();
                    if stacked == 0 {
                        let r = chart.add_class(pos);
                        refs.push(r);
                        r
                    } else {
                        ClassRef::at(pos, (*target % stacked) as u32)
                    }
                };
                let _ = chart.add_differential(*page, s, t);
            }
            Op::Replace { class, options } if !refs.is_empty() => {
                let r = refs[class % refs.len()];
                if let Some(died) = chart.class(r).and_then(|c| c.latest().died) {
                    chart.replace_class_with(r, died, options.clone()).unwrap();
                }
            }
            Op::Line { source, target, label, page, options } if !refs.is_empty() => {
                let s = refs[source % refs.len()];
                let t = refs[target % refs.len()];
                let _ = chart.add_structline_with(s, t, label.clone(), *page, options.clone());
            }
            _ => {}
        }
    }
    chart
}

#[derive(Clone, Debug)]
pub enum AdamsEvent {
    Class(i32, i32),
    /// A fresh target at `(stem, filtration)` and a fresh source hitting it.
    Differential(u32, i32, i32),
}

pub fn adams_event() -> impl Strategy<Value = AdamsEvent> {
    prop_oneof![
        (0..10i32, 0..8i32).prop_map(|(n, s)| AdamsEvent::Class(n, s)),
        (2..7u32, 0..10i32, 0..12i32).prop_map(|(p, n, s)| AdamsEvent::Differential(p, n, s)),
    ]
}

pub fn adams_chart(events: &[AdamsEvent]) -> Chart {
    let mut chart = Chart::new(Grading::Adams);
    for e in events {
        match *e {
            AdamsEvent::Class(n, s) => {
                chart.add_class(Bidegree::new(n, s));
            }
            AdamsEvent::Differential(page, n, s) => {
                let target = chart.add_class(Bidegree::new(n, s));
                let source = chart.add_class(Bidegree::new(n + 1, s - page as i32));
                chart.add_differential(page, source, target).unwrap();
            }
        }
    }
    chart
}

pub fn e2_dims(chart: &Chart) -> BTreeMap<(i32, i32), u32> {
    let mut out = BTreeMap::new();
    for c in chart.classes() {
        *out.entry((c.position.stem, c.position.weight())).or_insert(0) += 1;
    }
    out
}

pub fn nonzero(dims: &BigradedDims) -> BTreeMap<(i32, i32), u32> {
    dims.iter().filter(|(_, d)| *d > 0).collect()
}

/// Ranks along `Cτ(a, b+k) -> Cτ^{k+1}(a, b) -> Cτ^k(a, b) -> Cτ(a-1, b+k) -> ...`
/// for descending `a` must be nonnegative and end at zero.
pub fn exact_at_weight(
    one: &BigradedDims,
    k_plus_one: &BigradedDims,
    k_only: &BigradedDims,
    k: i32,
    b: i32,
    stems: (i32, i32),
) -> bool {
    let mut rank: i64 = 0;
    for a in (stems.0 - 1..=stems.1 + 1).rev() {
        for d in [one.get(a, b + k), k_plus_one.get(a, b), k_only.get(a, b)] {
            rank = i64::from(d) - rank;
            if rank < 0 {
                return false;
            }
        }
    }
    rank == 0
}

pub fn count(svg: &str, needle: &str) -> usize {
    svg.matches(needle).count()
}

/// The chart of the introductory Serre example: four classes and one `d_3`.
pub fn intro_chart() -> Chart {
    let mut c = Chart::new(Grading::SerreCohomological);
    c.add_class(Bidegree::new(0, 0));
    let src = c.add_class(Bidegree::new(0, 2));
    let tgt = c.add_class(Bidegree::new(3, 0));
    c.add_class(Bidegree::new(3, 2));
    c.add_differential(3, src, tgt).unwrap();
    c
}
