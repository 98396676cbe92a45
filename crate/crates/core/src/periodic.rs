//! v₁-periodic chart patterns.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::ops::RangeInclusive;

use crate::chart::{Bidegree, Chart, ClassRef, Grading, NewClass, Options};
use crate::vline::{band_counts, VlParams};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PeriodicError {
    /// Stem period must be positive.
    BadPeriod((i32, i32)),
    OffsetOutOfPeriod { class: usize, stem_offset: i32 },
    UnknownPatternClass(usize),
    GradingMismatch,
}

impl fmt::Display for PeriodicError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PeriodicError::BadPeriod((n, s)) => write!(f, "invalid period ({n},{s})"),
            PeriodicError::OffsetOutOfPeriod { class, stem_offset } => {
                write!(f, "pattern class {class} has stem offset {stem_offset} outside the period")
            }
            PeriodicError::UnknownPatternClass(i) => write!(f, "no pattern class {i}"),
            PeriodicError::GradingMismatch => f.write_str("charts use different gradings"),
        }
    }
}

impl core::error::Error for PeriodicError {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternClass {
    pub stem: i32,
    pub filtration: i32,
    pub tag: Option<String>,
    pub options: Options,
}

/// A structure line from `source` in period `j` to `target` in period
/// `j + period_step`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternLine {
    pub source: usize,
    pub target: usize,
    pub period_step: i32,
    pub label: Option<String>,
    pub options: Options,
}

/// Classes and lines of one fundamental domain, repeated by `period`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodicPattern {
    grading: Grading,
    period: (i32, i32),
    classes: Vec<PatternClass>,
    lines: Vec<PatternLine>,
}

impl PeriodicPattern {
    pub fn new(
        grading: Grading,
        period: (i32, i32),
        classes: Vec<PatternClass>,
        lines: Vec<PatternLine>,
    ) -> Result<Self, PeriodicError> {
        if period.0 <= 0 {
            return Err(PeriodicError::BadPeriod(period));
        }
        for (i, c) in classes.iter().enumerate() {
            if !(0..period.0).contains(&c.stem) {
                return Err(PeriodicError::OffsetOutOfPeriod {
                    class: i,
                    stem_offset: c.stem,
                });
            }
        }
        for l in &lines {
            for end in [l.source, l.target] {
                if end >= classes.len() {
                    return Err(PeriodicError::UnknownPatternClass(end));
                }
            }
        }
        Ok(PeriodicPattern {
            grading,
            period,
            classes,
            lines,
        })
    }

    pub fn empty(grading: Grading, period: (i32, i32)) -> Result<Self, PeriodicError> {
        Self::new(grading, period, Vec::new(), Vec::new())
    }

    pub fn grading(&self) -> Grading {
        self.grading
    }

    pub fn period(&self) -> (i32, i32) {
        self.period
    }

    pub fn classes(&self) -> &[PatternClass] {
        &self.classes
    }

    pub fn lines(&self) -> &[PatternLine] {
        &self.lines
    }

    /// Class counts by stem offset within one period.
    pub fn counts_by_residue(&self) -> Vec<u32> {
        let mut out = alloc::vec![0; self.period.0 as usize];
        for c in &self.classes {
            out[c.stem as usize] += 1;
        }
        out
    }
}

/// Copies of the pattern at `base + j·period` for every integer `j`, keeping
/// classes with stem in `stems` and, if given, filtration in `filtrations`.
///
/// Classes are added by increasing `j` and then in pattern order, so indices
/// are deterministic. A line is kept when both of its endpoints are.
pub fn tile(
    pattern: &PeriodicPattern,
    base: Bidegree,
    stems: RangeInclusive<i32>,
    filtrations: Option<RangeInclusive<i32>>,
) -> Chart {
    let mut chart = Chart::new(pattern.grading);
    if stems.is_empty() || pattern.classes.is_empty() {
        return chart;
    }
    let (dn, ds) = pattern.period;
    let j_lo = (stems.start() - base.stem - (dn - 1)).div_euclid(dn);
    let j_hi = (stems.end() - base.stem).div_euclid(dn);
    let mut placed: BTreeMap<(i32, usize), ClassRef> = BTreeMap::new();
    for j in j_lo..=j_hi {
        for (i, c) in pattern.classes.iter().enumerate() {
            let pos = base.shifted(j * dn + c.stem, j * ds + c.filtration);
            let keep = stems.contains(&pos.stem)
                && filtrations.as_ref().is_none_or(|f| f.contains(&pos.filtration));
            if keep {
                let r = chart.add_class_with(
                    pos,
                    NewClass {
                        name: None,
                        tag: c.tag.clone(),
                        options: c.options.clone(),
                    },
                );
                placed.insert((j, i), r);
            }
        }
    }
    for j in j_lo..=j_hi {
        for l in &pattern.lines {
            let src = placed.get(&(j, l.source));
            let tgt = placed.get(&(j + l.period_step, l.target));
            if let (Some(&s), Some(&t)) = (src, tgt) {
                chart
                    .add_structline_with(s, t, l.label.clone(), None, l.options.clone())
                    .expect("endpoints were just added");
            }
        }
    }
    chart
}

/// Version of the built-in C(2) pattern data.
pub const C2_PATTERN_VERSION: u32 = 1;

fn class(stem: i32, filtration: i32, tag: &str) -> PatternClass {
    PatternClass {
        stem,
        filtration,
        tag: Some(String::from(tag)),
        options: Options::new(),
    }
}

fn eta(source: usize, target: usize, period_step: i32) -> PatternLine {
    PatternLine {
        source,
        target,
        period_step,
        label: None,
        options: Options::new(),
    }
}

fn times_two(source: usize, target: usize) -> PatternLine {
    let mut options = Options::new();
    options.insert(String::from("style"), String::from("dotted"));
    PatternLine {
        source,
        target,
        period_step: 0,
        label: Some(String::from("2")),
        options,
    }
}

/// The surviving band of the Adams chart of the mod 2 Moore spectrum C(2),
/// with period `(8, 4)` and offsets relative to `(8k, 4k)`.
///
/// Each stem `8k + j` carries `log₂ |π_{8k+j} L_{K(1)} C(2)|` classes: those
/// tagged `coker` come from `coker(2)` on the sphere in the same stem and
/// those tagged `ker` from `ker(2)` one stem lower. The two dotted `2`
/// lines are the extensions producing `Z/4` in stems `8k+1` and `8k+2`; the
/// remaining lines are η multiplications.
pub fn c2_periodic_pattern() -> PeriodicPattern {
    let classes = alloc::vec![
        class(0, -1, "ker"),  // 0
        class(0, 0, "coker"), // 1
        class(1, -1, "ker"),  // 2
        class(1, 0, "coker"), // 3
        class(1, 0, "coker"), // 4
        class(2, 0, "ker"),   // 5
        class(2, 0, "ker"),   // 6
        class(2, 1, "coker"), // 7
        class(3, 0, "ker"),   // 8
        class(3, 1, "coker"), // 9
        class(4, 1, "ker"),   // 10
        class(7, 2, "coker"), // 11
    ];
    let lines = alloc::vec![
        times_two(2, 3),
        times_two(6, 7),
        eta(0, 3, 0),
        eta(2, 5, 0),
        eta(4, 7, 0),
        eta(6, 9, 0),
        eta(8, 10, 0),
        eta(11, 0, 1),
    ];
    PeriodicPattern::new(Grading::Adams, (8, 4), classes, lines).expect("valid built-in pattern")
}

/// The η-tower pattern of `Cτ ⊗ Ỹ` near its band: period `(2, 1)`, base
/// `(27, 12)`, with one line per period joining successive bottom classes.
pub fn ytilde_pattern() -> PeriodicPattern {
    let plain = |stem, filtration| PatternClass {
        stem,
        filtration,
        tag: None,
        options: Options::new(),
    };
    let classes = alloc::vec![plain(0, 0), plain(1, 2), plain(1, -1)];
    let lines = alloc::vec![eta(0, 0, 1)];
    PeriodicPattern::new(Grading::Adams, (2, 1), classes, lines).expect("valid built-in pattern")
}

pub const YTILDE_BASE: Bidegree = Bidegree::new(27, 12);

/// Upper bound for the middle term of a cofiber sequence `A -> B -> C`:
/// `chart_c` with every class marked `origin=quot`, then `chart_a` shifted
/// and marked `origin=sub`, its classes indexed after those of `chart_c`.
pub fn cofiber_overlay(
    chart_a: &Chart,
    shift: (i32, i32),
    chart_c: &Chart,
) -> Result<Chart, PeriodicError> {
    if chart_a.grading() != chart_c.grading() {
        return Err(PeriodicError::GradingMismatch);
    }
    let mut out = chart_c.clone();
    out.mark_all("origin", "quot");
    let mut sub = chart_a.shift(shift.0, shift.1);
    sub.mark_all("origin", "sub");
    out.absorb(sub);
    Ok(out)
}

/// Permanent band classes per stem (stems `>= v` only).
pub fn band_census(
    chart: &Chart,
    params: &VlParams,
    stems: RangeInclusive<i32>,
) -> BTreeMap<i32, u32> {
    band_counts(chart, params, stems)
}
