//! v₁-banded vanishing-line parameter tuples `(b <= d, v, m, c, r)`.
//!
//! `b` and `d` are the intercepts of the band edges `s = n/2 + b` and
//! `s = n/2 + d`, `v` is the range of validity (`n >= v`), `s = m·n + c` is
//! the line above which τ-power torsion is `τ^r`-torsion, and `r` is that
//! torsion bound. Every entry except `r` is an exact rational.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::ops::RangeInclusive;
use core::str::FromStr;

use num_traits::Zero;

use crate::chart::{Bidegree, Chart, ClassRef, Differential};
use crate::rational::{self, floor, half, int, parse_rational, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct VlParams {
    pub b: Rational,
    pub d: Rational,
    pub v: Rational,
    pub m: Rational,
    pub c: Rational,
    pub r: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VlError {
    SlopeMismatch { left: Rational, right: Rational },
    /// `b <= d`, `0 <= m < 1/2` or `r >= 1` does not hold.
    Invalid(&'static str),
    Parse(String),
}

impl fmt::Display for VlError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VlError::SlopeMismatch { left, right } => {
                write!(f, "slopes differ: {left} vs {right}")
            }
            VlError::Invalid(why) => write!(f, "invalid parameters: {why}"),
            VlError::Parse(why) => write!(f, "cannot parse parameter tuple: {why}"),
        }
    }
}

impl core::error::Error for VlError {}

impl VlParams {
    pub fn new(
        b: Rational,
        d: Rational,
        v: Rational,
        m: Rational,
        c: Rational,
        r: u32,
    ) -> Result<Self, VlError> {
        if b > d {
            return Err(VlError::Invalid("band intercepts need b <= d"));
        }
        if m < Rational::zero() || m >= half() {
            return Err(VlError::Invalid("slope needs 0 <= m < 1/2"));
        }
        if r == 0 {
            return Err(VlError::Invalid("torsion bound needs r >= 1"));
        }
        Ok(VlParams { b, d, v, m, c, r })
    }

    /// Parameters for `Σ^{Δstem, Δstem + Δfiltration}`: every line moves by
    /// `(Δstem, Δfiltration)` in chart coordinates.
    pub fn suspend(&self, d_stem: i32, d_filtration: i32) -> VlParams {
        let dn = int(d_stem.into());
        let ds = int(d_filtration.into());
        VlParams {
            b: self.b + ds - dn * half(),
            d: self.d + ds - dn * half(),
            v: self.v + dn,
            m: self.m,
            c: self.c + ds - self.m * dn,
            r: self.r,
        }
    }

    /// Componentwise "at least as strong": narrower band from below and above,
    /// earlier validity, lower torsion line, smaller torsion bound, same slope.
    pub fn dominates(&self, other: &VlParams) -> bool {
        self.m == other.m
            && self.b >= other.b
            && self.d <= other.d
            && self.v <= other.v
            && self.c <= other.c
            && self.r <= other.r
    }

    pub fn region(&self, stem: i32, filtration: i32) -> Region {
        let n = int(stem.into());
        let s = int(filtration.into());
        if n < self.v {
            Region::OutOfValidity
        } else if s > n * half() + self.d {
            Region::AboveBand
        } else if s >= n * half() + self.b {
            Region::InBand
        } else if s >= self.m * n + self.c {
            Region::Gap
        } else {
            Region::Below
        }
    }

    /// `s >= m·n + c` and `n >= v`: the region where torsion is bounded by `τ^r`.
    pub fn in_torsion_region(&self, stem: i32, filtration: i32) -> bool {
        let n = int(stem.into());
        let s = int(filtration.into());
        n >= self.v && s >= self.m * n + self.c
    }
}

/// Parameters for the middle term `B` of a cofiber sequence `A -> B -> C`.
///
/// ```text
/// b_B = min(b_A, b_C - r_A)
/// d_B = max(d_A, d_C)
/// c_B = max(c_A + r_A, c_C)
/// v_B = max(v_A + 1, v_C, (c_B - b_B) / (1/2 - m))
/// r_B = r_A + max(r_C, floor(max(d_A, min(d_A + r_C, d_C)) - b_C - 1/2))
/// ```
pub fn combine_cofiber(a: &VlParams, c: &VlParams) -> Result<VlParams, VlError> {
    if a.m != c.m {
        return Err(VlError::SlopeMismatch {
            left: a.m,
            right: c.m,
        });
    }
    let m = a.m;
    let r_a = int(a.r.into());
    let r_c = int(c.r.into());
    let b = rational::min(a.b, c.b - r_a);
    let d = rational::max(a.d, c.d);
    let cc = rational::max(a.c + r_a, c.c);
    let v = rational::max(
        rational::max(a.v + int(1), c.v),
        (cc - b) / (half() - m),
    );
    let spread = floor(rational::max(a.d, rational::min(a.d + r_c, c.d)) - c.b - half());
    let r = i64::from(a.r) + i64::from(c.r).max(spread);
    let r = u32::try_from(r).map_err(|_| VlError::Invalid("torsion bound out of range"))?;
    VlParams::new(b, d, v, m, cc, r)
}

impl fmt::Display for VlParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}<={},{},{},{},{})",
            self.b, self.d, self.v, self.m, self.c, self.r
        )
    }
}

/// Parses `(b<=d,v,m,c,r)`. Whitespace is ignored; `≤` is accepted for `<=`;
/// entries may be `p/q`, integers or decimals.
impl FromStr for VlParams {
    type Err = VlError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let compact = compact.replace('≤', "<=");
        let inner = compact
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .ok_or_else(|| VlError::Parse("expected parentheses".into()))?;
        let parts: Vec<&str> = inner.split(',').collect();
        if parts.len() != 5 {
            return Err(VlError::Parse("expected five comma-separated entries".into()));
        }
        let (b, d) = parts[0]
            .split_once("<=")
            .ok_or_else(|| VlError::Parse("first entry must be b<=d".into()))?;
        let q = |s: &str| parse_rational(s).map_err(|e| VlError::Parse(alloc::format!("{e}: {s}")));
        let r: u32 = parts[4]
            .parse()
            .map_err(|_| VlError::Parse(alloc::format!("torsion bound must be a positive integer: {}", parts[4])))?;
        VlParams::new(q(b)?, q(d)?, q(parts[1])?, q(parts[2])?, q(parts[3])?, r)
    }
}

/// Published parameter tuples along the route from `Ỹ = C(2̃) ⊗ C(η̃)` to
/// `C(2̃)`, used as reference values.
pub mod reference {
    use super::VlParams;

    fn parse(text: &str) -> VlParams {
        text.parse().expect("valid reference tuple")
    }

    pub fn ytilde() -> VlParams {
        parse("(-3/2<=0,15,1/5,13/5,1)")
    }

    pub fn ytilde2_initial() -> VlParams {
        parse("(-5/2<=1/2,23,1/5,22/5,2)")
    }

    /// After the band's bottom edge is raised by one.
    pub fn ytilde2_improved() -> VlParams {
        parse("(-3/2<=1/2,23,1/5,22/5,2)")
    }

    pub fn ytilde3_initial() -> VlParams {
        parse("(-5/2<=1,29,1/5,31/5,3)")
    }

    pub fn ytilde3_improved() -> VlParams {
        parse("(-3/2<=1,29,1/5,31/5,3)")
    }

    pub fn c2() -> VlParams {
        parse("(-3/2<=1,25,1/5,5,3)")
    }
}

/// Replaces the bottom band intercept, as after an argument that rules out
/// the classes between the old and new edge.
pub fn raise_bottom(params: &VlParams, b: Rational) -> Result<VlParams, VlError> {
    if b < params.b {
        return Err(VlError::Invalid("raising the band cannot lower b"));
    }
    VlParams::new(b, params.d, params.v, params.m, params.c, params.r)
}

/// Every tuple of the `Ỹ -> Ỹ₂ -> Ỹ₃ -> C(2)` route computed from the formulas,
/// with the two band raisings applied as given.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pipeline {
    pub ytilde: VlParams,
    pub ytilde2: VlParams,
    pub ytilde2_raised: VlParams,
    pub ytilde3: VlParams,
    pub ytilde3_raised: VlParams,
    /// `Σ^{-4,-6}` of the raised `Ỹ₃` tuple.
    pub c2: VlParams,
    /// `Σ^{-4,-6}` of the published `Ỹ₃` tuple.
    pub c2_from_reference: VlParams,
}

pub fn pipeline() -> Pipeline {
    let ytilde = reference::ytilde();
    let ytilde2 = combine_cofiber(&ytilde.suspend(1, 1), &ytilde).expect("equal slopes");
    let ytilde2_raised = raise_bottom(&ytilde2, reference::ytilde2_improved().b).expect("raises b");
    let ytilde3 = combine_cofiber(&ytilde.suspend(2, 2), &ytilde2_raised).expect("equal slopes");
    let ytilde3_raised = raise_bottom(&ytilde3, reference::ytilde3_improved().b).expect("raises b");
    Pipeline {
        ytilde,
        ytilde2,
        ytilde2_raised,
        ytilde3,
        ytilde3_raised,
        c2: ytilde3_raised.suspend(-4, -2),
        c2_from_reference: reference::ytilde3_improved().suspend(-4, -2),
    }
}

/// Where a bidegree sits relative to a band.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Region {
    /// `s > n/2 + d`.
    AboveBand,
    /// `n/2 + b <= s <= n/2 + d`.
    InBand,
    /// `m·n + c <= s < n/2 + b`.
    Gap,
    Below,
    /// `n < v`.
    OutOfValidity,
}

/// The four band conditions, checked at chart level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Condition {
    /// τ-power torsion above the `m`-line is `τ^r`-torsion: differentials
    /// out of that region have page at most `r + 1`.
    TorsionBound,
    /// No surviving class between the `m`-line and the band.
    FiltrationIsomorphism,
    /// Surviving band classes account for the K(1)-local group orders.
    K1LocalComparison,
    /// Nothing above the band.
    Vanishing,
}

impl Condition {
    pub const ALL: [Condition; 4] = [
        Condition::TorsionBound,
        Condition::FiltrationIsomorphism,
        Condition::K1LocalComparison,
        Condition::Vanishing,
    ];

    pub fn number(self) -> u8 {
        match self {
            Condition::TorsionBound => 1,
            Condition::FiltrationIsomorphism => 2,
            Condition::K1LocalComparison => 3,
            Condition::Vanishing => 4,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    Class(ClassRef),
    Differential(Differential),
    Stem {
        stem: i32,
        expected_order: u64,
        band_classes: u32,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionReport {
    pub condition: Condition,
    /// False when there was no data to check against.
    pub checked: bool,
    pub witnesses: Vec<Witness>,
    pub note: Option<&'static str>,
}

impl ConditionReport {
    pub fn passed(&self) -> bool {
        self.witnesses.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegionReport {
    pub params: VlParams,
    pub stems: RangeInclusive<i32>,
    pub conditions: Vec<ConditionReport>,
}

impl RegionReport {
    pub fn passed(&self) -> bool {
        self.conditions.iter().all(ConditionReport::passed)
    }

    pub fn condition(&self, which: Condition) -> &ConditionReport {
        self.conditions
            .iter()
            .find(|c| c.condition == which)
            .expect("every condition is reported")
    }
}

impl fmt::Display for RegionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "params={} stems={}..{}",
            self.params,
            self.stems.start(),
            self.stems.end()
        )?;
        for c in &self.conditions {
            let verdict = match (c.checked, c.passed()) {
                (false, _) => "skipped",
                (true, true) => "pass",
                (true, false) => "fail",
            };
            write!(f, "condition={} status={}", c.condition.number(), verdict)?;
            if !c.witnesses.is_empty() {
                write!(f, " witnesses=")?;
                for (i, w) in c.witnesses.iter().enumerate() {
                    if i > 0 {
                        f.write_str(";")?;
                    }
                    match w {
                        Witness::Class(r) => write!(f, "{r}")?,
                        Witness::Differential(d) => {
                            write!(f, "d{}{}->{}", d.page, d.source, d.target)?
                        }
                        Witness::Stem {
                            stem,
                            expected_order,
                            band_classes,
                        } => write!(f, "stem{stem}:order{expected_order}/classes{band_classes}")?,
                    }
                }
            }
            if let Some(note) = c.note {
                write!(f, " note=\"{note}\"")?;
            }
            writeln!(f)?;
        }
        writeln!(f, "result={}", if self.passed() { "pass" } else { "fail" })
    }
}

/// Number of surviving (latest generation never dies) classes in the band,
/// per stem of `stems` with `stem >= v`.
pub fn band_counts(
    chart: &Chart,
    params: &VlParams,
    stems: RangeInclusive<i32>,
) -> alloc::collections::BTreeMap<i32, u32> {
    let mut out = alloc::collections::BTreeMap::new();
    for n in stems {
        if int(n.into()) < params.v {
            continue;
        }
        out.insert(n, 0);
    }
    for c in chart.classes().filter(|c| c.is_permanent()) {
        let Bidegree { stem, filtration } = c.position;
        if let Some(count) = out.get_mut(&stem) {
            if params.region(stem, filtration) == Region::InBand {
                *count += 1;
            }
        }
    }
    out
}

/// Checks the four band conditions on `stems` (only stems `>= v` count).
///
/// `k1_orders[i]` is the expected order of the K(1)-local group in stems
/// `n ≡ i (mod k1_orders.len())`; an empty slice skips condition (3).
/// Conditions (2) and (3) are checked on the associated graded only.
pub fn verify_banded(
    chart: &Chart,
    params: &VlParams,
    stems: RangeInclusive<i32>,
    k1_orders: &[u64],
) -> RegionReport {
    let in_range = |n: i32| stems.contains(&n) && int(n.into()) >= params.v;

    let mut torsion = Vec::new();
    for d in chart.differentials() {
        let p = d.source.position;
        if in_range(p.stem)
            && params.in_torsion_region(p.stem, p.filtration)
            && d.page > params.r + 1
        {
            torsion.push(Witness::Differential(*d));
        }
    }

    let mut gap = Vec::new();
    let mut above = Vec::new();
    for c in chart.classes() {
        let p = c.position;
        if !in_range(p.stem) {
            continue;
        }
        match params.region(p.stem, p.filtration) {
            Region::AboveBand => above.push(Witness::Class(c.reference())),
            Region::Gap if c.is_permanent() => gap.push(Witness::Class(c.reference())),
            _ => {}
        }
    }

    let mut k1 = Vec::new();
    let checked = !k1_orders.is_empty();
    if checked {
        let period = k1_orders.len() as i32;
        for (stem, count) in band_counts(chart, params, stems.clone()) {
            let expected = k1_orders[stem.rem_euclid(period) as usize];
            let order = 1u64.checked_shl(count);
            if order != Some(expected) {
                k1.push(Witness::Stem {
                    stem,
                    expected_order: expected,
                    band_classes: count,
                });
            }
        }
    }

    let note = Some("checked on the associated graded; filtered group structure is not visible in chart data");
    let conditions = alloc::vec![
        ConditionReport {
            condition: Condition::TorsionBound,
            checked: true,
            witnesses: torsion,
            note: None,
        },
        ConditionReport {
            condition: Condition::FiltrationIsomorphism,
            checked: true,
            witnesses: gap,
            note,
        },
        ConditionReport {
            condition: Condition::K1LocalComparison,
            checked,
            witnesses: k1,
            note,
        },
        ConditionReport {
            condition: Condition::Vanishing,
            checked: true,
            witnesses: above,
            note: None,
        },
    ];
    RegionReport {
        params: *params,
        stems,
        conditions,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chart::Grading;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn p(text: &str) -> VlParams {
        text.parse().unwrap()
    }

    #[test]
    fn parse_and_print() {
        let y = p("(-1.5 <= 0, 15, 0.2, 2.6, 1)");
        assert_eq!(y, VlParams::new(q(-3, 2), q(0, 1), q(15, 1), q(1, 5), q(13, 5), 1).unwrap());
        assert_eq!(alloc::format!("{y}"), "(-3/2<=0,15,1/5,13/5,1)");
        assert_eq!(p("(-3/2≤0,15,1/5,13/5,1)"), y);
        assert!("(1<=0,1,0,0,1)".parse::<VlParams>().is_err());
        assert!("(0<=0,1,1/2,0,1)".parse::<VlParams>().is_err());
        assert!("(0<=0,1,0,0,0)".parse::<VlParams>().is_err());
        assert!("0<=0,1,0,0,1".parse::<VlParams>().is_err());
        assert!("(0<=0,1,0,0)".parse::<VlParams>().is_err());
    }

    #[test]
    fn suspension_examples() {
        let y = p("(-1.5<=0,15,0.2,2.6,1)");
        assert_eq!(y.suspend(1, 1), p("(-1<=0.5,16,0.2,3.4,1)"));
        assert_eq!(y.suspend(0, 0), y);
        assert_eq!(
            p("(-1.5<=1,29,0.2,6.2,3)").suspend(-4, -2),
            p("(-1.5<=1,25,0.2,5,3)")
        );
        assert_eq!(y.suspend(3, -7).suspend(-3, 7), y);
    }

    #[test]
    fn combine_first_pipeline_step() {
        let y = p("(-1.5<=0,15,0.2,2.6,1)");
        let out = combine_cofiber(&y.suspend(1, 1), &y).unwrap();
        assert_eq!(out, p("(-2.5<=0.5,23,0.2,4.4,2)"));
    }

    #[test]
    fn combine_second_pipeline_step() {
        let y = p("(-1.5<=0,15,0.2,2.6,1)");
        let y2 = p("(-1.5<=0.5,23,0.2,4.4,2)");
        let a = y.suspend(2, 2);
        assert_eq!(a, p("(-0.5<=1,17,0.2,4.2,1)"));
        let out = combine_cofiber(&a, &y2).unwrap();
        // hand evaluation: b = min(-1/2, -3/2 - 1), c = max(21/5 + 1, 22/5),
        // v = max(18, 23, (26/5 + 5/2) / (3/10)), r = 1 + max(2, floor(1 + 3/2 - 1/2))
        assert_eq!(out.b, q(-5, 2));
        assert_eq!(out.d, q(1, 1));
        assert_eq!(out.c, q(26, 5));
        assert_eq!(out.v, q(77, 3));
        assert_eq!(out.r, 3);
        assert!(out.dominates(&p("(-2.5<=1,29,0.2,6.2,3)")));
    }

    #[test]
    fn combine_degenerate_band() {
        let x = p("(1<=1,0,1/5,0,1)");
        assert_eq!(combine_cofiber(&x, &x).unwrap().r, 2);
    }

    #[test]
    fn combine_requires_equal_slopes() {
        let a = p("(0<=1,0,1/5,0,1)");
        let c = p("(0<=1,0,1/4,0,1)");
        assert_eq!(
            combine_cofiber(&a, &c),
            Err(VlError::SlopeMismatch {
                left: q(1, 5),
                right: q(1, 4)
            })
        );
    }

    #[test]
    fn dominance() {
        let y2_initial = p("(-2.5<=0.5,23,0.2,4.4,2)");
        let y2_improved = p("(-1.5<=0.5,23,0.2,4.4,2)");
        assert!(y2_improved.dominates(&y2_initial));
        assert!(!y2_initial.dominates(&y2_improved));
        assert!(y2_initial.dominates(&y2_initial));
        assert!(!p("(0<=1,0,0,0,1)").dominates(&p("(0<=1,0,1/5,0,1)")));
    }

    #[test]
    fn pipeline_against_reference() {
        let run = pipeline();
        assert_eq!(run.ytilde2, reference::ytilde2_initial());
        assert_eq!(run.ytilde2_raised, reference::ytilde2_improved());
        let r3 = reference::ytilde3_initial();
        assert_eq!((run.ytilde3.b, run.ytilde3.d, run.ytilde3.r), (r3.b, r3.d, r3.r));
        assert!(run.ytilde3.dominates(&r3));
        assert_eq!(run.c2_from_reference, reference::c2());
        assert_eq!(run.c2, p("(-3/2<=1,65/3,1/5,4,3)"));
        assert!(run.c2.dominates(&reference::c2()));
        assert!(raise_bottom(&run.c2, q(-2, 1)).is_err());
    }

    #[test]
    fn regions() {
        let c2 = p("(-1.5<=1,25,0.2,5,3)");
        assert_eq!(c2.region(31, 13), Region::Gap);
        assert_eq!(c2.region(31, 14), Region::InBand);
        assert_eq!(c2.region(31, 17), Region::AboveBand);
        assert_eq!(c2.region(31, 16), Region::InBand);
        assert_eq!(c2.region(31, 11), Region::Below);
        assert_eq!(c2.region(24, 20), Region::OutOfValidity);
        assert!(c2.in_torsion_region(31, 12));
        assert!(!c2.in_torsion_region(31, 11));
        // rational v: n >= 28 + 1/3 means n = 28 is outside
        let old = p("(-3.5<=1,85/3,0.2,5,4)");
        assert_eq!(old.region(28, 14), Region::OutOfValidity);
        assert_eq!(old.region(29, 14), Region::InBand);
    }

    #[test]
    fn empty_chart_verification() {
        let chart = Chart::new(Grading::Adams);
        let params = p("(0<=1,0,1/5,1,1)");
        let report = verify_banded(&chart, &params, 0..=7, &[4, 8, 8, 4, 2, 1, 1, 2]);
        for c in [Condition::TorsionBound, Condition::FiltrationIsomorphism, Condition::Vanishing] {
            assert!(report.condition(c).passed());
        }
        let k1 = report.condition(Condition::K1LocalComparison);
        let stems: Vec<i32> = k1
            .witnesses
            .iter()
            .map(|w| match w {
                Witness::Stem { stem, .. } => *stem,
                _ => unreachable!(),
            })
            .collect();
        assert_eq!(stems, [0, 1, 2, 3, 4, 7]);
        let skipped = verify_banded(&chart, &params, 0..=7, &[]);
        assert!(skipped.passed());
        assert!(!skipped.condition(Condition::K1LocalComparison).checked);
    }

    #[test]
    fn verification_finds_each_violation() {
        let params = p("(-1.5<=1,0,1/5,1,1)");
        let mut chart = Chart::new(Grading::Adams);
        let high = chart.add_class(Bidegree::new(10, 7));
        let gap = chart.add_class(Bidegree::new(10, 3));
        let x = chart.add_class(Bidegree::new(13, 4));
        let y = chart.add_class(Bidegree::new(12, 7));
        chart.add_differential(3, x, y).unwrap();
        let report = verify_banded(&chart, &params, 0..=20, &[]);
        assert_eq!(report.condition(Condition::Vanishing).witnesses, [Witness::Class(high)]);
        assert_eq!(
            report.condition(Condition::FiltrationIsomorphism).witnesses,
            [Witness::Class(gap)]
        );
        assert_eq!(report.condition(Condition::TorsionBound).witnesses.len(), 1);
        assert!(!report.passed());
    }
}
