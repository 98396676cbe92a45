//! Bigraded `F_2[τ]`-modules and the τ-Bockstein dictionary.
//!
//! A [`TauModule`] is a finite direct sum of cyclic summands, each generated
//! at a bigrading `(stem, weight)` where `weight = stem + filtration`. The
//! element τ lowers the weight by one. A `Free` summand therefore occupies
//! every weight at or below its generator, and a `Torsion(k)` summand occupies
//! the `k` weights from the generator down.
//!
//! Tensoring with `Cτ^k` is evaluated from the long exact sequence of
//! `S^{0,-k} --τ^k--> S^{0,0} --> Cτ^k`:
//!
//! ```text
//! dim π_{a,b}(Cτ^k ⊗ M) = dim coker(τ^k : M_{a,b+k} -> M_{a,b})
//!                       + dim ker(τ^k : M_{a-1,b+k} -> M_{a-1,b})
//! ```
//!
//! For `k = 1` this recovers the chart: a `Torsion(r)` summand at the target
//! of a `d_{r+1}` produces exactly the target and source classes. The
//! Bockstein carries a sign which is invisible over `F_2`.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::chart::{Bidegree, Chart, ClassRef, Grading, Page};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SummandKind {
    Free,
    /// `F_2[τ]/τ^k`, `k >= 1`.
    Torsion(u32),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TauSummand {
    pub stem: i32,
    /// Weight `t` of the generator.
    pub weight: i32,
    pub kind: SummandKind,
}

impl TauSummand {
    pub const fn free(stem: i32, weight: i32) -> Self {
        TauSummand {
            stem,
            weight,
            kind: SummandKind::Free,
        }
    }

    pub const fn torsion(order: u32, stem: i32, weight: i32) -> Self {
        TauSummand {
            stem,
            weight,
            kind: SummandKind::Torsion(order),
        }
    }

    /// Whether the summand is nonzero in weight `weight` of its stem.
    pub fn occupies(&self, weight: i32) -> bool {
        match self.kind {
            SummandKind::Free => weight <= self.weight,
            SummandKind::Torsion(k) => weight <= self.weight && weight > self.weight - k as i32,
        }
    }

    /// Generator position in chart coordinates.
    pub fn generator_bidegree(&self) -> Bidegree {
        Bidegree::new(self.stem, self.weight - self.stem)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TauModule {
    pub summands: Vec<TauSummand>,
    pub label: Option<String>,
}

impl TauModule {
    pub fn new(summands: Vec<TauSummand>) -> Self {
        TauModule {
            summands,
            label: None,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.summands.is_empty()
    }

    /// Largest torsion order among the summands, 0 if there is none.
    pub fn max_torsion(&self) -> u32 {
        self.summands
            .iter()
            .filter_map(|s| match s.kind {
                SummandKind::Torsion(k) => Some(k),
                SummandKind::Free => None,
            })
            .max()
            .unwrap_or(0)
    }

    /// `dim_{F_2} M_{stem, weight}`.
    pub fn dim(&self, stem: i32, weight: i32) -> u32 {
        self.summands
            .iter()
            .filter(|s| s.stem == stem && s.occupies(weight))
            .count() as u32
    }
}

/// Canonical dump: one summand per line, sorted, `free (n,t)` or `torsion k (n,t)`.
impl fmt::Display for TauModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut sorted = self.summands.clone();
        sorted.sort_by_key(|s| (s.stem, s.weight, s.kind));
        for s in sorted {
            match s.kind {
                SummandKind::Free => writeln!(f, "free ({},{})", s.stem, s.weight)?,
                SummandKind::Torsion(k) => {
                    writeln!(f, "torsion {} ({},{})", k, s.stem, s.weight)?
                }
            }
        }
        Ok(())
    }
}

/// Finitely supported map `(stem, weight) -> dimension`. Zero entries are not stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BigradedDims(BTreeMap<(i32, i32), u32>);

impl BigradedDims {
    pub fn new() -> Self {
        BigradedDims(BTreeMap::new())
    }

    pub fn get(&self, stem: i32, weight: i32) -> u32 {
        self.0.get(&(stem, weight)).copied().unwrap_or(0)
    }

    pub fn add(&mut self, stem: i32, weight: i32, count: u32) {
        if count > 0 {
            *self.0.entry((stem, weight)).or_insert(0) += count;
        }
    }

    pub fn total(&self) -> u32 {
        self.0.values().sum()
    }

    /// Nonzero entries in `(stem, weight)` order.
    pub fn iter(&self) -> impl Iterator<Item = ((i32, i32), u32)> + '_ {
        self.0.iter().map(|(k, v)| (*k, *v))
    }

    pub fn merge(&mut self, other: &BigradedDims) {
        for ((n, t), d) in other.iter() {
            self.add(n, t, d);
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TauError {
    UnsupportedChart(&'static str),
    UnknownClass(ClassRef),
    /// The chart and the module do not correspond at this class.
    Unrelated(ClassRef),
}

impl fmt::Display for TauError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TauError::UnsupportedChart(why) => write!(f, "unsupported chart: {why}"),
            TauError::UnknownClass(c) => write!(f, "unknown class {c}"),
            TauError::Unrelated(c) => write!(f, "module has no summand for class {c}"),
        }
    }
}

impl core::error::Error for TauError {}

/// Reads an Adams chart as a τ-module.
///
/// Each permanent class gives a `Free` summand at its own position; each
/// `d_{r+1}` gives a `Torsion(r)` summand at its target. Sources contribute
/// nothing of their own. Free summands come first in class order, then
/// torsion summands in differential order.
pub fn chart_to_tau(chart: &Chart) -> Result<TauModule, TauError> {
    if chart.grading() != Grading::Adams {
        return Err(TauError::UnsupportedChart("only Adams grading is supported"));
    }
    if chart.classes().any(|c| c.generations.len() != 1) {
        return Err(TauError::UnsupportedChart(
            "classes with several generations have no cyclic model",
        ));
    }
    let mut summands = Vec::new();
    for c in chart.classes().filter(|c| c.is_permanent()) {
        summands.push(TauSummand::free(c.position.stem, c.position.weight()));
    }
    for d in chart.differentials() {
        let expected = Grading::Adams.displacement(d.page);
        let found = (
            d.target.position.stem - d.source.position.stem,
            d.target.position.filtration - d.source.position.filtration,
        );
        if expected != found {
            return Err(TauError::UnsupportedChart(
                "differential with non-Adams displacement",
            ));
        }
        summands.push(TauSummand::torsion(
            d.page - 1,
            d.target.position.stem,
            d.target.position.weight(),
        ));
    }
    Ok(TauModule::new(summands))
}

/// Dimensions of `M / τ^k` (the cokernel part of the `Cτ^k` sequence).
pub fn quotient_dims(module: &TauModule, k: u32) -> BigradedDims {
    let mut dims = BigradedDims::new();
    for s in &module.summands {
        let width = match s.kind {
            SummandKind::Free => k,
            SummandKind::Torsion(r) => r.min(k),
        };
        for j in 0..width as i32 {
            dims.add(s.stem, s.weight - j, 1);
        }
    }
    dims
}

/// Dimensions of the `τ^k`-kernel part of the `Cτ^k` sequence, placed where
/// the connecting map puts it: an element of `M_{n,w}` killed by `τ^k`
/// contributes at `(n + 1, w - k)`.
pub fn kernel_dims(module: &TauModule, k: u32) -> BigradedDims {
    let mut dims = BigradedDims::new();
    for s in &module.summands {
        if let SummandKind::Torsion(r) = s.kind {
            // τ^k x = 0 iff x sits in the bottom min(r, k) weights
            let bottom = s.weight - r as i32 + 1;
            for w in bottom..bottom + r.min(k) as i32 {
                dims.add(s.stem + 1, w - k as i32, 1);
            }
        }
    }
    dims
}

/// `dim π_{n,t}(Cτ^k ⊗ M)` for all `(n, t)`. `k = 0` gives the zero module.
pub fn tensor_with_ctau(module: &TauModule, k: u32) -> BigradedDims {
    let mut dims = quotient_dims(module, k);
    dims.merge(&kernel_dims(module, k));
    dims
}

/// A differential read off a torsion summand, in chart coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct BocksteinDifferential {
    pub page: Page,
    pub source: Bidegree,
    pub target: Bidegree,
}

/// One `d_{r+1}` per `Torsion(r)` summand, in summand order. The target is
/// the generator; the source is the `Cτ` class produced by the kernel of τ.
pub fn bockstein_differentials(module: &TauModule) -> Vec<BocksteinDifferential> {
    module
        .summands
        .iter()
        .filter_map(|s| match s.kind {
            SummandKind::Torsion(r) => {
                let source_stem = s.stem + 1;
                let source_weight = s.weight - r as i32;
                Some(BocksteinDifferential {
                    page: r + 1,
                    source: Bidegree::new(source_stem, source_weight - source_stem),
                    target: s.generator_bidegree(),
                })
            }
            SummandKind::Free => None,
        })
        .collect()
}

/// Adams filtrations of the classes surviving τ-inversion in one stem,
/// sorted ascending. Torsion summands die when τ is inverted.
pub fn invert_tau_filtration(module: &TauModule, stem: i32) -> Vec<i32> {
    let mut out: Vec<i32> = module
        .summands
        .iter()
        .filter(|s| s.stem == stem && s.kind == SummandKind::Free)
        .map(|s| s.weight - s.stem)
        .collect();
    out.sort_unstable();
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Classification {
    /// Lifts to a non-torsion class.
    PermanentCycle,
    /// Lifts to a τ-power torsion class: hit by a differential.
    EventualBoundary,
    /// Supports a differential.
    TransientSource,
}

/// Classifies a chart class using a module produced from the same chart.
pub fn classify(
    module: &TauModule,
    chart: &Chart,
    class: ClassRef,
) -> Result<Classification, TauError> {
    let c = chart.class(class).ok_or(TauError::UnknownClass(class))?;
    let (n, t) = (c.position.stem, c.position.weight());
    let has = |pred: &dyn Fn(&TauSummand) -> bool| {
        module
            .summands
            .iter()
            .any(|s| s.stem == n && s.weight == t && pred(s))
    };
    if let Some(d) = chart.differentials().iter().find(|d| d.target == class) {
        let order = d.page - 1;
        return if has(&|s| s.kind == SummandKind::Torsion(order)) {
            Ok(Classification::EventualBoundary)
        } else {
            Err(TauError::Unrelated(class))
        };
    }
    if chart.differentials().iter().any(|d| d.source == class) {
        return Ok(Classification::TransientSource);
    }
    if has(&|s| s.kind == SummandKind::Free) {
        Ok(Classification::PermanentCycle)
    } else {
        Err(TauError::Unrelated(class))
    }
}
