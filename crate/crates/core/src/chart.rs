//! Bigraded multi-page charts.
//!
//! A [`Chart`] holds classes at bidegrees `(stem, filtration)`, rank-one
//! differentials and labeled structure lines. Every class carries a list of
//! [`Generation`]s: a class hit or supporting a `d_r` dies on page `r`, and a
//! replacement generation may be born on page `r + 1`.
//!
//! Pages start at 2. A generation with `born <= p <= died` is visible on page
//! `p`; differentials are visible on their own page only.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// Page number of a spectral sequence. Valid pages are `>= 2`.
pub type Page = u32;

/// Opaque display options, passed through to the renderer.
pub type Options = BTreeMap<String, String>;

/// First page modeled by a chart.
pub const FIRST_PAGE: Page = 2;

/// Chart coordinates. The internal degree `t` is derived as `stem + filtration`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Bidegree {
    pub stem: i32,
    pub filtration: i32,
}

impl Bidegree {
    pub const fn new(stem: i32, filtration: i32) -> Self {
        Bidegree { stem, filtration }
    }

    /// The degree `t = stem + filtration`.
    pub const fn weight(self) -> i32 {
        self.stem + self.filtration
    }

    pub const fn shifted(self, d_stem: i32, d_filtration: i32) -> Self {
        Bidegree::new(self.stem + d_stem, self.filtration + d_filtration)
    }
}

impl fmt::Display for Bidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.stem, self.filtration)
    }
}

/// Degree convention of the differentials.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Grading {
    /// `d_r : (n, s) -> (n - 1, s + r)`.
    Adams,
    /// `d_r : (x, y) -> (x + r, y - r + 1)`.
    SerreCohomological,
    /// `d_r : (x, y) -> (x - r, y + r - 1)`.
    SerreHomological,
    /// `d_r` moves by `(stem_slope * r + stem_offset, filtration_slope * r + filtration_offset)`.
    Custom {
        stem_slope: i32,
        stem_offset: i32,
        filtration_slope: i32,
        filtration_offset: i32,
    },
}

impl Grading {
    /// Target minus source of a page-`page` differential.
    pub fn displacement(&self, page: Page) -> (i32, i32) {
        let r = page as i32;
        match *self {
            Grading::Adams => (-1, r),
            Grading::SerreCohomological => (r, 1 - r),
            Grading::SerreHomological => (-r, r - 1),
            Grading::Custom {
                stem_slope,
                stem_offset,
                filtration_slope,
                filtration_offset,
            } => (
                stem_slope * r + stem_offset,
                filtration_slope * r + filtration_offset,
            ),
        }
    }
}

/// A stretch of pages on which one incarnation of a class is present.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generation {
    pub born: Page,
    /// `None` means the generation survives to `E_∞`.
    pub died: Option<Page>,
    pub options: Options,
}

impl Generation {
    pub fn new(born: Page) -> Self {
        Generation {
            born,
            died: None,
            options: Options::new(),
        }
    }

    pub fn is_visible(&self, page: Page) -> bool {
        self.born <= page && self.died.map_or(true, |d| page <= d)
    }

    pub fn is_permanent(&self) -> bool {
        self.died.is_none()
    }
}

/// Reference to a class: its position and its index among the classes there.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClassRef {
    pub position: Bidegree,
    pub index: u32,
}

impl ClassRef {
    pub const fn new(stem: i32, filtration: i32, index: u32) -> Self {
        ClassRef {
            position: Bidegree::new(stem, filtration),
            index,
        }
    }

    pub const fn at(position: Bidegree, index: u32) -> Self {
        ClassRef { position, index }
    }

    pub const fn shifted(self, d_stem: i32, d_filtration: i32) -> Self {
        ClassRef {
            position: self.position.shifted(d_stem, d_filtration),
            index: self.index,
        }
    }
}

impl fmt::Display for ClassRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({},{},{})",
            self.position.stem, self.position.filtration, self.index
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChartClass {
    pub position: Bidegree,
    pub index: u32,
    /// Ordered, disjoint: `died(g_i) < born(g_{i+1})`.
    pub generations: Vec<Generation>,
    pub name: Option<String>,
    pub tag: Option<String>,
}

impl ChartClass {
    pub fn reference(&self) -> ClassRef {
        ClassRef::at(self.position, self.index)
    }

    pub fn latest(&self) -> &Generation {
        self.generations
            .last()
            .expect("a class always has at least one generation")
    }

    pub fn generation_at(&self, page: Page) -> Option<&Generation> {
        self.generations.iter().find(|g| g.is_visible(page))
    }

    pub fn is_visible(&self, page: Page) -> bool {
        self.generation_at(page).is_some()
    }

    /// Survives every page in its latest generation.
    pub fn is_permanent(&self) -> bool {
        self.latest().is_permanent()
    }
}

/// Rank-one differential: kills exactly one source and one target class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Differential {
    pub page: Page,
    pub source: ClassRef,
    pub target: ClassRef,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct StructLine {
    pub source: ClassRef,
    pub target: ClassRef,
    pub born_page: Page,
    pub label: Option<String>,
    pub options: Options,
}

/// Optional attributes of a new class.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NewClass {
    pub name: Option<String>,
    pub tag: Option<String>,
    pub options: Options,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChartError {
    UnknownClass(ClassRef),
    InvalidPage(Page),
    SameEndpoints(ClassRef),
    DegreeMismatch {
        page: Page,
        expected: (i32, i32),
        found: (i32, i32),
    },
    /// The class has no generation alive on the page.
    DeadClass { class: ClassRef, page: Page },
    /// The generation alive on the page is already killed on a later page.
    KilledLater {
        class: ClassRef,
        page: Page,
        died: Page,
    },
    DuplicateKill { class: ClassRef, page: Page },
    NotDead(ClassRef),
    WrongPage {
        class: ClassRef,
        died: Page,
        page: Page,
    },
}

impl fmt::Display for ChartError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChartError::UnknownClass(c) => write!(f, "unknown class {c}"),
            ChartError::InvalidPage(p) => write!(f, "invalid page {p}: pages start at 2"),
            ChartError::SameEndpoints(c) => {
                write!(f, "differential from {c} to itself")
            }
            ChartError::DegreeMismatch {
                page,
                expected,
                found,
            } => write!(
                f,
                "degree mismatch for d{page}: expected displacement ({},{}), found ({},{})",
                expected.0, expected.1, found.0, found.1
            ),
            ChartError::DeadClass { class, page } => {
                write!(f, "class {class} is not alive on page {page}")
            }
            ChartError::KilledLater { class, page, died } => write!(
                f,
                "class {class} is alive on page {page} but already dies on page {died}"
            ),
            ChartError::DuplicateKill { class, page } => write!(
                f,
                "class {class} already has a page {page} differential in the same role"
            ),
            ChartError::NotDead(c) => write!(f, "class {c} has not been killed"),
            ChartError::WrongPage { class, died, page } => write!(
                f,
                "class {class} died on page {died}, not on page {page}"
            ),
        }
    }
}

impl core::error::Error for ChartError {}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Role {
    Source,
    Target,
}

/// A multi-page bigraded chart.
///
/// Differentials are kept sorted by `(page, source, target)` and structure
/// lines by `(source, target, born_page, label)`, so structural equality does
/// not depend on insertion order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chart {
    grading: Grading,
    strict_degree: bool,
    classes: BTreeMap<Bidegree, Vec<ChartClass>>,
    differentials: Vec<Differential>,
    structlines: Vec<StructLine>,
}

impl Chart {
    pub fn new(grading: Grading) -> Self {
        Chart {
            grading,
            strict_degree: true,
            classes: BTreeMap::new(),
            differentials: Vec::new(),
            structlines: Vec::new(),
        }
    }

    pub fn grading(&self) -> Grading {
        self.grading
    }

    pub fn strict_degree(&self) -> bool {
        self.strict_degree
    }

    /// Lax mode skips the displacement check on new differentials.
    pub fn set_strict_degree(&mut self, strict: bool) {
        self.strict_degree = strict;
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn class_count(&self) -> usize {
        self.classes.values().map(Vec::len).sum()
    }

    /// Classes in `(stem, filtration, index)` order.
    pub fn classes(&self) -> impl Iterator<Item = &ChartClass> {
        self.classes.values().flatten()
    }

    pub fn classes_at(&self, position: Bidegree) -> &[ChartClass] {
        self.classes.get(&position).map_or(&[], Vec::as_slice)
    }

    pub fn class(&self, class: ClassRef) -> Option<&ChartClass> {
        self.classes
            .get(&class.position)
            .and_then(|v| v.get(class.index as usize))
    }

    fn class_mut(&mut self, class: ClassRef) -> Result<&mut ChartClass, ChartError> {
        self.classes
            .get_mut(&class.position)
            .and_then(|v| v.get_mut(class.index as usize))
            .ok_or(ChartError::UnknownClass(class))
    }

    pub fn differentials(&self) -> &[Differential] {
        &self.differentials
    }

    pub fn structlines(&self) -> &[StructLine] {
        &self.structlines
    }

    /// Smallest and largest stems carrying a class.
    pub fn stem_bounds(&self) -> Option<(i32, i32)> {
        let lo = self.classes.keys().map(|b| b.stem).min()?;
        let hi = self.classes.keys().map(|b| b.stem).max()?;
        Some((lo, hi))
    }

    pub fn filtration_bounds(&self) -> Option<(i32, i32)> {
        let lo = self.classes.keys().map(|b| b.filtration).min()?;
        let hi = self.classes.keys().map(|b| b.filtration).max()?;
        Some((lo, hi))
    }

    pub fn add_class(&mut self, position: Bidegree) -> ClassRef {
        self.add_class_with(position, NewClass::default())
    }

    /// Appends a class at `position` with the next free index and one
    /// generation born on page 2 that never dies.
    pub fn add_class_with(&mut self, position: Bidegree, spec: NewClass) -> ClassRef {
        let slot = self.classes.entry(position).or_default();
        let index = slot.len() as u32;
        let mut generation = Generation::new(FIRST_PAGE);
        generation.options = spec.options;
        slot.push(ChartClass {
            position,
            index,
            generations: alloc::vec![generation],
            name: spec.name,
            tag: spec.tag,
        });
        ClassRef::at(position, index)
    }

    /// Adds a page-`page` differential and kills both endpoint generations on
    /// that page.
    pub fn add_differential(
        &mut self,
        page: Page,
        source: ClassRef,
        target: ClassRef,
    ) -> Result<Differential, ChartError> {
        if page < FIRST_PAGE {
            return Err(ChartError::InvalidPage(page));
        }
        if source == target {
            return Err(ChartError::SameEndpoints(source));
        }
        if self.strict_degree {
            let expected = self.grading.displacement(page);
            let found = (
                target.position.stem - source.position.stem,
                target.position.filtration - source.position.filtration,
            );
            if expected != found {
                return Err(ChartError::DegreeMismatch {
                    page,
                    expected,
                    found,
                });
            }
        }
        let src_gen = self.alive_generation(source, page, Role::Source)?;
        let tgt_gen = self.alive_generation(target, page, Role::Target)?;
        self.class_mut(source)?.generations[src_gen].died = Some(page);
        self.class_mut(target)?.generations[tgt_gen].died = Some(page);
        let d = Differential {
            page,
            source,
            target,
        };
        let at = self.differentials.partition_point(|x| *x <= d);
        self.differentials.insert(at, d);
        Ok(d)
    }

    fn alive_generation(
        &self,
        class: ClassRef,
        page: Page,
        role: Role,
    ) -> Result<usize, ChartError> {
        let c = self.class(class).ok_or(ChartError::UnknownClass(class))?;
        let (i, g) = c
            .generations
            .iter()
            .enumerate()
            .find(|(_, g)| g.is_visible(page))
            .ok_or(ChartError::DeadClass { class, page })?;
        match g.died {
            None => Ok(i),
            Some(d) if d == page => {
                let clash = self.differentials.iter().any(|x| {
                    x.page == page
                        && match role {
                            Role::Source => x.source == class,
                            Role::Target => x.target == class,
                        }
                });
                if clash {
                    Err(ChartError::DuplicateKill { class, page })
                } else {
                    Ok(i)
                }
            }
            Some(died) => Err(ChartError::KilledLater { class, page, died }),
        }
    }

    /// Starts a new generation of a class killed on `page`, born on `page + 1`.
    pub fn replace_class(&mut self, class: ClassRef, page: Page) -> Result<(), ChartError> {
        self.replace_class_with(class, page, Options::new())
    }

    pub fn replace_class_with(
        &mut self,
        class: ClassRef,
        page: Page,
        options: Options,
    ) -> Result<(), ChartError> {
        let c = self.class_mut(class)?;
        match c.latest().died {
            None => Err(ChartError::NotDead(class)),
            Some(died) if died != page => Err(ChartError::WrongPage { class, died, page }),
            Some(_) => {
                c.generations.push(Generation {
                    born: page + 1,
                    died: None,
                    options,
                });
                Ok(())
            }
        }
    }

    /// Page on which a new structure line between the two classes appears by
    /// default: the later of the births of their current generations.
    pub fn default_structline_page(
        &self,
        source: ClassRef,
        target: ClassRef,
    ) -> Result<Page, ChartError> {
        let s = self.class(source).ok_or(ChartError::UnknownClass(source))?;
        let t = self.class(target).ok_or(ChartError::UnknownClass(target))?;
        Ok(s.latest().born.max(t.latest().born))
    }

    pub fn add_structline(
        &mut self,
        source: ClassRef,
        target: ClassRef,
        label: Option<String>,
        born_page: Option<Page>,
    ) -> Result<(), ChartError> {
        self.add_structline_with(source, target, label, born_page, Options::new())
    }

    pub fn add_structline_with(
        &mut self,
        source: ClassRef,
        target: ClassRef,
        label: Option<String>,
        born_page: Option<Page>,
        options: Options,
    ) -> Result<(), ChartError> {
        let default = self.default_structline_page(source, target)?;
        let born_page = born_page.unwrap_or(default);
        if born_page < FIRST_PAGE {
            return Err(ChartError::InvalidPage(born_page));
        }
        let line = StructLine {
            source,
            target,
            born_page,
            label,
            options,
        };
        let at = self.structlines.partition_point(|x| *x <= line);
        self.structlines.insert(at, line);
        Ok(())
    }

    pub fn is_visible(&self, class: ClassRef, page: Page) -> bool {
        self.class(class).is_some_and(|c| c.is_visible(page))
    }

    /// Classes with a generation alive on `page`, in `(stem, filtration, index)` order.
    pub fn visible_classes(&self, page: Page) -> Vec<(ClassRef, &Generation)> {
        self.classes()
            .filter_map(|c| c.generation_at(page).map(|g| (c.reference(), g)))
            .collect()
    }

    /// Differentials with page in `page..=page_max` (default: exactly `page`)
    /// and the structure lines visible on `page`.
    pub fn visible_edges(
        &self,
        page: Page,
        page_max: Option<Page>,
    ) -> (Vec<&Differential>, Vec<&StructLine>) {
        let page_max = page_max.unwrap_or(page);
        let ds = self
            .differentials
            .iter()
            .filter(|d| (page..=page_max).contains(&d.page))
            .collect();
        let ls = self
            .structlines
            .iter()
            .filter(|l| self.structline_visible(l, page))
            .collect();
        (ds, ls)
    }

    pub fn structline_visible(&self, line: &StructLine, page: Page) -> bool {
        page >= line.born_page
            && self.is_visible(line.source, page)
            && self.is_visible(line.target, page)
    }

    /// Translates every class, differential and structure line.
    pub fn shift(&self, d_stem: i32, d_filtration: i32) -> Chart {
        let classes = self
            .classes
            .iter()
            .map(|(pos, cs)| {
                let pos = pos.shifted(d_stem, d_filtration);
                let cs = cs
                    .iter()
                    .map(|c| ChartClass {
                        position: pos,
                        ..c.clone()
                    })
                    .collect();
                (pos, cs)
            })
            .collect();
        let differentials = self
            .differentials
            .iter()
            .map(|d| Differential {
                page: d.page,
                source: d.source.shifted(d_stem, d_filtration),
                target: d.target.shifted(d_stem, d_filtration),
            })
            .collect();
        let structlines = self
            .structlines
            .iter()
            .map(|l| StructLine {
                source: l.source.shifted(d_stem, d_filtration),
                target: l.target.shifted(d_stem, d_filtration),
                ..l.clone()
            })
            .collect();
        Chart {
            grading: self.grading,
            strict_degree: self.strict_degree,
            classes,
            differentials,
            structlines,
        }
    }

    /// Adds `key=value` to every generation of every class.
    pub fn mark_all(&mut self, key: &str, value: &str) {
        for c in self.classes.values_mut().flatten() {
            for g in &mut c.generations {
                g.options.insert(String::from(key), String::from(value));
            }
        }
    }

    /// Moves all classes and edges of `other` into `self`; classes of `other`
    /// get indices after those already present at the same position.
    pub(crate) fn absorb(&mut self, other: Chart) {
        let mut remap = BTreeMap::new();
        for (pos, cs) in other.classes {
            let slot = self.classes.entry(pos).or_default();
            for mut c in cs {
                let new_index = slot.len() as u32;
                remap.insert(c.reference(), ClassRef::at(pos, new_index));
                c.index = new_index;
                slot.push(c);
            }
        }
        let fix = |r: ClassRef| remap.get(&r).copied().unwrap_or(r);
        for mut d in other.differentials {
            d.source = fix(d.source);
            d.target = fix(d.target);
            let at = self.differentials.partition_point(|x| *x <= d);
            self.differentials.insert(at, d);
        }
        for mut l in other.structlines {
            l.source = fix(l.source);
            l.target = fix(l.target);
            let at = self.structlines.partition_point(|x| *x <= l);
            self.structlines.insert(at, l);
        }
    }
}
