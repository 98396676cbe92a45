//! Deterministic SVG rendering of one chart page.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use sseq_core::chart::Page;
use sseq_core::{Bidegree, Chart, ClassRef, Rational};

/// Largest number of classes drawn side by side at one bidegree.
pub const MAX_STACK: usize = 6;

const CLASS_SPACING: f64 = 0.16;
const CLASS_RADIUS: f64 = 0.07;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum RenderError {
    #[error("nothing to draw: the chart is empty and no range was given, or a range is reversed")]
    EmptyRange,
    #[error("page {0} is before the first page")]
    InvalidPage(Page),
    #[error("scale must be positive")]
    InvalidScale,
    #[error("{count} classes at {position} exceed the limit of {MAX_STACK}")]
    TooManyClasses { position: Bidegree, count: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum LineStyle {
    #[default]
    Solid,
    Dashed,
    Dotted,
}

impl LineStyle {
    fn dasharray(self) -> Option<&'static str> {
        match self {
            LineStyle::Solid => None,
            LineStyle::Dashed => Some("6,4"),
            LineStyle::Dotted => Some("2,3"),
        }
    }
}

impl std::str::FromStr for LineStyle {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "solid" => Ok(LineStyle::Solid),
            "dashed" => Ok(LineStyle::Dashed),
            "dotted" => Ok(LineStyle::Dotted),
            other => Err(format!("unknown line style `{other}`")),
        }
    }
}

/// The line `s = slope·n + intercept`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GuideLine {
    pub slope: Rational,
    pub intercept: Rational,
    pub style: LineStyle,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RenderOptions {
    pub page: Page,
    /// Differentials on pages `page..=page_max` are drawn; defaults to `page`.
    pub page_max: Option<Page>,
    /// Inclusive stem range; defaults to the chart's extent.
    pub x_range: Option<(i32, i32)>,
    /// Inclusive filtration range; defaults to the chart's extent.
    pub y_range: Option<(i32, i32)>,
    /// Pixels per chart unit.
    pub scale: u32,
    pub guides: Vec<GuideLine>,
    pub show_names: bool,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            page: 2,
            page_max: None,
            x_range: None,
            y_range: None,
            scale: 40,
            guides: Vec::new(),
            show_names: false,
        }
    }
}

struct Frame {
    x0: i32,
    x1: i32,
    y0: i32,
    y1: i32,
    scale: f64,
    margin: f64,
}

impl Frame {
    fn x(&self, n: f64) -> f64 {
        self.margin + (n - f64::from(self.x0) + 0.5) * self.scale
    }

    fn y(&self, s: f64) -> f64 {
        (f64::from(self.y1) - s + 0.5) * self.scale
    }

    fn width(&self) -> f64 {
        self.margin + f64::from(self.x1 - self.x0 + 1) * self.scale
    }

    fn height(&self) -> f64 {
        f64::from(self.y1 - self.y0 + 1) * self.scale + self.margin
    }

    fn contains(&self, p: Bidegree) -> bool {
        (self.x0..=self.x1).contains(&p.stem) && (self.y0..=self.y1).contains(&p.filtration)
    }
}

fn num(v: f64) -> String {
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.into() }
}

fn to_f64(q: Rational) -> f64 {
    *q.numer() as f64 / *q.denom() as f64
}

fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            c => out.push(c),
        }
    }
    out
}

fn color(value: &str) -> Option<&str> {
    let ok = !value.is_empty() && value.chars().all(|c| c.is_ascii_alphanumeric() || c == '#');
    ok.then_some(value)
}

/// Endpoints of the guide line clipped to `[x_lo, x_hi] × [y_lo, y_hi]`, in
/// exact arithmetic.
fn clip(
    guide: &GuideLine,
    (x_lo, x_hi): (Rational, Rational),
    (y_lo, y_hi): (Rational, Rational),
) -> Option<((Rational, Rational), (Rational, Rational))> {
    let at = |n: Rational| guide.slope * n + guide.intercept;
    let (mut lo, mut hi) = (x_lo, x_hi);
    if guide.slope == Rational::from_integer(0) {
        if !(y_lo..=y_hi).contains(&guide.intercept) {
            return None;
        }
    } else {
        let a = (y_lo - guide.intercept) / guide.slope;
        let b = (y_hi - guide.intercept) / guide.slope;
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        lo = lo.max(a);
        hi = hi.min(b);
        if lo >= hi {
            return None;
        }
    }
    Some(((lo, at(lo)), (hi, at(hi))))
}

/// Renders `options.page` of the chart.
///
/// Visible classes in range become circles, spread horizontally when several
/// share a bidegree. Differentials on the selected pages become arrows and
/// visible structure lines become segments, when both ends are in range.
/// Output depends only on the inputs.
pub fn render_svg(chart: &Chart, options: &RenderOptions) -> Result<String, RenderError> {
    if options.page < sseq_core::chart::FIRST_PAGE {
        return Err(RenderError::InvalidPage(options.page));
    }
    if options.scale == 0 {
        return Err(RenderError::InvalidScale);
    }
    let (x0, x1) = options.x_range.or(chart.stem_bounds()).ok_or(RenderError::EmptyRange)?;
    let (y0, y1) = options.y_range.or(chart.filtration_bounds()).ok_or(RenderError::EmptyRange)?;
    if x0 > x1 || y0 > y1 {
        return Err(RenderError::EmptyRange);
    }
    let scale = f64::from(options.scale);
    let frame = Frame { x0, x1, y0, y1, scale, margin: scale };

    let mut stacks: BTreeMap<Bidegree, Vec<ClassRef>> = BTreeMap::new();
    for (r, _) in chart.visible_classes(options.page) {
        stacks.entry(r.position).or_default().push(r);
    }
    let mut centers: BTreeMap<ClassRef, (f64, f64)> = BTreeMap::new();
    for (pos, refs) in &stacks {
        if refs.len() > MAX_STACK {
            return Err(RenderError::TooManyClasses { position: *pos, count: refs.len() });
        }
        let mid = (refs.len() as f64 - 1.0) / 2.0;
        for (j, r) in refs.iter().enumerate() {
            let n = f64::from(pos.stem) + (j as f64 - mid) * CLASS_SPACING;
            centers.insert(*r, (frame.x(n), frame.y(f64::from(pos.filtration))));
        }
    }
    let center = |r: ClassRef| {
        centers.get(&r).copied().unwrap_or_else(|| {
            (frame.x(f64::from(r.position.stem)), frame.y(f64::from(r.position.filtration)))
        })
    };

    let mut svg = String::new();
    let (w, h) = (frame.width(), frame.height());
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{}" height="{}" viewBox="0 0 {} {}">"#,
        num(w), num(h), num(w), num(h)
    );
    let _ = writeln!(
        svg,
        r#"<defs><marker id="arrow" viewBox="0 0 10 10" refX="10" refY="5" markerWidth="6" markerHeight="6" orient="auto"><path d="M0,0 L10,5 L0,10 z" fill="black"/></marker></defs>"#
    );
    let _ = writeln!(svg, r#"<rect x="0" y="0" width="{}" height="{}" fill="white"/>"#, num(w), num(h));

    // axes, ticks and labels
    let plot_bottom = frame.y(f64::from(y0) - 0.5);
    let plot_left = frame.x(f64::from(x0) - 0.5);
    let _ = writeln!(
        svg,
        r#"<g class="axes" stroke="black" stroke-width="1"><line x1="{}" y1="{}" x2="{}" y2="{}"/><line x1="{}" y1="{}" x2="{}" y2="{}"/></g>"#,
        num(plot_left), num(plot_bottom), num(w), num(plot_bottom),
        num(plot_left), num(0.0), num(plot_left), num(plot_bottom)
    );
    let step = |span: i32| if span <= 32 { 1 } else { 4 };
    let font = num(scale * 0.3);
    let _ = writeln!(svg, r#"<g class="labels" font-family="sans-serif" font-size="{font}" text-anchor="middle">"#);
    let x_step = step(x1 - x0);
    for n in (x0..=x1).filter(|n| n.rem_euclid(x_step) == 0) {
        let _ = writeln!(svg, r#"<text x="{}" y="{}">{n}</text>"#, num(frame.x(f64::from(n))), num(plot_bottom + scale * 0.6));
    }
    let y_step = step(y1 - y0);
    for s in (y0..=y1).filter(|s| s.rem_euclid(y_step) == 0) {
        let _ = writeln!(svg, r#"<text x="{}" y="{}">{s}</text>"#, num(plot_left - scale * 0.4), num(frame.y(f64::from(s)) + scale * 0.1));
    }
    svg.push_str("</g>\n");

    let x_box = (Rational::new(2 * i64::from(x0) - 1, 2), Rational::new(2 * i64::from(x1) + 1, 2));
    let y_box = (Rational::new(2 * i64::from(y0) - 1, 2), Rational::new(2 * i64::from(y1) + 1, 2));
    for g in &options.guides {
        if let Some(((ax, ay), (bx, by))) = clip(g, x_box, y_box) {
            let dash = g.style.dasharray().map(|d| format!(r#" stroke-dasharray="{d}""#)).unwrap_or_default();
            let _ = writeln!(
                svg,
                r#"<line class="guide" x1="{}" y1="{}" x2="{}" y2="{}" stroke="gray" stroke-width="1"{dash}/>"#,
                num(frame.x(to_f64(ax))), num(frame.y(to_f64(ay))),
                num(frame.x(to_f64(bx))), num(frame.y(to_f64(by)))
            );
        }
    }

    let (differentials, lines) = chart.visible_edges(options.page, options.page_max);
    for l in lines {
        if !(frame.contains(l.source.position) && frame.contains(l.target.position)) {
            continue;
        }
        let (ax, ay) = center(l.source);
        let (bx, by) = center(l.target);
        let dotted = l.options.get("style").map(String::as_str) == Some("dotted");
        let dash = if dotted { r#" stroke-dasharray="2,3""# } else { "" };
        let _ = writeln!(
            svg,
            r#"<line class="structline" x1="{}" y1="{}" x2="{}" y2="{}" stroke="black" stroke-width="1.5"{dash}/>"#,
            num(ax), num(ay), num(bx), num(by)
        );
    }
    for d in differentials {
        if !(frame.contains(d.source.position) && frame.contains(d.target.position)) {
            continue;
        }
        let (ax, ay) = center(d.source);
        let (bx, by) = center(d.target);
        let _ = writeln!(
            svg,
            r#"<line class="differential" x1="{}" y1="{}" x2="{}" y2="{}" stroke="black" stroke-width="1" marker-end="url(#arrow)"/>"#,
            num(ax), num(ay), num(bx), num(by)
        );
    }

    let radius = num(CLASS_RADIUS * scale);
    for (r, generation) in chart.visible_classes(options.page) {
        if !frame.contains(r.position) {
            continue;
        }
        let (cx, cy) = center(r);
        let opts = &generation.options;
        let fill = match opts.get("fill").and_then(|v| color(v)) {
            Some(c) => c,
            None if opts.get("origin").map(String::as_str) == Some("quot") => "white",
            None => "black",
        };
        let _ = writeln!(
            svg,
            r#"<circle cx="{}" cy="{}" r="{radius}" fill="{fill}" stroke="black" stroke-width="1"/>"#,
            num(cx), num(cy)
        );
        if options.show_names {
            if let Some(name) = chart.class(r).and_then(|c| c.name.as_deref()) {
                let _ = writeln!(
                    svg,
                    r#"<text class="name" x="{}" y="{}" font-family="sans-serif" font-size="{}">{}</text>"#,
                    num(cx + CLASS_RADIUS * scale * 1.5), num(cy - CLASS_RADIUS * scale * 1.5),
                    num(scale * 0.25), escape(name)
                );
            }
        }
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use sseq_core::Grading;

    fn count(svg: &str, needle: &str) -> usize {
        svg.matches(needle).count()
    }

    #[test]
    fn number_format() {
        assert_eq!(num(1.0), "1");
        assert_eq!(num(1.25), "1.25");
        assert_eq!(num(-0.0001), "0");
        assert_eq!(num(2.0 / 3.0), "0.667");
    }

    #[test]
    fn empty_chart_needs_a_range() {
        let chart = Chart::new(Grading::Adams);
        assert_eq!(render_svg(&chart, &RenderOptions::default()), Err(RenderError::EmptyRange));
        let opts = RenderOptions { x_range: Some((0, 4)), y_range: Some((0, 3)), ..Default::default() };
        let svg = render_svg(&chart, &opts).unwrap();
        assert_eq!(count(&svg, "<circle"), 0);
        assert_eq!(count(&svg, "<g class=\"axes\""), 1);
        let reversed = RenderOptions { x_range: Some((4, 0)), ..opts };
        assert_eq!(render_svg(&chart, &reversed), Err(RenderError::EmptyRange));
    }

    #[test]
    fn stacking_limit() {
        let mut chart = Chart::new(Grading::Adams);
        for _ in 0..7 {
            chart.add_class(Bidegree::new(0, 0));
        }
        assert!(matches!(
            render_svg(&chart, &RenderOptions::default()),
            Err(RenderError::TooManyClasses { count: 7, .. })
        ));
    }

    #[test]
    fn guide_clipping_is_exact() {
        let g = GuideLine { slope: Rational::new(1, 2), intercept: Rational::new(-3, 2), style: LineStyle::Dashed };
        let half = |n: i64| Rational::new(n, 2);
        let ((ax, ay), (bx, by)) = clip(&g, (half(49), half(81)), (half(21), half(35))).unwrap();
        assert_eq!((ax, ay), (half(49), Rational::new(43, 4)));
        assert_eq!((bx, by), (Rational::from_integer(38), half(35)));
        let flat = GuideLine { slope: Rational::from_integer(0), intercept: Rational::from_integer(100), style: LineStyle::Solid };
        assert!(clip(&flat, (half(0), half(10)), (half(0), half(10))).is_none());
    }

    #[test]
    fn dotted_structlines_and_names() {
        let mut chart = Chart::new(Grading::Adams);
        let mut named = sseq_core::chart::NewClass::default();
        named.name = Some("h_1<x>".into());
        let a = chart.add_class_with(Bidegree::new(1, 0), named);
        let b = chart.add_class(Bidegree::new(1, 1));
        let mut opts = sseq_core::chart::Options::new();
        opts.insert("style".into(), "dotted".into());
        chart.add_structline_with(a, b, Some("2".into()), None, opts).unwrap();
        let svg = render_svg(&chart, &RenderOptions { show_names: true, ..Default::default() }).unwrap();
        assert_eq!(count(&svg, "class=\"structline\""), 1);
        assert_eq!(count(&svg, "stroke-dasharray=\"2,3\""), 1);
        assert!(svg.contains("h_1&lt;x&gt;"));
    }
}
