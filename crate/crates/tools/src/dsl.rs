//! The `.sseq` chart description language.
//!
//! One statement per line, `#` starts a comment:
//!
//! ```text
//! grading adams | serre-cohomological | serre-homological | custom <a> <b> <c> <d>
//! lax
//! class (n,s) [name=<ident>] [tag=<ident>] [opt key=value ...]
//! d <r> (n,s[,i]) (n',s'[,j])
//! structline (n,s[,i]) (n',s'[,j]) [label=<string>] [page=<r>] [opt key=value ...]
//! replaceclass (n,s[,i]) page=<r> [opt key=value ...]
//! ```
//!
//! A custom grading moves a page-`r` differential by `(a·r + b, c·r + d)`.

use std::collections::BTreeSet;
use std::fmt;
use std::fmt::Write as _;
use std::ops::Range;

use sseq_core::chart::{NewClass, Options, Page};
use sseq_core::{Bidegree, Chart, ChartError, ClassRef, Grading};

/// A line and a 1-based, end-exclusive column range.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SourceSpan {
    pub line: usize,
    pub columns: Range<usize>,
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, columns {}-{}", self.line, self.columns.start, self.columns.end)
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum DslError {
    #[error("{span}: {message}")]
    Syntax { span: SourceSpan, message: String },
    #[error("{span}: unknown grading `{name}`")]
    UnknownGrading { span: SourceSpan, name: String },
    #[error("{span}: class name `{name}` is already used")]
    DuplicateName { span: SourceSpan, name: String },
    #[error("{span}: {error}")]
    Chart { span: SourceSpan, error: ChartError },
}

impl DslError {
    pub fn span(&self) -> &SourceSpan {
        match self {
            DslError::Syntax { span, .. }
            | DslError::UnknownGrading { span, .. }
            | DslError::DuplicateName { span, .. }
            | DslError::Chart { span, .. } => span,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum TokenKind {
    Word(String),
    Tuple(Vec<String>),
    Pair(String, String),
}

#[derive(Clone, Debug)]
struct Token {
    kind: TokenKind,
    columns: Range<usize>,
}

fn is_name_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || "_/^{}-".contains(c)
}

fn is_key_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '-'
}

struct Lexer {
    line: usize,
    chars: Vec<char>,
    pos: usize,
}

impl Lexer {
    fn new(line: usize, text: &str) -> Self {
        Lexer {
            line,
            chars: text.chars().collect(),
            pos: 0,
        }
    }

    fn column(&self, pos: usize) -> usize {
        pos + 1
    }

    fn error(&self, start: usize, end: usize, message: impl Into<String>) -> DslError {
        DslError::Syntax {
            span: SourceSpan {
                line: self.line,
                columns: self.column(start)..self.column(end.max(start + 1)),
            },
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn tokens(mut self) -> Result<Vec<Token>, DslError> {
        let mut out = Vec::new();
        loop {
            while self.peek().is_some_and(char::is_whitespace) {
                self.pos += 1;
            }
            let start = self.pos;
            match self.peek() {
                None | Some('#') => break,
                Some('(') => {
                    let parts = self.tuple()?;
                    out.push(Token {
                        kind: TokenKind::Tuple(parts),
                        columns: self.column(start)..self.column(self.pos),
                    });
                }
                Some(_) => {
                    let kind = self.word_or_pair()?;
                    out.push(Token {
                        kind,
                        columns: self.column(start)..self.column(self.pos),
                    });
                }
            }
        }
        Ok(out)
    }

    fn tuple(&mut self) -> Result<Vec<String>, DslError> {
        let start = self.pos;
        self.pos += 1;
        let mut parts = vec![String::new()];
        loop {
            match self.peek() {
                None | Some('#') => return Err(self.error(start, self.pos, "unclosed `(`")),
                Some(')') => {
                    self.pos += 1;
                    break;
                }
                Some(',') => parts.push(String::new()),
                Some(c) if c.is_whitespace() => {}
                Some(c) => parts.last_mut().expect("nonempty").push(c),
            }
            self.pos += 1;
        }
        Ok(parts)
    }

    fn word_or_pair(&mut self) -> Result<TokenKind, DslError> {
        let start = self.pos;
        let mut word = String::new();
        while let Some(c) = self.peek() {
            if c.is_whitespace() || c == '=' || c == '#' || c == '(' {
                break;
            }
            word.push(c);
            self.pos += 1;
        }
        if self.peek() != Some('=') {
            return Ok(TokenKind::Word(word));
        }
        self.pos += 1;
        if word.is_empty() || !word.chars().all(is_key_char) {
            return Err(self.error(start, self.pos, format!("invalid key `{word}`")));
        }
        let value = if self.peek() == Some('"') {
            self.quoted()?
        } else {
            let mut v = String::new();
            while let Some(c) = self.peek() {
                if c.is_whitespace() || c == '#' {
                    break;
                }
                v.push(c);
                self.pos += 1;
            }
            v
        };
        Ok(TokenKind::Pair(word, value))
    }

    fn quoted(&mut self) -> Result<String, DslError> {
        let start = self.pos;
        self.pos += 1;
        let mut out = String::new();
        loop {
            match self.peek() {
                None => return Err(self.error(start, self.pos, "unterminated string")),
                Some('"') => {
                    self.pos += 1;
                    return Ok(out);
                }
                Some('\\') => {
                    self.pos += 1;
                    match self.peek() {
                        Some(c @ ('"' | '\\')) => out.push(c),
                        Some('n') => out.push('\n'),
                        Some('r') => out.push('\r'),
                        _ => return Err(self.error(self.pos - 1, self.pos + 1, "invalid escape")),
                    }
                }
                Some(c) => out.push(c),
            }
            self.pos += 1;
        }
    }
}

struct Statement {
    line: usize,
    columns: Range<usize>,
    tokens: Vec<Token>,
}

impl Statement {
    fn span(&self) -> SourceSpan {
        SourceSpan {
            line: self.line,
            columns: self.columns.clone(),
        }
    }

    fn token_span(&self, token: &Token) -> SourceSpan {
        SourceSpan {
            line: self.line,
            columns: token.columns.clone(),
        }
    }

    fn syntax(&self, token: Option<&Token>, message: impl Into<String>) -> DslError {
        DslError::Syntax {
            span: token.map_or_else(|| self.span(), |t| self.token_span(t)),
            message: message.into(),
        }
    }

    fn chart(&self, error: ChartError) -> DslError {
        DslError::Chart {
            span: self.span(),
            error,
        }
    }
}

fn statements(text: &str) -> Result<Vec<Statement>, DslError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let tokens = Lexer::new(i + 1, raw).tokens()?;
        if let (Some(first), Some(last)) = (tokens.first(), tokens.last()) {
            out.push(Statement {
                line: i + 1,
                columns: first.columns.start..last.columns.end,
                tokens: tokens.clone(),
            });
        }
    }
    Ok(out)
}

fn int<T: std::str::FromStr>(stmt: &Statement, token: &Token, text: &str) -> Result<T, DslError> {
    let digits = text.strip_prefix(['-', '+']).unwrap_or(text);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(stmt.syntax(Some(token), format!("expected an integer, found `{text}`")));
    }
    text.parse()
        .map_err(|_| stmt.syntax(Some(token), format!("integer out of range: `{text}`")))
}

fn word<'t>(stmt: &Statement, token: Option<&'t Token>, what: &str) -> Result<&'t str, DslError> {
    match token.map(|t| &t.kind) {
        Some(TokenKind::Word(w)) => Ok(w),
        _ => Err(stmt.syntax(token, format!("expected {what}"))),
    }
}

fn page(stmt: &Statement, token: &Token, text: &str) -> Result<Page, DslError> {
    int::<Page>(stmt, token, text)
}

fn position(stmt: &Statement, token: Option<&Token>) -> Result<Bidegree, DslError> {
    match token.map(|t| &t.kind) {
        Some(TokenKind::Tuple(parts)) if parts.len() == 2 => {
            let t = token.expect("matched");
            Ok(Bidegree::new(int(stmt, t, &parts[0])?, int(stmt, t, &parts[1])?))
        }
        _ => Err(stmt.syntax(token, "expected a position `(n,s)`")),
    }
}

fn reference(stmt: &Statement, token: Option<&Token>) -> Result<ClassRef, DslError> {
    match token.map(|t| &t.kind) {
        Some(TokenKind::Tuple(parts)) if parts.len() == 2 || parts.len() == 3 => {
            let t = token.expect("matched");
            let index = match parts.get(2) {
                Some(i) => int(stmt, t, i)?,
                None => 0,
            };
            Ok(ClassRef::new(int(stmt, t, &parts[0])?, int(stmt, t, &parts[1])?, index))
        }
        _ => Err(stmt.syntax(token, "expected a class `(n,s)` or `(n,s,i)`")),
    }
}

#[derive(Default)]
struct Attributes {
    name: Option<String>,
    tag: Option<String>,
    label: Option<String>,
    page: Option<Page>,
    options: Options,
}

/// Reads `key=value` pairs and `opt key=value ...` from `tokens`, accepting
/// only the keys in `allowed`.
fn attributes(stmt: &Statement, tokens: &[Token], allowed: &[&str]) -> Result<Attributes, DslError> {
    let mut attrs = Attributes::default();
    let mut in_options = false;
    let mut seen = BTreeSet::new();
    for t in tokens {
        match &t.kind {
            TokenKind::Word(w) if w == "opt" && allowed.contains(&"opt") && !in_options => {
                in_options = true;
            }
            TokenKind::Pair(k, v) if in_options => {
                attrs.options.insert(k.clone(), v.clone());
            }
            TokenKind::Pair(k, v) if allowed.contains(&k.as_str()) => {
                if !seen.insert(k.clone()) {
                    return Err(stmt.syntax(Some(t), format!("`{k}` given twice")));
                }
                match k.as_str() {
                    "name" | "tag" => {
                        if v.is_empty() || !v.chars().all(is_name_char) {
                            return Err(stmt.syntax(Some(t), format!("invalid {k} `{v}`")));
                        }
                        if k == "name" {
                            attrs.name = Some(v.clone());
                        } else {
                            attrs.tag = Some(v.clone());
                        }
                    }
                    "label" => attrs.label = Some(v.clone()),
                    "page" => attrs.page = Some(page(stmt, t, v)?),
                    _ => unreachable!("allowed keys are handled above"),
                }
            }
            _ => return Err(stmt.syntax(Some(t), "unexpected token")),
        }
    }
    Ok(attrs)
}

fn grading(stmt: &Statement) -> Result<Grading, DslError> {
    let args = &stmt.tokens[1..];
    let name_token = args.first();
    let name = word(stmt, name_token, "a grading name")?;
    let expect_args = |n: usize| {
        if args.len() == n + 1 {
            Ok(())
        } else {
            Err(stmt.syntax(args.get(n + 1).or(args.last()), format!("`{name}` takes {n} arguments")))
        }
    };
    match name {
        "adams" => expect_args(0).map(|_| Grading::Adams),
        "serre-cohomological" => expect_args(0).map(|_| Grading::SerreCohomological),
        "serre-homological" => expect_args(0).map(|_| Grading::SerreHomological),
        "custom" => {
            expect_args(4)?;
            let mut k = [0i32; 4];
            for (slot, t) in k.iter_mut().zip(&args[1..]) {
                *slot = int(stmt, t, word(stmt, Some(t), "an integer")?)?;
            }
            Ok(Grading::Custom {
                stem_slope: k[0],
                stem_offset: k[1],
                filtration_slope: k[2],
                filtration_offset: k[3],
            })
        }
        other => Err(DslError::UnknownGrading {
            span: stmt.token_span(name_token.expect("word was read")),
            name: other.to_string(),
        }),
    }
}

/// Parses a `.sseq` document, applying statements in order.
pub fn parse(text: &str) -> Result<Chart, DslError> {
    let stmts = statements(text)?;
    let Some(first) = stmts.first() else {
        return Err(DslError::Syntax {
            span: SourceSpan { line: 1, columns: 1..2 },
            message: "missing grading".into(),
        });
    };
    if word(first, first.tokens.first(), "`grading`")? != "grading" {
        return Err(first.syntax(first.tokens.first(), "missing grading: the first statement must be `grading`"));
    }
    let mut chart = Chart::new(grading(first)?);
    let mut names = BTreeSet::new();
    for stmt in &stmts[1..] {
        let head = stmt.tokens.first();
        let keyword = word(stmt, head, "a statement keyword")?;
        let rest = &stmt.tokens[1..];
        match keyword {
            "grading" => return Err(stmt.syntax(head, "grading may only be given once")),
            "lax" => {
                if let Some(t) = rest.first() {
                    return Err(stmt.syntax(Some(t), "unexpected token"));
                }
                chart.set_strict_degree(false);
            }
            "class" => {
                let pos = position(stmt, rest.first())?;
                let attrs = attributes(stmt, &rest[1..], &["name", "tag", "opt"])?;
                if let Some(name) = &attrs.name {
                    if !names.insert(name.clone()) {
                        return Err(DslError::DuplicateName {
                            span: stmt.span(),
                            name: name.clone(),
                        });
                    }
                }
                chart.add_class_with(
                    pos,
                    NewClass {
                        name: attrs.name,
                        tag: attrs.tag,
                        options: attrs.options,
                    },
                );
            }
            "d" => {
                let page_token = rest.first();
                let p = page(stmt, page_token.ok_or_else(|| stmt.syntax(None, "expected a page"))?, word(stmt, page_token, "a page")?)?;
                let source = reference(stmt, rest.get(1))?;
                let target = reference(stmt, rest.get(2))?;
                if let Some(t) = rest.get(3) {
                    return Err(stmt.syntax(Some(t), "unexpected token"));
                }
                chart.add_differential(p, source, target).map_err(|e| stmt.chart(e))?;
            }
            "structline" => {
                let source = reference(stmt, rest.first())?;
                let target = reference(stmt, rest.get(1))?;
                let attrs = attributes(stmt, rest.get(2..).unwrap_or(&[]), &["label", "page", "opt"])?;
                chart
                    .add_structline_with(source, target, attrs.label, attrs.page, attrs.options)
                    .map_err(|e| stmt.chart(e))?;
            }
            "replaceclass" => {
                let class = reference(stmt, rest.first())?;
                let attrs = attributes(stmt, rest.get(1..).unwrap_or(&[]), &["page", "opt"])?;
                let p = attrs.page.ok_or_else(|| stmt.syntax(None, "replaceclass needs `page=<r>`"))?;
                chart
                    .replace_class_with(class, p, attrs.options)
                    .map_err(|e| stmt.chart(e))?;
            }
            other => return Err(stmt.syntax(head, format!("unknown statement `{other}`"))),
        }
    }
    Ok(chart)
}

fn grading_line(g: Grading) -> String {
    match g {
        Grading::Adams => "grading adams".into(),
        Grading::SerreCohomological => "grading serre-cohomological".into(),
        Grading::SerreHomological => "grading serre-homological".into(),
        Grading::Custom {
            stem_slope,
            stem_offset,
            filtration_slope,
            filtration_offset,
        } => format!("grading custom {stem_slope} {stem_offset} {filtration_slope} {filtration_offset}"),
    }
}

fn reference_text(r: ClassRef) -> String {
    let Bidegree { stem, filtration } = r.position;
    if r.index == 0 {
        format!("({stem},{filtration})")
    } else {
        format!("({stem},{filtration},{})", r.index)
    }
}

fn quote(text: &str) -> String {
    let mut out = String::from("\"");
    for c in text.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn value_text(text: &str) -> String {
    let plain = !text.is_empty()
        && !text.starts_with('"')
        && !text.chars().any(|c| c.is_whitespace() || c == '#' || c == '"' || c == '\\');
    if plain {
        text.to_string()
    } else {
        quote(text)
    }
}

fn options_text(out: &mut String, options: &Options) {
    if options.is_empty() {
        return;
    }
    out.push_str(" opt");
    for (k, v) in options {
        let _ = write!(out, " {k}={}", value_text(v));
    }
}

/// Canonical text of a chart: grading, `lax` if set, classes by
/// `(stem, filtration, index)`, then page by page the differentials of that
/// page followed by the replacements they allow, then structure lines.
///
/// A structure line carries `page=` only when its page differs from the
/// default for the finished chart.
pub fn serialize(chart: &Chart) -> String {
    let mut out = grading_line(chart.grading());
    out.push('\n');
    if !chart.strict_degree() {
        out.push_str("lax\n");
    }
    for c in chart.classes() {
        let _ = write!(out, "class ({},{})", c.position.stem, c.position.filtration);
        if let Some(name) = &c.name {
            let _ = write!(out, " name={name}");
        }
        if let Some(tag) = &c.tag {
            let _ = write!(out, " tag={tag}");
        }
        options_text(&mut out, &c.generations[0].options);
        out.push('\n');
    }
    let mut replacements: Vec<(Page, ClassRef, &Options)> = Vec::new();
    for c in chart.classes() {
        for g in &c.generations[1..] {
            replacements.push((g.born - 1, c.reference(), &g.options));
        }
    }
    replacements.sort_by_key(|(p, r, _)| (*p, *r));
    let mut pages: BTreeSet<Page> = chart.differentials().iter().map(|d| d.page).collect();
    pages.extend(replacements.iter().map(|(p, _, _)| *p));
    for p in pages {
        for d in chart.differentials().iter().filter(|d| d.page == p) {
            let _ = writeln!(out, "d {} {} {}", d.page, reference_text(d.source), reference_text(d.target));
        }
        for (_, r, options) in replacements.iter().filter(|(q, _, _)| *q == p) {
            let _ = write!(out, "replaceclass {} page={p}", reference_text(*r));
            options_text(&mut out, options);
            out.push('\n');
        }
    }
    for l in chart.structlines() {
        let _ = write!(out, "structline {} {}", reference_text(l.source), reference_text(l.target));
        if let Some(label) = &l.label {
            let _ = write!(out, " label={}", quote(label));
        }
        let default = chart.default_structline_page(l.source, l.target).ok();
        if default != Some(l.born_page) {
            let _ = write!(out, " page={}", l.born_page);
        }
        options_text(&mut out, &l.options);
        out.push('\n');
    }
    out
}

/// [`serialize`] with a `# period (dn,ds)` header line.
pub fn serialize_periodic(chart: &Chart, period: (i32, i32)) -> String {
    format!("# period ({},{})\n{}", period.0, period.1, serialize(chart))
}
