//! Text syntax for wiring diagrams of bifunctions.
//!
//! Terms are built from dimension-annotated generators (`copy[2]`, `add[1]`),
//! file-backed atoms (`lin(@A.json)`, `relspan(@S.json)`, `gauss(@f.json)`,
//! `state(@p.json)`) and the combinators `;` (pipeline order: `a ; b` feeds
//! the output of `a` into `b`), `*` (side by side), and `adj`, `dagger`,
//! `inv`. `*` binds tighter than `;`, both associate to the left.
//!
//! Parsing only checks shape; dimensions and polarities are checked during
//! evaluation, once the file atoms are loaded and every subterm has a
//! definite type. Errors carry the source position and the offending slice.

use std::fmt;
use std::path::PathBuf;

use crate::bifunction::{GeneratorKind, Polarity, QuadBifunction};
use crate::error::Error;
use crate::serial;

/// Byte range of a subterm in the source text.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

/// The nine dimension-annotated generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenName {
    Id,
    Copy,
    Comp,
    Discard,
    Unit,
    Add,
    Coadd,
    Zero,
    Cozero,
}

impl GenName {
    pub const ALL: [GenName; 9] = [
        GenName::Id,
        GenName::Copy,
        GenName::Comp,
        GenName::Discard,
        GenName::Unit,
        GenName::Add,
        GenName::Coadd,
        GenName::Zero,
        GenName::Cozero,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            GenName::Id => "id",
            GenName::Copy => "copy",
            GenName::Comp => "comp",
            GenName::Discard => "discard",
            GenName::Unit => "unit",
            GenName::Add => "add",
            GenName::Coadd => "coadd",
            GenName::Zero => "zero",
            GenName::Cozero => "cozero",
        }
    }

    fn from_str(name: &str) -> Option<GenName> {
        GenName::ALL.iter().copied().find(|g| g.as_str() == name)
    }
}

#[derive(Debug, Clone)]
pub enum TermKind {
    Generator(GenName, usize),
    Lin(String),
    /// Span-file relation; the optional index is the source dimension of the
    /// split (defaults to half the span height).
    RelSpan(Option<usize>, String),
    Gauss(String),
    State(String),
    Seq(Box<Term>, Box<Term>),
    Par(Box<Term>, Box<Term>),
    Adj(Box<Term>),
    Dagger(Box<Term>),
    Inv(Box<Term>),
}

#[derive(Debug, Clone)]
pub struct Term {
    pub kind: TermKind,
    pub span: Span,
}

impl Term {
    /// Equality of shape, ignoring source positions.
    pub fn structurally_equal(&self, other: &Term) -> bool {
        use TermKind::*;
        match (&self.kind, &other.kind) {
            (Generator(a, n), Generator(b, m)) => a == b && n == m,
            (Lin(a), Lin(b)) | (Gauss(a), Gauss(b)) | (State(a), State(b)) => a == b,
            (RelSpan(s, a), RelSpan(t, b)) => s == t && a == b,
            (Seq(a1, a2), Seq(b1, b2)) | (Par(a1, a2), Par(b1, b2)) => {
                a1.structurally_equal(b1) && a2.structurally_equal(b2)
            }
            (Adj(a), Adj(b)) | (Dagger(a), Dagger(b)) | (Inv(a), Inv(b)) => {
                a.structurally_equal(b)
            }
            _ => false,
        }
    }

    /// Renders the term so that [`parse`] recovers the same shape.
    pub fn print(&self) -> String {
        let mut out = String::new();
        self.fmt_prec(1, &mut out);
        out
    }

    fn prec(&self) -> u8 {
        match self.kind {
            TermKind::Seq(..) => 1,
            TermKind::Par(..) => 2,
            _ => 3,
        }
    }

    fn fmt_prec(&self, min: u8, out: &mut String) {
        let wrap = self.prec() < min;
        if wrap {
            out.push('(');
        }
        match &self.kind {
            TermKind::Generator(g, n) => {
                out.push_str(g.as_str());
                out.push_str(&format!("[{n}]"));
            }
            TermKind::Lin(p) => out.push_str(&format!("lin(@{p})")),
            TermKind::RelSpan(None, p) => out.push_str(&format!("relspan(@{p})")),
            TermKind::RelSpan(Some(m), p) => out.push_str(&format!("relspan[{m}](@{p})")),
            TermKind::Gauss(p) => out.push_str(&format!("gauss(@{p})")),
            TermKind::State(p) => out.push_str(&format!("state(@{p})")),
            TermKind::Seq(a, b) => {
                a.fmt_prec(1, out);
                out.push_str(" ; ");
                b.fmt_prec(2, out);
            }
            TermKind::Par(a, b) => {
                a.fmt_prec(2, out);
                out.push_str(" * ");
                b.fmt_prec(3, out);
            }
            TermKind::Adj(t) => {
                out.push_str("adj(");
                t.fmt_prec(1, out);
                out.push(')');
            }
            TermKind::Dagger(t) => {
                out.push_str("dagger(");
                t.fmt_prec(1, out);
                out.push(')');
            }
            TermKind::Inv(t) => {
                out.push_str("inv(");
                t.fmt_prec(1, out);
                out.push(')');
            }
        }
        if wrap {
            out.push(')');
        }
    }
}

#[derive(Debug)]
pub enum DslError {
    Syntax { line: usize, column: usize, message: String },
    Type { line: usize, column: usize, snippet: String, message: String },
    Eval { line: usize, column: usize, snippet: String, source: Error },
    Io { path: PathBuf, message: String },
}

impl fmt::Display for DslError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DslError::Syntax { line, column, message } => {
                write!(f, "syntax error at {line}:{column}: {message}")
            }
            DslError::Type { line, column, snippet, message } => {
                write!(f, "type error at {line}:{column} in '{snippet}': {message}")
            }
            DslError::Eval { line, column, snippet, source } => {
                write!(f, "evaluation failed at {line}:{column} in '{snippet}': {source}")
            }
            DslError::Io { path, message } => {
                write!(f, "cannot read {}: {message}", path.display())
            }
        }
    }
}

impl std::error::Error for DslError {}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let mut line = 1;
    let mut column = 1;
    for (i, ch) in text.char_indices() {
        if i >= offset {
            break;
        }
        if ch == '\n' {
            line += 1;
            column = 1;
        } else {
            column += 1;
        }
    }
    (line, column)
}

fn snippet(text: &str, span: Span) -> String {
    let slice = text.get(span.start..span.end).unwrap_or("");
    if slice.len() > 60 {
        format!("{}...", &slice[..57])
    } else {
        slice.to_string()
    }
}

struct Parser<'a> {
    text: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

pub fn parse(source: &str) -> Result<Term, DslError> {
    let mut p = Parser { text: source, bytes: source.as_bytes(), pos: 0 };
    p.skip_ws();
    let term = p.parse_seq()?;
    p.skip_ws();
    if p.pos < p.bytes.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(term)
}

impl<'a> Parser<'a> {
    fn error(&self, message: impl Into<String>) -> DslError {
        let (line, column) = line_col(self.text, self.pos);
        DslError::Syntax { line, column, message: message.into() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn expect(&mut self, ch: u8) -> Result<(), DslError> {
        if self.peek() == Some(ch) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected '{}'", ch as char)))
        }
    }

    fn parse_seq(&mut self) -> Result<Term, DslError> {
        let mut left = self.parse_par()?;
        loop {
            self.skip_ws();
            if self.peek() != Some(b';') {
                return Ok(left);
            }
            self.pos += 1;
            self.skip_ws();
            let right = self.parse_par()?;
            let span = Span { start: left.span.start, end: right.span.end };
            left = Term { kind: TermKind::Seq(Box::new(left), Box::new(right)), span };
        }
    }

    fn parse_par(&mut self) -> Result<Term, DslError> {
        let mut left = self.parse_atom()?;
        loop {
            self.skip_ws();
            if self.peek() != Some(b'*') {
                return Ok(left);
            }
            self.pos += 1;
            self.skip_ws();
            let right = self.parse_atom()?;
            let span = Span { start: left.span.start, end: right.span.end };
            left = Term { kind: TermKind::Par(Box::new(left), Box::new(right)), span };
        }
    }

    fn parse_atom(&mut self) -> Result<Term, DslError> {
        self.skip_ws();
        let start = self.pos;
        if self.peek() == Some(b'(') {
            self.pos += 1;
            let inner = self.parse_seq()?;
            self.skip_ws();
            self.expect(b')')?;
            return Ok(inner);
        }
        let name = self.parse_ident()?;
        match name {
            "adj" | "dagger" | "inv" => {
                self.skip_ws();
                self.expect(b'(')?;
                let inner = Box::new(self.parse_seq()?);
                self.skip_ws();
                self.expect(b')')?;
                let span = Span { start, end: self.pos };
                let kind = match name {
                    "adj" => TermKind::Adj(inner),
                    "dagger" => TermKind::Dagger(inner),
                    _ => TermKind::Inv(inner),
                };
                Ok(Term { kind, span })
            }
            "lin" | "gauss" | "state" => {
                let path = self.parse_file_arg()?;
                let span = Span { start, end: self.pos };
                let kind = match name {
                    "lin" => TermKind::Lin(path),
                    "gauss" => TermKind::Gauss(path),
                    _ => TermKind::State(path),
                };
                Ok(Term { kind, span })
            }
            "relspan" => {
                self.skip_ws();
                let split = if self.peek() == Some(b'[') {
                    Some(self.parse_dimension()?)
                } else {
                    None
                };
                let path = self.parse_file_arg()?;
                let span = Span { start, end: self.pos };
                Ok(Term { kind: TermKind::RelSpan(split, path), span })
            }
            other => match GenName::from_str(other) {
                Some(g) => {
                    let n = self.parse_dimension()?;
                    let span = Span { start, end: self.pos };
                    Ok(Term { kind: TermKind::Generator(g, n), span })
                }
                None => {
                    self.pos = start;
                    Err(self.error(format!("unknown atom '{other}'")))
                }
            },
        }
    }

    fn parse_ident(&mut self) -> Result<&'a str, DslError> {
        let start = self.pos;
        while self
            .peek()
            .is_some_and(|b| b.is_ascii_alphanumeric() || b == b'_')
        {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.error("expected a term"));
        }
        Ok(&self.text[start..self.pos])
    }

    /// `[n]` with a decimal dimension.
    fn parse_dimension(&mut self) -> Result<usize, DslError> {
        self.skip_ws();
        self.expect(b'[')?;
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.error("expected a dimension"));
        }
        let n: usize = self.text[start..self.pos]
            .parse()
            .map_err(|_| self.error("dimension does not fit"))?;
        self.skip_ws();
        self.expect(b']')?;
        Ok(n)
    }

    /// `(@path)` with the path running up to the closing parenthesis.
    fn parse_file_arg(&mut self) -> Result<String, DslError> {
        self.skip_ws();
        self.expect(b'(')?;
        self.skip_ws();
        self.expect(b'@')?;
        let start = self.pos;
        while self.peek().is_some_and(|b| b != b')') {
            self.pos += 1;
        }
        let path = self.text[start..self.pos].trim().to_string();
        if path.is_empty() {
            return Err(self.error("expected a file path after '@'"));
        }
        self.expect(b')')?;
        Ok(path)
    }
}

/// How `gauss(@file)` atoms are read.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GaussInterp {
    Cgf,
    Logpdf,
}

/// Evaluation environment: the polarity used for generators, linear atoms
/// and states, the reading of Gauss atoms, and the directory against which
/// relative `@file` paths resolve.
#[derive(Debug, Clone)]
pub struct EvalContext {
    pub polarity: Polarity,
    pub interp: GaussInterp,
    pub base_dir: PathBuf,
}

impl Default for EvalContext {
    fn default() -> Self {
        EvalContext {
            polarity: Polarity::Convex,
            interp: GaussInterp::Cgf,
            base_dir: PathBuf::from("."),
        }
    }
}

pub fn eval(term: &Term, source: &str, ctx: &EvalContext) -> Result<QuadBifunction, DslError> {
    let at = |span: Span| {
        let (line, column) = line_col(source, span.start);
        (line, column, snippet(source, span))
    };
    let eval_err = |span: Span, e: Error| {
        let (line, column, snippet) = at(span);
        DslError::Eval { line, column, snippet, source: e }
    };
    let type_err = |span: Span, message: String| {
        let (line, column, snippet) = at(span);
        DslError::Type { line, column, snippet, message }
    };
    let with_polarity = |f: QuadBifunction| match ctx.polarity {
        Polarity::Convex => f,
        Polarity::Concave => f.negated(),
    };

    match &term.kind {
        TermKind::Generator(g, n) => {
            let f = match g {
                GenName::Id => QuadBifunction::identity(*n),
                GenName::Copy => QuadBifunction::generator(GeneratorKind::Copy, *n),
                GenName::Comp => QuadBifunction::generator(GeneratorKind::Compare, *n),
                GenName::Discard => QuadBifunction::generator(GeneratorKind::Discard, *n),
                GenName::Unit => QuadBifunction::generator(GeneratorKind::Unit, *n),
                GenName::Add => QuadBifunction::generator(GeneratorKind::Add, *n),
                GenName::Coadd => QuadBifunction::generator(GeneratorKind::Coadd, *n),
                GenName::Zero => QuadBifunction::generator(GeneratorKind::Zero, *n),
                GenName::Cozero => QuadBifunction::generator(GeneratorKind::Cozero, *n),
            };
            Ok(with_polarity(f))
        }
        TermKind::Lin(path) => {
            let text = read_file(ctx, path)?;
            let a = serial::matrix_from_json(&text).map_err(|e| eval_err(term.span, e))?;
            Ok(with_polarity(QuadBifunction::from_linear_map(&a)))
        }
        TermKind::RelSpan(split, path) => {
            let text = read_file(ctx, path)?;
            let span_matrix =
                serial::matrix_from_json(&text).map_err(|e| eval_err(term.span, e))?;
            let total = span_matrix.rows();
            let src = match split {
                Some(m) => *m,
                None if total % 2 == 0 => total / 2,
                None => {
                    return Err(type_err(
                        term.span,
                        format!("span height {total} is odd; give the split as relspan[m]"),
                    ))
                }
            };
            if src > total {
                return Err(type_err(
                    term.span,
                    format!("split {src} exceeds the span height {total}"),
                ));
            }
            let f = QuadBifunction::from_linear_relation(src, total - src, &span_matrix)
                .map_err(|e| eval_err(term.span, e))?;
            Ok(with_polarity(f))
        }
        TermKind::Gauss(path) => {
            let text = read_file(ctx, path)?;
            let map = serial::gauss_from_json(&text).map_err(|e| eval_err(term.span, e))?;
            Ok(match ctx.interp {
                GaussInterp::Cgf => map.cgf(),
                GaussInterp::Logpdf => map.logpdf(),
            })
        }
        TermKind::State(path) => {
            let text = read_file(ctx, path)?;
            let f = serial::pcqf_from_json(&text).map_err(|e| eval_err(term.span, e))?;
            Ok(QuadBifunction::from_pcqf_state(f, ctx.polarity))
        }
        TermKind::Seq(a, b) => {
            let fa = eval(a, source, ctx)?;
            let fb = eval(b, source, ctx)?;
            if fa.polarity() != fb.polarity() {
                return Err(type_err(
                    term.span,
                    format!(
                        "cannot pipe a {} term into a {} one",
                        polarity_name(fa.polarity()),
                        polarity_name(fb.polarity())
                    ),
                ));
            }
            if fa.dst_dim() != fb.src_dim() {
                return Err(type_err(
                    b.span,
                    format!(
                        "left side produces dimension {}, right side consumes {}",
                        fa.dst_dim(),
                        fb.src_dim()
                    ),
                ));
            }
            fb.compose(&fa).map_err(|e| eval_err(term.span, e))
        }
        TermKind::Par(a, b) => {
            let fa = eval(a, source, ctx)?;
            let fb = eval(b, source, ctx)?;
            if fa.polarity() != fb.polarity() {
                return Err(type_err(
                    term.span,
                    format!(
                        "cannot put a {} term beside a {} one",
                        polarity_name(fa.polarity()),
                        polarity_name(fb.polarity())
                    ),
                ));
            }
            fa.tensor(&fb).map_err(|e| eval_err(term.span, e))
        }
        TermKind::Adj(t) => {
            let f = eval(t, source, ctx)?;
            f.adjoint().map_err(|e| eval_err(term.span, e))
        }
        TermKind::Dagger(t) => Ok(eval(t, source, ctx)?.dagger()),
        TermKind::Inv(t) => Ok(eval(t, source, ctx)?.inverse()),
    }
}

fn polarity_name(p: Polarity) -> &'static str {
    match p {
        Polarity::Convex => "convex",
        Polarity::Concave => "concave",
    }
}

fn read_file(ctx: &EvalContext, path: &str) -> Result<String, DslError> {
    let resolved = {
        let p = PathBuf::from(path);
        if p.is_absolute() { p } else { ctx.base_dir.join(p) }
    };
    std::fs::read_to_string(&resolved)
        .map_err(|e| DslError::Io { path: resolved, message: e.to_string() })
}
