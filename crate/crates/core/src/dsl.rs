//! Text syntax for monoid specs, elements and queries.
//!
//! ```text
//! spec     := [label "="] body
//! body     := "N<" int ("," int)* ">"
//!           | "Z^" int "<" vector ("," vector)* ">"
//!           | "Q<" rational ("," rational)* ">"
//!           | "Qge1" | "Qge0" | "MultQge1" | "Dyadic" | "PrimeRecip"
//!           | "LexCone" | "ZxN0" | "CornerN2" | "Hilbert"
//!           | "Group(" [int ("," int)*] ")"
//! vector   := "(" sint ("," sint)* ")"
//! rational := int ["/" int]
//! ```
//!
//! Whitespace is insignificant and `#` starts a comment. Integers are
//! unsigned except inside vectors and element literals. Parsing never
//! panics: every failure is reported as a positioned [`Diagnostic`].
//!
//! Queries are a command word followed by its arguments, for example
//! `factorize N<3,4,5> 8 len=2` or `decide PrimeRecip bfm`; see
//! [`render_query`] for the full list of forms.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::deciders::Property;
use crate::error::{Error, Result};
use crate::monoid::{Element, ElementShape, Family, MonoidSpec};
use crate::query::Query;
use crate::scalar::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

/// A message tied to a source position (1-based line and column; `span`
/// is the length in characters of the offending text, at least 1).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub message: String,
    pub line: usize,
    pub column: usize,
    pub span: usize,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

/// Source text plus a name used in messages (a file name, `<arg>`, ...).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecText {
    pub source: String,
    pub origin: String,
}

impl SpecText {
    pub fn new(source: impl Into<String>, origin: impl Into<String>) -> Self {
        SpecText { source: source.into(), origin: origin.into() }
    }
}

/// What a line of DSL text denotes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Parsed {
    Spec(MonoidSpec),
    Query(Box<Query>),
    /// A bare element literal: integers and tuples become integer vectors,
    /// `n/d` becomes a rational.
    Literal(Element),
}

pub fn parse(text: &SpecText) -> std::result::Result<Parsed, Vec<Diagnostic>> {
    let mut p = Parser::new(&text.source)?;
    let parsed = match p.peek().kind.clone() {
        Tok::Ident(word) if QUERY_WORDS.contains(&word.as_str()) => {
            Parsed::Query(Box::new(p.query().map_err(|d| vec![d])?))
        }
        Tok::Ident(_) => Parsed::Spec(p.spec().map_err(|d| vec![d])?),
        _ => Parsed::Literal(p.literal().map_err(|d| vec![d])?),
    };
    p.expect_end().map_err(|d| vec![d])?;
    Ok(parsed)
}

pub fn parse_spec(text: &str) -> Result<MonoidSpec> {
    let mut p = Parser::new(text).map_err(Error::Parse)?;
    let spec = p.spec().map_err(|d| Error::Parse(vec![d]))?;
    p.expect_end().map_err(|d| Error::Parse(vec![d]))?;
    Ok(spec)
}

/// Parses an element in the syntax of `spec`'s element kind.
pub fn parse_element(spec: &MonoidSpec, text: &str) -> Result<Element> {
    let mut p = Parser::new(text).map_err(Error::Parse)?;
    let x = p.element(spec).map_err(|d| Error::Parse(vec![d]))?;
    p.expect_end().map_err(|d| Error::Parse(vec![d]))?;
    Ok(x)
}

pub fn parse_query(text: &str) -> Result<Query> {
    let mut p = Parser::new(text).map_err(Error::Parse)?;
    let q = p.query().map_err(|d| Error::Parse(vec![d]))?;
    p.expect_end().map_err(|d| Error::Parse(vec![d]))?;
    Ok(q)
}

/// Whitespace-separated integer vectors, e.g. `(1,2) (2,1) (3,0)`.
pub fn parse_points(text: &str) -> Result<Vec<Vec<i64>>> {
    let mut p = Parser::new(text).map_err(Error::Parse)?;
    let pts = p.points().map_err(|d| Error::Parse(vec![d]))?;
    p.expect_end().map_err(|d| Error::Parse(vec![d]))?;
    Ok(pts)
}

/// Bracketed element list in `spec`'s syntax, e.g. `[2,2,3]`.
pub fn parse_element_list(spec: &MonoidSpec, text: &str) -> Result<Vec<Element>> {
    let mut p = Parser::new(text).map_err(Error::Parse)?;
    let xs = p.element_list(spec).map_err(|d| Error::Parse(vec![d]))?;
    p.expect_end().map_err(|d| Error::Parse(vec![d]))?;
    Ok(xs)
}

/// Bracketed index-pair list, e.g. `[(1,2),(4,5)]`.
pub fn parse_pairs(text: &str) -> Result<Vec<(usize, usize)>> {
    let mut p = Parser::new(text).map_err(Error::Parse)?;
    let xs = p.pair_list().map_err(|d| Error::Parse(vec![d]))?;
    p.expect_end().map_err(|d| Error::Parse(vec![d]))?;
    Ok(xs)
}

// ---------------------------------------------------------------- rendering

pub fn render_spec(spec: &MonoidSpec) -> String {
    let body = match spec.family() {
        Family::FgLattice { dim: 1, generators } if generators.iter().all(|g| g[0] > 0) => {
            format!("N<{}>", join(generators.iter().map(|g| g[0].to_string())))
        }
        Family::FgLattice { dim, generators } => {
            format!("Z^{dim}<{}>", join(generators.iter().map(|g| render_tuple(g))))
        }
        Family::FgRational { generators } => format!("Q<{}>", join(generators.iter().map(|q| q.to_string()))),
        Family::FiniteAbelianGroup { invariant_factors } => {
            format!("Group({})", join(invariant_factors.iter().map(u64::to_string)))
        }
        f => f.id().to_string(),
    };
    match spec.label() {
        Some(l) => format!("{l} = {body}"),
        None => body,
    }
}

pub fn render_element(x: &Element) -> String {
    match x {
        Element::Vector(v) if v.len() == 1 => v[0].to_string(),
        Element::Vector(v) => render_tuple(v),
        Element::Rational(q) => q.to_string(),
        Element::Residues(r) if r.len() == 1 => r[0].to_string(),
        Element::Residues(r) => format!("({})", join(r.iter().map(u64::to_string))),
        Element::Natural(n) => n.to_string(),
    }
}

fn render_tuple(v: &[i64]) -> String {
    format!("({})", join(v.iter().map(i64::to_string)))
}

fn join(parts: impl Iterator<Item = String>) -> String {
    parts.collect::<Vec<_>>().join(",")
}

fn render_list(xs: &[Element]) -> String {
    format!("[{}]", join(xs.iter().map(render_element)))
}

/// Canonical text of a query; parses back to an equal query.
pub fn render_query(q: &Query) -> String {
    match q {
        Query::Contains { spec, x } => format!("contains {spec} {x}"),
        Query::Divides { spec, a, b } => format!("divides {spec} {a} {b}"),
        Query::Unit { spec, x } => format!("unit {spec} {x}"),
        Query::Atom { spec, x } => format!("atom {spec} {x}"),
        Query::Atoms { spec, bound } => match bound {
            Some(n) => format!("atoms {spec} bound={n}"),
            None => format!("atoms {spec}"),
        },
        Query::Factorize { spec, x, exact_length, max_results } => {
            let mut s = format!("factorize {spec} {x}");
            if let Some(l) = exact_length {
                s.push_str(&format!(" len={l}"));
            }
            if let Some(k) = max_results {
                s.push_str(&format!(" max={k}"));
            }
            s
        }
        Query::Lengths { spec, x } => format!("lengths {spec} {x}"),
        Query::Decide { spec, property } => format!("decide {spec} {property}"),
        Query::Audit { spec } => format!("audit {spec}"),
        Query::Gp { spec } => format!("gp {spec}"),
        Query::Units { spec } => format!("units {spec}"),
        Query::Undermonoid { ambient, sub } => format!("undermonoid {ambient} {sub}"),
        Query::Union { ambient, sub, b } => format!("union {ambient} {sub} {b}"),
        Query::Adjoin { base, b, u } => format!("adjoin {base} {b} {u}"),
        Query::Hilbert { n } => format!("hilbert {n}"),
        Query::Minimal { points } => {
            format!("minimal {}", points.iter().map(|p| render_tuple(p)).collect::<Vec<_>>().join(" "))
        }
        Query::Chain { points } => {
            format!("chain {}", points.iter().map(|p| render_tuple(p)).collect::<Vec<_>>().join(" "))
        }
        Query::Blocks { spec, chain, pairs } => {
            format!("blocks {spec} {} [{}]", render_list(chain), join(pairs.iter().map(|(s, t)| format!("({s},{t})"))))
        }
        Query::Embed { p, q, x } => format!("embed {p} {q} {x}"),
    }
}

// ---------------------------------------------------------------- lexing

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
    End,
}

#[derive(Clone, Debug)]
struct Token {
    kind: Tok,
    line: usize,
    column: usize,
    len: usize,
}

const SYMBOLS: &str = "<>(),/^-=[]";

fn lex(source: &str) -> std::result::Result<Vec<Token>, Vec<Diagnostic>> {
    let chars: Vec<char> = source.chars().collect();
    let mut out = Vec::new();
    let mut diags = Vec::new();
    let (mut i, mut line, mut column) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        let start = (line, column);
        if c == '\n' {
            i += 1;
            line += 1;
            column = 1;
        } else if c.is_whitespace() {
            i += 1;
            column += 1;
        } else if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
                column += 1;
            }
        } else if c.is_ascii_digit() {
            let j = chars[i..].iter().position(|ch| !ch.is_ascii_digit()).map_or(chars.len(), |k| i + k);
            let digits: String = chars[i..j].iter().collect();
            let n: BigInt = digits.parse().expect("ascii digits");
            out.push(Token { kind: Tok::Int(n), line: start.0, column: start.1, len: j - i });
            column += j - i;
            i = j;
        } else if c.is_ascii_alphabetic() || c == '_' {
            let j = chars[i..]
                .iter()
                .position(|ch| !(ch.is_ascii_alphanumeric() || *ch == '_'))
                .map_or(chars.len(), |k| i + k);
            let word: String = chars[i..j].iter().collect();
            out.push(Token { kind: Tok::Ident(word), line: start.0, column: start.1, len: j - i });
            column += j - i;
            i = j;
        } else if SYMBOLS.contains(c) {
            out.push(Token { kind: Tok::Sym(c), line: start.0, column: start.1, len: 1 });
            i += 1;
            column += 1;
        } else {
            diags.push(Diagnostic {
                severity: Severity::Error,
                message: format!("unexpected character `{c}`"),
                line: start.0,
                column: start.1,
                span: 1,
            });
            i += 1;
            column += 1;
        }
    }
    if !diags.is_empty() {
        return Err(diags);
    }
    out.push(Token { kind: Tok::End, line, column, len: 1 });
    Ok(out)
}

// ---------------------------------------------------------------- parsing

const QUERY_WORDS: [&str; 19] = [
    "contains",
    "divides",
    "unit",
    "atom",
    "atoms",
    "factorize",
    "lengths",
    "decide",
    "audit",
    "gp",
    "units",
    "undermonoid",
    "union",
    "adjoin",
    "hilbert",
    "minimal",
    "chain",
    "blocks",
    "embed",
];

const PATTERN_WORDS: [(&str, Family); 9] = [
    ("Qge1", Family::RationalIntervalGe1),
    ("Qge0", Family::RationalNonneg),
    ("MultQge1", Family::MultRationalGe1),
    ("Dyadic", Family::Dyadic),
    ("PrimeRecip", Family::PrimeReciprocal),
    ("LexCone", Family::LexCone),
    ("ZxN0", Family::ZcrossN0),
    ("CornerN2", Family::CornerN2),
    ("Hilbert", Family::Hilbert),
];

type PResult<T> = std::result::Result<T, Diagnostic>;

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Int(n) => format!("integer `{n}`"),
        Tok::Ident(w) => format!("`{w}`"),
        Tok::Sym(c) => format!("`{c}`"),
        Tok::End => "end of input".to_string(),
    }
}

impl Parser {
    fn new(source: &str) -> std::result::Result<Self, Vec<Diagnostic>> {
        Ok(Parser { toks: lex(source)?, pos: 0 })
    }

    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].kind
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error_at(t: &Token, message: impl Into<String>) -> Diagnostic {
        Diagnostic { severity: Severity::Error, message: message.into(), line: t.line, column: t.column, span: t.len }
    }

    fn unexpected(&self, wanted: &str) -> Diagnostic {
        let t = self.peek();
        Self::error_at(t, format!("expected {wanted}, found {}", describe(&t.kind)))
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek().kind == Tok::Sym(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> PResult<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.unexpected(&format!("`{c}`")))
        }
    }

    fn expect_end(&mut self) -> PResult<()> {
        if self.peek().kind == Tok::End {
            Ok(())
        } else {
            Err(self.unexpected("end of input"))
        }
    }

    fn ident(&mut self, wanted: &str) -> PResult<(String, Token)> {
        match self.peek().kind.clone() {
            Tok::Ident(w) => Ok((w, self.bump())),
            _ => Err(self.unexpected(wanted)),
        }
    }

    /// Unsigned integer.
    fn uint(&mut self) -> PResult<(BigInt, Token)> {
        match self.peek().kind.clone() {
            Tok::Int(n) => Ok((n, self.bump())),
            Tok::Sym('-') => Err(self.unexpected("an unsigned integer (signs are only allowed inside vectors)")),
            _ => Err(self.unexpected("an integer")),
        }
    }

    fn sint(&mut self) -> PResult<(BigInt, Token)> {
        let first = self.peek().clone();
        let negative = self.eat('-');
        let (n, _) = self.uint().map_err(|_| self.unexpected("an integer"))?;
        Ok((if negative { -n } else { n }, first))
    }

    fn to_i64(n: &BigInt, t: &Token) -> PResult<i64> {
        n.to_i64().ok_or_else(|| Self::error_at(t, format!("integer {n} is out of range")))
    }

    fn to_u64(n: &BigInt, t: &Token) -> PResult<u64> {
        n.to_u64().ok_or_else(|| Self::error_at(t, format!("integer {n} is out of range")))
    }

    fn u64_arg(&mut self) -> PResult<u64> {
        let (n, t) = self.uint()?;
        Self::to_u64(&n, &t)
    }

    fn tuple(&mut self) -> PResult<(Vec<i64>, Token)> {
        let open = self.peek().clone();
        self.expect('(')?;
        let mut v = Vec::new();
        if !self.eat(')') {
            loop {
                let (n, t) = self.sint()?;
                v.push(Self::to_i64(&n, &t)?);
                if self.eat(')') {
                    break;
                }
                self.expect(',')?;
            }
        }
        Ok((v, open))
    }

    fn rational(&mut self, signed: bool) -> PResult<(Rational, Token)> {
        let (n, t) = if signed { self.sint()? } else { self.uint()? };
        if self.eat('/') {
            let (d, dt) = self.uint()?;
            if d.is_zero() {
                return Err(Self::error_at(&dt, "zero denominator"));
            }
            return Ok((Rational::new(n, d), t));
        }
        Ok((Rational::from_integer(n), t))
    }

    fn spec(&mut self) -> PResult<MonoidSpec> {
        let label = match (self.peek_at(0), self.peek_at(1)) {
            (Tok::Ident(w), Tok::Sym('=')) => {
                let w = w.clone();
                self.bump();
                self.bump();
                Some(w)
            }
            _ => None,
        };
        let spec = self.spec_body()?;
        Ok(match label {
            Some(l) => spec.with_label(l),
            None => spec,
        })
    }

    fn spec_body(&mut self) -> PResult<MonoidSpec> {
        let (word, head) = self.ident("a monoid family")?;
        let semantic = |r: Result<MonoidSpec>| r.map_err(|e| Self::error_at(&head, semantic_message(e)));
        match word.as_str() {
            "N" => {
                self.expect('<')?;
                let mut gens = Vec::new();
                loop {
                    let (n, t) = self.uint()?;
                    if n.is_zero() {
                        return Err(Self::error_at(&t, "zero generator"));
                    }
                    gens.push(Self::to_i64(&n, &t)?);
                    if self.eat('>') {
                        break;
                    }
                    self.expect(',')?;
                }
                semantic(MonoidSpec::numerical(&gens))
            }
            "Z" => {
                self.expect('^')?;
                let (d, dt) = self.uint()?;
                let dim = Self::to_u64(&d, &dt)?;
                if dim == 0 || dim > 64 {
                    return Err(Self::error_at(&dt, "dimension must be between 1 and 64"));
                }
                self.expect('<')?;
                let mut gens = Vec::new();
                loop {
                    let (v, t) = self.tuple()?;
                    if v.len() as u64 != dim {
                        return Err(Self::error_at(&t, format!("vector of length {} in dimension {dim}", v.len())));
                    }
                    if v.iter().all(|&x| x == 0) {
                        return Err(Self::error_at(&t, "zero generator"));
                    }
                    gens.push(v);
                    if self.eat('>') {
                        break;
                    }
                    self.expect(',')?;
                }
                semantic(MonoidSpec::fg_lattice(dim as usize, gens))
            }
            "Q" => {
                self.expect('<')?;
                let mut gens = Vec::new();
                loop {
                    gens.push(self.rational(false)?.0);
                    if self.eat('>') {
                        break;
                    }
                    self.expect(',')?;
                }
                semantic(MonoidSpec::fg_rational(gens))
            }
            "Group" => {
                self.expect('(')?;
                let mut factors = Vec::new();
                if !self.eat(')') {
                    loop {
                        let (n, t) = self.uint()?;
                        let d = Self::to_u64(&n, &t)?;
                        if d < 2 {
                            return Err(Self::error_at(&t, format!("invariant factor {d} is smaller than 2")));
                        }
                        factors.push(d);
                        if self.eat(')') {
                            break;
                        }
                        self.expect(',')?;
                    }
                }
                semantic(MonoidSpec::group(factors))
            }
            w => match PATTERN_WORDS.iter().find(|(k, _)| *k == w) {
                Some((_, f)) => semantic(MonoidSpec::pattern(f.clone())),
                None => Err(Self::error_at(&head, format!("unknown monoid family `{w}`"))),
            },
        }
    }

    fn element(&mut self, spec: &MonoidSpec) -> PResult<Element> {
        let start = self.peek().clone();
        let x = match spec.family().element_shape() {
            ElementShape::Vector(d) => {
                if d == 1 && self.peek().kind != Tok::Sym('(') {
                    let (n, t) = self.sint()?;
                    Element::Vector(vec![Self::to_i64(&n, &t)?])
                } else {
                    Element::Vector(self.tuple()?.0)
                }
            }
            ElementShape::Rational => Element::Rational(self.rational(true)?.0),
            ElementShape::Natural => Element::Natural(self.u64_arg()?),
            ElementShape::Residues(k) => {
                if k == 1 && self.peek().kind != Tok::Sym('(') {
                    Element::Residues(vec![self.u64_arg()?])
                } else {
                    let (v, t) = self.tuple()?;
                    let r: Option<Vec<u64>> = v.iter().map(|&x| u64::try_from(x).ok()).collect();
                    Element::Residues(r.ok_or_else(|| Self::error_at(&t, "residues must be nonnegative"))?)
                }
            }
        };
        spec.check_element(&x).map_err(|e| Self::error_at(&start, semantic_message(e)))?;
        Ok(x)
    }

    fn literal(&mut self) -> PResult<Element> {
        if self.peek().kind == Tok::Sym('(') {
            return Ok(Element::Vector(self.tuple()?.0));
        }
        let (q, t) = self.rational(true)?;
        if q.is_integer() {
            Ok(Element::Vector(vec![Self::to_i64(q.numer(), &t)?]))
        } else {
            Ok(Element::Rational(q))
        }
    }

    fn points(&mut self) -> PResult<Vec<Vec<i64>>> {
        let mut pts = vec![self.tuple()?.0];
        while self.peek().kind == Tok::Sym('(') {
            pts.push(self.tuple()?.0);
        }
        Ok(pts)
    }

    fn element_list(&mut self, spec: &MonoidSpec) -> PResult<Vec<Element>> {
        self.expect('[')?;
        let mut xs = Vec::new();
        if !self.eat(']') {
            loop {
                xs.push(self.element(spec)?);
                if self.eat(']') {
                    break;
                }
                self.expect(',')?;
            }
        }
        Ok(xs)
    }

    fn pair_list(&mut self) -> PResult<Vec<(usize, usize)>> {
        self.expect('[')?;
        let mut xs = Vec::new();
        if !self.eat(']') {
            loop {
                let (v, t) = self.tuple()?;
                let [s, e] = v[..] else { return Err(Self::error_at(&t, "index pairs have two entries")) };
                let (Ok(s), Ok(e)) = (usize::try_from(s), usize::try_from(e)) else {
                    return Err(Self::error_at(&t, "indices must be nonnegative"));
                };
                xs.push((s, e));
                if self.eat(']') {
                    break;
                }
                self.expect(',')?;
            }
        }
        Ok(xs)
    }

    /// `key=value` option, if the next tokens are one with a key in `keys`.
    fn option(&mut self, keys: &[&str]) -> PResult<Option<(String, u64)>> {
        match (self.peek_at(0), self.peek_at(1)) {
            (Tok::Ident(k), Tok::Sym('=')) => {
                let k = k.clone();
                let t = self.bump();
                if !keys.contains(&k.as_str()) {
                    return Err(Self::error_at(
                        &t,
                        format!("unknown option `{k}` (expected one of {})", keys.join(", ")),
                    ));
                }
                self.bump();
                Ok(Some((k, self.u64_arg()?)))
            }
            _ => Ok(None),
        }
    }

    fn query(&mut self) -> PResult<Query> {
        let (word, head) = self.ident("a query command")?;
        Ok(match word.as_str() {
            "contains" | "unit" | "atom" | "lengths" => {
                let spec = self.spec()?;
                let x = self.element(&spec)?;
                match word.as_str() {
                    "contains" => Query::Contains { spec, x },
                    "unit" => Query::Unit { spec, x },
                    "atom" => Query::Atom { spec, x },
                    _ => Query::Lengths { spec, x },
                }
            }
            "divides" => {
                let spec = self.spec()?;
                let a = self.element(&spec)?;
                let b = self.element(&spec)?;
                Query::Divides { spec, a, b }
            }
            "atoms" => {
                let spec = self.spec()?;
                let bound = self.option(&["bound"])?.map(|(_, v)| v);
                Query::Atoms { spec, bound }
            }
            "factorize" => {
                let spec = self.spec()?;
                let x = self.element(&spec)?;
                let (mut exact_length, mut max_results) = (None, None);
                while let Some((k, v)) = self.option(&["len", "max"])? {
                    if k == "len" {
                        exact_length = Some(v);
                    } else {
                        max_results = Some(v as usize);
                    }
                }
                Query::Factorize { spec, x, exact_length, max_results }
            }
            "decide" => {
                let spec = self.spec()?;
                let (p, t) = self.ident("a property name")?;
                let property: Property =
                    p.parse().map_err(|_| Self::error_at(&t, format!("unknown property `{p}`")))?;
                if property == Property::Undermonoid {
                    return Err(Self::error_at(&t, "use `undermonoid AMBIENT SUB` for undermonoid checks"));
                }
                Query::Decide { spec, property }
            }
            "audit" => Query::Audit { spec: self.spec()? },
            "gp" => Query::Gp { spec: self.spec()? },
            "units" => Query::Units { spec: self.spec()? },
            "undermonoid" => {
                let ambient = self.spec()?;
                let sub = self.spec()?;
                Query::Undermonoid { ambient, sub }
            }
            "union" => {
                let ambient = self.spec()?;
                let sub = self.spec()?;
                let b = self.element(&sub)?;
                Query::Union { ambient, sub, b }
            }
            "adjoin" => {
                let base = self.spec()?;
                let b = self.element(&base)?;
                let u = self.adjoin_unit(&base)?;
                Query::Adjoin { base, b, u }
            }
            "hilbert" => Query::Hilbert { n: self.u64_arg()? },
            "minimal" => Query::Minimal { points: self.points()? },
            "chain" => Query::Chain { points: self.points()? },
            "blocks" => {
                let spec = self.spec()?;
                let chain = self.element_list(&spec)?;
                let pairs = self.pair_list()?;
                Query::Blocks { spec, chain, pairs }
            }
            "embed" => {
                let p = self.u64_arg()?;
                let q = self.u64_arg()?;
                let x = Element::Vector(self.tuple()?.0);
                Query::Embed { p, q, x }
            }
            w => return Err(Self::error_at(&head, format!("unknown command `{w}`"))),
        })
    }

    /// `u` lives in a group containing the base, so its coordinates may
    /// leave the base's element range (a negative integer, say).
    fn adjoin_unit(&mut self, base: &MonoidSpec) -> PResult<Element> {
        let start = self.peek().clone();
        match base.family().element_shape() {
            ElementShape::Vector(d) => {
                let v = if d == 1 && self.peek().kind != Tok::Sym('(') {
                    let (n, t) = self.sint()?;
                    vec![Self::to_i64(&n, &t)?]
                } else {
                    self.tuple()?.0
                };
                if v.len() != d {
                    return Err(Self::error_at(&start, format!("expected a vector of length {d}")));
                }
                Ok(Element::Vector(v))
            }
            ElementShape::Rational => {
                let q = self.rational(true)?.0;
                if base.family().is_multiplicative() && !q.is_positive() {
                    return Err(Self::error_at(&start, "multiplicative elements must be positive"));
                }
                Ok(Element::Rational(q))
            }
            _ => self.element(base),
        }
    }
}

fn semantic_message(e: Error) -> String {
    match e {
        Error::Input(m) | Error::Precondition(m) | Error::Unsupported(m) | Error::Overflow(m) => m,
        Error::Parse(ds) => ds.first().map(|d| d.message.clone()).unwrap_or_default(),
    }
}
