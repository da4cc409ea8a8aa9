//! Text formats: network documents (`prn/1`), Boolean network documents
//! (`pbn/1`), morphism map files, and state subsets.
//!
//! ```text
//! prn/1
//! # comments run to the end of the line
//! space product 2 2
//! function f1 0.46
//!   (0,0) -> (0,0)
//!   (0,1) -> (0,1)
//!   (1,0) -> (1,0)
//!   (1,1) -> (1,1)
//! function f4 0.11 linear [[0,0],[0,0]]
//! ```
//!
//! A space is either `space product a1 a2 ...` or an explicit
//! `states s1 s2 ...` line, optionally followed by `alphabets a1 a2 ...`.
//! A function is listed as `src -> dst` lines, one per state in any order,
//! or with the `linear` shorthand over `Z_p^n` when every alphabet is the
//! same prime `p`. Names containing spaces are written in double quotes.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::exact::{format_rational, parse_rational, Rational};
use crate::linear::{linear_map_fds, FieldMatrix, LinearError};
use crate::morphism::{Morphism, MorphismError};
use crate::network::{parse_state_list, NetworkError, Prn, Probability, State, StateFunction, StateSpace};
use crate::pbn::{Pbn, Predictor};

pub const NETWORK_HEADER: &str = "prn/1";
pub const PBN_HEADER: &str = "pbn/1";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FormatErrorKind {
    #[error("{0}")]
    Syntax(String),
    #[error(transparent)]
    Network(#[from] NetworkError),
    #[error(transparent)]
    Linear(#[from] LinearError),
    #[error(transparent)]
    Morphism(#[from] MorphismError),
}

/// An error with its 1-based line and column and the document section it
/// belongs to.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("line {line}, column {column} ({section}): {kind}")]
pub struct FormatError {
    pub line: usize,
    pub column: usize,
    pub section: String,
    pub kind: Box<FormatErrorKind>,
}

impl FormatError {
    fn new(line: usize, column: usize, section: impl Into<String>, kind: impl Into<FormatErrorKind>) -> Self {
        FormatError { line, column, section: section.into(), kind: Box::new(kind.into()) }
    }

    fn syntax(line: usize, column: usize, section: impl Into<String>, msg: impl Into<String>) -> Self {
        Self::new(line, column, section, FormatErrorKind::Syntax(msg.into()))
    }
}

/// A word on a line with its 1-based column.
#[derive(Debug, Clone, Copy)]
struct Token<'a> {
    text: &'a str,
    column: usize,
}

/// One meaningful line: comments stripped, blank lines skipped.
#[derive(Debug, Clone)]
struct Line<'a> {
    number: usize,
    text: &'a str,
}

impl<'a> Line<'a> {
    fn all(text: &'a str) -> Vec<Line<'a>> {
        text.lines()
            .enumerate()
            .map(|(i, l)| Line { number: i + 1, text: l.split('#').next().unwrap_or("").trim_end() })
            .filter(|l| !l.text.trim().is_empty())
            .collect()
    }

    fn indent(&self) -> usize {
        self.text.len() - self.text.trim_start().len() + 1
    }

    /// Whitespace-separated words; a word starting with `"` runs to the
    /// closing quote.
    fn tokens(&self) -> Result<Vec<Token<'a>>, FormatError> {
        let mut out = Vec::new();
        let bytes = self.text.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            if bytes[i].is_ascii_whitespace() {
                i += 1;
                continue;
            }
            let start = i;
            if bytes[i] == b'"' {
                let close = self.text[i + 1..]
                    .find('"')
                    .ok_or_else(|| FormatError::syntax(self.number, i + 1, "line", "unclosed quote"))?;
                out.push(Token { text: &self.text[i + 1..i + 1 + close], column: start + 1 });
                i += close + 2;
                continue;
            }
            while i < bytes.len() && !bytes[i].is_ascii_whitespace() {
                i += 1;
            }
            out.push(Token { text: &self.text[start..i], column: start + 1 });
        }
        Ok(out)
    }

    /// Everything after the first `skip` tokens, with its column.
    fn rest_after(&self, token: &Token<'_>) -> (usize, &'a str) {
        let offset = token.column - 1 + token.text.len();
        let rest = &self.text[offset..];
        let trimmed = rest.trim_start();
        (offset + rest.len() - trimmed.len() + 1, trimmed)
    }
}

fn parse_count(tok: &Token<'_>, line: usize, section: &str) -> Result<u32, FormatError> {
    tok.text.parse::<u32>().map_err(|_| {
        FormatError::syntax(line, tok.column, section, format!("expected a positive integer, found `{}`", tok.text))
    })
}

fn quote(name: &str) -> String {
    if name.is_empty() || name.contains(char::is_whitespace) || name.contains('#') {
        format!("\"{name}\"")
    } else {
        name.to_string()
    }
}

/// How a document declares its states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpaceDecl {
    Product(Vec<u32>),
    States { states: Vec<State>, alphabets: Option<Vec<u32>> },
}

impl SpaceDecl {
    pub fn build(&self) -> Result<StateSpace, NetworkError> {
        match self {
            SpaceDecl::Product(a) => StateSpace::product(a),
            SpaceDecl::States { states, alphabets: Some(a) } => StateSpace::with_alphabets(states.clone(), a.clone()),
            SpaceDecl::States { states, alphabets: None } => StateSpace::new(states.clone()),
        }
    }

    pub fn of(space: &StateSpace) -> SpaceDecl {
        match space.alphabets() {
            Some(a) if space.is_full_product() => SpaceDecl::Product(a.to_vec()),
            a => SpaceDecl::States { states: space.states().to_vec(), alphabets: a.map(<[u32]>::to_vec) },
        }
    }
}

impl fmt::Display for SpaceDecl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |xs: &[u32]| xs.iter().map(u32::to_string).collect::<Vec<_>>().join(" ");
        match self {
            SpaceDecl::Product(a) => writeln!(f, "space product {}", join(a)),
            SpaceDecl::States { states, alphabets } => {
                let names: Vec<String> = states.iter().map(State::to_string).collect();
                writeln!(f, "states {}", names.join(" "))?;
                match alphabets {
                    Some(a) => writeln!(f, "alphabets {}", join(a)),
                    None => Ok(()),
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FunctionBody {
    /// `(source, image)` pairs in the listed order.
    Map(Vec<(State, State)>),
    /// Matrix rows; the modulus comes from the space.
    Linear(Vec<Vec<i64>>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionDecl {
    pub name: String,
    pub probability: Rational,
    pub body: FunctionBody,
}

/// A parsed `prn/1` document, before validation as a network.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetworkDocument {
    pub version: u32,
    pub space: SpaceDecl,
    pub functions: Vec<FunctionDecl>,
}

/// Where each part of a document came from, for error reporting.
#[derive(Debug, Clone, Default)]
struct Locations {
    space: (usize, usize),
    functions: Vec<(usize, usize)>,
    /// Per function, the line of each map entry.
    entries: Vec<Vec<usize>>,
}

impl NetworkDocument {
    /// Canonical document for a network: every function as an explicit map
    /// in state order.
    pub fn from_prn(prn: &Prn) -> Self {
        let space = prn.space();
        let functions = prn
            .entries()
            .iter()
            .map(|(f, p)| FunctionDecl {
                name: f.name().to_string(),
                probability: p.value().clone(),
                body: FunctionBody::Map(
                    (0..space.len()).map(|u| (space.state(u).clone(), space.state(f.apply(u)).clone())).collect(),
                ),
            })
            .collect();
        NetworkDocument { version: 1, space: SpaceDecl::of(space), functions }
    }

    pub fn to_prn(&self) -> Result<Prn, NetworkError> {
        self.build(&Locations::default()).map_err(|e| match *e.kind {
            FormatErrorKind::Network(n) => n,
            other => NetworkError::ParseState { text: e.section, reason: other.to_string() },
        })
    }

    fn build(&self, at: &Locations) -> Result<Prn, FormatError> {
        let (sl, sc) = at.space;
        let space = self.space.build().map_err(|e| FormatError::new(sl, sc, "space", e))?;
        let mut entries = Vec::with_capacity(self.functions.len());
        for (k, decl) in self.functions.iter().enumerate() {
            let (fl, fc) = at.functions.get(k).copied().unwrap_or((0, 0));
            let section = format!("function {}", decl.name);
            let f = match &decl.body {
                FunctionBody::Map(pairs) => {
                    let mut table = vec![usize::MAX; space.len()];
                    for (e, (src, dst)) in pairs.iter().enumerate() {
                        let line = at.entries.get(k).and_then(|v| v.get(e)).copied().unwrap_or(fl);
                        let err = |kind: NetworkError| FormatError::new(line, 1, section.clone(), kind);
                        let u = space.index_of(src).ok_or_else(|| err(NetworkError::UnknownState(src.clone())))?;
                        let v = space.index_of(dst).ok_or_else(|| {
                            err(NetworkError::LeavesStateSpace {
                                function: decl.name.clone(),
                                state: src.clone(),
                                image: dst.clone(),
                            })
                        })?;
                        if table[u] != usize::MAX {
                            return Err(err(NetworkError::DuplicateAssignment {
                                function: decl.name.clone(),
                                state: src.clone(),
                            }));
                        }
                        table[u] = v;
                    }
                    let found = table.iter().filter(|&&t| t != usize::MAX).count();
                    if found != space.len() {
                        return Err(FormatError::new(
                            fl,
                            fc,
                            section,
                            NetworkError::PartialFunction { function: decl.name.clone(), expected: space.len(), found },
                        ));
                    }
                    StateFunction::new(decl.name.clone(), table, space.len())
                        .map_err(|e| FormatError::new(fl, fc, section.clone(), e))?
                }
                FunctionBody::Linear(rows) => {
                    let p = match space.alphabets() {
                        Some(a) if space.is_full_product() && a.iter().all(|&x| x == a[0]) => a[0],
                        _ => {
                            return Err(FormatError::syntax(
                                fl,
                                fc,
                                section,
                                "`linear` needs a `space product p p ...` declaration",
                            ))
                        }
                    };
                    let m =
                        FieldMatrix::new(p, rows.clone()).map_err(|e| FormatError::new(fl, fc, section.clone(), e))?;
                    if m.order() != space.alphabets().map_or(0, <[u32]>::len) {
                        return Err(FormatError::syntax(fl, fc, section, "matrix size does not match the space"));
                    }
                    linear_map_fds(&m, &decl.name).map_err(|e| FormatError::new(fl, fc, section.clone(), e))?
                }
            };
            let p =
                Probability::new(decl.probability.clone()).map_err(|e| FormatError::new(fl, fc, section.clone(), e))?;
            entries.push((f, p));
        }
        let (fl, fc) = at.functions.first().copied().unwrap_or(at.space);
        Prn::new(space, entries).map_err(|e| FormatError::new(fl, fc, "function list", e))
    }
}

impl fmt::Display for NetworkDocument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "prn/{}", self.version)?;
        write!(f, "{}", self.space)?;
        for decl in &self.functions {
            write!(f, "function {} {}", quote(&decl.name), format_rational(&decl.probability))?;
            match &decl.body {
                FunctionBody::Map(pairs) => {
                    writeln!(f)?;
                    for (s, t) in pairs {
                        writeln!(f, "  {s} -> {t}")?;
                    }
                }
                FunctionBody::Linear(rows) => {
                    let rows: Vec<String> = rows
                        .iter()
                        .map(|r| format!("[{}]", r.iter().map(i64::to_string).collect::<Vec<_>>().join(",")))
                        .collect();
                    writeln!(f, " linear [{}]", rows.join(","))?;
                }
            }
        }
        Ok(())
    }
}

fn parse_header(lines: &[Line<'_>], expected: &str) -> Result<u32, FormatError> {
    let first = lines
        .first()
        .ok_or_else(|| FormatError::syntax(1, 1, "header", format!("empty document, expected `{expected}`")))?;
    let word = first.text.trim();
    let kind = expected.split('/').next().unwrap_or(expected);
    let version =
        word.strip_prefix(kind).and_then(|r| r.strip_prefix('/')).and_then(|v| v.parse::<u32>().ok()).ok_or_else(
            || {
                FormatError::syntax(
                    first.number,
                    first.indent(),
                    "header",
                    format!("expected `{expected}`, found `{word}`"),
                )
            },
        )?;
    if format!("{kind}/{version}") != expected {
        return Err(FormatError::syntax(
            first.number,
            first.indent(),
            "header",
            format!("unsupported version `{word}`"),
        ));
    }
    Ok(version)
}

fn parse_states_at(line: &Line<'_>, column: usize, text: &str, section: &str) -> Result<Vec<State>, FormatError> {
    parse_state_list(text).map_err(|e| FormatError::new(line.number, column, section, e))
}

fn parse_alphabets(line: &Line<'_>, toks: &[Token<'_>], section: &str) -> Result<Vec<u32>, FormatError> {
    if toks.is_empty() {
        return Err(FormatError::syntax(line.number, line.indent(), section, "expected alphabet sizes"));
    }
    toks.iter().map(|t| parse_count(t, line.number, section)).collect()
}

/// Parses the space declaration at `lines[i]`, returning it and the next
/// line index.
fn parse_space(lines: &[Line<'_>], i: usize) -> Result<(SpaceDecl, usize), FormatError> {
    let line = lines.get(i).ok_or_else(|| {
        FormatError::syntax(lines.last().map_or(1, |l| l.number), 1, "space", "missing space declaration")
    })?;
    let toks = line.tokens()?;
    match toks.first().map(|t| t.text) {
        Some("space") => match toks.get(1).map(|t| t.text) {
            Some("product") => Ok((SpaceDecl::Product(parse_alphabets(line, &toks[2..], "space")?), i + 1)),
            _ => Err(FormatError::syntax(
                line.number,
                toks.get(1).map_or(line.indent(), |t| t.column),
                "space",
                "expected `space product a1 a2 ...`",
            )),
        },
        Some("states") => {
            let (col, rest) = line.rest_after(&toks[0]);
            let states = parse_states_at(line, col, rest, "space")?;
            let mut alphabets = None;
            let mut next = i + 1;
            if let Some(l) = lines.get(next) {
                let t = l.tokens()?;
                if t.first().map(|t| t.text) == Some("alphabets") {
                    alphabets = Some(parse_alphabets(l, &t[1..], "space")?);
                    next += 1;
                }
            }
            Ok((SpaceDecl::States { states, alphabets }, next))
        }
        _ => Err(FormatError::syntax(
            line.number,
            line.indent(),
            "space",
            "expected `space product ...` or `states ...`",
        )),
    }
}

fn parse_probability(tok: Option<&Token<'_>>, line: &Line<'_>, section: &str) -> Result<Rational, FormatError> {
    let tok =
        tok.ok_or_else(|| FormatError::syntax(line.number, line.text.len() + 1, section, "missing probability"))?;
    parse_rational(tok.text).map_err(|e| FormatError::new(line.number, tok.column, section, NetworkError::from(e)))
}

fn parse_matrix_rows(text: &str, line: &Line<'_>, column: usize, section: &str) -> Result<Vec<Vec<i64>>, FormatError> {
    // the matrix parser wants a modulus; any prime will do for the rows
    let m: Result<FieldMatrix, _> = format!("{text} mod 2").parse();
    if let Err(e) = m {
        return Err(FormatError::new(line.number, column, section, e));
    }
    let inner = text.trim().trim_start_matches('[').trim_end_matches(']');
    inner
        .split("],")
        .map(|row| {
            row.trim()
                .trim_start_matches('[')
                .trim_end_matches(']')
                .split(',')
                .map(|x| {
                    x.trim().parse::<i64>().map_err(|_| {
                        FormatError::syntax(line.number, column, section, format!("bad matrix entry `{}`", x.trim()))
                    })
                })
                .collect()
        })
        .collect()
}

fn parse_document(text: &str) -> Result<(NetworkDocument, Locations), FormatError> {
    let lines = Line::all(text);
    let version = parse_header(&lines, NETWORK_HEADER)?;
    let mut at = Locations { space: lines.get(1).map_or((1, 1), |l| (l.number, l.indent())), ..Locations::default() };
    let (space, mut i) = parse_space(&lines, 1)?;
    let mut functions: Vec<FunctionDecl> = Vec::new();
    while i < lines.len() {
        let line = &lines[i];
        let toks = line.tokens()?;
        if toks[0].text != "function" {
            return Err(FormatError::syntax(
                line.number,
                toks[0].column,
                "functions",
                format!("expected `function`, found `{}`", toks[0].text),
            ));
        }
        let name = toks
            .get(1)
            .ok_or_else(|| FormatError::syntax(line.number, line.text.len() + 1, "functions", "missing function name"))?
            .text
            .to_string();
        let section = format!("function {name}");
        let probability = parse_probability(toks.get(2), line, &section)?;
        at.functions.push((line.number, toks[0].column));
        i += 1;
        let body = match toks.get(3) {
            Some(t) if t.text == "linear" => {
                let (col, rest) = line.rest_after(t);
                FunctionBody::Linear(parse_matrix_rows(rest, line, col, &section)?)
            }
            Some(t) => {
                return Err(FormatError::syntax(line.number, t.column, section, format!("unexpected `{}`", t.text)))
            }
            None => {
                let mut pairs = Vec::new();
                let mut where_ = Vec::new();
                while let Some(l) = lines.get(i) {
                    let Some((lhs, rhs)) = l.text.split_once("->") else { break };
                    let lcol = l.indent();
                    let src = parse_states_at(l, lcol, lhs, &section)?;
                    let rcol = lhs.len() + 3 + (rhs.len() - rhs.trim_start().len());
                    let dst = parse_states_at(l, rcol, rhs, &section)?;
                    if src.len() != 1 || dst.len() != 1 {
                        return Err(FormatError::syntax(l.number, lcol, section, "expected `state -> state`"));
                    }
                    pairs.push((src.into_iter().next().unwrap(), dst.into_iter().next().unwrap()));
                    where_.push(l.number);
                    i += 1;
                }
                at.entries.push(where_);
                FunctionBody::Map(pairs)
            }
        };
        if at.entries.len() < at.functions.len() {
            at.entries.push(Vec::new());
        }
        functions.push(FunctionDecl { name, probability, body });
    }
    Ok((NetworkDocument { version, space, functions }, at))
}

impl std::str::FromStr for NetworkDocument {
    type Err = FormatError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        parse_document(text).map(|(doc, _)| doc)
    }
}

/// Parses and validates a `prn/1` document.
pub fn parse_network(text: &str) -> Result<Prn, FormatError> {
    let (doc, at) = parse_document(text)?;
    doc.build(&at)
}

/// The canonical `prn/1` text of a network.
pub fn serialize_network(prn: &Prn) -> String {
    NetworkDocument::from_prn(prn).to_string()
}

/// Parses a `pbn/1` document:
///
/// ```text
/// pbn/1
/// genes 2
/// gene 1
///   predictor f11 0.6 0011
/// gene 2
///   predictor f21 1 0101
/// ```
///
/// An optional `states ...` line after `genes` restricts the network to a
/// subset of the cube. Each predictor lists one bit per state.
pub fn parse_pbn(text: &str) -> Result<Pbn, FormatError> {
    let lines = Line::all(text);
    parse_header(&lines, PBN_HEADER)?;
    let line = lines.get(1).ok_or_else(|| FormatError::syntax(1, 1, "genes", "missing `genes N`"))?;
    let toks = line.tokens()?;
    if toks.len() != 2 || toks[0].text != "genes" {
        return Err(FormatError::syntax(line.number, line.indent(), "genes", "expected `genes N`"));
    }
    let n = parse_count(&toks[1], line.number, "genes")? as usize;
    let mut i = 2;
    let mut space = StateSpace::binary(n).map_err(|e| FormatError::new(line.number, toks[1].column, "genes", e))?;
    if let Some(l) = lines.get(i) {
        let t = l.tokens()?;
        if t[0].text == "states" {
            let (col, rest) = l.rest_after(&t[0]);
            let states = parse_states_at(l, col, rest, "space")?;
            space = StateSpace::with_alphabets(states, vec![2; n])
                .map_err(|e| FormatError::new(l.number, col, "space", e))?;
            i += 1;
        }
    }
    let mut genes: Vec<Vec<(Predictor, Probability)>> = Vec::new();
    let mut first_gene_line = None;
    while i < lines.len() {
        let l = &lines[i];
        let t = l.tokens()?;
        match t[0].text {
            "gene" => {
                let k = t.get(1).map(|t| parse_count(t, l.number, "genes")).transpose()?;
                if k != Some(genes.len() as u32 + 1) {
                    return Err(FormatError::syntax(
                        l.number,
                        l.indent(),
                        "genes",
                        format!("expected `gene {}`", genes.len() + 1),
                    ));
                }
                first_gene_line.get_or_insert((l.number, l.indent()));
                genes.push(Vec::new());
            }
            "predictor" => {
                let section = format!("gene {}", genes.len());
                let gene = genes.last_mut().ok_or_else(|| {
                    FormatError::syntax(l.number, l.indent(), "genes", "predictor before any `gene` line")
                })?;
                if t.len() != 4 {
                    return Err(FormatError::syntax(
                        l.number,
                        l.indent(),
                        section,
                        "expected `predictor NAME PROB BITS`",
                    ));
                }
                let p = parse_probability(t.get(2), l, &section)?;
                let p = Probability::new(p).map_err(|e| FormatError::new(l.number, t[2].column, section.clone(), e))?;
                let pred = Predictor::from_bits(t[1].text, t[3].text).ok_or_else(|| {
                    FormatError::syntax(l.number, t[3].column, section.clone(), "predictor bits must be 0 or 1")
                })?;
                gene.push((pred, p));
            }
            other => return Err(FormatError::syntax(l.number, t[0].column, "genes", format!("unexpected `{other}`"))),
        }
        i += 1;
    }
    let (gl, gc) = first_gene_line.unwrap_or((line.number, line.indent()));
    Pbn::on_space(space, genes).map_err(|e| FormatError::new(gl, gc, "genes", e))
}

/// The `pbn/1` text of a Boolean network.
pub fn serialize_pbn(pbn: &Pbn) -> String {
    let mut out = format!("{PBN_HEADER}\ngenes {}\n", pbn.gene_count());
    if !pbn.space().is_full_product() {
        let names: Vec<String> = pbn.space().states().iter().map(State::to_string).collect();
        out.push_str(&format!("states {}\n", names.join(" ")));
    }
    for (k, gene) in pbn.genes().iter().enumerate() {
        out.push_str(&format!("gene {}\n", k + 1));
        for (pred, p) in gene {
            out.push_str(&format!("  predictor {} {} {}\n", quote(pred.name()), p, pred.bits()));
        }
    }
    out
}

/// Parses `src -> dst` lines into a morphism between the given networks.
pub fn parse_map(text: &str, source: Arc<Prn>, target: Arc<Prn>) -> Result<Morphism, FormatError> {
    let mut pairs = Vec::new();
    let mut first_line = 1;
    for (k, l) in Line::all(text).iter().enumerate() {
        if k == 0 {
            first_line = l.number;
        }
        let (lhs, rhs) = l
            .text
            .split_once("->")
            .ok_or_else(|| FormatError::syntax(l.number, l.indent(), "map", "expected `state -> state`"))?;
        let src = parse_states_at(l, l.indent(), lhs, "map")?;
        let dst = parse_states_at(l, lhs.len() + 3, rhs, "map")?;
        if src.len() != 1 || dst.len() != 1 {
            return Err(FormatError::syntax(l.number, l.indent(), "map", "expected `state -> state`"));
        }
        if let Some(s) = src.first().filter(|s| source.space().index_of(s).is_none()) {
            return Err(FormatError::new(l.number, l.indent(), "map", NetworkError::UnknownState(s.clone())));
        }
        if let Some(s) = dst.first().filter(|s| target.space().index_of(s).is_none()) {
            return Err(FormatError::new(l.number, lhs.len() + 3, "map", NetworkError::UnknownState(s.clone())));
        }
        pairs.push((src[0].clone(), dst[0].clone()));
    }
    Morphism::from_pairs(source, target, &pairs).map_err(|e| FormatError::new(first_line, 1, "map", e))
}

/// Parses a set of states written as `{(0,0), (1,0)}`, `(0,0),(1,0)`, or
/// `(0,0) (1,0)`.
pub fn parse_subset(space: &StateSpace, text: &str) -> Result<BTreeSet<usize>, NetworkError> {
    let body = text.trim();
    let body = body.strip_prefix('{').and_then(|b| b.strip_suffix('}')).unwrap_or(body);
    let mut depth = 0i32;
    let spaced: String = body
        .chars()
        .map(|c| {
            match c {
                '(' => depth += 1,
                ')' => depth -= 1,
                ',' if depth == 0 => return ' ',
                _ => {}
            }
            c
        })
        .collect();
    space.subset(&parse_state_list(&spaced)?)
}
