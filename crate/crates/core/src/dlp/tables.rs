//! Embedded coefficient tables for the double-layer closed forms.
//!
//! `tables.txt` lists, for every kernel contribution and boundary index, the
//! polynomial coefficients of the integrand `4 P(e) / (D(e) sqrt(Q(e)))` as
//! symbolic expressions in the pair geometry. Keeping them as reviewable data
//! (instead of hand-expanded Rust) lets each entry be checked one-to-one
//! against direct numerical integration of its defining kernel contribution.
//!
//! Expression language: scalars combine with `+ - *`, parentheses and
//! `sq(x)`; `dot(a,b)` and `norm2(a)` accept integer linear combinations of
//! the case's vector symbols. Every vector operation is lowered at parse time
//! to a weighted sum over the pairwise dot products of the context vectors,
//! so record evaluation touches no vector arithmetic.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::Vec3;

/// Upper bound on vector symbols per case (the far case binds four).
const MAX_VECTORS: usize = 4;
/// Upper bound on scalar symbols per case (edge and vertex bind three).
const MAX_SCALARS: usize = 3;

/// Scalar expression with all dot products lowered to pair-table lookups.
#[derive(Debug, Clone)]
enum Scalar {
    Num(f64),
    /// Index into the context's scalar slots.
    Sym(usize),
    /// Sum of `coeff * dots[slot]`; `slot` packs an ordered vector pair
    /// `(i, j)` with `i <= j` as `i * MAX_VECTORS + j`.
    PairSum(Vec<(f64, usize)>),
    Neg(Box<Scalar>),
    Add(Box<Scalar>, Box<Scalar>),
    Sub(Box<Scalar>, Box<Scalar>),
    Mul(Box<Scalar>, Box<Scalar>),
    Sq(Box<Scalar>),
}

impl Scalar {
    fn eval(&self, ctx: &EvalContext) -> f64 {
        match self {
            Scalar::Num(x) => *x,
            Scalar::Sym(k) => ctx.scalars[*k],
            Scalar::PairSum(terms) => terms.iter().map(|(c, slot)| c * ctx.dots[*slot]).sum(),
            Scalar::Neg(e) => -e.eval(ctx),
            Scalar::Add(a, b) => a.eval(ctx) + b.eval(ctx),
            Scalar::Sub(a, b) => a.eval(ctx) - b.eval(ctx),
            Scalar::Mul(a, b) => a.eval(ctx) * b.eval(ctx),
            Scalar::Sq(e) => {
                let v = e.eval(ctx);
                v * v
            }
        }
    }
}

/// Pairwise dot products and scalar bindings for one pair geometry.
///
/// Vectors and scalars must be passed in the order the case declares its
/// symbols (edge: `u, v, w` and `c0, c1, c2`; vertex: `u1, u2, v` and the
/// same scalars; far: `u, v1, v2, n` and `pn`).
pub(crate) struct EvalContext {
    dots: [f64; MAX_VECTORS * MAX_VECTORS],
    scalars: [f64; MAX_SCALARS],
}

impl EvalContext {
    pub(crate) fn new(vectors: &[Vec3], scalars: &[f64]) -> Self {
        assert!(vectors.len() <= MAX_VECTORS && scalars.len() <= MAX_SCALARS);
        let mut dots = [0.0; MAX_VECTORS * MAX_VECTORS];
        for i in 0..vectors.len() {
            for j in i..vectors.len() {
                dots[i * MAX_VECTORS + j] = vectors[i].dot(&vectors[j]);
            }
        }
        let mut slots = [0.0; MAX_SCALARS];
        slots[..scalars.len()].copy_from_slice(scalars);
        EvalContext { dots, scalars: slots }
    }
}

/// Evaluated coefficients of one integrand, as full products:
/// `Q(e) = qq0 + qq1 e + q e^2`, `D(e) = 4 (dd0 + dd1 e + d e^2)` and
/// `P(e) = p0 + p1 e + p2 e^2 + p3 e^3`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct RawParams {
    pub q: f64,
    pub qq0: f64,
    pub qq1: f64,
    pub d: f64,
    pub dd0: f64,
    pub dd1: f64,
    pub p: [f64; 4],
}

/// One `(contribution, boundary)` record of the data file.
#[derive(Debug)]
pub(crate) struct TableRecord {
    q: Scalar,
    qq0: Scalar,
    qq1: Scalar,
    d: Scalar,
    dd0: Scalar,
    dd1: Scalar,
    p: [Scalar; 4],
}

impl TableRecord {
    pub(crate) fn evaluate(&self, ctx: &EvalContext) -> RawParams {
        RawParams {
            q: self.q.eval(ctx),
            qq0: self.qq0.eval(ctx),
            qq1: self.qq1.eval(ctx),
            d: self.d.eval(ctx),
            dd0: self.dd0.eval(ctx),
            dd1: self.dd1.eval(ctx),
            p: [
                self.p[0].eval(ctx),
                self.p[1].eval(ctx),
                self.p[2].eval(ctx),
                self.p[3].eval(ctx),
            ],
        }
    }
}

/// All parsed records: five edge contributions plus the vertex and far
/// contributions, each with lower (`j = 0`) and upper (`j = 1`) boundary rows.
pub(crate) struct Tables {
    pub edge: [[TableRecord; 2]; 5],
    pub vertex: [TableRecord; 2],
    pub far: [TableRecord; 2],
}

/// The embedded tables, parsed once. The data file ships with the crate, so
/// failure to parse is a build defect, not a runtime condition.
pub(crate) fn tables() -> &'static Tables {
    static TABLES: OnceLock<Tables> = OnceLock::new();
    TABLES.get_or_init(|| {
        parse_tables(include_str!("tables.txt")).expect("embedded kernel tables are well formed")
    })
}

struct CaseSymbols {
    vectors: &'static [&'static str],
    scalars: &'static [&'static str],
}

const EDGE_SYMBOLS: CaseSymbols = CaseSymbols {
    vectors: &["u", "v", "w"],
    scalars: &["c0", "c1", "c2"],
};
const VERTEX_SYMBOLS: CaseSymbols = CaseSymbols {
    vectors: &["u1", "u2", "v"],
    scalars: &["c0", "c1", "c2"],
};
const FAR_SYMBOLS: CaseSymbols = CaseSymbols {
    vectors: &["u", "v1", "v2", "n"],
    scalars: &["pn"],
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum RecordKey {
    Edge(usize, usize),
    Vertex(usize),
    Far(usize),
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

const FIELD_NAMES: [&str; 10] = ["q", "qq0", "qq1", "d", "dd0", "dd1", "p0", "p1", "p2", "p3"];

/// Record under construction; fields indexed as in `FIELD_NAMES`.
struct PartialRecord {
    key: RecordKey,
    header_line: usize,
    fields: [Option<Scalar>; 10],
}

impl PartialRecord {
    fn finish(self) -> Result<(RecordKey, TableRecord)> {
        let mut taken = self.fields.into_iter();
        let mut next = |name: &str| {
            taken
                .next()
                .unwrap()
                .ok_or_else(|| parse_err(self.header_line, format!("record is missing field `{name}`")))
        };
        let record = TableRecord {
            q: next("q")?,
            qq0: next("qq0")?,
            qq1: next("qq1")?,
            d: next("d")?,
            dd0: next("dd0")?,
            dd1: next("dd1")?,
            p: [next("p0")?, next("p1")?, next("p2")?, next("p3")?],
        };
        Ok((self.key, record))
    }
}

fn parse_header(body: &str, line: usize) -> Result<RecordKey> {
    let mut parts = body.split_whitespace();
    let case = parts.next().ok_or_else(|| parse_err(line, "empty record header"))?;
    let mut index = |range: std::ops::RangeInclusive<usize>, what: &str| -> Result<usize> {
        let text = parts
            .next()
            .ok_or_else(|| parse_err(line, format!("header is missing the {what} index")))?;
        let value: usize = text
            .parse()
            .map_err(|_| parse_err(line, format!("bad {what} index `{text}`")))?;
        if !range.contains(&value) {
            return Err(parse_err(line, format!("{what} index {value} out of range")));
        }
        Ok(value)
    };
    let key = match case {
        "edge" => RecordKey::Edge(index(1..=5, "contribution")? - 1, index(0..=1, "boundary")?),
        "vertex" => {
            index(1..=1, "contribution")?;
            RecordKey::Vertex(index(0..=1, "boundary")?)
        }
        "far" => {
            index(1..=1, "contribution")?;
            RecordKey::Far(index(0..=1, "boundary")?)
        }
        other => return Err(parse_err(line, format!("unknown record case `{other}`"))),
    };
    if parts.next().is_some() {
        return Err(parse_err(line, "trailing tokens in record header"));
    }
    Ok(key)
}

fn parse_tables(text: &str) -> Result<Tables> {
    let mut edge: [[Option<TableRecord>; 2]; 5] = Default::default();
    let mut vertex: [Option<TableRecord>; 2] = Default::default();
    let mut far: [Option<TableRecord>; 2] = Default::default();
    let mut current: Option<PartialRecord> = None;

    let mut store = |partial: PartialRecord| -> Result<()> {
        let (key, record) = partial.finish()?;
        let slot = match key {
            RecordKey::Edge(i, j) => &mut edge[i][j],
            RecordKey::Vertex(j) => &mut vertex[j],
            RecordKey::Far(j) => &mut far[j],
        };
        if slot.is_some() {
            return Err(parse_err(0, format!("duplicate record {key:?}")));
        }
        *slot = Some(record);
        Ok(())
    };

    for (idx, raw_line) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw_line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(body) = content.strip_prefix('[') {
            let body = body
                .strip_suffix(']')
                .ok_or_else(|| parse_err(line, "unterminated record header"))?;
            if let Some(partial) = current.take() {
                store(partial)?;
            }
            current = Some(PartialRecord {
                key: parse_header(body, line)?,
                header_line: line,
                fields: Default::default(),
            });
            continue;
        }
        let (name, expr) = content
            .split_once('=')
            .ok_or_else(|| parse_err(line, "expected `field = expression`"))?;
        let name = name.trim();
        let slot = FIELD_NAMES
            .iter()
            .position(|f| *f == name)
            .ok_or_else(|| parse_err(line, format!("unknown field `{name}`")))?;
        let partial = current
            .as_mut()
            .ok_or_else(|| parse_err(line, "field before any record header"))?;
        if partial.fields[slot].is_some() {
            return Err(parse_err(line, format!("field `{name}` assigned twice")));
        }
        let symbols = match partial.key {
            RecordKey::Edge(..) => &EDGE_SYMBOLS,
            RecordKey::Vertex(_) => &VERTEX_SYMBOLS,
            RecordKey::Far(_) => &FAR_SYMBOLS,
        };
        partial.fields[slot] = Some(parse_scalar(expr.trim(), symbols, line)?);
    }
    if let Some(partial) = current.take() {
        store(partial)?;
    }
    drop(store);

    let unwrap_pair = |pair: [Option<TableRecord>; 2], what: &str| -> Result<[TableRecord; 2]> {
        let [a, b] = pair;
        match (a, b) {
            (Some(a), Some(b)) => Ok([a, b]),
            _ => Err(parse_err(0, format!("missing {what} record"))),
        }
    };
    let mut edge_records = Vec::with_capacity(5);
    for (i, pair) in edge.into_iter().enumerate() {
        edge_records.push(unwrap_pair(pair, &format!("edge {}", i + 1))?);
    }
    let edge: [[TableRecord; 2]; 5] = edge_records
        .try_into()
        .unwrap_or_else(|_| unreachable!("exactly five edge pairs collected"));
    Ok(Tables {
        edge,
        vertex: unwrap_pair(vertex, "vertex")?,
        far: unwrap_pair(far, "far")?,
    })
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    LParen,
    RParen,
    Comma,
}

fn tokenize(src: &str, line: usize) -> Result<Vec<Tok>> {
    let bytes = src.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' => i += 1,
            '+' => {
                toks.push(Tok::Plus);
                i += 1;
            }
            '-' => {
                toks.push(Tok::Minus);
                i += 1;
            }
            '*' => {
                toks.push(Tok::Star);
                i += 1;
            }
            '(' => {
                toks.push(Tok::LParen);
                i += 1;
            }
            ')' => {
                toks.push(Tok::RParen);
                i += 1;
            }
            ',' => {
                toks.push(Tok::Comma);
                i += 1;
            }
            '0'..='9' | '.' => {
                let start = i;
                while i < bytes.len() && matches!(bytes[i] as char, '0'..='9' | '.') {
                    i += 1;
                }
                let text = &src[start..i];
                let value: f64 = text
                    .parse()
                    .map_err(|_| parse_err(line, format!("bad number `{text}`")))?;
                toks.push(Tok::Num(value));
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let start = i;
                while i < bytes.len() && matches!(bytes[i] as char, 'a'..='z' | 'A'..='Z' | '0'..='9' | '_') {
                    i += 1;
                }
                toks.push(Tok::Ident(src[start..i].to_string()));
            }
            other => return Err(parse_err(line, format!("unexpected character `{other}`"))),
        }
    }
    Ok(toks)
}

struct ExprParser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    symbols: &'a CaseSymbols,
    line: usize,
}

fn parse_scalar(src: &str, symbols: &CaseSymbols, line: usize) -> Result<Scalar> {
    let mut parser = ExprParser {
        toks: tokenize(src, line)?,
        pos: 0,
        symbols,
        line,
    };
    let expr = parser.s_expr()?;
    if parser.pos != parser.toks.len() {
        return Err(parse_err(line, "trailing tokens after expression"));
    }
    Ok(expr)
}

impl ExprParser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn bump(&mut self) -> Result<Tok> {
        let tok = self
            .toks
            .get(self.pos)
            .cloned()
            .ok_or_else(|| parse_err(self.line, "unexpected end of expression"))?;
        self.pos += 1;
        Ok(tok)
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if self.bump()? != tok {
            return Err(parse_err(self.line, format!("expected {what}")));
        }
        Ok(())
    }

    fn s_expr(&mut self) -> Result<Scalar> {
        let mut acc = self.s_term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = Scalar::Add(Box::new(acc), Box::new(self.s_term()?));
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = Scalar::Sub(Box::new(acc), Box::new(self.s_term()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn s_term(&mut self) -> Result<Scalar> {
        let mut acc = self.s_factor()?;
        while self.peek() == Some(&Tok::Star) {
            self.pos += 1;
            acc = Scalar::Mul(Box::new(acc), Box::new(self.s_factor()?));
        }
        Ok(acc)
    }

    fn s_factor(&mut self) -> Result<Scalar> {
        if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            return Ok(Scalar::Neg(Box::new(self.s_factor()?)));
        }
        self.s_primary()
    }

    fn s_primary(&mut self) -> Result<Scalar> {
        match self.bump()? {
            Tok::Num(x) => Ok(Scalar::Num(x)),
            Tok::LParen => {
                let inner = self.s_expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Tok::Ident(name) => match name.as_str() {
                "dot" => {
                    self.expect(Tok::LParen, "`(` after dot")?;
                    let a = self.v_expr()?;
                    self.expect(Tok::Comma, "`,` between dot arguments")?;
                    let b = self.v_expr()?;
                    self.expect(Tok::RParen, "`)` after dot")?;
                    Ok(pair_sum(a, b))
                }
                "norm2" => {
                    self.expect(Tok::LParen, "`(` after norm2")?;
                    let a = self.v_expr()?;
                    self.expect(Tok::RParen, "`)` after norm2")?;
                    Ok(pair_sum(a, a))
                }
                "sq" => {
                    self.expect(Tok::LParen, "`(` after sq")?;
                    let inner = self.s_expr()?;
                    self.expect(Tok::RParen, "`)` after sq")?;
                    Ok(Scalar::Sq(Box::new(inner)))
                }
                _ => {
                    if let Some(k) = self.symbols.scalars.iter().position(|s| *s == name) {
                        Ok(Scalar::Sym(k))
                    } else if self.symbols.vectors.contains(&name.as_str()) {
                        Err(parse_err(
                            self.line,
                            format!("vector symbol `{name}` used in scalar context"),
                        ))
                    } else {
                        Err(parse_err(self.line, format!("unknown symbol `{name}`")))
                    }
                }
            },
            other => Err(parse_err(self.line, format!("unexpected token {other:?}"))),
        }
    }

    /// Linear combination of vector symbols, returned as per-slot coefficients.
    fn v_expr(&mut self) -> Result<[f64; MAX_VECTORS]> {
        let mut coeffs = [0.0; MAX_VECTORS];
        let mut sign = 1.0;
        if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            sign = -1.0;
        }
        loop {
            let (coeff, slot) = self.v_term()?;
            coeffs[slot] += sign * coeff;
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    sign = 1.0;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    sign = -1.0;
                }
                _ => return Ok(coeffs),
            }
        }
    }

    /// `number * symbol` or a bare vector symbol.
    fn v_term(&mut self) -> Result<(f64, usize)> {
        let (coeff, name) = match self.bump()? {
            Tok::Num(x) => {
                self.expect(Tok::Star, "`*` between coefficient and vector")?;
                match self.bump()? {
                    Tok::Ident(name) => (x, name),
                    other => {
                        return Err(parse_err(self.line, format!("expected vector, got {other:?}")))
                    }
                }
            }
            Tok::Ident(name) => (1.0, name),
            other => return Err(parse_err(self.line, format!("expected vector term, got {other:?}"))),
        };
        let slot = self
            .symbols
            .vectors
            .iter()
            .position(|s| *s == name)
            .ok_or_else(|| parse_err(self.line, format!("unknown vector symbol `{name}`")))?;
        Ok((coeff, slot))
    }
}

/// Lowers `dot(sum_i a_i e_i, sum_j b_j e_j)` to a weighted sum over the
/// upper-triangular pair slots.
fn pair_sum(a: [f64; MAX_VECTORS], b: [f64; MAX_VECTORS]) -> Scalar {
    let mut terms: Vec<(f64, usize)> = Vec::new();
    for i in 0..MAX_VECTORS {
        for j in 0..MAX_VECTORS {
            let coeff = a[i] * b[j];
            if coeff == 0.0 {
                continue;
            }
            let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
            let slot = lo * MAX_VECTORS + hi;
            match terms.iter_mut().find(|t| t.1 == slot) {
                Some(term) => term.0 += coeff,
                None => terms.push((coeff, slot)),
            }
        }
    }
    Scalar::PairSum(terms)
}
