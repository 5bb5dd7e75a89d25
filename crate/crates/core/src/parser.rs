//! Text syntax for Boolean distance functions.
//!
//! ```text
//! expr   = leaf | node
//! leaf   = "x", digits
//! node   = ("min" | "max"), "(", expr, { ",", expr }, ")"
//! digits = nonzero digit, { digit }
//! ```
//!
//! Whitespace between tokens is ignored. `min`/`max` with more than two
//! arguments are left-nested into binary nodes. After parsing, the leaf
//! indices must cover `1..=d` exactly once.

use std::fmt;

use crate::bdf::BdfExpr;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnexpectedChar(char),
    UnexpectedEnd,
    Expected(&'static str),
    /// `min`/`max` with fewer than two arguments.
    Arity(usize),
    IndexOverflow,
    DuplicateCoordinate(usize),
    MissingCoordinate(usize),
    TrailingInput,
}

/// A parse or validation failure at a byte offset of the input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub offset: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use ParseErrorKind::*;
        match &self.kind {
            UnexpectedChar(c) => write!(f, "unexpected character {c:?}"),
            UnexpectedEnd => write!(f, "unexpected end of input"),
            Expected(what) => write!(f, "expected {what}"),
            Arity(k) => write!(f, "min/max needs at least two arguments, got {k}"),
            IndexOverflow => write!(f, "coordinate index too large"),
            DuplicateCoordinate(k) => write!(f, "coordinate x{k} appears more than once"),
            MissingCoordinate(k) => write!(f, "coordinate x{k} is missing"),
            TrailingInput => write!(f, "unexpected input after expression"),
        }?;
        write!(f, " at byte {}", self.offset)
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Copy)]
enum NodeKind {
    Min,
    Max,
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    /// (coordinate, byte offset of its leaf)
    leaves: Vec<(usize, usize)>,
}

impl<'a> Parser<'a> {
    fn err(&self, offset: usize, kind: ParseErrorKind) -> ParseError {
        ParseError { offset, kind }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    /// Error for the byte at the cursor (decoding a full UTF-8 char).
    fn unexpected(&self) -> ParseError {
        match std::str::from_utf8(&self.src[self.pos..])
            .ok()
            .and_then(|s| s.chars().next())
            .or_else(|| self.peek().map(char::from))
        {
            Some(c) => self.err(self.pos, ParseErrorKind::UnexpectedChar(c)),
            None => self.err(self.pos, ParseErrorKind::UnexpectedEnd),
        }
    }

    fn expect(&mut self, byte: u8, what: &'static str) -> Result<(), ParseError> {
        self.skip_ws();
        match self.peek() {
            Some(b) if b == byte => {
                self.pos += 1;
                Ok(())
            }
            None => Err(self.err(self.pos, ParseErrorKind::UnexpectedEnd)),
            Some(_) => Err(self.err(self.pos, ParseErrorKind::Expected(what))),
        }
    }

    fn expr(&mut self) -> Result<BdfExpr, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let rest = &self.src[self.pos..];
        if rest.starts_with(b"min") {
            self.pos += 3;
            self.node(start, NodeKind::Min)
        } else if rest.starts_with(b"max") {
            self.pos += 3;
            self.node(start, NodeKind::Max)
        } else if rest.first() == Some(&b'x') {
            self.pos += 1;
            self.leaf(start)
        } else {
            Err(self.unexpected())
        }
    }

    fn leaf(&mut self, start: usize) -> Result<BdfExpr, ParseError> {
        match self.peek() {
            Some(b'1'..=b'9') => {}
            Some(_) => return Err(self.err(self.pos, ParseErrorKind::Expected("coordinate index"))),
            None => return Err(self.err(self.pos, ParseErrorKind::UnexpectedEnd)),
        }
        let mut k: usize = 0;
        while let Some(b @ b'0'..=b'9') = self.peek() {
            k = k
                .checked_mul(10)
                .and_then(|k| k.checked_add(usize::from(b - b'0')))
                .ok_or_else(|| self.err(start, ParseErrorKind::IndexOverflow))?;
            self.pos += 1;
        }
        self.leaves.push((k, start));
        Ok(BdfExpr::Leaf(k))
    }

    fn node(&mut self, start: usize, kind: NodeKind) -> Result<BdfExpr, ParseError> {
        self.expect(b'(', "'('")?;
        let mut args = vec![self.expr()?];
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b',') => {
                    self.pos += 1;
                    args.push(self.expr()?);
                }
                Some(b')') => {
                    self.pos += 1;
                    break;
                }
                None => return Err(self.err(self.pos, ParseErrorKind::UnexpectedEnd)),
                Some(_) => return Err(self.err(self.pos, ParseErrorKind::Expected("',' or ')'"))),
            }
        }
        if args.len() < 2 {
            return Err(self.err(start, ParseErrorKind::Arity(args.len())));
        }
        let mut it = args.into_iter();
        let first = it.next().expect("at least two arguments");
        Ok(it.fold(first, |acc, e| match kind {
            NodeKind::Min => BdfExpr::min(acc, e),
            NodeKind::Max => BdfExpr::max(acc, e),
        }))
    }
}

/// Parses and validates a BDF.
pub fn parse(text: &str) -> Result<BdfExpr, ParseError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        leaves: Vec::new(),
    };
    let expr = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err(p.pos, ParseErrorKind::TrailingInput));
    }
    let d = p.leaves.len();
    let mut seen = vec![false; d + 1];
    for &(k, offset) in &p.leaves {
        if k <= d && seen[k] {
            return Err(p.err(offset, ParseErrorKind::DuplicateCoordinate(k)));
        }
        if k <= d {
            seen[k] = true;
        }
    }
    if let Some(missing) = (1..=d).find(|&k| !seen[k]) {
        // offset of the first leaf outside 1..=d, which took the missing slot
        let offset = p
            .leaves
            .iter()
            .find(|(k, _)| *k > d)
            .map_or(text.len(), |(_, o)| *o);
        return Err(p.err(offset, ParseErrorKind::MissingCoordinate(missing)));
    }
    Ok(expr)
}

/// Canonical text: binary nodes only, no whitespace.
pub fn format(expr: &BdfExpr) -> String {
    expr.to_string()
}
