//! Formula text and DIMACS CNF readers.
//!
//! Text grammar (whitespace-insensitive):
//!
//! ```text
//! formula := or
//! or      := and ("|" and)*
//! and     := unary ("&" unary)*
//! unary   := "!" unary | atom
//! atom    := "T" | "F" | VAR | "(" formula ")"
//! VAR     := "x" [1-9][0-9]*
//! ```

use crate::error::ParseError;
use crate::formula::{Formula, Var};

pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let f = p.or()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(ParseError::new(p.pos, format!("unexpected `{}`", p.src[p.pos] as char)));
    }
    Ok(f)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut items = vec![self.and()?];
        while self.peek() == Some(b'|') {
            self.pos += 1;
            items.push(self.and()?);
        }
        Ok(Formula::or(items))
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut items = vec![self.unary()?];
        while self.peek() == Some(b'&') {
            self.pos += 1;
            items.push(self.unary()?);
        }
        Ok(Formula::and(items))
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        if self.peek() == Some(b'!') {
            self.pos += 1;
            return Ok(Formula::not(self.unary()?));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        let start = self.pos;
        match self.peek() {
            None => Err(ParseError::new(self.pos, "unexpected end of input")),
            Some(b'T') => {
                self.pos += 1;
                Ok(Formula::Const(true))
            }
            Some(b'F') => {
                self.pos += 1;
                Ok(Formula::Const(false))
            }
            Some(b'(') => {
                self.pos += 1;
                let f = self.or()?;
                if self.peek() != Some(b')') {
                    return Err(ParseError::new(self.pos, "expected `)`"));
                }
                self.pos += 1;
                Ok(f)
            }
            Some(b'x') => {
                self.pos += 1;
                let digits_at = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let digits = &self.src[digits_at..self.pos];
                if digits.is_empty() || digits[0] == b'0' {
                    return Err(ParseError::new(digits_at, "variable index must start with 1-9"));
                }
                let v: Var = std::str::from_utf8(digits)
                    .unwrap()
                    .parse()
                    .map_err(|_| ParseError::new(digits_at, "variable index out of range"))?;
                Ok(Formula::Var(v))
            }
            Some(c) => Err(ParseError::new(start.max(self.pos), format!("unexpected `{}`", c as char))),
        }
    }
}

/// Read a DIMACS CNF file into an And of Ors of literals.
///
/// Unit clauses become bare literals, an empty clause becomes `F` and a
/// file with no clauses becomes `T`.
pub fn parse_dimacs(text: &str) -> Result<Formula, ParseError> {
    let mut declared: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut current = Vec::new();
    let mut offset = 0;
    for line in text.split_inclusive('\n') {
        let line_at = offset;
        offset += line.len();
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') || trimmed.starts_with('%') {
            continue;
        }
        if trimmed.starts_with('p') {
            let parts: Vec<&str> = trimmed.split_whitespace().collect();
            match parts.as_slice() {
                ["p", "cnf", v, c] => {
                    let v = v.parse().map_err(|_| ParseError::new(line_at, "bad variable count"))?;
                    let c = c.parse().map_err(|_| ParseError::new(line_at, "bad clause count"))?;
                    declared = Some((v, c));
                }
                _ => return Err(ParseError::new(line_at, "malformed `p cnf` header")),
            }
            continue;
        }
        let (vars, _) = declared.ok_or_else(|| ParseError::new(line_at, "clause before `p cnf` header"))?;
        for tok in trimmed.split_whitespace() {
            let lit: i64 = tok
                .parse()
                .map_err(|_| ParseError::new(line_at, format!("bad literal `{tok}`")))?;
            if lit == 0 {
                clauses.push(Formula::or(std::mem::take(&mut current)));
                continue;
            }
            let v = lit.unsigned_abs();
            if v as usize > vars || v > Var::MAX as u64 {
                return Err(ParseError::new(line_at, format!("literal {lit} exceeds declared variable count")));
            }
            let atom = Formula::Var(v as Var);
            current.push(if lit < 0 { Formula::not(atom) } else { atom });
        }
    }
    let (_, count) = declared.ok_or_else(|| ParseError::new(0, "missing `p cnf` header"))?;
    if !current.is_empty() {
        // tolerate a missing terminating 0 on the final clause
        clauses.push(Formula::or(current));
    }
    if clauses.len() != count {
        return Err(ParseError::new(text.len(), format!("header declares {count} clauses, found {}", clauses.len())));
    }
    Ok(Formula::and(clauses))
}
