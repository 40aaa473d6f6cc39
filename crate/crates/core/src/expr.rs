//! The expression grammar shared by the CLI and the report renderings:
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := rational ('*' factor)* | factor ('*' factor)*
//! factor := name ('^' uint)? | 'th[' ints ']' | 'dth[' ints ']' | '(' expr ')'
//! ```
//!
//! Juxtaposition with whitespace also multiplies, so rendered monomials like
//! `x1^2*x3 th[1,3]` re-parse exactly. Names resolve against the basis names
//! of the supplied algebra; products are the graded-commutative ones of
//! S(g)⊗∧(g) (or ∧(g*) for `dth` factors — the two odd kinds cannot mix).

use crate::error::{Error, Result};
use crate::lie::LieAlgebra;
use crate::rat::Rat;
use crate::sparse::SparseElement;
use crate::word::{canonicalize_odd, merge_even, BasisWord};

/// Which odd generators an expression used.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum OddUse {
    None,
    Theta,
    DTheta,
}

/// A parsed element plus the kind of odd generators it mentions.
#[derive(Clone, Debug, PartialEq)]
pub struct ParsedElement {
    pub element: SparseElement,
    pub odd_use: OddUse,
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    g: &'a LieAlgebra,
    odd_use: OddUse,
}

/// Parses an expression against the basis names of `g`.
pub fn parse_expression(src: &str, g: &LieAlgebra) -> Result<ParsedElement> {
    let mut p = Parser { src: src.as_bytes(), pos: 0, g, odd_use: OddUse::None };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(ParsedElement { element: e, odd_use: p.odd_use })
}

impl<'a> Parser<'a> {
    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse { pos: self.pos, msg: msg.into() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn peek_raw(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<SparseElement> {
        let mut acc = SparseElement::zero();
        let mut sign = Rat::one();
        if let Some(c) = self.peek() {
            if c == b'+' || c == b'-' {
                self.pos += 1;
                if c == b'-' {
                    sign = Rat::from_int(-1);
                }
            }
        }
        loop {
            let term = self.term()?;
            acc.add_scaled(&term, &sign);
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    sign = Rat::one();
                }
                Some(b'-') => {
                    self.pos += 1;
                    sign = Rat::from_int(-1);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<SparseElement> {
        let mut acc = match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let r = self.rational()?;
                SparseElement::term(BasisWord::empty(), r)
            }
            _ => self.factor()?,
        };
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let f = self.factor()?;
                    acc = mul_graded(&acc, &f);
                }
                // juxtaposition: a factor start directly follows
                Some(c) if c == b'(' || c.is_ascii_alphabetic() => {
                    let f = self.factor()?;
                    acc = mul_graded(&acc, &f);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn rational(&mut self) -> Result<Rat> {
        self.skip_ws();
        let start = self.pos;
        while matches!(self.peek_raw(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected a number"));
        }
        let mut text: String = std::str::from_utf8(&self.src[start..self.pos]).unwrap().to_string();
        if self.peek_raw() == Some(b'/') {
            self.pos += 1;
            let dstart = self.pos;
            while matches!(self.peek_raw(), Some(c) if c.is_ascii_digit()) {
                self.pos += 1;
            }
            if self.pos == dstart {
                return Err(self.err("expected a denominator"));
            }
            text.push('/');
            text.push_str(std::str::from_utf8(&self.src[dstart..self.pos]).unwrap());
        }
        text.parse().map_err(|_| self.err(format!("malformed rational `{text}`")))
    }

    fn factor(&mut self) -> Result<SparseElement> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_alphabetic() => self.name_factor(),
            _ => Err(self.err("expected a factor")),
        }
    }

    fn name_factor(&mut self) -> Result<SparseElement> {
        self.skip_ws();
        let start = self.pos;
        while matches!(self.peek_raw(), Some(c) if c.is_ascii_alphanumeric() || c == b'_') {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap().to_string();
        if (name == "th" || name == "dth") && self.peek_raw() == Some(b'[') {
            return self.odd_factor(&name, start);
        }
        let Some(idx) = self.g.basis_names().iter().position(|n| *n == name) else {
            self.pos = start;
            return Err(self.err(format!("unknown name `{name}`")));
        };
        let mut exp = 1usize;
        if self.peek_raw() == Some(b'^') {
            self.pos += 1;
            let estart = self.pos;
            while matches!(self.peek_raw(), Some(c) if c.is_ascii_digit()) {
                self.pos += 1;
            }
            if self.pos == estart {
                return Err(self.err("expected an exponent"));
            }
            exp = std::str::from_utf8(&self.src[estart..self.pos])
                .unwrap()
                .parse()
                .map_err(|_| self.err("exponent out of range"))?;
        }
        let word = BasisWord::from_even(vec![idx + 1; exp]);
        Ok(SparseElement::term(word, Rat::one()))
    }

    fn odd_factor(&mut self, tag: &str, tag_start: usize) -> Result<SparseElement> {
        let kind = if tag == "th" { OddUse::Theta } else { OddUse::DTheta };
        if self.odd_use != OddUse::None && self.odd_use != kind {
            self.pos = tag_start;
            return Err(self.err("cannot mix th and dth factors in one expression"));
        }
        self.odd_use = kind;
        self.pos += 1; // consume '['
        let mut indices = Vec::new();
        loop {
            self.skip_ws();
            let istart = self.pos;
            while matches!(self.peek_raw(), Some(c) if c.is_ascii_digit()) {
                self.pos += 1;
            }
            if self.pos == istart {
                return Err(self.err("expected an index"));
            }
            let idx: usize = std::str::from_utf8(&self.src[istart..self.pos])
                .unwrap()
                .parse()
                .map_err(|_| self.err("index out of range"))?;
            if idx == 0 || idx > self.g.dim() {
                self.pos = istart;
                return Err(self.err(format!("odd index {idx} outside 1..{}", self.g.dim())));
            }
            if indices.contains(&idx) {
                self.pos = istart;
                return Err(self.err(format!("repeated odd index {idx}")));
            }
            indices.push(idx);
            match self.peek() {
                Some(b',') => {
                    self.pos += 1;
                }
                Some(b']') => {
                    self.pos += 1;
                    break;
                }
                _ => return Err(self.err("expected `,` or `]`")),
            }
        }
        let (odd, sign) = canonicalize_odd(&indices).expect("repeats already rejected");
        Ok(SparseElement::term(
            BasisWord { even: vec![], odd },
            Rat::from_int(sign as i64),
        ))
    }
}

/// Graded-commutative product used by the parser.
fn mul_graded(a: &SparseElement, b: &SparseElement) -> SparseElement {
    let mut out = SparseElement::zero();
    for (wa, ca) in a.iter() {
        for (wb, cb) in b.iter() {
            let mut odd = wa.odd.clone();
            odd.extend_from_slice(&wb.odd);
            if let Some((odd, sign)) = canonicalize_odd(&odd) {
                let word = BasisWord { even: merge_even(&wa.even, &wb.even), odd };
                let mut c = ca * cb;
                if sign < 0 {
                    c = -c;
                }
                out.add_term(word, c);
            }
        }
    }
    out
}
