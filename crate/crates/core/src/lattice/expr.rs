//! Text syntax for lattices.
//!
//! ```text
//! expr   := term ('+' term)*
//! term   := [int '*'] factor
//! factor := atom ('(' int ')')*          rescaling
//! atom   := 'U' | 'U'' | A<n> | D<n> | E<n>
//!         | 'gram' '[' row (',' row)* ']'
//!         | '(' expr ')'
//! row    := '[' int (',' int)* ']'
//! ```
//!
//! Whitespace is ignored. `U'` is the form `(0 1 / 1 -2)`.

use num_bigint::BigInt;
use thiserror::Error;

use super::{Lattice, LatticeError, RootFamily};
use crate::exact::IntMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("unexpected end of input, expected {0}")]
    UnexpectedEnd(&'static str),
    #[error("unexpected `{found}` at offset {pos}, expected {expected}")]
    Unexpected { pos: usize, found: char, expected: &'static str },
    #[error("trailing input at offset {0}")]
    Trailing(usize),
    #[error("{0}")]
    Lattice(#[from] LatticeError),
}

pub fn parse_lattice(input: &str) -> Result<Lattice, ParseError> {
    let chars: Vec<char> = input.chars().filter(|c| !c.is_whitespace()).collect();
    let mut p = Parser { chars, pos: 0 };
    let lattice = p.expr()?;
    if p.pos != p.chars.len() {
        return Err(ParseError::Trailing(p.pos));
    }
    Ok(lattice)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char, what: &'static str) -> Result<(), ParseError> {
        match self.peek() {
            Some(x) if x == c => {
                self.pos += 1;
                Ok(())
            }
            Some(found) => Err(ParseError::Unexpected { pos: self.pos, found, expected: what }),
            None => Err(ParseError::UnexpectedEnd(what)),
        }
    }

    fn starts_with(&self, s: &str) -> bool {
        s.chars().enumerate().all(|(i, c)| self.chars.get(self.pos + i) == Some(&c))
    }

    fn int(&mut self) -> Result<BigInt, ParseError> {
        let start = self.pos;
        if self.peek() == Some('-') || self.peek() == Some('+') {
            self.pos += 1;
        }
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        text.parse::<BigInt>().map_err(|_| {
            self.pos = start;
            match self.peek() {
                Some(found) => ParseError::Unexpected { pos: start, found, expected: "integer" },
                None => ParseError::UnexpectedEnd("integer"),
            }
        })
    }

    fn small_int(&mut self) -> Result<usize, ParseError> {
        let start = self.pos;
        let n = self.int()?;
        usize::try_from(n).map_err(|_| ParseError::Unexpected {
            pos: start,
            found: self.chars[start],
            expected: "non-negative index",
        })
    }

    fn expr(&mut self) -> Result<Lattice, ParseError> {
        let mut parts = self.term()?;
        while self.eat('+') {
            parts.extend(self.term()?);
        }
        Ok(Lattice::direct_sum(&parts))
    }

    /// A term may expand to several copies (`3*D4`).
    fn term(&mut self) -> Result<Vec<Lattice>, ParseError> {
        let save = self.pos;
        if self.peek().is_some_and(|c| c.is_ascii_digit()) {
            let n = self.small_int()?;
            if self.eat('*') {
                let f = self.factor()?;
                return Ok(vec![f; n]);
            }
            self.pos = save;
        }
        Ok(vec![self.factor()?])
    }

    fn factor(&mut self) -> Result<Lattice, ParseError> {
        let mut l = self.atom()?;
        while self.eat('(') {
            let n = self.int()?;
            self.expect(')', "`)`")?;
            l = l.rescale(&n)?;
        }
        Ok(l)
    }

    fn atom(&mut self) -> Result<Lattice, ParseError> {
        if self.starts_with("gram") {
            self.pos += 4;
            return self.gram_literal();
        }
        match self.peek() {
            Some('U') => {
                self.pos += 1;
                if self.eat('\'') {
                    Ok(Lattice::hyperbolic_plane_with_section())
                } else {
                    Ok(Lattice::hyperbolic_plane())
                }
            }
            Some(c @ ('A' | 'D' | 'E')) => {
                self.pos += 1;
                let family = match c {
                    'A' => RootFamily::A,
                    'D' => RootFamily::D,
                    _ => RootFamily::E,
                };
                if !self.peek().is_some_and(|c| c.is_ascii_digit()) {
                    return match self.peek() {
                        Some(found) => Err(ParseError::Unexpected { pos: self.pos, found, expected: "index" }),
                        None => Err(ParseError::UnexpectedEnd("index")),
                    };
                }
                let n = self.small_int()?;
                Ok(Lattice::root_lattice(family, n)?)
            }
            Some('(') => {
                self.pos += 1;
                let l = self.expr()?;
                self.expect(')', "`)`")?;
                Ok(l)
            }
            Some(found) => Err(ParseError::Unexpected { pos: self.pos, found, expected: "lattice" }),
            None => Err(ParseError::UnexpectedEnd("lattice")),
        }
    }

    fn gram_literal(&mut self) -> Result<Lattice, ParseError> {
        self.expect('[', "`[`")?;
        let mut rows = Vec::new();
        loop {
            self.expect('[', "`[`")?;
            let mut row = vec![self.int()?];
            while self.eat(',') {
                row.push(self.int()?);
            }
            self.expect(']', "`]`")?;
            rows.push(row);
            if !self.eat(',') {
                break;
            }
        }
        let close = self.pos;
        self.expect(']', "`]`")?;
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(ParseError::Unexpected { pos: close, found: ']', expected: "square matrix" });
        }
        Ok(Lattice::from_gram_unlabeled(IntMatrix::from_rows(&rows))?)
    }
}
