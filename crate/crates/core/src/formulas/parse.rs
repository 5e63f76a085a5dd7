//! Recursive-descent parser for formula text.
//!
//! ```text
//! or    := xor ('|' xor)*
//! xor   := and ('+' and)*
//! and   := unary ('&' unary)*
//! unary := '!' unary | atom
//! atom  := 'v' digits | '0' | '1' | '(' or ')'
//! ```
//!
//! Row templates additionally accept `v[an+b]` for affine positions.

use std::str::FromStr;

use thiserror::Error;

use super::template::Affine;
use super::Formula;

/// Syntax error with a byte offset into the input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at offset {offset}: {message}")]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

pub(crate) enum VarToken {
    Fixed(u64),
    Affine(Affine),
}

pub(crate) struct Parser<'a, F> {
    src: &'a [u8],
    pos: usize,
    allow_index: bool,
    on_var: F,
}

impl<'a, F> Parser<'a, F>
where
    F: FnMut(VarToken) -> u64,
{
    pub(crate) fn new(text: &'a str, allow_index: bool, on_var: F) -> Self {
        Parser {
            src: text.as_bytes(),
            pos: 0,
            allow_index,
            on_var,
        }
    }

    pub(crate) fn parse_all(mut self) -> Result<Formula, ParseError> {
        let f = self.or()?;
        self.skip_ws();
        if self.pos < self.src.len() {
            return Err(self.error("unexpected trailing input"));
        }
        Ok(f)
    }

    fn error(&self, message: &str) -> ParseError {
        ParseError {
            offset: self.pos,
            message: message.to_string(),
        }
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

    fn chain(
        &mut self,
        op: u8,
        next: fn(&mut Self) -> Result<Formula, ParseError>,
        build: fn(Vec<Formula>) -> Formula,
    ) -> Result<Formula, ParseError> {
        let first = next(self)?;
        if self.peek() != Some(op) {
            return Ok(first);
        }
        let mut items = vec![first];
        while self.peek() == Some(op) {
            self.pos += 1;
            items.push(next(self)?);
        }
        Ok(build(items))
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        self.chain(b'|', Self::xor, Formula::or)
    }

    fn xor(&mut self) -> Result<Formula, ParseError> {
        self.chain(b'+', Self::and, Formula::xor)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        self.chain(b'&', Self::unary, Formula::and)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        if self.peek() == Some(b'!') {
            self.pos += 1;
            return Ok(Formula::not(self.unary()?));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Some(b'0') => {
                self.pos += 1;
                Ok(Formula::constant(false))
            }
            Some(b'1') => {
                self.pos += 1;
                Ok(Formula::constant(true))
            }
            Some(b'(') => {
                self.pos += 1;
                let f = self.or()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(f)
            }
            Some(b'v') => {
                self.pos += 1;
                let tok = if self.src.get(self.pos) == Some(&b'[') {
                    if !self.allow_index {
                        return Err(self.error("indexed variables are only allowed in row templates"));
                    }
                    self.pos += 1;
                    let a = self.affine()?;
                    if self.peek() != Some(b']') {
                        return Err(self.error("expected ']'"));
                    }
                    self.pos += 1;
                    VarToken::Affine(a)
                } else {
                    VarToken::Fixed(self.number()?)
                };
                Ok(Formula::var((self.on_var)(tok)))
            }
            Some(_) => Err(self.error("expected a variable, constant, '!' or '('")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn number(&mut self) -> Result<u64, ParseError> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected digits"));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        digits.parse().map_err(|_| ParseError {
            offset: start,
            message: "number out of range".into(),
        })
    }

    /// `b`, `an`, `an+b`, `n+b`, `a*n+b` (whitespace allowed between tokens).
    fn affine(&mut self) -> Result<Affine, ParseError> {
        let mut mul = 0u64;
        let mut add = 0u64;
        let mut seen_n = false;
        loop {
            self.skip_ws();
            let coef = if self.peek().is_some_and(|c| c.is_ascii_digit()) {
                Some(self.number()?)
            } else {
                None
            };
            if self.peek() == Some(b'*') {
                self.pos += 1;
                if self.peek() != Some(b'n') {
                    return Err(self.error("expected 'n' after '*'"));
                }
            }
            if self.peek() == Some(b'n') {
                if seen_n {
                    return Err(self.error("'n' appears twice"));
                }
                self.pos += 1;
                seen_n = true;
                mul = coef.unwrap_or(1);
            } else {
                match coef {
                    Some(c) => add = add.checked_add(c).ok_or_else(|| self.error("number out of range"))?,
                    None => return Err(self.error("expected a number or 'n'")),
                }
            }
            if self.peek() == Some(b'+') {
                self.pos += 1;
            } else {
                return Ok(Affine { mul, add });
            }
        }
    }
}

/// Parses formula text; variables are written `v<k>`.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    Parser::new(text, false, |tok| match tok {
        VarToken::Fixed(k) => k,
        VarToken::Affine(_) => unreachable!("indexed variables are rejected outside templates"),
    })
    .parse_all()
}

impl FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, ParseError> {
        parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(p: u64) -> Formula {
        Formula::var(p)
    }

    #[test]
    fn grammar_examples() {
        assert_eq!(
            parse("v2 & (v0 | !v5)").unwrap(),
            Formula::and(vec![v(2), Formula::or(vec![v(0), Formula::not(v(5))])])
        );
        assert_eq!(
            parse("v1 + v3 + 1").unwrap(),
            Formula::xor(vec![v(1), v(3), Formula::constant(true)])
        );
    }

    #[test]
    fn error_offsets() {
        assert_eq!(parse("v1 &&").unwrap_err().offset, 4);
        assert_eq!(parse("v1 &").unwrap_err().offset, 4);
        assert_eq!(parse("(v1").unwrap_err().offset, 3);
        assert_eq!(parse("v").unwrap_err().offset, 1);
        assert_eq!(parse("v1 v2").unwrap_err().offset, 3);
        assert!(parse("v[n]").is_err());
    }

    #[test]
    fn precedence() {
        // ! > & > + > |
        assert_eq!(
            parse("v0 | v1 + v2 & !v3").unwrap(),
            Formula::or(vec![
                v(0),
                Formula::xor(vec![v(1), Formula::and(vec![v(2), Formula::not(v(3))])])
            ])
        );
    }

    #[test]
    fn parenthesized_same_operator_is_not_flattened() {
        assert_eq!(
            parse("v0 & (v1 & v2)").unwrap(),
            Formula::and(vec![v(0), Formula::and(vec![v(1), v(2)])])
        );
    }

    #[test]
    fn display_roundtrip_samples() {
        for text in ["v2 & (v0 | !v5)", "!(v1 + v2)", "(v0 | v1) & (v2 | 0)", "!!v3", "v0 + (v1 + v2)"] {
            let f = parse(text).unwrap();
            assert_eq!(parse(&f.to_string()).unwrap(), f, "{text}");
        }
        assert_eq!(parse("v2 & (v0 | !v5)").unwrap().to_string(), "v2 & (v0 | !v5)");
    }
}
