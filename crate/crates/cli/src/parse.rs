//! Exact parser for binary-form expressions.
//!
//! Grammar (whitespace-insensitive, ASCII):
//!
//! ```text
//! expr   := signs term (('+' | '-') signs term)*
//! term   := factor ('*' factor)*
//! factor := INT | 'x' ('^' INT)? | 'y' ('^' INT)?
//! signs  := ('+' | '-')*
//! ```
//!
//! Univariate input (no `y` anywhere) is homogenized to the declared degree,
//! or to the largest power of x when none is declared. Bivariate input must
//! already be homogeneous; terms of mixed total degree are an error at the
//! offending term. Coefficients are arbitrary-precision integers.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use wmod_core::forms::BinaryForm;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub offset: usize,
    pub line: u32,
    pub col: u32,
    pub message: String,
}

impl ParseError {
    fn at(src: &str, offset: usize, message: impl Into<String>) -> Self {
        let mut line = 1u32;
        let mut col = 1u32;
        for b in src.as_bytes().iter().take(offset) {
            if *b == b'\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
        }
        ParseError {
            offset,
            line,
            col,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "parse error at line {}, column {} (offset {}): {}",
            self.line, self.col, self.offset, self.message
        )
    }
}

impl std::error::Error for ParseError {}

struct Term {
    coeff: BigInt,
    xe: u32,
    ye: u32,
    has_y: bool,
    offset: usize,
}

struct Parser<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser {
            src,
            bytes: src.as_bytes(),
            pos: 0,
        }
    }

    fn err(&self, offset: usize, message: impl Into<String>) -> ParseError {
        ParseError::at(self.src, offset, message)
    }

    fn skip_ws(&mut self) {
        while self
            .bytes
            .get(self.pos)
            .is_some_and(|b| b.is_ascii_whitespace())
        {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let b = self.peek()?;
        self.pos += 1;
        Some(b)
    }

    /// A run of leading '+'/'-' signs; returns the combined sign.
    fn signs(&mut self) -> i8 {
        let mut sign = 1i8;
        while let Some(b) = self.peek() {
            match b {
                b'+' => {
                    self.pos += 1;
                }
                b'-' => {
                    sign = -sign;
                    self.pos += 1;
                }
                _ => break,
            }
        }
        sign
    }

    fn integer(&mut self) -> Result<BigInt, ParseError> {
        let start = {
            self.skip_ws();
            self.pos
        };
        let mut end = start;
        while self.bytes.get(end).is_some_and(|b| b.is_ascii_digit()) {
            end += 1;
        }
        if end == start {
            return Err(self.err(start, "expected an integer"));
        }
        self.pos = end;
        Ok(BigInt::parse_bytes(&self.bytes[start..end], 10).expect("digits"))
    }

    fn exponent(&mut self) -> Result<u32, ParseError> {
        let at = {
            self.skip_ws();
            self.pos
        };
        let n = self.integer()?;
        u32::try_from(&n)
            .ok()
            .filter(|&e| e <= 255)
            .ok_or_else(|| self.err(at, "exponent out of range (maximum 255)"))
    }

    fn factor(&mut self, term: &mut Term) -> Result<(), ParseError> {
        let at = {
            self.skip_ws();
            self.pos
        };
        match self.peek() {
            Some(b'x') | Some(b'y') => {
                let var = self.bump().unwrap();
                let e = if self.peek() == Some(b'^') {
                    self.pos += 1;
                    self.exponent()?
                } else {
                    1
                };
                if var == b'x' {
                    term.xe += e;
                } else {
                    term.ye += e;
                    term.has_y = true;
                }
                Ok(())
            }
            Some(b) if b.is_ascii_digit() => {
                let n = self.integer()?;
                term.coeff *= n;
                Ok(())
            }
            Some(b) => Err(self.err(at, format!("unexpected character '{}'", b as char))),
            None => Err(self.err(at, "expected a factor")),
        }
    }

    fn term(&mut self, sign: i8) -> Result<Term, ParseError> {
        let offset = {
            self.skip_ws();
            self.pos
        };
        let mut term = Term {
            coeff: BigInt::from(sign),
            xe: 0,
            ye: 0,
            has_y: false,
            offset,
        };
        self.factor(&mut term)?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            self.factor(&mut term)?;
        }
        Ok(term)
    }

    fn expr(&mut self) -> Result<Vec<Term>, ParseError> {
        let mut terms = Vec::new();
        let sign = self.signs();
        terms.push(self.term(sign)?);
        while let Some(b) = self.peek() {
            let op = match b {
                b'+' => 1i8,
                b'-' => -1i8,
                _ => {
                    return Err(self.err(self.pos, format!("unexpected character '{}'", b as char)))
                }
            };
            self.pos += 1;
            let sign = op * self.signs();
            terms.push(self.term(sign)?);
        }
        Ok(terms)
    }
}

/// Parse an expression into a binary form of the declared degree (or the
/// inferred one). See the module doc for the grammar and homogenization.
pub fn parse_form(text: &str, declared_degree: Option<usize>) -> Result<BinaryForm, ParseError> {
    let mut parser = Parser::new(text);
    let terms = parser.expr()?;

    let any_y = terms.iter().any(|t| t.has_y);
    let degree: usize = if any_y {
        let d = (terms[0].xe + terms[0].ye) as usize;
        for t in &terms {
            if (t.xe + t.ye) as usize != d {
                return Err(ParseError::at(
                    text,
                    t.offset,
                    format!(
                        "term of total degree {} in a form of degree {}",
                        t.xe + t.ye,
                        d
                    ),
                ));
            }
        }
        if let Some(decl) = declared_degree {
            if decl != d {
                return Err(ParseError::at(
                    text,
                    0,
                    format!("declared degree {decl} but the form has degree {d}"),
                ));
            }
        }
        d
    } else {
        let inferred = terms.iter().map(|t| t.xe as usize).max().unwrap_or(0);
        let d = declared_degree.unwrap_or(inferred);
        if d < inferred {
            return Err(ParseError::at(
                text,
                0,
                format!("declared degree {d} but x appears with exponent {inferred}"),
            ));
        }
        d
    };
    if degree < 1 {
        return Err(ParseError::at(
            text,
            0,
            "a binary form needs degree at least 1",
        ));
    }

    let mut coeffs = vec![BigInt::zero(); degree + 1];
    for t in &terms {
        coeffs[t.xe as usize] += &t.coeff;
    }
    if coeffs.iter().all(|c| c.is_zero()) {
        return Err(ParseError::at(text, 0, "the expression is the zero form"));
    }
    BinaryForm::from_integers(&coeffs)
        .map_err(|e| ParseError::at(text, 0, format!("invalid form: {e}")))
}
