use num_bigint::BigInt;
use thiserror::Error;

use super::{Rational, ScalarField};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("column {column}: {message}")]
pub struct ParseError {
    /// 1-based character column in the expression text.
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(Rational),
    Ident(String),
    Op(char),
    LParen,
    RParen,
}

fn tokenize(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            let q = parse_decimal(&text).ok_or_else(|| ParseError {
                column: col,
                message: format!("malformed number `{text}`"),
            })?;
            out.push((Tok::Num(q), col));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), col));
        } else {
            let tok = match c {
                '+' | '-' | '*' | '/' | '^' => Tok::Op(c),
                // Unicode minus shows up in copied formulas.
                '\u{2212}' => Tok::Op('-'),
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                _ => {
                    return Err(ParseError {
                        column: col,
                        message: format!("unexpected character `{c}`"),
                    })
                }
            };
            out.push((tok, col));
            i += 1;
        }
    }
    Ok(out)
}

fn parse_decimal(text: &str) -> Option<Rational> {
    let mut parts = text.split('.');
    let whole = parts.next()?;
    let frac = parts.next().unwrap_or("");
    if parts.next().is_some() || (whole.is_empty() && frac.is_empty()) {
        return None;
    }
    let digits = format!("{whole}{frac}");
    let n: BigInt = digits.parse().ok()?;
    let d = num_traits::pow(BigInt::from(10), frac.len());
    Some(Rational::new(n, d))
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    names: &'a [String],
    len: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn column(&self) -> usize {
        self.toks.get(self.pos).map(|&(_, c)| c).unwrap_or(self.len + 1)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            column: self.column(),
            message: message.into(),
        })
    }

    fn expr(&mut self) -> Result<ScalarField, ParseError> {
        let mut acc = self.term()?;
        while let Some(Tok::Op(c @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if c == '+' { acc + rhs } else { acc - rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<ScalarField, ParseError> {
        let mut acc = self.unary()?;
        while let Some(Tok::Op(c @ ('*' | '/'))) = self.peek().cloned() {
            self.pos += 1;
            let col = self.column();
            let rhs = self.unary()?;
            acc = if c == '*' {
                acc * rhs
            } else {
                match acc.checked_div(&rhs) {
                    Some(q) => q,
                    None => {
                        return Err(ParseError {
                            column: col,
                            message: "division by an identically zero expression".into(),
                        })
                    }
                }
            };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<ScalarField, ParseError> {
        match self.peek() {
            Some(Tok::Op('-')) => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some(Tok::Op('+')) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<ScalarField, ParseError> {
        let base = self.atom()?;
        if let Some(Tok::Op('^')) = self.peek() {
            self.pos += 1;
            let col = self.column();
            let e = self.unary()?;
            let exponent = e
                .as_constant()
                .filter(|q| q.is_integer())
                .and_then(|q| num_traits::ToPrimitive::to_i32(q.numer()));
            let Some(k) = exponent else {
                return Err(ParseError {
                    column: col,
                    message: "exponent must be an integer constant".into(),
                });
            };
            if k < 0 && base.is_zero() {
                return Err(ParseError {
                    column: col,
                    message: "negative power of zero".into(),
                });
            }
            return Ok(base.powi(k));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<ScalarField, ParseError> {
        let col = self.column();
        match self.peek().cloned() {
            Some(Tok::Num(q)) => {
                self.pos += 1;
                Ok(ScalarField::constant(q))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect_rparen()?;
                Ok(e)
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if let Some(i) = self.names.iter().position(|n| *n == name) {
                    return Ok(ScalarField::coord(i));
                }
                if name == "exp" {
                    if self.peek() != Some(&Tok::LParen) {
                        return self.err("expected `(` after exp");
                    }
                    self.pos += 1;
                    let arg = self.expr()?;
                    self.expect_rparen()?;
                    return Ok(ScalarField::exp(arg));
                }
                Err(ParseError {
                    column: col,
                    message: format!("unknown identifier `{name}`"),
                })
            }
            Some(t) => self.err(format!("unexpected token {t:?}")),
            None => self.err("unexpected end of expression"),
        }
    }

    fn expect_rparen(&mut self) -> Result<(), ParseError> {
        if self.peek() == Some(&Tok::RParen) {
            self.pos += 1;
            Ok(())
        } else {
            self.err("expected `)`")
        }
    }
}

/// Parses an expression over the named coordinates.
///
/// Grammar: rational or decimal literals, coordinate names, `+ - * / ^`
/// with the usual precedence (`^` binds tightest and takes an integer
/// constant exponent), `exp(..)` and parentheses.
pub fn parse_expr(src: &str, names: &[String]) -> Result<ScalarField, ParseError> {
    let toks = tokenize(src)?;
    let mut p = Parser {
        toks,
        pos: 0,
        names,
        len: src.chars().count(),
    };
    if p.toks.is_empty() {
        return p.err("empty expression");
    }
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(e)
}
