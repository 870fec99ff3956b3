//! Recursive-descent parser for metric component expressions.
//!
//! ```text
//! expr     := term (('+' | '-') term)*
//! term     := unary (('*' | '/') unary)*
//! unary    := ('-' | '+') unary | power
//! power    := atom ('^' exponent)?
//! exponent := ['-' | '+'] INT | '(' ['-' | '+'] INT ')'
//! atom     := INT | IDENT | '(' expr ')'
//! ```

use num_bigint::BigInt;

use super::poly::Polynomial;
use super::rational::RationalFunction;
use crate::error::{Error, Result};

const MAX_EXPONENT: i64 = 1000;

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<(Token, usize)>> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (pos, ch) = chars[i];
        let col = text[..pos].chars().count() + 1;
        match ch {
            c if c.is_whitespace() => {
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].1.is_ascii_digit() {
                    i += 1;
                }
                if i < chars.len() && (chars[i].1 == '.' || chars[i].1.is_alphabetic()) {
                    return Err(Error::Parse {
                        column: text[..chars[i].0].chars().count() + 1,
                        message: format!("unexpected '{}' in numeric literal", chars[i].1),
                    });
                }
                let digits: String = chars[start..i].iter().map(|c| c.1).collect();
                out.push((Token::Int(digits.parse().expect("ascii digits")), col));
            }
            c if c.is_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].1.is_alphanumeric() || chars[i].1 == '_') {
                    i += 1;
                }
                out.push((Token::Ident(chars[start..i].iter().map(|c| c.1).collect()), col));
            }
            _ => {
                let tok = match ch {
                    '+' => Token::Plus,
                    '-' => Token::Minus,
                    '*' => Token::Star,
                    '/' => Token::Slash,
                    '^' => Token::Caret,
                    '(' => Token::LParen,
                    ')' => Token::RParen,
                    other => {
                        return Err(Error::Parse {
                            column: col,
                            message: format!("unexpected character '{other}'"),
                        })
                    }
                };
                out.push((tok, col));
                i += 1;
            }
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<(Token, usize)>,
    pos: usize,
    names: &'a [String],
    end_col: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|t| &t.0)
    }

    fn col(&self) -> usize {
        self.tokens.get(self.pos).map(|t| t.1).unwrap_or(self.end_col)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            column: self.col(),
            message: message.into(),
        })
    }

    fn expect(&mut self, tok: Token, what: &str) -> Result<()> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected {what}"))
        }
    }

    fn expr(&mut self) -> Result<RationalFunction> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(Token::Minus) => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<RationalFunction> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.pos += 1;
                    acc = &acc * &self.unary()?;
                }
                Some(Token::Slash) => {
                    self.pos += 1;
                    let col = self.col();
                    let rhs = self.unary()?;
                    acc = acc.checked_div(&rhs).map_err(|_| Error::Parse {
                        column: col,
                        message: "division by zero".into(),
                    })?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<RationalFunction> {
        match self.peek() {
            Some(Token::Minus) => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some(Token::Plus) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<RationalFunction> {
        let base = self.atom()?;
        if self.peek() != Some(&Token::Caret) {
            return Ok(base);
        }
        self.pos += 1;
        let col = self.col();
        let e = self.exponent()?;
        base.pow(e as i32).map_err(|_| Error::Parse {
            column: col,
            message: "negative power of zero".into(),
        })
    }

    fn exponent(&mut self) -> Result<i64> {
        let paren = self.peek() == Some(&Token::LParen);
        if paren {
            self.pos += 1;
        }
        let mut sign = 1;
        match self.peek() {
            Some(Token::Minus) => {
                sign = -1;
                self.pos += 1;
            }
            Some(Token::Plus) => self.pos += 1,
            _ => {}
        }
        let v = match self.peek() {
            Some(Token::Int(v)) => {
                let v: i64 = v
                    .try_into()
                    .ok()
                    .filter(|v: &i64| *v <= MAX_EXPONENT)
                    .ok_or_else(|| Error::Parse {
                        column: self.col(),
                        message: format!("exponent exceeds {MAX_EXPONENT}"),
                    })?;
                self.pos += 1;
                v
            }
            _ => return self.err("expected integer exponent"),
        };
        if paren {
            self.expect(Token::RParen, "')'")?;
        }
        Ok(sign * v)
    }

    fn atom(&mut self) -> Result<RationalFunction> {
        let col = self.col();
        match self.peek().cloned() {
            Some(Token::Int(v)) => {
                self.pos += 1;
                Ok(RationalFunction::from_poly(Polynomial::constant(v)))
            }
            Some(Token::Ident(name)) => {
                self.pos += 1;
                match self.names.iter().position(|n| *n == name) {
                    Some(i) => Ok(RationalFunction::var(i)),
                    None => Err(Error::UnknownIdentifier { name, column: col }),
                }
            }
            Some(Token::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(Token::RParen, "')'")?;
                Ok(inner)
            }
            Some(_) => self.err("expected number, coordinate or '('"),
            None => self.err("unexpected end of expression"),
        }
    }
}

/// Parses `text` into a canonical rational function over the given coordinates.
pub fn parse_expression(text: &str, names: &[String]) -> Result<RationalFunction> {
    let tokens = tokenize(text)?;
    let mut p = Parser {
        tokens,
        pos: 0,
        names,
        end_col: text.chars().count() + 1,
    };
    if p.tokens.is_empty() {
        return p.err("empty expression");
    }
    let value = p.expr()?;
    if p.pos != p.tokens.len() {
        return p.err("unexpected trailing input");
    }
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names() -> Vec<String> {
        (1..=4).map(|i| format!("x{i}")).collect()
    }

    fn parse(s: &str) -> Result<RationalFunction> {
        parse_expression(s, &names())
    }

    #[test]
    fn simple_coordinate() {
        assert_eq!(parse("x2").unwrap(), RationalFunction::var(1));
        assert!(parse("0").unwrap().is_zero());
    }

    #[test]
    fn cancelling_expression_is_two() {
        let f = parse("(x1+x2)^2/(x1*x2) - x1/x2 - x2/x1").unwrap();
        assert_eq!(f, RationalFunction::from_integer(2));
    }

    #[test]
    fn precedence() {
        // -x1^2 is -(x1^2); 2*-x1 accepted
        assert_eq!(
            parse("-x1^2").unwrap(),
            -(&RationalFunction::var(0) * &RationalFunction::var(0))
        );
        assert_eq!(parse("2*-x1").unwrap(), RationalFunction::var(0).scale_int(-2));
        assert_eq!(parse("1 - 2 - 3").unwrap(), RationalFunction::from_integer(-4));
        assert_eq!(parse("12/2/3").unwrap(), RationalFunction::from_integer(2));
        assert_eq!(parse("5/7").unwrap(), RationalFunction::from_ratio(5, 7));
    }

    #[test]
    fn negative_exponents_fold_into_denominator() {
        let f = parse("(x1+x2)^-2").unwrap();
        let g = parse("1/((x1+x2)*(x1+x2))").unwrap();
        assert_eq!(f, g);
        assert_eq!(parse("x1^(-1)").unwrap(), parse("1/x1").unwrap());
    }

    #[test]
    fn errors_are_positioned() {
        match parse("x1 + * x2") {
            Err(Error::Parse { column, .. }) => assert_eq!(column, 6),
            other => panic!("unexpected {other:?}"),
        }
        match parse("x1 + y") {
            Err(Error::UnknownIdentifier { name, column }) => {
                assert_eq!(name, "y");
                assert_eq!(column, 6);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse("x1/(x2-x2)"), Err(Error::Parse { .. })));
        assert!(matches!(parse("(x1"), Err(Error::Parse { .. })));
        assert!(matches!(parse("1.5"), Err(Error::Parse { .. })));
        assert!(matches!(parse(""), Err(Error::Parse { .. })));
    }
}
