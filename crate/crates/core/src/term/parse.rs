//! Recursive-descent parser for the concrete term syntax.
//!
//! ```text
//! cond_eq  := [ cond ( "/\" cond )* "->" ] equation
//! cond     := expr ( "=" | "!=" ) expr
//! equation := expr "=" expr
//! expr     := product ( "+" product )*
//! product  := unary ( ( "*" | "/" ) unary )*
//! unary    := "-" unary | atom
//! atom     := numeral | "bot" | "_|_" | ident | "(" expr ")"
//!           | "cond" "(" expr ";" expr ";" expr ")"
//! ```

use std::collections::BTreeSet;
use std::fmt;

use super::{Condition, ConditionalEquation, Equation, Polarity, Term};

/// Numerals above this bound are rejected; their expansion is linear in size.
pub const MAX_NUMERAL: u64 = 1 << 16;

const RESERVED: &[&str] = &["bot", "cond"];

pub(crate) fn is_reserved(s: &str) -> bool {
    RESERVED.contains(&s)
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Token {
    Num(u64),
    Ident(String),
    Bot,
    Cond,
    Plus,
    Minus,
    Star,
    Slash,
    LParen,
    RParen,
    Semi,
    Eq,
    NotEq,
    And,
    Arrow,
    End,
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Num(_) => f.write_str("numeral"),
            Token::Ident(_) => f.write_str("identifier"),
            Token::Bot => f.write_str("`bot`"),
            Token::Cond => f.write_str("`cond`"),
            Token::Plus => f.write_str("`+`"),
            Token::Minus => f.write_str("`-`"),
            Token::Star => f.write_str("`*`"),
            Token::Slash => f.write_str("`/`"),
            Token::LParen => f.write_str("`(`"),
            Token::RParen => f.write_str("`)`"),
            Token::Semi => f.write_str("`;`"),
            Token::Eq => f.write_str("`=`"),
            Token::NotEq => f.write_str("`!=`"),
            Token::And => f.write_str("`/\\`"),
            Token::Arrow => f.write_str("`->`"),
            Token::End => f.write_str("end of input"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("unexpected character {found:?} at byte {offset}")]
    BadChar { offset: usize, found: char },
    #[error("numeral at byte {offset} exceeds {max}")]
    NumeralTooLarge { offset: usize, max: u64 },
    #[error("unexpected {found} at byte {offset}, expected {}", fmt_expected(.expected))]
    Unexpected { offset: usize, found: String, expected: Vec<String> },
}

impl ParseError {
    pub fn offset(&self) -> usize {
        match self {
            ParseError::BadChar { offset, .. }
            | ParseError::NumeralTooLarge { offset, .. }
            | ParseError::Unexpected { offset, .. } => *offset,
        }
    }
}

fn fmt_expected(expected: &[String]) -> String {
    match expected {
        [] => "nothing".to_string(),
        [one] => one.clone(),
        many => format!("one of {}", many.join(", ")),
    }
}

fn lex(src: &str) -> Result<Vec<(usize, Token)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let two = |s: &[u8]| bytes[i..].starts_with(s);
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'0'..=b'9' => {
                let mut n: u64 = 0;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    n = n
                        .checked_mul(10)
                        .and_then(|n| n.checked_add(u64::from(bytes[i] - b'0')))
                        .filter(|&n| n <= MAX_NUMERAL)
                        .ok_or(ParseError::NumeralTooLarge { offset: start, max: MAX_NUMERAL })?;
                    i += 1;
                }
                out.push((start, Token::Num(n)));
                continue;
            }
            b'a'..=b'z' | b'A'..=b'Z' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                let word = &src[start..i];
                let tok = match word {
                    "bot" => Token::Bot,
                    "cond" => Token::Cond,
                    _ => Token::Ident(word.to_string()),
                };
                out.push((start, tok));
                continue;
            }
            _ if two(b"_|_") => {
                i += 3;
                Token::Bot
            }
            _ if two(b"/\\") => {
                i += 2;
                Token::And
            }
            _ if two(b"->") => {
                i += 2;
                Token::Arrow
            }
            _ if two(b"!=") => {
                i += 2;
                Token::NotEq
            }
            b'+' => {
                i += 1;
                Token::Plus
            }
            b'-' => {
                i += 1;
                Token::Minus
            }
            b'*' => {
                i += 1;
                Token::Star
            }
            b'/' => {
                i += 1;
                Token::Slash
            }
            b'(' => {
                i += 1;
                Token::LParen
            }
            b')' => {
                i += 1;
                Token::RParen
            }
            b';' => {
                i += 1;
                Token::Semi
            }
            b'=' => {
                i += 1;
                Token::Eq
            }
            _ => {
                let found = src[i..].chars().next().expect("in bounds");
                return Err(ParseError::BadChar { offset: i, found });
            }
        };
        out.push((start, tok));
    }
    out.push((src.len(), Token::End));
    Ok(out)
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    /// Tokens that would have been accepted at the current position.
    expected: BTreeSet<String>,
}

impl Parser {
    fn new(src: &str) -> Result<Self, ParseError> {
        Ok(Parser { tokens: lex(src)?, pos: 0, expected: BTreeSet::new() })
    }

    fn peek(&self) -> &Token {
        &self.tokens[self.pos].1
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].1.clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        self.expected.clear();
        t
    }

    fn eat(&mut self, tok: &Token) -> bool {
        if self.peek() == tok {
            self.bump();
            true
        } else {
            self.expected.insert(tok.to_string());
            false
        }
    }

    fn expect(&mut self, tok: Token) -> Result<(), ParseError> {
        if self.eat(&tok) {
            Ok(())
        } else {
            Err(self.error())
        }
    }

    fn error(&self) -> ParseError {
        let (offset, found) = &self.tokens[self.pos];
        let found = match found {
            Token::Num(n) => format!("numeral `{n}`"),
            Token::Ident(s) => format!("identifier `{s}`"),
            other => other.to_string(),
        };
        ParseError::Unexpected {
            offset: *offset,
            found,
            expected: self.expected.iter().cloned().collect(),
        }
    }

    fn expr(&mut self) -> Result<Term, ParseError> {
        let mut acc = self.product()?;
        while self.eat(&Token::Plus) {
            let rhs = self.product()?;
            acc = Term::add(acc, rhs);
        }
        Ok(acc)
    }

    fn product(&mut self) -> Result<Term, ParseError> {
        let mut acc = self.quotient()?;
        while self.eat(&Token::Star) {
            let rhs = self.quotient()?;
            acc = Term::mul(acc, rhs);
        }
        Ok(acc)
    }

    // `/` binds tighter than `*` so that `0/2 * 0/3` reads as a product of
    // two fractions; `a/b*c` is `(a/b)*c` either way
    fn quotient(&mut self) -> Result<Term, ParseError> {
        let mut acc = self.unary()?;
        while self.eat(&Token::Slash) {
            let rhs = self.unary()?;
            acc = Term::div(acc, rhs);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Term, ParseError> {
        if self.eat(&Token::Minus) {
            Ok(Term::neg(self.unary()?))
        } else {
            self.atom()
        }
    }

    fn atom(&mut self) -> Result<Term, ParseError> {
        match self.peek().clone() {
            Token::Num(n) => {
                self.bump();
                Ok(Term::numeral(n))
            }
            Token::Bot => {
                self.bump();
                Ok(Term::Bot)
            }
            Token::Ident(name) => {
                self.bump();
                Ok(Term::Var(name))
            }
            Token::LParen => {
                self.bump();
                let t = self.expr()?;
                self.expect(Token::RParen)?;
                Ok(t)
            }
            Token::Cond => {
                self.bump();
                self.expect(Token::LParen)?;
                let x = self.expr()?;
                self.expect(Token::Semi)?;
                let y = self.expr()?;
                self.expect(Token::Semi)?;
                let z = self.expr()?;
                self.expect(Token::RParen)?;
                Ok(Term::cond(x, y, z))
            }
            _ => {
                for t in ["numeral", "identifier", "`bot`", "`(`", "`cond`", "`-`"] {
                    self.expected.insert(t.to_string());
                }
                Err(self.error())
            }
        }
    }

    fn finish(&mut self) -> Result<(), ParseError> {
        self.expect(Token::End)
    }
}

/// Parses a single term.
pub fn parse(src: &str) -> Result<Term, ParseError> {
    let mut p = Parser::new(src)?;
    let t = p.expr()?;
    p.finish()?;
    Ok(t)
}

/// Parses `lhs = rhs`.
pub fn parse_equation(src: &str) -> Result<Equation, ParseError> {
    let mut p = Parser::new(src)?;
    let lhs = p.expr()?;
    p.expect(Token::Eq)?;
    let rhs = p.expr()?;
    p.finish()?;
    Ok(Equation::new(lhs, rhs))
}

/// Parses `c1 /\ ... /\ cn -> lhs = rhs` or a bare equation.
pub fn parse_conditional(src: &str) -> Result<ConditionalEquation, ParseError> {
    let mut p = Parser::new(src)?;
    let mut items = Vec::new();
    loop {
        let lhs = p.expr()?;
        let polarity = if p.eat(&Token::Eq) {
            Polarity::Equal
        } else if p.eat(&Token::NotEq) {
            Polarity::NotEqual
        } else {
            return Err(p.error());
        };
        let rhs = p.expr()?;
        items.push(Condition { eq: Equation::new(lhs, rhs), polarity });
        if p.eat(&Token::And) {
            continue;
        }
        if p.eat(&Token::Arrow) {
            let lhs = p.expr()?;
            p.expect(Token::Eq)?;
            let rhs = p.expr()?;
            p.finish()?;
            return Ok(ConditionalEquation {
                conditions: items,
                conclusion: Equation::new(lhs, rhs),
                name: None,
            });
        }
        p.finish()?;
        break;
    }
    // no arrow: a single positive equation
    let only = items.pop().expect("loop pushes at least once");
    if !items.is_empty() || only.polarity == Polarity::NotEqual {
        let offset = p.tokens[p.pos].0;
        return Err(ParseError::Unexpected {
            offset,
            found: "end of input".into(),
            expected: vec![Token::Arrow.to_string()],
        });
    }
    Ok(ConditionalEquation { conditions: Vec::new(), conclusion: only.eq, name: None })
}
