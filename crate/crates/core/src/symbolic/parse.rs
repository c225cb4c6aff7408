//! Reader for polynomial expressions such as `x^4 - A*x^3 - (D+4)*x^2`.

use num_bigint::BigInt;

use super::{MultiPoly, SymResult, SymbolicError};

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Num(BigInt),
    Ident(String),
    Op(char),
}

fn tokenize(s: &str) -> SymResult<Vec<Token>> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            out.push(Token::Num(text.parse().expect("digits")));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token::Ident(chars[start..i].iter().collect()));
        } else if "+-*^()".contains(c) {
            out.push(Token::Op(c));
            i += 1;
        } else {
            return Err(SymbolicError::Parse(format!("unexpected character {c:?}")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    vars: &'a [&'a str],
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Token::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> SymResult<MultiPoly> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> SymResult<MultiPoly> {
        let mut acc = self.unary()?;
        while self.eat('*') {
            acc = acc.mul(&self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> SymResult<MultiPoly> {
        if self.eat('-') {
            return Ok(self.unary()?.neg());
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> SymResult<MultiPoly> {
        let base = self.atom()?;
        if self.eat('^') {
            match self.tokens.get(self.pos).cloned() {
                Some(Token::Num(n)) => {
                    self.pos += 1;
                    let e: u32 = n
                        .try_into()
                        .map_err(|_| SymbolicError::Parse("exponent too large".into()))?;
                    Ok(base.pow(e))
                }
                _ => Err(SymbolicError::Parse("expected exponent".into())),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> SymResult<MultiPoly> {
        match self.tokens.get(self.pos).cloned() {
            Some(Token::Num(n)) => {
                self.pos += 1;
                Ok(MultiPoly::constant(self.vars, n))
            }
            Some(Token::Ident(name)) => {
                self.pos += 1;
                MultiPoly::var(self.vars, &name)
            }
            Some(Token::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(SymbolicError::Parse("expected )".into()));
                }
                Ok(e)
            }
            other => Err(SymbolicError::Parse(format!("unexpected {other:?}"))),
        }
    }
}

/// Parses an expression over the given variables.
pub fn parse(s: &str, vars: &[&str]) -> SymResult<MultiPoly> {
    let mut parser = Parser {
        tokens: tokenize(s)?,
        pos: 0,
        vars,
    };
    let e = parser.expr()?;
    if parser.pos != parser.tokens.len() {
        return Err(SymbolicError::Parse("trailing input".into()));
    }
    Ok(e)
}
