//! Recursive-descent parser for the scale grammar.
//!
//! ```text
//! sum     := product ('+' product)*
//! product := power (('*' | '/') power)*
//! power   := atom ('^' power)?
//! atom    := number | 'k' | 'n' | '(' sum ')'
//!          | ('sqrt'|'exp'|'ln'|'log'|'floor'|'ceil'|'dyadic') '(' sum ')'
//!          | 'pow' '(' sum ',' sum ')'
//!          | 'table' '[' number (',' number)* ']'
//!          | 'enum' '(' name ')'
//! ```

use std::sync::Arc;

use crate::error::Error;
use crate::logvalue::LogValue;

use super::expr::Expr;
use super::ScaleContext;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Sym(char),
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, Error> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                i += 1;
            }
            // exponent only when followed by a digit, so `2e` stays an error
            if i + 1 < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                let mut j = i + 1;
                if bytes[j] == b'+' || bytes[j] == b'-' {
                    j += 1;
                }
                if j < bytes.len() && bytes[j].is_ascii_digit() {
                    i = j;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let text = &src[start..i];
            let v: f64 = text
                .parse()
                .map_err(|_| Error::Parse { pos: start, msg: format!("bad number {text:?}") })?;
            out.push((start, Tok::Num(v)));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Ident(src[start..i].to_string())));
        } else if "+*/^(),[]".contains(c) {
            out.push((i, Tok::Sym(c)));
            i += 1;
        } else if c == '-' {
            return Err(Error::Parse { pos: i, msg: "subtraction and negative values are not part of the grammar".into() });
        } else {
            return Err(Error::Parse { pos: i, msg: format!("unexpected character {c:?}") });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    ctx: &'a ScaleContext,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, Error> {
        Err(Error::Parse { pos: self.offset(), msg: msg.into() })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), Error> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected '{c}'"))
        }
    }

    fn sum(&mut self) -> Result<Expr, Error> {
        let mut e = self.product()?;
        while self.eat('+') {
            e = Expr::add(e, self.product()?);
        }
        Ok(e)
    }

    fn product(&mut self) -> Result<Expr, Error> {
        let mut e = self.power()?;
        loop {
            if self.eat('*') {
                e = Expr::mul(e, self.power()?);
            } else if self.eat('/') {
                e = Expr::div(e, self.power()?);
            } else {
                return Ok(e);
            }
        }
    }

    fn power(&mut self) -> Result<Expr, Error> {
        let base = self.atom()?;
        if self.eat('^') {
            Ok(Expr::pow(base, self.power()?))
        } else {
            Ok(base)
        }
    }

    fn number(&mut self) -> Result<f64, Error> {
        match self.peek() {
            Some(Tok::Num(v)) => {
                let v = *v;
                self.pos += 1;
                Ok(v)
            }
            _ => self.err("expected a number"),
        }
    }

    fn atom(&mut self) -> Result<Expr, Error> {
        let tok = match self.peek() {
            Some(t) => t.clone(),
            None => return self.err("unexpected end of input"),
        };
        match tok {
            Tok::Num(v) => {
                self.pos += 1;
                Ok(Expr::Const(v))
            }
            Tok::Sym('(') => {
                self.pos += 1;
                let e = self.sum()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Ident(name) => {
                self.pos += 1;
                self.named(&name)
            }
            Tok::Sym(c) => self.err(format!("unexpected '{c}'")),
        }
    }

    fn named(&mut self, name: &str) -> Result<Expr, Error> {
        let unary: Option<fn(Box<Expr>) -> Expr> = match name {
            "k" => return Ok(Expr::K),
            "n" => return Ok(Expr::N),
            "sqrt" => Some(Expr::Sqrt),
            "exp" => Some(Expr::Exp),
            "ln" | "log" => Some(Expr::Ln),
            "floor" => Some(Expr::Floor),
            "ceil" => Some(Expr::Ceil),
            "dyadic" => Some(Expr::Dyadic),
            _ => None,
        };
        if let Some(f) = unary {
            self.expect('(')?;
            let a = self.sum()?;
            self.expect(')')?;
            return Ok(f(Box::new(a)));
        }
        match name {
            "pow" => {
                self.expect('(')?;
                let a = self.sum()?;
                self.expect(',')?;
                let b = self.sum()?;
                self.expect(')')?;
                Ok(Expr::pow(a, b))
            }
            "table" => {
                self.expect('[')?;
                let mut vals = Vec::new();
                loop {
                    let v = self.number()?;
                    vals.push(LogValue::from_f64(v).expect("lexer yields nonnegative numbers"));
                    if !self.eat(',') {
                        break;
                    }
                }
                self.expect(']')?;
                Ok(Expr::Table(Arc::from(vals)))
            }
            "enum" => {
                self.expect('(')?;
                let id = match self.peek() {
                    Some(Tok::Ident(s)) => s.clone(),
                    _ => return self.err("expected an enumeration name"),
                };
                let g = match self.ctx.enumeration(&id) {
                    Some(g) => g,
                    None => return self.err(format!("unknown enumeration {id:?}")),
                };
                self.pos += 1;
                self.expect(')')?;
                Ok(Expr::Enum(g))
            }
            _ => {
                self.pos -= 1;
                self.err(format!("unknown name {name:?}"))
            }
        }
    }
}

pub fn parse_expr(src: &str, ctx: &ScaleContext) -> Result<Expr, Error> {
    let mut p = Parser { toks: lex(src)?, pos: 0, end: src.len(), ctx };
    let e = p.sum()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(e)
}
