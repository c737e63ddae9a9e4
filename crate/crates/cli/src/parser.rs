//! Recursive-descent parser for the expression language.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := '-' factor | atom ('^' nat)?
//! atom   := nat | sym | func '(' expr ')' | '(' expr ')'
//!         | '[' (expr (',' expr)*)? ']' ('@' nat)?
//!         | seq | 'band' '{' (nat ':' seq (',' nat ':' seq)*)? '}'
//! seq    := 'prefix' ints 'then' ('const' int | 'period' ints)
//! ```
//!
//! Juxtaposition is not multiplication: `y x` is a syntax error, and `yx` is a single symbol.

use num_bigint::BigInt;

use crate::ast::{Ast, BinOp, Func, SeqLit, SeqTail};
use crate::CliError;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Nat(BigInt),
    Ident(String),
    Punct(char),
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, CliError> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].1.is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().map(|(_, c)| c).collect();
            out.push((pos, Tok::Nat(s.parse().expect("digits"))));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].1.is_ascii_alphanumeric() || chars[i].1 == '_') {
                i += 1;
            }
            out.push((pos, Tok::Ident(chars[start..i].iter().map(|(_, c)| c).collect())));
        } else if "+-*^()[]{},:@".contains(c) {
            out.push((pos, Tok::Punct(c)));
            i += 1;
        } else {
            return Err(CliError::Parse {
                position: pos,
                message: format!("unexpected character `{c}`"),
            });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(p, _)| *p)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, CliError> {
        Err(CliError::Parse {
            position: self.pos(),
            message: message.into(),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Punct(c)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), CliError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected `{c}`"))
        }
    }

    fn keyword(&mut self, k: &str) -> Result<(), CliError> {
        match self.peek() {
            Some(Tok::Ident(s)) if s == k => {
                self.at += 1;
                Ok(())
            }
            _ => self.err(format!("expected `{k}`")),
        }
    }

    fn nat(&mut self) -> Result<BigInt, CliError> {
        match self.peek() {
            Some(Tok::Nat(n)) => {
                let n = n.clone();
                self.at += 1;
                Ok(n)
            }
            _ => self.err("expected a natural number"),
        }
    }

    fn small_nat<T: TryFrom<BigInt>>(&mut self) -> Result<T, CliError> {
        let at = self.pos();
        T::try_from(self.nat()?).map_err(|_| CliError::Parse {
            position: at,
            message: "number too large".into(),
        })
    }

    fn int(&mut self) -> Result<BigInt, CliError> {
        let neg = self.eat('-');
        let n = self.nat()?;
        Ok(if neg { -n } else { n })
    }

    fn ints(&mut self) -> Result<Vec<BigInt>, CliError> {
        self.expect('[')?;
        let mut out = Vec::new();
        if !self.eat(']') {
            loop {
                out.push(self.int()?);
                if self.eat(']') {
                    break;
                }
                self.expect(',')?;
            }
        }
        Ok(out)
    }

    fn expr(&mut self) -> Result<Ast, CliError> {
        let mut lhs = self.term()?;
        loop {
            let op = if self.eat('+') {
                BinOp::Add
            } else if self.eat('-') {
                BinOp::Sub
            } else {
                return Ok(lhs);
            };
            lhs = Ast::bin(op, lhs, self.term()?);
        }
    }

    fn term(&mut self) -> Result<Ast, CliError> {
        let mut lhs = self.factor()?;
        while self.eat('*') {
            lhs = Ast::bin(BinOp::Mul, lhs, self.factor()?);
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Ast, CliError> {
        if self.eat('-') {
            return Ok(Ast::Neg(Box::new(self.factor()?)));
        }
        let atom = self.atom()?;
        if self.eat('^') {
            return Ok(Ast::Pow(Box::new(atom), self.small_nat()?));
        }
        Ok(atom)
    }

    fn seq(&mut self) -> Result<SeqLit, CliError> {
        self.keyword("prefix")?;
        let prefix = self.ints()?;
        self.keyword("then")?;
        let tail = match self.peek() {
            Some(Tok::Ident(s)) if s == "const" => {
                self.at += 1;
                SeqTail::Const(self.int()?)
            }
            Some(Tok::Ident(s)) if s == "period" => {
                self.at += 1;
                let p = self.ints()?;
                if p.is_empty() {
                    return self.err("empty period");
                }
                SeqTail::Period(p)
            }
            _ => return self.err("expected `const` or `period`"),
        };
        Ok(SeqLit { prefix, tail })
    }

    fn atom(&mut self) -> Result<Ast, CliError> {
        match self.peek().cloned() {
            Some(Tok::Nat(n)) => {
                self.at += 1;
                Ok(Ast::Int(n))
            }
            Some(Tok::Punct('(')) => {
                self.at += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(Tok::Punct('[')) => {
                self.at += 1;
                let mut items = Vec::new();
                if !self.eat(']') {
                    loop {
                        items.push(self.expr()?);
                        if self.eat(']') {
                            break;
                        }
                        self.expect(',')?;
                    }
                }
                if self.eat('@') {
                    return Ok(Ast::Series(items, self.small_nat()?));
                }
                Ok(Ast::List(items))
            }
            Some(Tok::Ident(name)) => {
                if name == "prefix" {
                    return Ok(Ast::Seq(self.seq()?));
                }
                self.at += 1;
                if name == "band" && self.eat('{') {
                    let mut bands = Vec::new();
                    if !self.eat('}') {
                        loop {
                            let d = self.small_nat()?;
                            self.expect(':')?;
                            bands.push((d, self.seq()?));
                            if self.eat('}') {
                                break;
                            }
                            self.expect(',')?;
                        }
                    }
                    return Ok(Ast::Band(bands));
                }
                if let Some(func) = Func::from_name(&name) {
                    if self.eat('(') {
                        let arg = self.expr()?;
                        self.expect(')')?;
                        return Ok(Ast::Call(func, Box::new(arg)));
                    }
                }
                Ok(Ast::Sym(name))
            }
            Some(Tok::Punct(c)) => self.err(format!("unexpected `{c}`")),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses `text` without resolving symbols.
pub fn parse(text: &str) -> Result<Ast, CliError> {
    let mut p = Parser {
        toks: lex(text)?,
        at: 0,
        end: text.len(),
    };
    let e = p.expr()?;
    if p.at != p.toks.len() {
        return p.err("unexpected trailing input (use `*` for products)");
    }
    Ok(e)
}
