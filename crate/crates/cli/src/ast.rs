//! Expression trees and their canonical printing.
//!
//! Printing inserts only the parentheses the grammar needs, so `parse(print(a)) == a`.

use std::fmt;

use num_bigint::BigInt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sigma,
    Delta,
    Theta,
    Transpose,
}

impl Func {
    pub fn from_name(name: &str) -> Option<Func> {
        match name {
            "sigma" => Some(Func::Sigma),
            "delta" => Some(Func::Delta),
            "theta" => Some(Func::Theta),
            "transpose" => Some(Func::Transpose),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Func::Sigma => "sigma",
            Func::Delta => "delta",
            Func::Theta => "theta",
            Func::Transpose => "transpose",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SeqTail {
    Const(BigInt),
    Period(Vec<BigInt>),
}

/// `prefix [a, b] then const c` or `prefix [a, b] then period [c, d]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeqLit {
    pub prefix: Vec<BigInt>,
    pub tail: SeqTail,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Ast {
    /// Non-negative; negation is [`Ast::Neg`].
    Int(BigInt),
    Sym(String),
    Neg(Box<Ast>),
    Bin(BinOp, Box<Ast>, Box<Ast>),
    Pow(Box<Ast>, u32),
    Call(Func, Box<Ast>),
    /// Coefficient list of a polynomial or entries of a matrix.
    List(Vec<Ast>),
    /// `[c0, c1, …] @ N`.
    Series(Vec<Ast>, usize),
    Seq(SeqLit),
    /// `band{0: seq, 1: seq, …}`.
    Band(Vec<(usize, SeqLit)>),
}

impl Ast {
    pub fn bin(op: BinOp, l: Ast, r: Ast) -> Ast {
        Ast::Bin(op, Box::new(l), Box::new(r))
    }

    fn level(&self) -> u8 {
        match self {
            Ast::Bin(BinOp::Add | BinOp::Sub, ..) => 1,
            Ast::Bin(BinOp::Mul, ..) => 2,
            Ast::Neg(_) => 3,
            Ast::Pow(..) => 4,
            _ => 5,
        }
    }

    fn write(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.level() < min {
            f.write_str("(")?;
            self.write(f, 0)?;
            return f.write_str(")");
        }
        match self {
            Ast::Int(n) => write!(f, "{n}"),
            Ast::Sym(s) => f.write_str(s),
            Ast::Neg(a) => {
                f.write_str("-")?;
                a.write(f, 3)
            }
            Ast::Bin(op, l, r) => {
                let (sep, lmin, rmin) = match op {
                    BinOp::Add => (" + ", 1, 2),
                    BinOp::Sub => (" - ", 1, 2),
                    BinOp::Mul => ("*", 2, 3),
                };
                l.write(f, lmin)?;
                f.write_str(sep)?;
                r.write(f, rmin)
            }
            Ast::Pow(b, n) => {
                b.write(f, 5)?;
                write!(f, "^{n}")
            }
            Ast::Call(func, a) => {
                write!(f, "{}(", func.name())?;
                a.write(f, 0)?;
                f.write_str(")")
            }
            Ast::List(items) => write_list(f, items),
            Ast::Series(items, n) => {
                write_list(f, items)?;
                write!(f, " @ {n}")
            }
            Ast::Seq(s) => write!(f, "{s}"),
            Ast::Band(bands) => {
                f.write_str("band{")?;
                for (i, (d, s)) in bands.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{d}: {s}")?;
                }
                f.write_str("}")
            }
        }
    }
}

fn write_list(f: &mut fmt::Formatter<'_>, items: &[Ast]) -> fmt::Result {
    f.write_str("[")?;
    for (i, a) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        a.write(f, 0)?;
    }
    f.write_str("]")
}

fn write_ints(f: &mut fmt::Formatter<'_>, items: &[BigInt]) -> fmt::Result {
    f.write_str("[")?;
    for (i, a) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{a}")?;
    }
    f.write_str("]")
}

impl fmt::Display for SeqLit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("prefix ")?;
        write_ints(f, &self.prefix)?;
        match &self.tail {
            SeqTail::Const(c) => write!(f, " then const {c}"),
            SeqTail::Period(p) => {
                f.write_str(" then period ")?;
                write_ints(f, p)
            }
        }
    }
}

impl fmt::Display for Ast {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, 0)
    }
}
