use std::collections::BTreeMap;

use num_bigint::BigInt;

use crate::free::FreeTerms;
use crate::ring::laurent::LaurentValue;
use crate::ring::sequence::Sequence;

/// Ring-agnostic payload of an element. Its meaning is fixed by the ring it is paired with:
/// the same `List` is a polynomial in `Poly(Z,y)`, a row-major matrix in `M2(Z)` and a
/// truncated coefficient vector in a skew series ring.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Value {
    Int(BigInt),
    List(Vec<Value>),
    Seq(Sequence),
    Laurent(LaurentValue),
    Free(FreeTerms),
    /// Upper-triangular matrix with finitely many nonzero superdiagonals, keyed by offset.
    Banded(BTreeMap<usize, Sequence>),
}

impl Value {
    pub fn int(n: impl Into<BigInt>) -> Self {
        Value::Int(n.into())
    }

    pub fn as_int(&self) -> Option<&BigInt> {
        match self {
            Value::Int(n) => Some(n),
            _ => None,
        }
    }

    pub fn as_list(&self) -> Option<&[Value]> {
        match self {
            Value::List(v) => Some(v),
            _ => None,
        }
    }

    pub fn as_seq(&self) -> Option<&Sequence> {
        match self {
            Value::Seq(s) => Some(s),
            _ => None,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Value::Int(_) => "integer",
            Value::List(_) => "list",
            Value::Seq(_) => "sequence",
            Value::Laurent(_) => "laurent",
            Value::Free(_) => "free polynomial",
            Value::Banded(_) => "banded matrix",
        }
    }
}
