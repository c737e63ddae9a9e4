//! The product ring `∏_ℕ R` on the class of eventually periodic sequences.
//!
//! A sequence is a finite explicit prefix followed by a repeating block. The class is closed
//! under `+`, `·` and the shift, so those stay exact; the only way out is a period blow-up
//! past [`MAX_PERIOD`], which is reported as [`Error::Unrepresentable`].

use std::any::Any;

use num_bigint::BigInt;
use num_integer::Integer;
use rand::{Rng, RngCore};

use super::{Capabilities, Ring, RingImpl, FULL};
use crate::error::{Error, Result};
use crate::value::Value;

pub const MAX_PERIOD: usize = 1024;

/// Eventually periodic sequence `prefix, period, period, ...` in canonical form: the period
/// is primitive and the prefix is as short as possible.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sequence {
    prefix: Vec<Value>,
    period: Vec<Value>,
}

/// Shape of a sequence's tail.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tail<'a> {
    Const(&'a Value),
    Period(&'a [Value]),
}

impl Sequence {
    pub fn prefix(&self) -> &[Value] {
        &self.prefix
    }

    pub fn period(&self) -> &[Value] {
        &self.period
    }

    pub fn tail(&self) -> Tail<'_> {
        match self.period.as_slice() {
            [c] => Tail::Const(c),
            p => Tail::Period(p),
        }
    }

    pub fn get(&self, i: usize) -> &Value {
        match self.prefix.get(i) {
            Some(v) => v,
            None => &self.period[(i - self.prefix.len()) % self.period.len()],
        }
    }

    /// Number of leading entries after which the sequence is known to repeat exactly.
    fn span_with(&self, other: &Sequence) -> usize {
        let l = self.prefix.len().max(other.prefix.len());
        let p = self.period.len().lcm(&other.period.len());
        l.saturating_add(p)
    }
}

/// `P(R) = ∏_ℕ R` with componentwise operations.
#[derive(Debug, Clone)]
pub struct SequenceRing {
    base: Ring,
}

impl SequenceRing {
    pub fn new(base: Ring) -> Result<Self> {
        if !base.capabilities().exact_equality {
            return Err(Error::UnsupportedParameter(format!(
                "P(..) needs a base ring with exact equality, got {}",
                base.id()
            )));
        }
        Ok(SequenceRing { base })
    }

    pub fn base(&self) -> &Ring {
        &self.base
    }

    /// Builds and canonicalizes `prefix` followed by `period` repeated forever.
    pub fn make(&self, prefix: Vec<Value>, period: Vec<Value>) -> Result<Sequence> {
        if period.is_empty() {
            return Err(Error::Precondition("sequence period must be nonempty".into()));
        }
        if period.len() > MAX_PERIOD {
            return Err(Error::Unrepresentable(format!(
                "period {} exceeds {MAX_PERIOD}",
                period.len()
            )));
        }
        Ok(self.canonical(prefix, period))
    }

    pub fn constant(&self, c: Value) -> Sequence {
        self.canonical(Vec::new(), vec![c])
    }

    pub fn value(&self, prefix: Vec<Value>, period: Vec<Value>) -> Result<Value> {
        self.make(prefix, period).map(Value::Seq)
    }

    fn eq(&self, a: &Value, b: &Value) -> bool {
        self.base.equal(a, b, FULL)
    }

    fn canonical(&self, mut prefix: Vec<Value>, period: Vec<Value>) -> Sequence {
        let p = period.len();
        let d = (1..=p)
            .filter(|d| p.is_multiple_of(*d))
            .find(|&d| (d..p).all(|i| self.eq(&period[i], &period[i - d])))
            .unwrap_or(p);
        let mut period: Vec<Value> = period.into_iter().take(d).collect();
        while let Some(last) = prefix.last() {
            if !self.eq(last, period.last().unwrap()) {
                break;
            }
            prefix.pop();
            period.rotate_right(1);
        }
        Sequence { prefix, period }
    }

    /// Componentwise combination.
    pub fn zip(
        &self,
        a: &Sequence,
        b: &Sequence,
        f: impl Fn(&Value, &Value) -> Result<Value>,
    ) -> Result<Sequence> {
        let l = a.prefix.len().max(b.prefix.len());
        let p = a.period.len().lcm(&b.period.len());
        if p > MAX_PERIOD {
            return Err(Error::Unrepresentable(format!(
                "combined period {p} exceeds {MAX_PERIOD}"
            )));
        }
        let prefix = (0..l).map(|i| f(a.get(i), b.get(i))).collect::<Result<_>>()?;
        let period = (l..l + p)
            .map(|i| f(a.get(i), b.get(i)))
            .collect::<Result<_>>()?;
        Ok(self.canonical(prefix, period))
    }

    pub fn map(&self, a: &Sequence, f: impl Fn(&Value) -> Result<Value>) -> Result<Sequence> {
        let prefix = a.prefix.iter().map(&f).collect::<Result<_>>()?;
        let period = a.period.iter().map(&f).collect::<Result<_>>()?;
        Ok(self.canonical(prefix, period))
    }

    /// `(r_i) ↦ (r_{i+1})`.
    pub fn shift(&self, a: &Sequence) -> Sequence {
        if a.prefix.is_empty() {
            let mut period = a.period.clone();
            period.rotate_left(1);
            self.canonical(Vec::new(), period)
        } else {
            self.canonical(a.prefix[1..].to_vec(), a.period.clone())
        }
    }

    pub fn shift_by(&self, a: &Sequence, k: usize) -> Sequence {
        (0..k).fold(a.clone(), |s, _| self.shift(&s))
    }

    /// `(r_i) ↦ (x, r_0, r_1, ...)`.
    pub fn prepend(&self, x: Value, a: &Sequence) -> Sequence {
        let mut prefix = Vec::with_capacity(a.prefix.len() + 1);
        prefix.push(x);
        prefix.extend(a.prefix.iter().cloned());
        self.canonical(prefix, a.period.clone())
    }

    pub fn window_eq(&self, a: &Sequence, b: &Sequence, window: usize) -> bool {
        let n = window.min(a.span_with(b));
        (0..n).all(|i| self.eq(a.get(i), b.get(i)))
    }

    pub fn format_seq(&self, s: &Sequence) -> String {
        let list = |v: &[Value]| {
            v.iter()
                .map(|x| self.base.format(x))
                .collect::<Vec<_>>()
                .join(",")
        };
        match s.tail() {
            Tail::Const(c) => format!("prefix [{}] then const {}", list(&s.prefix), self.base.format(c)),
            Tail::Period(p) => format!("prefix [{}] then period [{}]", list(&s.prefix), list(p)),
        }
    }

    pub fn sample_seq(&self, rng: &mut dyn RngCore) -> Sequence {
        let lp = rng.gen_range(0..=3usize);
        let prefix = (0..lp).map(|_| self.base.sample(rng)).collect();
        let pp = rng.gen_range(1..=2usize);
        let period = (0..pp).map(|_| self.base.sample(rng)).collect();
        self.canonical(prefix, period)
    }

    pub fn seq_contains(&self, s: &Sequence) -> bool {
        !s.period.is_empty()
            && s.prefix.iter().chain(&s.period).all(|x| self.base.contains(x))
            && *s == self.canonical(s.prefix.clone(), s.period.clone())
    }
}

pub(crate) fn seq_of(v: &Value) -> &Sequence {
    v.as_seq().expect("sequence payload")
}

impl RingImpl for SequenceRing {
    fn descriptor(&self) -> String {
        format!("P({})", self.base.id())
    }

    fn capabilities(&self) -> Capabilities {
        Capabilities::windowed(self.base.capabilities().characteristic)
    }

    fn zero(&self) -> Value {
        Value::Seq(self.constant(self.base.zero()))
    }

    fn one(&self) -> Value {
        Value::Seq(self.constant(self.base.one()))
    }

    fn from_int(&self, n: &BigInt) -> Value {
        Value::Seq(self.constant(self.base.from_int(n)))
    }

    fn add(&self, a: &Value, b: &Value) -> Result<Value> {
        self.zip(seq_of(a), seq_of(b), |x, y| self.base.add(x, y))
            .map(Value::Seq)
    }

    fn neg(&self, a: &Value) -> Result<Value> {
        self.map(seq_of(a), |x| self.base.neg(x)).map(Value::Seq)
    }

    fn mul(&self, a: &Value, b: &Value) -> Result<Value> {
        self.zip(seq_of(a), seq_of(b), |x, y| self.base.mul(x, y))
            .map(Value::Seq)
    }

    fn equal(&self, a: &Value, b: &Value, window: usize) -> bool {
        self.window_eq(seq_of(a), seq_of(b), window)
    }

    fn sample(&self, rng: &mut dyn RngCore) -> Value {
        Value::Seq(self.sample_seq(rng))
    }

    fn contains(&self, v: &Value) -> bool {
        matches!(v, Value::Seq(s) if self.seq_contains(s))
    }

    fn format(&self, a: &Value) -> String {
        self.format_seq(seq_of(a))
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::make_ring;

    fn ring() -> SequenceRing {
        SequenceRing::new(make_ring("Z/2").unwrap()).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<Value> {
        v.iter().map(|&x| Value::int(x)).collect()
    }

    #[test]
    fn canonical_form_is_minimal() {
        let r = ring();
        let a = r.make(ints(&[1, 0, 1]), ints(&[0, 1, 0, 1])).unwrap();
        // 1,0,1,0,1,0,1,... = period [1,0] from the start
        assert!(a.prefix().is_empty());
        assert_eq!(a.period(), ints(&[1, 0]).as_slice());
        let b = r.make(ints(&[0, 0]), ints(&[0])).unwrap();
        assert_eq!(b, r.constant(Value::int(0)));
    }

    #[test]
    fn shift_and_prepend() {
        let r = ring();
        let a = r.make(ints(&[1]), ints(&[0])).unwrap();
        assert_eq!(r.shift(&a), r.constant(Value::int(0)));
        let alt = r.make(vec![], ints(&[1, 0])).unwrap();
        assert_eq!(r.shift(&alt).get(0), &Value::int(0));
        assert_eq!(r.shift(&r.prepend(Value::int(1), &alt)), alt);
    }

    #[test]
    fn period_blowup_is_an_error() {
        let r = SequenceRing::new(make_ring("Z").unwrap()).unwrap();
        let a = r.make(vec![], (0..997).map(Value::int).collect()).unwrap();
        let b = r.make(vec![], (0..991).map(Value::int).collect()).unwrap();
        assert!(matches!(
            r.zip(&a, &b, |x, y| r.base.add(x, y)),
            Err(Error::Unrepresentable(_))
        ));
    }

    #[test]
    fn windowed_equality_sees_only_the_window() {
        let r = ring();
        let a = r.make(ints(&[0, 0, 0, 0]), ints(&[1])).unwrap();
        let z = r.constant(Value::int(0));
        assert!(r.window_eq(&a, &z, 4));
        assert!(!r.window_eq(&a, &z, 5));
    }

    #[test]
    fn windowed_base_rejected() {
        assert!(SequenceRing::new(make_ring("P(Z/2)").unwrap()).is_err());
    }
}
