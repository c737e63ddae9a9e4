//! Truncated Laurent series `R((x))` with relative precision `N`.
//!
//! An element is `Σ c_i x^{start+i} + O(x^{start+len})`: coefficients beyond the absolute
//! precision are unknown, and every operation propagates the absolute precision the way
//! p-adic arithmetic does, so windowed comparisons never look at invented digits.

use std::any::Any;

use num_bigint::BigInt;
use rand::{Rng, RngCore};

use super::{seeded_rng, Capabilities, Ring, RingImpl, FULL};
use crate::error::{Error, Result};
use crate::report::{Check, Report};
use crate::value::Value;

/// Absolute precision of an exact zero.
const INF: i64 = i64::MAX / 4;

fn clamp(e: i64) -> i64 {
    e.clamp(-INF, INF)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LaurentValue {
    start: i64,
    coeffs: Vec<Value>,
}

impl LaurentValue {
    /// Valuation; for a zero this is its absolute precision.
    pub fn valuation(&self) -> i64 {
        self.start
    }

    pub fn abs_precision(&self) -> i64 {
        clamp(self.start + self.coeffs.len() as i64)
    }

    pub fn coeffs(&self) -> &[Value] {
        &self.coeffs
    }

    pub fn is_exact_zero(&self) -> bool {
        self.coeffs.is_empty() && self.start >= INF
    }

    fn coeff(&self, e: i64, zero: &Value) -> Value {
        let i = e - self.start;
        if i >= 0 && (i as usize) < self.coeffs.len() {
            self.coeffs[i as usize].clone()
        } else {
            zero.clone()
        }
    }
}

fn lv(v: &Value) -> &LaurentValue {
    match v {
        Value::Laurent(l) => l,
        _ => panic!("laurent payload expected"),
    }
}

#[derive(Debug, Clone)]
pub struct LaurentRing {
    base: Ring,
    prec: usize,
}

impl LaurentRing {
    pub fn new(base: Ring, prec: usize) -> Result<Self> {
        if prec == 0 {
            return Err(Error::UnsupportedParameter("Laurent precision must be ≥ 1".into()));
        }
        if !base.capabilities().exact_equality {
            return Err(Error::UnsupportedParameter(format!(
                "Laurent(..) needs a base ring with exact equality, got {}",
                base.id()
            )));
        }
        Ok(LaurentRing { base, prec })
    }

    pub fn base(&self) -> &Ring {
        &self.base
    }

    pub fn precision(&self) -> usize {
        self.prec
    }

    /// Normalizes `Σ coeffs[i] x^{start+i} + O(x^{start+len})`.
    pub fn make(&self, start: i64, coeffs: Vec<Value>) -> Value {
        let ap = clamp(start + coeffs.len() as i64);
        let lead = coeffs.iter().position(|c| !self.base.is_zero(c, FULL));
        let l = match lead {
            None => LaurentValue {
                start: ap,
                coeffs: Vec::new(),
            },
            Some(k) => {
                let s = start + k as i64;
                let take = ((ap - s) as usize).min(self.prec);
                LaurentValue {
                    start: s,
                    coeffs: coeffs.into_iter().skip(k).take(take).collect(),
                }
            }
        };
        Value::Laurent(l)
    }

    /// `c·x^e`, known to relative precision `N`.
    pub fn monomial(&self, c: Value, e: i64) -> Value {
        let mut coeffs = vec![self.base.zero(); self.prec];
        coeffs[0] = c;
        self.make(e, coeffs)
    }

    /// The substitution `x ↦ x²` (coefficients untouched).
    pub fn square_substitution(&self, a: &Value) -> Value {
        let a = lv(a);
        if a.coeffs.is_empty() {
            return Value::Laurent(LaurentValue {
                start: clamp(2 * a.start),
                coeffs: Vec::new(),
            });
        }
        let len = 2 * a.coeffs.len() - 1;
        let mut coeffs = vec![self.base.zero(); len];
        for (i, c) in a.coeffs.iter().enumerate() {
            coeffs[2 * i] = c.clone();
        }
        // the slot just past the last known coefficient is known to vanish too
        coeffs.push(self.base.zero());
        self.make(2 * a.start, coeffs)
    }

    /// Right inverse of an element whose leading coefficient is a unit of the base.
    pub fn inverse(&self, a: &Value) -> Result<Value> {
        let a = lv(a);
        let lead = a
            .coeffs
            .first()
            .ok_or_else(|| Error::Precondition("zero has no inverse".into()))?;
        let inv0 = self.base.unit_inverse(lead).ok_or_else(|| {
            Error::Precondition(format!(
                "leading coefficient {} is not invertible",
                self.base.format(lead)
            ))
        })?;
        let n = a.coeffs.len();
        let mut d: Vec<Value> = Vec::with_capacity(n);
        d.push(inv0.clone());
        for k in 1..n {
            let mut acc = self.base.zero();
            for i in 1..=k {
                let t = self.base.mul(&a.coeffs[i], &d[k - i])?;
                acc = self.base.add(&acc, &t)?;
            }
            let t = self.base.mul(&inv0, &acc)?;
            d.push(self.base.neg(&t)?);
        }
        Ok(self.make(-a.start, d))
    }
}

/// Whether every known coefficient at an odd exponent vanishes.
pub fn odd_part_vanishes(ring: &LaurentRing, a: &Value) -> bool {
    let a = lv(a);
    a.coeffs
        .iter()
        .enumerate()
        .all(|(i, c)| (a.start + i as i64) % 2 == 0 || ring.base.is_zero(c, FULL))
}

/// Every `σ(a)` under `x ↦ x²` has a vanishing odd part, while `x` does not: `x` is never
/// in the image.
pub fn square_substitution_not_surjective(ring: &Ring, seed: u64, count: usize) -> Result<Report> {
    let l = ring
        .downcast::<LaurentRing>()
        .ok_or_else(|| Error::Precondition(format!("`{}` is not a Laurent ring", ring.id())))?;
    let mut rng = seeded_rng(seed);
    let bad = (0..count.max(1))
        .map(|_| ring.sample(&mut rng))
        .find(|a| !odd_part_vanishes(l, &l.square_substitution(a)));
    let mut report = Report::new("laurent_square_image", seed)
        .param("ring", ring.id())
        .param("count", count);
    let mut c = Check::new("images have no odd exponents", bad.is_none());
    if let Some(a) = bad {
        c = c.with_witness(ring.format(&a));
    }
    report.push(c);
    let x = l.monomial(l.base.one(), 1);
    report.push(
        Check::new("x has an odd exponent", !odd_part_vanishes(l, &x))
            .with_witness(ring.format(&x)),
    );
    Ok(report)
}

impl RingImpl for LaurentRing {
    fn descriptor(&self) -> String {
        format!("Laurent({},prec={})", self.base.id(), self.prec)
    }

    fn capabilities(&self) -> Capabilities {
        Capabilities::windowed(self.base.capabilities().characteristic)
    }

    fn zero(&self) -> Value {
        Value::Laurent(LaurentValue {
            start: INF,
            coeffs: Vec::new(),
        })
    }

    fn one(&self) -> Value {
        self.monomial(self.base.one(), 0)
    }

    fn from_int(&self, n: &BigInt) -> Value {
        self.monomial(self.base.from_int(n), 0)
    }

    fn add(&self, a: &Value, b: &Value) -> Result<Value> {
        let (a, b) = (lv(a), lv(b));
        let lo = a.start.min(b.start);
        let hi = a.abs_precision().min(b.abs_precision());
        if lo >= hi {
            return Ok(self.make(hi, Vec::new()));
        }
        let zero = self.base.zero();
        let coeffs = (lo..hi)
            .map(|e| self.base.add(&a.coeff(e, &zero), &b.coeff(e, &zero)))
            .collect::<Result<_>>()?;
        Ok(self.make(lo, coeffs))
    }

    fn neg(&self, a: &Value) -> Result<Value> {
        let a = lv(a);
        let coeffs = a
            .coeffs
            .iter()
            .map(|c| self.base.neg(c))
            .collect::<Result<_>>()?;
        if a.coeffs.is_empty() {
            return Ok(Value::Laurent(a.clone()));
        }
        Ok(self.make(a.start, coeffs))
    }

    fn mul(&self, a: &Value, b: &Value) -> Result<Value> {
        let (a, b) = (lv(a), lv(b));
        let ap = clamp(a.start.saturating_add(b.abs_precision()))
            .min(clamp(b.start.saturating_add(a.abs_precision())));
        if a.coeffs.is_empty() || b.coeffs.is_empty() {
            return Ok(Value::Laurent(LaurentValue {
                start: ap,
                coeffs: Vec::new(),
            }));
        }
        let start = a.start + b.start;
        let len = (ap - start).max(0) as usize;
        let mut out = vec![self.base.zero(); len];
        for (i, x) in a.coeffs.iter().enumerate().take(len) {
            for (j, y) in b.coeffs.iter().enumerate().take(len - i) {
                let t = self.base.mul(x, y)?;
                out[i + j] = self.base.add(&out[i + j], &t)?;
            }
        }
        Ok(self.make(start, out))
    }

    fn equal(&self, a: &Value, b: &Value, window: usize) -> bool {
        let (a, b) = (lv(a), lv(b));
        let lo = a.start.min(b.start);
        let hi = a
            .abs_precision()
            .min(b.abs_precision())
            .min(lo.saturating_add(window.min(INF as usize) as i64));
        let zero = self.base.zero();
        (lo..hi.max(lo)).all(|e| self.base.equal(&a.coeff(e, &zero), &b.coeff(e, &zero), FULL))
    }

    fn sample(&self, rng: &mut dyn RngCore) -> Value {
        let start = rng.gen_range(-2i64..=2);
        let coeffs = (0..self.prec).map(|_| self.base.sample(rng)).collect();
        self.make(start, coeffs)
    }

    fn contains(&self, v: &Value) -> bool {
        match v {
            Value::Laurent(l) => {
                l.coeffs.len() <= self.prec
                    && l.coeffs.iter().all(|c| self.base.contains(c))
                    && l.coeffs.first().is_none_or(|c| !self.base.is_zero(c, FULL))
            }
            _ => false,
        }
    }

    fn format(&self, a: &Value) -> String {
        let l = lv(a);
        if l.is_exact_zero() {
            return "0".into();
        }
        let mut terms: Vec<String> = l
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !self.base.is_zero(c, FULL))
            .map(|(i, c)| {
                let e = l.start + i as i64;
                let cs = self.base.format(c);
                match e {
                    0 => cs,
                    1 => format!("{cs}*x"),
                    _ => format!("{cs}*x^{e}"),
                }
            })
            .collect();
        terms.push(format!("O(x^{})", l.abs_precision()));
        terms.join(" + ")
    }

    fn generators(&self) -> Vec<(String, Value)> {
        vec![
            ("x".into(), self.monomial(self.base.one(), 1)),
            ("xinv".into(), self.monomial(self.base.one(), -1)),
        ]
    }

    fn unit_inverse(&self, a: &Value) -> Option<Value> {
        self.inverse(a).ok()
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::make_ring;

    fn ring() -> (Ring, LaurentRing) {
        let r = make_ring("Laurent(Z/5,prec=6)").unwrap();
        let l = r.downcast::<LaurentRing>().unwrap().clone();
        (r, l)
    }

    #[test]
    fn square_substitution_example() {
        let (r, l) = ring();
        let x = l.monomial(Value::int(1), 1);
        let xinv = l.monomial(Value::int(1), -1);
        let s = r.add(&xinv, &x).unwrap();
        let image = l.square_substitution(&s);
        let expected = r
            .add(&l.monomial(Value::int(1), -2), &l.monomial(Value::int(1), 2))
            .unwrap();
        assert!(r.equal(&image, &expected, 16));
        assert_eq!(lv(&image).valuation(), -2);
    }

    #[test]
    fn inverse_of_one_minus_x() {
        let (r, l) = ring();
        let p = r.sub(&r.one(), &l.monomial(Value::int(1), 1)).unwrap();
        let q = l.inverse(&p).unwrap();
        assert!(r.equal(&r.mul(&p, &q).unwrap(), &r.one(), 16));
        // 1 + x + x^2 + ...
        assert!(lv(&q).coeffs().iter().all(|c| c == &Value::int(1)));
    }

    #[test]
    fn cancellation_loses_precision_instead_of_inventing_digits() {
        let (r, l) = ring();
        let a = r.add(&r.one(), &l.monomial(Value::int(1), 3)).unwrap();
        let d = r.sub(&a, &r.one()).unwrap();
        // known: x^3 + O(x^6)
        assert_eq!(lv(&d).valuation(), 3);
        assert_eq!(lv(&d).abs_precision(), 6);
    }

    #[test]
    fn zero_is_absorbing() {
        let (r, l) = ring();
        let x = l.monomial(Value::int(2), -3);
        assert!(r.is_zero(&r.mul(&x, &r.zero()).unwrap(), 16));
        assert!(r.equal(&r.add(&x, &r.zero()).unwrap(), &x, 16));
    }
}
