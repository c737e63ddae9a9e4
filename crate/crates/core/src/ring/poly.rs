use std::any::Any;

use num_bigint::BigInt;
use rand::{Rng, RngCore};

use super::{format_ascending, Capabilities, Ring, RingImpl, FULL};
use crate::error::Result;
use crate::value::Value;

/// `R[y]` with `y` central. Payload: ascending coefficient list, trailing zeros stripped.
#[derive(Debug, Clone)]
pub struct PolyRing {
    base: Ring,
    var: String,
}

pub(crate) fn coeffs(v: &Value) -> &[Value] {
    v.as_list().expect("list payload")
}

/// Drops trailing coefficients that are zero in `base`.
pub(crate) fn strip(base: &Ring, mut c: Vec<Value>) -> Vec<Value> {
    while c.last().is_some_and(|x| base.is_zero(x, FULL)) {
        c.pop();
    }
    c
}

/// Coefficientwise sum of two ascending lists.
pub(crate) fn add_lists(base: &Ring, a: &[Value], b: &[Value]) -> Result<Vec<Value>> {
    let n = a.len().max(b.len());
    let zero = base.zero();
    (0..n)
        .map(|i| base.add(a.get(i).unwrap_or(&zero), b.get(i).unwrap_or(&zero)))
        .collect()
}

impl PolyRing {
    pub fn new(base: Ring, var: impl Into<String>) -> Self {
        PolyRing {
            base,
            var: var.into(),
        }
    }

    pub fn base(&self) -> &Ring {
        &self.base
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    pub fn from_coeffs(&self, c: Vec<Value>) -> Value {
        Value::List(strip(&self.base, c))
    }

    /// `c·y^k`.
    pub fn monomial(&self, c: Value, k: usize) -> Value {
        let mut v = vec![self.base.zero(); k];
        v.push(c);
        self.from_coeffs(v)
    }

    pub fn constant(&self, c: Value) -> Value {
        self.from_coeffs(vec![c])
    }

    pub fn degree(&self, v: &Value) -> Option<usize> {
        coeffs(v).len().checked_sub(1)
    }
}

impl RingImpl for PolyRing {
    fn descriptor(&self) -> String {
        format!("Poly({},{})", self.base.id(), self.var)
    }

    fn capabilities(&self) -> Capabilities {
        let b = self.base.capabilities();
        Capabilities {
            enumerable: false,
            ..b
        }
    }

    fn zero(&self) -> Value {
        Value::List(Vec::new())
    }

    fn one(&self) -> Value {
        self.constant(self.base.one())
    }

    fn from_int(&self, n: &BigInt) -> Value {
        self.constant(self.base.from_int(n))
    }

    fn add(&self, a: &Value, b: &Value) -> Result<Value> {
        Ok(self.from_coeffs(add_lists(&self.base, coeffs(a), coeffs(b))?))
    }

    fn neg(&self, a: &Value) -> Result<Value> {
        let c = coeffs(a)
            .iter()
            .map(|x| self.base.neg(x))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.from_coeffs(c))
    }

    fn mul(&self, a: &Value, b: &Value) -> Result<Value> {
        let (a, b) = (coeffs(a), coeffs(b));
        if a.is_empty() || b.is_empty() {
            return Ok(self.zero());
        }
        let mut out = vec![self.base.zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                let t = self.base.mul(x, y)?;
                out[i + j] = self.base.add(&out[i + j], &t)?;
            }
        }
        Ok(self.from_coeffs(out))
    }

    fn equal(&self, a: &Value, b: &Value, window: usize) -> bool {
        let (a, b) = (coeffs(a), coeffs(b));
        let zero = self.base.zero();
        (0..a.len().max(b.len())).all(|i| {
            self.base
                .equal(a.get(i).unwrap_or(&zero), b.get(i).unwrap_or(&zero), window)
        })
    }

    fn sample(&self, rng: &mut dyn RngCore) -> Value {
        let len = rng.gen_range(0..=4usize);
        let c = (0..len).map(|_| self.base.sample(rng)).collect();
        self.from_coeffs(c)
    }

    fn contains(&self, v: &Value) -> bool {
        match v {
            Value::List(c) => {
                c.iter().all(|x| self.base.contains(x))
                    && c.last().is_none_or(|x| !self.base.is_zero(x, FULL))
            }
            _ => false,
        }
    }

    fn format(&self, a: &Value) -> String {
        format_ascending(&self.base, coeffs(a), &self.var, FULL)
    }

    fn generators(&self) -> Vec<(String, Value)> {
        let mut g = vec![(self.var.clone(), self.monomial(self.base.one(), 1))];
        g.extend(
            self.base
                .generators()
                .into_iter()
                .map(|(n, v)| (n, self.constant(v))),
        );
        g
    }

    fn unit_inverse(&self, a: &Value) -> Option<Value> {
        match coeffs(a) {
            [c] => self.base.unit_inverse(c).map(|i| self.constant(i)),
            _ => None,
        }
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::make_ring;

    #[test]
    fn multiplication_strips_zero_divisor_collapse() {
        let r = make_ring("Poly(Z/4,y)").unwrap();
        let p = r.downcast::<PolyRing>().unwrap();
        let two_y = p.monomial(Value::int(2), 1);
        let sq = r.mul(&two_y, &two_y).unwrap();
        assert_eq!(sq, r.zero());
    }

    #[test]
    fn format_reads_naturally() {
        let r = make_ring("Poly(Z,y)").unwrap();
        let p = r.downcast::<PolyRing>().unwrap();
        let v = p.from_coeffs(vec![Value::int(2), Value::int(0), Value::int(3)]);
        assert_eq!(r.format(&v), "2 + 3*y^2");
        assert_eq!(r.format(&r.zero()), "0");
    }
}
