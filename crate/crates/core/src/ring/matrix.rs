use std::any::Any;

use num_bigint::{BigInt, BigUint};
use num_traits::Pow;
use rand::RngCore;

use super::{Capabilities, Ring, RingImpl};
use crate::error::Result;
use crate::value::Value;

/// `M_k(R)`, payload row-major of length `k*k`.
#[derive(Debug, Clone)]
pub struct MatrixRing {
    base: Ring,
    k: usize,
}

fn entries(v: &Value) -> &[Value] {
    v.as_list().expect("matrix payload")
}

impl MatrixRing {
    pub fn new(base: Ring, k: usize) -> Self {
        assert!(k >= 1, "matrix size must be positive");
        MatrixRing { base, k }
    }

    pub fn base(&self) -> &Ring {
        &self.base
    }

    pub fn size(&self) -> usize {
        self.k
    }

    pub fn entry<'a>(&self, m: &'a Value, i: usize, j: usize) -> &'a Value {
        &entries(m)[i * self.k + j]
    }

    pub fn from_fn(&self, mut f: impl FnMut(usize, usize) -> Value) -> Value {
        let k = self.k;
        Value::List((0..k * k).map(|n| f(n / k, n % k)).collect())
    }

    pub fn try_from_fn(&self, mut f: impl FnMut(usize, usize) -> Result<Value>) -> Result<Value> {
        let k = self.k;
        Ok(Value::List(
            (0..k * k).map(|n| f(n / k, n % k)).collect::<Result<_>>()?,
        ))
    }

    pub fn scalar(&self, c: &Value) -> Value {
        let zero = self.base.zero();
        self.from_fn(|i, j| if i == j { c.clone() } else { zero.clone() })
    }

    /// Matrix unit `E_ij`.
    pub fn unit(&self, i: usize, j: usize) -> Value {
        let (zero, one) = (self.base.zero(), self.base.one());
        self.from_fn(|a, b| if (a, b) == (i, j) { one.clone() } else { zero.clone() })
    }

    /// Applies `f` to every entry.
    pub fn map(&self, m: &Value, mut f: impl FnMut(&Value) -> Result<Value>) -> Result<Value> {
        Ok(Value::List(
            entries(m).iter().map(&mut f).collect::<Result<_>>()?,
        ))
    }
}

impl RingImpl for MatrixRing {
    fn descriptor(&self) -> String {
        format!("M{}({})", self.k, self.base.id())
    }

    fn capabilities(&self) -> Capabilities {
        self.base.capabilities()
    }

    fn zero(&self) -> Value {
        self.scalar(&self.base.zero())
    }

    fn one(&self) -> Value {
        self.scalar(&self.base.one())
    }

    fn from_int(&self, n: &BigInt) -> Value {
        self.scalar(&self.base.from_int(n))
    }

    fn add(&self, a: &Value, b: &Value) -> Result<Value> {
        self.try_from_fn(|i, j| self.base.add(self.entry(a, i, j), self.entry(b, i, j)))
    }

    fn neg(&self, a: &Value) -> Result<Value> {
        self.map(a, |x| self.base.neg(x))
    }

    fn mul(&self, a: &Value, b: &Value) -> Result<Value> {
        self.try_from_fn(|i, j| {
            let mut acc = self.base.zero();
            for l in 0..self.k {
                let t = self.base.mul(self.entry(a, i, l), self.entry(b, l, j))?;
                acc = self.base.add(&acc, &t)?;
            }
            Ok(acc)
        })
    }

    fn equal(&self, a: &Value, b: &Value, window: usize) -> bool {
        entries(a)
            .iter()
            .zip(entries(b))
            .all(|(x, y)| self.base.equal(x, y, window))
    }

    fn sample(&self, rng: &mut dyn RngCore) -> Value {
        Value::List((0..self.k * self.k).map(|_| self.base.sample(rng)).collect())
    }

    fn cardinality(&self) -> Option<BigUint> {
        self.base
            .cardinality()
            .map(|c| Pow::pow(c, (self.k * self.k) as u32))
    }

    fn elements(&self) -> Option<Vec<Value>> {
        let base = self.base.elements()?;
        let n = self.k * self.k;
        let mut out: Vec<Vec<Value>> = vec![Vec::new()];
        for _ in 0..n {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    base.iter().map(move |x| {
                        let mut p = prefix.clone();
                        p.push(x.clone());
                        p
                    })
                })
                .collect();
        }
        Some(out.into_iter().map(Value::List).collect())
    }

    fn contains(&self, v: &Value) -> bool {
        matches!(v, Value::List(e) if e.len() == self.k * self.k && e.iter().all(|x| self.base.contains(x)))
    }

    fn format(&self, a: &Value) -> String {
        let rows: Vec<String> = (0..self.k)
            .map(|i| {
                let row: Vec<String> = (0..self.k)
                    .map(|j| self.base.format(self.entry(a, i, j)))
                    .collect();
                format!("[{}]", row.join(","))
            })
            .collect();
        format!("[{}]", rows.join(","))
    }

    fn generators(&self) -> Vec<(String, Value)> {
        let mut g = Vec::new();
        for i in 0..self.k {
            for j in 0..self.k {
                g.push((format!("E{i}{j}"), self.unit(i, j)));
            }
        }
        g.extend(
            self.base
                .generators()
                .into_iter()
                .map(|(n, v)| (n, self.scalar(&v))),
        );
        g
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
    fn m2_z2_has_sixteen_elements() {
        let r = make_ring("M2(Z/2)").unwrap();
        assert!(r.capabilities().enumerable);
        let all = r.elements().unwrap();
        assert_eq!(all.len(), 16);
        let mut dedup = all.clone();
        dedup.sort();
        dedup.dedup();
        assert_eq!(dedup.len(), 16);
    }

    #[test]
    fn matrix_units_multiply() {
        let r = make_ring("M2(Z)").unwrap();
        let m = r.downcast::<MatrixRing>().unwrap();
        assert_eq!(r.mul(&m.unit(0, 1), &m.unit(1, 0)).unwrap(), m.unit(0, 0));
        assert_eq!(r.mul(&m.unit(1, 0), &m.unit(1, 0)).unwrap(), r.zero());
    }
}
