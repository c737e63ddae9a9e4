//! Dynamic ring handles.
//!
//! Every ring in the crate (including Ore extensions, skew series rings and `UM_ℕ(R)`) is a
//! [`RingImpl`] behind a shared [`Ring`] handle, so constructions nest freely at runtime:
//! `M2(P(Z/2))`, `Poly(W1(Z), y)` and so on. Payloads are plain [`Value`]s; the ring decides
//! what they mean.

use std::any::Any;
use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use rand::RngCore;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::value::Value;

pub mod descriptor;
pub mod integers;
pub mod laurent;
pub mod laws;
pub mod matrix;
pub mod poly;
pub mod sequence;

pub use descriptor::make_ring;
pub use integers::{Integers, IntegersMod};
pub use laurent::{LaurentRing, LaurentValue};
pub use laws::ring_axioms_check;
pub use matrix::MatrixRing;
pub use poly::PolyRing;
pub use sequence::{Sequence, SequenceRing, Tail};

/// Default window for comparisons in rings with windowed equality.
pub const DEFAULT_WINDOW: usize = 16;

/// Window meaning "compare everything the representation knows". Used for canonical-form
/// bookkeeping (stripping zero coefficients), never for reported checks.
pub const FULL: usize = usize::MAX;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Capabilities {
    pub enumerable: bool,
    pub exact_equality: bool,
    pub windowed_equality: bool,
    /// Zero means characteristic zero.
    pub characteristic: BigUint,
}

impl Capabilities {
    pub fn exact(characteristic: BigUint) -> Self {
        Capabilities {
            enumerable: false,
            exact_equality: true,
            windowed_equality: false,
            characteristic,
        }
    }

    pub fn windowed(characteristic: BigUint) -> Self {
        Capabilities {
            enumerable: false,
            exact_equality: false,
            windowed_equality: true,
            characteristic,
        }
    }

    pub fn enumerable(mut self) -> Self {
        self.enumerable = true;
        self
    }
}

/// The operations a concrete ring provides. Operands are assumed to be valid payloads of
/// `self`; [`Element`] is the checked front end.
pub trait RingImpl: Send + Sync + fmt::Debug + Any {
    /// Canonical descriptor; two handles with equal descriptors denote the same ring.
    fn descriptor(&self) -> String;
    fn capabilities(&self) -> Capabilities;

    fn zero(&self) -> Value;
    fn one(&self) -> Value;
    fn from_int(&self, n: &BigInt) -> Value;

    fn add(&self, a: &Value, b: &Value) -> Result<Value>;
    fn neg(&self, a: &Value) -> Result<Value>;
    fn mul(&self, a: &Value, b: &Value) -> Result<Value>;

    fn sub(&self, a: &Value, b: &Value) -> Result<Value> {
        self.add(a, &self.neg(b)?)
    }

    /// Equality; exact rings ignore `window`, windowed rings compare the leading
    /// `window` positions only.
    fn equal(&self, a: &Value, b: &Value, window: usize) -> bool;

    fn is_zero(&self, a: &Value, window: usize) -> bool {
        self.equal(a, &self.zero(), window)
    }

    /// Deterministic small random element drawn from `rng`.
    fn sample(&self, rng: &mut dyn RngCore) -> Value;

    fn cardinality(&self) -> Option<BigUint> {
        None
    }

    /// Every element exactly once, for enumerable rings.
    fn elements(&self) -> Option<Vec<Value>> {
        None
    }

    fn contains(&self, v: &Value) -> bool;

    fn format(&self, a: &Value) -> String;

    /// Named generators usable as expression symbols, lifted into this ring.
    fn generators(&self) -> Vec<(String, Value)> {
        Vec::new()
    }

    /// Two-sided inverse when `a` is a unit and the ring knows how to find it.
    fn unit_inverse(&self, _a: &Value) -> Option<Value> {
        None
    }

    fn as_any(&self) -> &dyn Any;
}

/// Shared, immutable handle to a ring.
#[derive(Clone)]
pub struct Ring(Arc<dyn RingImpl>);

impl Ring {
    pub fn new(imp: impl RingImpl) -> Self {
        Ring(Arc::new(imp))
    }

    pub fn id(&self) -> String {
        self.0.descriptor()
    }

    pub fn same(&self, other: &Ring) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.descriptor() == other.0.descriptor()
    }

    pub fn ensure_same(&self, other: &Ring) -> Result<()> {
        if self.same(other) {
            Ok(())
        } else {
            Err(Error::RingMismatch {
                left: self.id(),
                right: other.id(),
            })
        }
    }

    pub fn downcast<T: RingImpl>(&self) -> Option<&T> {
        self.0.as_any().downcast_ref::<T>()
    }

    pub fn int(&self, n: i64) -> Value {
        self.0.from_int(&BigInt::from(n))
    }

    pub fn elem(&self, v: Value) -> Result<Element> {
        Element::new(self.clone(), v)
    }

    pub fn sum<'a>(&self, items: impl IntoIterator<Item = &'a Value>) -> Result<Value> {
        items
            .into_iter()
            .try_fold(self.zero(), |acc, v| self.add(&acc, v))
    }

    /// `a^n` by repeated multiplication.
    pub fn pow(&self, a: &Value, n: usize) -> Result<Value> {
        (0..n).try_fold(self.one(), |acc, _| self.mul(&acc, a))
    }

    /// Elements, or an error when the ring is not enumerable or exceeds `budget`.
    pub fn enumerate(&self, budget: u64) -> Result<Vec<Value>> {
        let card = self
            .cardinality()
            .filter(|_| self.capabilities().enumerable)
            .ok_or_else(|| Error::NotEnumerable(self.id()))?;
        if card > BigUint::from(budget) {
            return Err(Error::BudgetExceeded {
                budget,
                needed: card.to_string(),
            });
        }
        self.elements().ok_or_else(|| Error::NotEnumerable(self.id()))
    }
}

impl std::ops::Deref for Ring {
    type Target = dyn RingImpl;

    fn deref(&self) -> &Self::Target {
        &*self.0
    }
}

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ring({})", self.id())
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id())
    }
}

/// Seeded generator used for every randomized check.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A ring element that remembers its ring. Binary operations refuse mixed rings.
#[derive(Clone)]
pub struct Element {
    ring: Ring,
    value: Value,
}

impl Element {
    pub fn new(ring: Ring, value: Value) -> Result<Self> {
        if !ring.contains(&value) {
            return Err(Error::NotAnElement {
                ring: ring.id(),
                detail: format!("{} payload", value.kind()),
            });
        }
        Ok(Element { ring, value })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn value(&self) -> &Value {
        &self.value
    }

    pub fn into_value(self) -> Value {
        self.value
    }

    fn lift(&self, value: Value) -> Element {
        Element {
            ring: self.ring.clone(),
            value,
        }
    }

    pub fn add(&self, other: &Element) -> Result<Element> {
        self.ring.ensure_same(&other.ring)?;
        Ok(self.lift(self.ring.add(&self.value, &other.value)?))
    }

    pub fn sub(&self, other: &Element) -> Result<Element> {
        self.ring.ensure_same(&other.ring)?;
        Ok(self.lift(self.ring.sub(&self.value, &other.value)?))
    }

    pub fn mul(&self, other: &Element) -> Result<Element> {
        self.ring.ensure_same(&other.ring)?;
        Ok(self.lift(self.ring.mul(&self.value, &other.value)?))
    }

    pub fn neg(&self) -> Result<Element> {
        Ok(self.lift(self.ring.neg(&self.value)?))
    }

    pub fn pow(&self, n: usize) -> Result<Element> {
        Ok(self.lift(self.ring.pow(&self.value, n)?))
    }

    pub fn eq_within(&self, other: &Element, window: usize) -> Result<bool> {
        self.ring.ensure_same(&other.ring)?;
        Ok(self.ring.equal(&self.value, &other.value, window))
    }

    pub fn is_zero(&self, window: usize) -> bool {
        self.ring.is_zero(&self.value, window)
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in {}", self.ring.format(&self.value), self.ring.id())
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.ring.format(&self.value))
    }
}

/// Formats `coeff·name^k` terms of an ascending coefficient list, skipping zeros.
pub(crate) fn format_ascending(ring: &Ring, coeffs: &[Value], var: &str, window: usize) -> String {
    let mut terms = Vec::new();
    for (k, c) in coeffs.iter().enumerate() {
        if ring.is_zero(c, window) {
            continue;
        }
        let mono = match k {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{k}"),
        };
        let cs = ring.format(c);
        let needs_parens = cs.contains(' ');
        let term = if mono.is_empty() {
            cs
        } else if ring.equal(c, &ring.one(), window) {
            mono
        } else if needs_parens {
            format!("({cs})*{mono}")
        } else {
            format!("{cs}*{mono}")
        };
        terms.push(term);
    }
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mixed_ring_operations_are_errors() {
        let z4 = make_ring("Z/4").unwrap();
        let z = make_ring("Z").unwrap();
        let a = z4.elem(z4.int(1)).unwrap();
        let b = z.elem(z.int(1)).unwrap();
        assert!(matches!(a.add(&b), Err(Error::RingMismatch { .. })));
        assert!(matches!(a.mul(&b), Err(Error::RingMismatch { .. })));
        assert_eq!(a.add(&a).unwrap().value(), &z4.int(2));
    }

    #[test]
    fn element_rejects_foreign_payload() {
        let z4 = make_ring("Z/4").unwrap();
        assert!(z4.elem(Value::int(7)).is_err());
        assert!(z4.elem(Value::List(vec![])).is_err());
    }

    #[test]
    fn sampler_is_deterministic() {
        for spec in ["Z", "Z/4", "Poly(Z,y)", "M2(Z/2)", "P(Z/2)", "Laurent(Z/5,prec=6)", "UMat(Z/2)", "Free(u,v)"] {
            let r = make_ring(spec).unwrap();
            let xs: Vec<_> = {
                let mut rng = seeded_rng(7);
                (0..20).map(|_| r.sample(&mut rng)).collect()
            };
            let ys: Vec<_> = {
                let mut rng = seeded_rng(7);
                (0..20).map(|_| r.sample(&mut rng)).collect()
            };
            assert_eq!(xs, ys, "{spec}");
            assert!(xs.iter().all(|x| r.contains(x)), "{spec}");
        }
    }

    #[test]
    fn equality_flags_are_exclusive() {
        for spec in ["Z", "Z/4", "Poly(Z,y)", "M2(Z/2)", "P(Z/2)", "Laurent(Z/5,prec=6)", "UMat(Z/2)", "Free(u,v)", "Free(u,v,x|xu=0,xv=0)"] {
            let c = make_ring(spec).unwrap().capabilities();
            assert!(c.exact_equality ^ c.windowed_equality, "{spec}");
        }
    }
}
