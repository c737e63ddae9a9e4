use std::any::Any;

use num_bigint::{BigInt, BigUint, RandBigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, RngCore};

use super::{Capabilities, RingImpl};
use crate::error::{Error, Result};
use crate::value::Value;

fn int_of(v: &Value) -> &BigInt {
    v.as_int().expect("integer payload")
}

/// The integers, arbitrary precision.
#[derive(Debug, Clone, Default)]
pub struct Integers;

impl RingImpl for Integers {
    fn descriptor(&self) -> String {
        "Z".into()
    }

    fn capabilities(&self) -> Capabilities {
        Capabilities::exact(BigUint::zero())
    }

    fn zero(&self) -> Value {
        Value::int(0)
    }

    fn one(&self) -> Value {
        Value::int(1)
    }

    fn from_int(&self, n: &BigInt) -> Value {
        Value::Int(n.clone())
    }

    fn add(&self, a: &Value, b: &Value) -> Result<Value> {
        Ok(Value::Int(int_of(a) + int_of(b)))
    }

    fn neg(&self, a: &Value) -> Result<Value> {
        Ok(Value::Int(-int_of(a)))
    }

    fn mul(&self, a: &Value, b: &Value) -> Result<Value> {
        Ok(Value::Int(int_of(a) * int_of(b)))
    }

    fn equal(&self, a: &Value, b: &Value, _window: usize) -> bool {
        a == b
    }

    fn sample(&self, rng: &mut dyn RngCore) -> Value {
        Value::int(rng.gen_range(-9i64..=9))
    }

    fn contains(&self, v: &Value) -> bool {
        matches!(v, Value::Int(_))
    }

    fn format(&self, a: &Value) -> String {
        int_of(a).to_string()
    }

    fn unit_inverse(&self, a: &Value) -> Option<Value> {
        let n = int_of(a);
        (n.abs().is_one()).then(|| Value::Int(n.clone()))
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}

/// `Z/n` with canonical representatives `0..n`.
#[derive(Debug, Clone)]
pub struct IntegersMod {
    modulus: BigInt,
}

impl IntegersMod {
    pub fn new(modulus: impl Into<BigInt>) -> Result<Self> {
        let modulus = modulus.into();
        if modulus.sign() != Sign::Plus {
            return Err(Error::UnsupportedParameter(format!(
                "modulus must be positive, got {modulus}"
            )));
        }
        Ok(IntegersMod { modulus })
    }

    pub fn modulus(&self) -> &BigInt {
        &self.modulus
    }

    fn reduce(&self, n: BigInt) -> Value {
        Value::Int(n.mod_floor(&self.modulus))
    }
}

impl RingImpl for IntegersMod {
    fn descriptor(&self) -> String {
        format!("Z/{}", self.modulus)
    }

    fn capabilities(&self) -> Capabilities {
        Capabilities::exact(self.modulus.magnitude().clone()).enumerable()
    }

    fn zero(&self) -> Value {
        Value::int(0)
    }

    fn one(&self) -> Value {
        self.reduce(BigInt::one())
    }

    fn from_int(&self, n: &BigInt) -> Value {
        self.reduce(n.clone())
    }

    fn add(&self, a: &Value, b: &Value) -> Result<Value> {
        Ok(self.reduce(int_of(a) + int_of(b)))
    }

    fn neg(&self, a: &Value) -> Result<Value> {
        Ok(self.reduce(-int_of(a)))
    }

    fn mul(&self, a: &Value, b: &Value) -> Result<Value> {
        Ok(self.reduce(int_of(a) * int_of(b)))
    }

    fn equal(&self, a: &Value, b: &Value, _window: usize) -> bool {
        a == b
    }

    fn sample(&self, rng: &mut dyn RngCore) -> Value {
        Value::Int(rng.gen_bigint_range(&BigInt::zero(), &self.modulus))
    }

    fn cardinality(&self) -> Option<BigUint> {
        Some(self.modulus.magnitude().clone())
    }

    fn elements(&self) -> Option<Vec<Value>> {
        let n: u64 = self.modulus.clone().try_into().ok()?;
        Some((0..n).map(Value::int).collect())
    }

    fn contains(&self, v: &Value) -> bool {
        matches!(v, Value::Int(n) if !n.is_negative() && n < &self.modulus)
    }

    fn format(&self, a: &Value) -> String {
        int_of(a).to_string()
    }

    fn unit_inverse(&self, a: &Value) -> Option<Value> {
        let e = int_of(a).extended_gcd(&self.modulus);
        e.gcd.is_one().then(|| self.reduce(e.x))
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}
