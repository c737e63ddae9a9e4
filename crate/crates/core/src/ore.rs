//! Ore extensions `R[x;σ,δ]`.
//!
//! Elements are left polynomials `Σ r_i x^i` (coefficients on the left), stored ascending with
//! trailing zeros stripped after every operation. Products are computed from the single
//! rewriting rule `x·r = σ(r)x + δ(r)`: `x^i·q` is built by applying `x·` to `q` `i` times.

use std::any::Any;
use std::fmt;

use num_bigint::BigInt;
use rand::{Rng, RngCore};

use crate::error::{Error, Result};
use crate::morphism::{
    builtin_morphisms, check_endomorphism, check_sigma_derivation, EndoMap, SigmaDerivation,
};
use crate::report::{Check, Report};
use crate::ring::poly::{add_lists, coeffs, strip};
use crate::ring::{format_ascending, seeded_rng, Capabilities, PolyRing, Ring, RingImpl, FULL};
use crate::value::Value;

/// Sample size and seed for the σ/δ law checks run when an Ore ring is built.
#[derive(Debug, Clone, Copy)]
pub struct LawCheckConfig {
    pub count: usize,
    pub seed: u64,
}

impl Default for LawCheckConfig {
    fn default() -> Self {
        LawCheckConfig { count: 100, seed: 0 }
    }
}

#[derive(Debug, Clone)]
pub struct OreRing {
    base: Ring,
    sigma: EndoMap,
    delta: SigmaDerivation,
    var: String,
}

impl OreRing {
    /// Builds `base[x;σ,δ]` after checking the σ and δ laws on samples.
    pub fn new(sigma: EndoMap, delta: SigmaDerivation) -> Result<Ring> {
        Self::with_config(sigma, delta, "x", LawCheckConfig::default())
    }

    pub fn with_config(
        sigma: EndoMap,
        delta: SigmaDerivation,
        var: &str,
        config: LawCheckConfig,
    ) -> Result<Ring> {
        let ore = Self::assemble(sigma, delta, var)?;
        let mut failures = Vec::new();
        for rep in [
            check_endomorphism(&ore.sigma, config.seed, config.count),
            check_sigma_derivation(&ore.delta, config.seed, config.count),
        ] {
            failures.extend(
                rep.failures()
                    .map(|c| format!("{}: {}", rep.parameters["map"].as_str().unwrap_or("?"), c.name)),
            );
        }
        if !failures.is_empty() {
            return Err(Error::LawViolation(failures.join("; ")));
        }
        Ok(Ring::new(ore))
    }

    /// Builds the ring without sampling the laws.
    pub fn unchecked(sigma: EndoMap, delta: SigmaDerivation, var: &str) -> Result<Ring> {
        Self::assemble(sigma, delta, var).map(Ring::new)
    }

    /// `base[x;σ]` (δ = 0).
    pub fn skew(sigma: EndoMap) -> Result<Ring> {
        let delta = SigmaDerivation::zero(sigma.clone());
        Self::new(sigma, delta)
    }

    /// Resolves σ and δ from the morphism catalog.
    pub fn from_names(base: &Ring, sigma: &str, delta: Option<&str>) -> Result<Ring> {
        let (s, d) = crate::morphism::resolve_pair(base, sigma, delta)?;
        Self::new(s, d)
    }

    fn assemble(sigma: EndoMap, delta: SigmaDerivation, var: &str) -> Result<OreRing> {
        let base = sigma.domain().clone();
        base.ensure_same(delta.domain())?;
        if delta.sigma().name() != sigma.name() {
            return Err(Error::Precondition(format!(
                "δ `{}` is a derivation over `{}`, not `{}`",
                delta.name(),
                delta.sigma().name(),
                sigma.name()
            )));
        }
        Ok(OreRing {
            base,
            sigma,
            delta,
            var: var.to_string(),
        })
    }

    pub fn base(&self) -> &Ring {
        &self.base
    }

    pub fn sigma(&self) -> &EndoMap {
        &self.sigma
    }

    pub fn delta(&self) -> &SigmaDerivation {
        &self.delta
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    pub fn poly(&self, c: Vec<Value>) -> Value {
        Value::List(strip(&self.base, c))
    }

    pub fn constant(&self, r: Value) -> Value {
        self.poly(vec![r])
    }

    /// `r·x^k`.
    pub fn monomial(&self, r: Value, k: usize) -> Value {
        let mut c = vec![self.base.zero(); k];
        c.push(r);
        self.poly(c)
    }

    /// `x·q` from the rule `x·r = σ(r)x + δ(r)`, unstripped.
    fn x_times(&self, q: &[Value]) -> Result<Vec<Value>> {
        let mut out = vec![self.base.zero(); q.len() + 1];
        for (j, c) in q.iter().enumerate() {
            let s = self.sigma.apply(c)?;
            out[j + 1] = self.base.add(&out[j + 1], &s)?;
            if !self.delta.is_zero_map() {
                let d = self.delta.apply(c)?;
                out[j] = self.base.add(&out[j], &d)?;
            }
        }
        Ok(out)
    }

    fn mul_lists(&self, p: &[Value], q: &[Value]) -> Result<Vec<Value>> {
        if p.is_empty() || q.is_empty() {
            return Ok(Vec::new());
        }
        let mut acc: Vec<Value> = Vec::new();
        let mut cur: Vec<Value> = q.to_vec();
        for (i, pi) in p.iter().enumerate() {
            if !self.base.is_zero(pi, FULL) {
                let term = cur
                    .iter()
                    .map(|c| self.base.mul(pi, c))
                    .collect::<Result<Vec<_>>>()?;
                acc = add_lists(&self.base, &acc, &term)?;
            }
            if i + 1 < p.len() {
                cur = strip(&self.base, self.x_times(&cur)?);
            }
        }
        Ok(strip(&self.base, acc))
    }
}

impl RingImpl for OreRing {
    fn descriptor(&self) -> String {
        format!(
            "Ore({};sigma={};delta={};var={})",
            self.base.id(),
            self.sigma.name(),
            self.delta.name(),
            self.var
        )
    }

    fn capabilities(&self) -> Capabilities {
        Capabilities {
            enumerable: false,
            ..self.base.capabilities()
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
        Ok(self.poly(add_lists(&self.base, coeffs(a), coeffs(b))?))
    }

    fn neg(&self, a: &Value) -> Result<Value> {
        let c = coeffs(a)
            .iter()
            .map(|x| self.base.neg(x))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.poly(c))
    }

    fn mul(&self, a: &Value, b: &Value) -> Result<Value> {
        Ok(Value::List(self.mul_lists(coeffs(a), coeffs(b))?))
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
        self.poly(c)
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

pub fn ore_of(ring: &Ring) -> Result<&OreRing> {
    ring.downcast::<OreRing>()
        .ok_or_else(|| Error::Precondition(format!("`{}` is not an Ore extension", ring.id())))
}

/// A left polynomial `Σ r_i x^i` tied to its Ore ring.
#[derive(Clone)]
pub struct OrePoly {
    ring: Ring,
    coeffs: Vec<Value>,
}

impl OrePoly {
    pub fn new(ring: &Ring, coeffs: Vec<Value>) -> Result<Self> {
        let ore = ore_of(ring)?;
        Ok(OrePoly {
            ring: ring.clone(),
            coeffs: strip(&ore.base, coeffs),
        })
    }

    pub fn from_value(ring: &Ring, v: &Value) -> Result<Self> {
        let c = v
            .as_list()
            .ok_or_else(|| Error::NotAnElement {
                ring: ring.id(),
                detail: v.kind().into(),
            })?
            .to_vec();
        Self::new(ring, c)
    }

    pub fn constant(ring: &Ring, r: Value) -> Result<Self> {
        Self::new(ring, vec![r])
    }

    /// `r·x^k`.
    pub fn monomial(ring: &Ring, r: Value, k: usize) -> Result<Self> {
        let ore = ore_of(ring)?;
        Self::from_value(ring, &ore.monomial(r, k))
    }

    pub fn x(ring: &Ring) -> Result<Self> {
        let one = ore_of(ring)?.base.one();
        Self::monomial(ring, one, 1)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn ore(&self) -> &OreRing {
        ore_of(&self.ring).expect("OrePoly over an Ore ring")
    }

    pub fn coeffs(&self) -> &[Value] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Value {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| self.ore().base.zero())
    }

    pub fn value(&self) -> Value {
        Value::List(self.coeffs.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial at level 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    fn wrap(&self, v: Value) -> OrePoly {
        OrePoly {
            ring: self.ring.clone(),
            coeffs: v.as_list().unwrap().to_vec(),
        }
    }

    pub fn add(&self, other: &OrePoly) -> Result<OrePoly> {
        self.ring.ensure_same(&other.ring)?;
        Ok(self.wrap(self.ring.add(&self.value(), &other.value())?))
    }

    pub fn sub(&self, other: &OrePoly) -> Result<OrePoly> {
        self.ring.ensure_same(&other.ring)?;
        Ok(self.wrap(self.ring.sub(&self.value(), &other.value())?))
    }

    pub fn neg(&self) -> Result<OrePoly> {
        Ok(self.wrap(self.ring.neg(&self.value())?))
    }

    pub fn mul(&self, other: &OrePoly) -> Result<OrePoly> {
        ore_mul(self, other)
    }

    pub fn eq_within(&self, other: &OrePoly, window: usize) -> bool {
        self.ring.same(&other.ring) && self.ring.equal(&self.value(), &other.value(), window)
    }
}

impl PartialEq for OrePoly {
    fn eq(&self, other: &Self) -> bool {
        self.ring.same(&other.ring) && self.coeffs == other.coeffs
    }
}

impl fmt::Debug for OrePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.ring.format(&self.value()))
    }
}

impl fmt::Display for OrePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.ring.format(&self.value()))
    }
}

/// Product in `R[x;σ,δ]`, canonical left form.
pub fn ore_mul(p: &OrePoly, q: &OrePoly) -> Result<OrePoly> {
    p.ring.ensure_same(&q.ring)?;
    let c = p.ore().mul_lists(&p.coeffs, &q.coeffs)?;
    Ok(OrePoly {
        ring: p.ring.clone(),
        coeffs: c,
    })
}

/// `x^n·r`; its degree-`n` coefficient is `σ^n(r)`.
pub fn x_power_times(ring: &Ring, r: &Value, n: usize) -> Result<OrePoly> {
    let ore = ore_of(ring)?;
    let mut cur = vec![r.clone()];
    for _ in 0..n {
        cur = ore.x_times(&cur)?;
    }
    OrePoly::new(ring, cur)
}

#[derive(Debug, Clone)]
pub struct KernelPowerCheck {
    pub in_base: bool,
    pub value: OrePoly,
}

/// For `a ∈ ker σ`, computes `x^i·a^i` and reports whether it collapses to degree 0.
pub fn kernel_sigma_power_check(ring: &Ring, a: &Value, i: usize) -> Result<KernelPowerCheck> {
    let ore = ore_of(ring)?;
    let sa = ore.sigma.apply(a)?;
    if !ore.base.is_zero(&sa, FULL) {
        return Err(Error::Precondition(format!(
            "{} is not in ker σ (σ(a) = {})",
            ore.base.format(a),
            ore.base.format(&sa)
        )));
    }
    let xi = OrePoly::monomial(ring, ore.base.one(), i)?;
    let ai = OrePoly::constant(ring, ore.base.pow(a, i)?)?;
    let value = ore_mul(&xi, &ai)?;
    Ok(KernelPowerCheck {
        in_base: value.coeffs.len() <= 1,
        value,
    })
}

/// The unique `[s_0, …, s_d]` with `p = Σ x^i·s_i`; needs σ registered as an automorphism.
pub fn right_coefficients(p: &OrePoly) -> Result<Vec<Value>> {
    let ore = p.ore();
    let inv = ore
        .sigma
        .inverse()
        .ok_or_else(|| Error::NoInverse(ore.sigma.name().to_string()))?;
    if p.is_zero() {
        return Ok(Vec::new());
    }
    let d = p.degree();
    let mut rem = p.clone();
    let mut s = vec![ore.base.zero(); d + 1];
    for k in (0..=d).rev() {
        let rk = rem.coeff(k);
        if ore.base.is_zero(&rk, FULL) {
            continue;
        }
        let sk = inv.apply_pow(&rk, k)?;
        let term = x_power_times(&p.ring, &sk, k)?;
        rem = rem.sub(&term)?;
        if rem.coeffs.len() > k {
            return Err(Error::Precondition(format!(
                "σ^{k}(σ^-{k}(r)) ≠ r for r = {}; registered inverse is wrong",
                ore.base.format(&rk)
            )));
        }
        s[k] = sk;
    }
    debug_assert!(rem.is_zero());
    Ok(s)
}

/// `Σ x^i·s_i`.
pub fn from_right_coefficients(ring: &Ring, s: &[Value]) -> Result<OrePoly> {
    let mut acc = OrePoly::new(ring, Vec::new())?;
    for (i, si) in s.iter().enumerate() {
        acc = acc.add(&x_power_times(ring, si, i)?)?;
    }
    Ok(acc)
}

/// Level of `p` in the canonical filtration `U_i = R + Rx + … + Rx^i`, i.e. its degree.
pub fn filtration_level(p: &OrePoly) -> usize {
    p.degree()
}

/// Truncation to `U_l`: keeps the terms of degree ≤ `l`.
pub fn projection_pi(p: &OrePoly, l: usize) -> OrePoly {
    let c: Vec<Value> = p.coeffs.iter().take(l + 1).cloned().collect();
    OrePoly::new(&p.ring, c).expect("same ring")
}

/// Least `l ∈ ℕ` with `l > nk/(m−n) − 1`; then `n(k+l+1) < m(l+1)`.
pub fn min_filtration_shift(n: u64, m: u64, k: u64) -> Result<u64> {
    if n == 0 || m <= n {
        return Err(Error::Precondition(format!(
            "need 0 < n < m, got n={n}, m={m}"
        )));
    }
    let l = (n as u128 * k as u128) / (m - n) as u128;
    u64::try_from(l).map_err(|_| Error::UnsupportedParameter("shift overflows u64".into()))
}

/// The canonical filtration of an Ore ring, as a checkable object.
#[derive(Debug, Clone)]
pub struct Filtration {
    ring: Ring,
}

impl Filtration {
    pub fn canonical(ring: &Ring) -> Result<Self> {
        ore_of(ring)?;
        Ok(Filtration { ring: ring.clone() })
    }

    pub fn level(&self, p: &OrePoly) -> usize {
        filtration_level(p)
    }

    pub fn contains(&self, i: usize, p: &OrePoly) -> bool {
        p.is_zero() || p.degree() <= i
    }

    /// Samples pairs and checks the filtration conditions: additive subgroups, nested,
    /// `U_iU_j ⊆ U_{i+j}`, exhaustive, `1 ∈ U_0`.
    pub fn check_axioms(&self, seed: u64, count: usize) -> Report {
        let mut rng = seeded_rng(seed);
        let pairs: Vec<(OrePoly, OrePoly)> = (0..count.max(1))
            .map(|_| {
                let a = self.ring.sample(&mut rng);
                let b = self.ring.sample(&mut rng);
                (
                    OrePoly::from_value(&self.ring, &a).unwrap(),
                    OrePoly::from_value(&self.ring, &b).unwrap(),
                )
            })
            .collect();
        let mut report = Report::new("filtration", seed)
            .param("ring", self.ring.id())
            .param("count", pairs.len());
        let find = |f: &dyn Fn(&OrePoly, &OrePoly) -> Result<bool>| {
            pairs.iter().find_map(|(p, q)| match f(p, q) {
                Ok(true) => None,
                Ok(false) => Some(format!("({p}, {q})")),
                Err(e) => Some(format!("({p}, {q}): {e}")),
            })
        };
        let checks: [(&str, Option<String>); 5] = [
            (
                "additive subgroup",
                find(&|p, q| {
                    let i = self.level(p).max(self.level(q));
                    Ok(self.contains(i, &p.add(q)?) && self.contains(self.level(p), &p.neg()?))
                }),
            ),
            (
                "nested",
                find(&|p, _| Ok(self.contains(self.level(p) + 1, p))),
            ),
            (
                "U_i U_j in U_(i+j)",
                find(&|p, q| Ok(self.contains(self.level(p) + self.level(q), &ore_mul(p, q)?))),
            ),
            (
                "exhaustive",
                find(&|p, _| Ok(self.contains(self.level(p), p))),
            ),
            ("1 in U_0", {
                let one = OrePoly::from_value(&self.ring, &self.ring.one()).unwrap();
                (!self.contains(0, &one)).then(|| "1".to_string())
            }),
        ];
        for (name, failure) in checks {
            let mut c = Check::new(name, failure.is_none());
            if let Some(w) = failure {
                c = c.with_witness(w);
            }
            report.push(c);
        }
        report
    }
}

/// `W_n(R)` with the generator names of every level, innermost first.
#[derive(Debug, Clone)]
pub struct Weyl {
    pub ring: Ring,
    pub coefficients: Ring,
    pub levels: Vec<(String, String)>,
}

impl Weyl {
    /// Lifts an element of the coefficient ring into `W_n(R)`.
    pub fn embed(&self, r: &Value) -> Value {
        if self.coefficients.is_zero(r, FULL) {
            return self.ring.zero();
        }
        let mut v = r.clone();
        for _ in 0..2 * self.levels.len() {
            v = Value::List(vec![v]);
        }
        v
    }

    pub fn generator(&self, name: &str) -> Option<Value> {
        self.ring
            .generators()
            .into_iter()
            .find_map(|(n, v)| (n == name).then_some(v))
    }
}

/// `W_1(R) = R[y][x; id, d/dy]`.
pub fn weyl_ring(base: &Ring) -> Result<Ring> {
    Ok(weyl_ring_n(base, 1)?.ring)
}

/// `W_n(R) = W_1(W_{n−1}(R))` for `1 ≤ n ≤ 3`.
pub fn weyl_ring_n(base: &Ring, n: usize) -> Result<Weyl> {
    if !(1..=3).contains(&n) {
        return Err(Error::UnsupportedParameter(format!(
            "Weyl rings are supported for 1 ≤ n ≤ 3, got {n}"
        )));
    }
    let mut ring = base.clone();
    let mut levels = Vec::new();
    for i in 1..=n {
        let (xv, yv) = if n == 1 {
            ("x".to_string(), "y".to_string())
        } else {
            (format!("x{i}"), format!("y{i}"))
        };
        let poly = Ring::new(PolyRing::new(ring, yv.clone()));
        let delta = builtin_morphisms("d_dy", &poly)?.into_derivation()?;
        let sigma = delta.sigma().clone();
        ring = OreRing::with_config(sigma, delta, &xv, LawCheckConfig::default())?;
        levels.push((xv, yv));
    }
    Ok(Weyl {
        ring,
        coefficients: base.clone(),
        levels,
    })
}

/// Checks `xy − yx = 1` at every level, that generators of different levels commute, and
/// that sampled coefficients are central.
pub fn weyl_relation_check(w: &Weyl, seed: u64, count: usize) -> Report {
    let r = &w.ring;
    let mut report = Report::new("weyl", seed)
        .param("ring", r.id())
        .param("levels", w.levels.len())
        .param("count", count);
    let comm = |a: &Value, b: &Value| -> Result<Value> { r.sub(&r.mul(a, b)?, &r.mul(b, a)?) };
    let gens: Vec<(String, Value)> = w
        .levels
        .iter()
        .flat_map(|(x, y)| [x.clone(), y.clone()])
        .map(|n| {
            let v = w.generator(&n).expect("level generator");
            (n, v)
        })
        .collect();
    for (x, y) in &w.levels {
        let xv = w.generator(x).unwrap();
        let yv = w.generator(y).unwrap();
        let ok = comm(&xv, &yv).map(|c| r.equal(&c, &r.one(), FULL));
        let mut c = Check::new(format!("{x}*{y} - {y}*{x} = 1"), ok == Ok(true));
        if ok != Ok(true) {
            c = c.with_witness(format!("{ok:?}"));
        }
        report.push(c);
    }
    for (i, (ni, gi)) in gens.iter().enumerate() {
        for (nj, gj) in gens.iter().skip(i + 1) {
            let same_level = w
                .levels
                .iter()
                .any(|(x, y)| (x == ni && y == nj) || (y == ni && x == nj));
            if same_level {
                continue;
            }
            let ok = comm(gi, gj).map(|c| r.is_zero(&c, FULL));
            report.push(Check::new(format!("{ni} commutes with {nj}"), ok == Ok(true)));
        }
    }
    let mut rng = seeded_rng(seed);
    let central = (0..count.max(1)).find_map(|_| {
        let c = w.coefficients.sample(&mut rng);
        let cv = w.embed(&c);
        gens.iter().find_map(|(n, g)| match comm(&cv, g) {
            Ok(z) if r.is_zero(&z, FULL) => None,
            _ => Some(format!("{} vs {n}", w.coefficients.format(&c))),
        })
    });
    let mut c = Check::new("coefficients central", central.is_none());
    if let Some(wit) = central {
        c = c.with_witness(wit);
    }
    report.push(c);
    report
}
