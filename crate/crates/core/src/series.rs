//! Truncated skew power series `R[[x;σ]]` with precision `N`.
//!
//! An element is `Σ_{i<N} r_i x^i` with left coefficients and `x·r = σ(r)·x`, so
//! `(a_i x^i)(b_j x^j) = a_i σ^i(b_j) x^{i+j}`. Every element carries exactly `N` coefficients.

use std::any::Any;
use std::fmt;

use num_bigint::BigInt;
use rand::RngCore;

use crate::error::{Error, Result};
use crate::morphism::{entrywise_lift, EndoMap};
use crate::report::{Check, Report};
use crate::ring::{
    format_ascending, Capabilities, MatrixRing, Ring, RingImpl, DEFAULT_WINDOW, FULL,
};
use crate::value::Value;

#[derive(Debug, Clone)]
pub struct SkewSeriesRing {
    base: Ring,
    sigma: EndoMap,
    prec: usize,
}

impl SkewSeriesRing {
    pub fn new(sigma: EndoMap, prec: usize) -> Result<Ring> {
        if prec == 0 {
            return Err(Error::UnsupportedParameter("series precision must be ≥ 1".into()));
        }
        Ok(Ring::new(SkewSeriesRing {
            base: sigma.domain().clone(),
            sigma,
            prec,
        }))
    }

    pub fn base(&self) -> &Ring {
        &self.base
    }

    pub fn sigma(&self) -> &EndoMap {
        &self.sigma
    }

    pub fn precision(&self) -> usize {
        self.prec
    }

    /// Pads or truncates to exactly `N` coefficients.
    pub fn series(&self, mut c: Vec<Value>) -> Value {
        c.truncate(self.prec);
        c.resize(self.prec, self.base.zero());
        Value::List(c)
    }

    fn mul_lists(&self, a: &[Value], b: &[Value]) -> Result<Vec<Value>> {
        let n = self.prec;
        let mut out = vec![self.base.zero(); n];
        for (j, bj) in b.iter().enumerate().take(n) {
            if self.base.is_zero(bj, FULL) {
                continue;
            }
            // σ^i(b_j) for i = 0, 1, … while i + j < N
            let mut s = bj.clone();
            for i in 0..n - j {
                if i > 0 {
                    s = self.sigma.apply(&s)?;
                }
                if !self.base.is_zero(&a[i], FULL) {
                    let t = self.base.mul(&a[i], &s)?;
                    out[i + j] = self.base.add(&out[i + j], &t)?;
                }
            }
        }
        Ok(out)
    }
}

fn list(v: &Value) -> &[Value] {
    v.as_list().expect("series payload")
}

impl RingImpl for SkewSeriesRing {
    fn descriptor(&self) -> String {
        format!(
            "Series({};sigma={};prec={})",
            self.base.id(),
            self.sigma.name(),
            self.prec
        )
    }

    fn capabilities(&self) -> Capabilities {
        self.base.capabilities()
    }

    fn cardinality(&self) -> Option<num_bigint::BigUint> {
        self.base.cardinality().map(|c| c.pow(self.prec as u32))
    }

    fn elements(&self) -> Option<Vec<Value>> {
        let base = self.base.elements()?;
        let mut out: Vec<Vec<Value>> = vec![Vec::new()];
        for _ in 0..self.prec {
            out = out
                .into_iter()
                .flat_map(|p| {
                    base.iter().map(move |b| {
                        let mut p = p.clone();
                        p.push(b.clone());
                        p
                    })
                })
                .collect();
        }
        Some(out.into_iter().map(Value::List).collect())
    }

    fn zero(&self) -> Value {
        self.series(Vec::new())
    }

    fn one(&self) -> Value {
        self.series(vec![self.base.one()])
    }

    fn from_int(&self, n: &BigInt) -> Value {
        self.series(vec![self.base.from_int(n)])
    }

    fn add(&self, a: &Value, b: &Value) -> Result<Value> {
        let c = list(a)
            .iter()
            .zip(list(b))
            .map(|(x, y)| self.base.add(x, y))
            .collect::<Result<Vec<_>>>()?;
        Ok(Value::List(c))
    }

    fn neg(&self, a: &Value) -> Result<Value> {
        let c = list(a)
            .iter()
            .map(|x| self.base.neg(x))
            .collect::<Result<Vec<_>>>()?;
        Ok(Value::List(c))
    }

    fn mul(&self, a: &Value, b: &Value) -> Result<Value> {
        Ok(Value::List(self.mul_lists(list(a), list(b))?))
    }

    fn equal(&self, a: &Value, b: &Value, window: usize) -> bool {
        list(a)
            .iter()
            .zip(list(b))
            .all(|(x, y)| self.base.equal(x, y, window))
    }

    fn sample(&self, rng: &mut dyn RngCore) -> Value {
        Value::List((0..self.prec).map(|_| self.base.sample(rng)).collect())
    }

    fn contains(&self, v: &Value) -> bool {
        matches!(v, Value::List(c) if c.len() == self.prec && c.iter().all(|x| self.base.contains(x)))
    }

    fn format(&self, a: &Value) -> String {
        let body = format_ascending(&self.base, list(a), "x", FULL);
        format!("{body} + O(x^{})", self.prec)
    }

    fn generators(&self) -> Vec<(String, Value)> {
        let mut g = Vec::new();
        if self.prec > 1 {
            g.push(("x".to_string(), self.series(vec![self.base.zero(), self.base.one()])));
        }
        g.extend(
            self.base
                .generators()
                .into_iter()
                .map(|(n, v)| (n, self.series(vec![v]))),
        );
        g
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}

pub fn series_ring_of(ring: &Ring) -> Result<&SkewSeriesRing> {
    ring.downcast::<SkewSeriesRing>()
        .ok_or_else(|| Error::Precondition(format!("`{}` is not a skew series ring", ring.id())))
}

/// A truncated series tied to its ring.
#[derive(Clone)]
pub struct SkewSeries {
    ring: Ring,
    coeffs: Vec<Value>,
}

impl SkewSeries {
    pub fn new(ring: &Ring, coeffs: Vec<Value>) -> Result<Self> {
        let s = series_ring_of(ring)?;
        if coeffs.len() > s.prec {
            return Err(Error::PrecisionMismatch {
                left: coeffs.len(),
                right: s.prec,
            });
        }
        for c in &coeffs {
            if !s.base.contains(c) {
                return Err(Error::NotAnElement {
                    ring: s.base.id(),
                    detail: format!("{c:?}"),
                });
            }
        }
        Ok(SkewSeries {
            ring: ring.clone(),
            coeffs: list(&s.series(coeffs)).to_vec(),
        })
    }

    pub fn from_value(ring: &Ring, v: &Value) -> Result<Self> {
        let c = v.as_list().ok_or_else(|| Error::NotAnElement {
            ring: ring.id(),
            detail: v.kind().into(),
        })?;
        Self::new(ring, c.to_vec())
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn series_ring(&self) -> &SkewSeriesRing {
        series_ring_of(&self.ring).expect("series ring")
    }

    pub fn coeffs(&self) -> &[Value] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &Value {
        &self.coeffs[i]
    }

    pub fn precision(&self) -> usize {
        self.coeffs.len()
    }

    pub fn value(&self) -> Value {
        Value::List(self.coeffs.clone())
    }

    pub fn mul(&self, other: &SkewSeries) -> Result<SkewSeries> {
        series_mul(self, other)
    }

    pub fn add(&self, other: &SkewSeries) -> Result<SkewSeries> {
        compatible(self, other)?;
        Self::from_value(&self.ring, &self.ring.add(&self.value(), &other.value())?)
    }

    pub fn eq_within(&self, other: &SkewSeries, window: usize) -> bool {
        self.ring.same(&other.ring) && self.ring.equal(&self.value(), &other.value(), window)
    }

    pub fn is_one(&self) -> bool {
        self.ring.equal(&self.value(), &self.ring.one(), DEFAULT_WINDOW)
    }
}

impl fmt::Debug for SkewSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.ring.format(&self.value()))
    }
}

impl fmt::Display for SkewSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.ring.format(&self.value()))
    }
}

impl PartialEq for SkewSeries {
    fn eq(&self, other: &Self) -> bool {
        self.ring.same(&other.ring) && self.coeffs == other.coeffs
    }
}

fn compatible(p: &SkewSeries, q: &SkewSeries) -> Result<()> {
    if p.ring.same(&q.ring) {
        return Ok(());
    }
    let (a, b) = (p.series_ring(), q.series_ring());
    if a.base.same(&b.base) && a.sigma.name() == b.sigma.name() && a.prec != b.prec {
        return Err(Error::PrecisionMismatch {
            left: a.prec,
            right: b.prec,
        });
    }
    p.ring.ensure_same(&q.ring)
}

/// Product in `R[[x;σ]]` truncated at `x^N`.
pub fn series_mul(p: &SkewSeries, q: &SkewSeries) -> Result<SkewSeries> {
    compatible(p, q)?;
    let c = p.series_ring().mul_lists(&p.coeffs, &q.coeffs)?;
    Ok(SkewSeries {
        ring: p.ring.clone(),
        coeffs: c,
    })
}

/// How coefficient `k` of an idempotent with constant term 1 is pinned down.
#[derive(Debug, Clone, PartialEq)]
pub struct ForcingStep {
    pub k: usize,
    /// `Σ_{i,j≥1, i+j=k} e_i σ^i(e_j)`, built from already-forced coefficients.
    pub cross_term: Value,
    /// The unique solution of `e_k = 2e_k + cross_term`.
    pub forced: Value,
}

#[derive(Debug, Clone)]
pub struct IdempotentSolve {
    pub series: SkewSeries,
    pub steps: Vec<ForcingStep>,
}

impl IdempotentSolve {
    pub fn is_one(&self) -> bool {
        self.series.is_one()
    }
}

/// Solves `e² = e`, `e_0 = 1` coefficient by coefficient. Coefficient `k` of `e²` is
/// `2e_k + C_k` with `C_k` built from `e_1 … e_{k−1}`, so `e_k = −C_k` is forced.
pub fn idempotent_constant_one_solve(ring: &Ring) -> Result<IdempotentSolve> {
    let s = series_ring_of(ring)?;
    let base = &s.base;
    let mut e = vec![base.one()];
    let mut steps = Vec::new();
    for k in 1..s.prec {
        let mut cross = base.zero();
        for i in 1..k {
            let t = base.mul(&e[i], &s.sigma.apply_pow(&e[k - i], i)?)?;
            cross = base.add(&cross, &t)?;
        }
        let forced = base.neg(&cross)?;
        e.push(forced.clone());
        steps.push(ForcingStep {
            k,
            cross_term: cross,
            forced,
        });
    }
    Ok(IdempotentSolve {
        series: SkewSeries::new(ring, e)?,
        steps,
    })
}

/// Every idempotent with constant term 1, by enumerating all tails over a finite base.
pub fn idempotents_constant_one_brute(ring: &Ring, budget: u64) -> Result<Vec<SkewSeries>> {
    let s = series_ring_of(ring)?;
    let elems = s.base.enumerate(budget)?;
    let tails = (elems.len() as u128).saturating_pow(s.prec as u32 - 1);
    if tails > budget as u128 {
        return Err(Error::BudgetExceeded {
            budget,
            needed: tails.to_string(),
        });
    }
    let mut out = Vec::new();
    let mut idx = vec![0usize; s.prec - 1];
    loop {
        let mut c = vec![s.base.one()];
        c.extend(idx.iter().map(|&i| elems[i].clone()));
        let e = Value::List(c);
        if ring.equal(&ring.mul(&e, &e)?, &e, FULL) {
            out.push(SkewSeries::from_value(ring, &e)?);
        }
        // odometer
        let mut pos = 0;
        loop {
            if pos == idx.len() {
                return Ok(out);
            }
            idx[pos] += 1;
            if idx[pos] < elems.len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// The right inverse of `p` with `p_0 = 1`: `q_0 = 1`, `q_k = −Σ_{i≥1} p_i σ^i(q_{k−i})`.
pub fn right_inverse(p: &SkewSeries) -> Result<SkewSeries> {
    let s = p.series_ring();
    let base = &s.base;
    if !base.equal(&p.coeffs[0], &base.one(), FULL) {
        return Err(Error::Precondition(format!(
            "constant term is {}, not 1",
            base.format(&p.coeffs[0])
        )));
    }
    let mut q = vec![base.one()];
    for k in 1..s.prec {
        let mut acc = base.zero();
        for i in 1..=k {
            let t = base.mul(&p.coeffs[i], &s.sigma.apply_pow(&q[k - i], i)?)?;
            acc = base.add(&acc, &t)?;
        }
        q.push(base.neg(&acc)?);
    }
    SkewSeries::new(&p.ring, q)
}

/// How the direct finiteness of the coefficient ring is established.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaseFiniteness {
    /// Exhaustive check over the enumerable base.
    BruteForce { budget: u64 },
    /// Known from the construction, e.g. products of fields.
    Asserted,
}

/// Given `pq ≡ 1`, checks that `e = qp` is idempotent with `e_0 = 1` and, when the base is
/// directly finite, that `qp ≡ 1`.
pub fn direct_finiteness_instance(
    p: &SkewSeries,
    q: &SkewSeries,
    base_finiteness: BaseFiniteness,
) -> Result<Report> {
    compatible(p, q)?;
    let ring = &p.ring;
    let s = p.series_ring();
    let w = DEFAULT_WINDOW;
    let pq = series_mul(p, q)?;
    if !pq.is_one() {
        return Err(Error::Precondition(format!("pq = {pq} is not 1")));
    }
    let e = series_mul(q, p)?;
    let e2 = series_mul(&e, &e)?;
    let windowed = s.base.capabilities().windowed_equality;
    let tag = |c: Check| {
        let c = c.with_precision(s.prec);
        if windowed {
            c.with_window(w)
        } else {
            c
        }
    };
    let mut report = Report::new("direct_finiteness_instance", 0)
        .param("ring", ring.id())
        .param("p", p.to_string())
        .param("q", q.to_string())
        .param("qp", e.to_string());
    report.push(tag(Check::new("qp idempotent", e2.eq_within(&e, w))));
    let c0 = s.base.mul(&q.coeffs[0], &p.coeffs[0])?;
    report.push(tag(Check::new(
        "constant term of qp is q0*p0",
        s.base.equal(&e.coeffs[0], &c0, w),
    )));
    let base_df = match base_finiteness {
        BaseFiniteness::Asserted => true,
        BaseFiniteness::BruteForce { budget } => {
            crate::finiteness::directly_finite_brute(&s.base, budget)?.holds()
        }
    };
    report.set_param("base_directly_finite", base_df);
    report.push(tag(Check::new(
        "constant term of qp is 1",
        s.base.equal(&e.coeffs[0], &s.base.one(), w),
    )));
    if base_df {
        report.push(tag(Check::new("qp = 1", e.is_one())));
    }
    Ok(report)
}

/// The ring `M_n(R)[[x;σ*]]` matching `M_n(R[[x;σ]])` at the same precision.
pub fn matrix_series_target(series: &Ring, n: usize) -> Result<Ring> {
    let s = series_ring_of(series)?;
    let m = Ring::new(MatrixRing::new(s.base.clone(), n));
    let lifted = entrywise_lift(&m, &s.sigma)?;
    SkewSeriesRing::new(lifted, s.prec)
}

/// `M_n(R[[x;σ]]) → M_n(R)[[x;σ*]]`: coefficient `k` of the image is the matrix of the
/// entries' coefficients `k`.
pub fn matrix_series_iso(a: &[Vec<SkewSeries>]) -> Result<SkewSeries> {
    let n = a.len();
    if n == 0 || a.iter().any(|row| row.len() != n) {
        return Err(Error::Dimension("expected a non-empty square matrix".into()));
    }
    let ring = a[0][0].ring.clone();
    for x in a.iter().flatten() {
        compatible(&a[0][0], x)?;
    }
    let target = matrix_series_target(&ring, n)?;
    let prec = series_ring_of(&ring)?.prec;
    let coeffs = (0..prec)
        .map(|k| {
            let mut entries = Vec::with_capacity(n * n);
            for row in a {
                for x in row {
                    entries.push(x.coeffs[k].clone());
                }
            }
            Value::List(entries)
        })
        .collect();
    SkewSeries::new(&target, coeffs)
}

/// Inverse of [`matrix_series_iso`], landing in series over `series`.
pub fn matrix_series_iso_inverse(b: &SkewSeries, series: &Ring) -> Result<Vec<Vec<SkewSeries>>> {
    let s = b.series_ring();
    let m = s
        .base
        .downcast::<MatrixRing>()
        .ok_or_else(|| Error::Precondition("coefficients are not matrices".into()))?;
    let n = m.size();
    let expected = matrix_series_target(series, n)?;
    b.ring.ensure_same(&expected)?;
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let c = b
                        .coeffs
                        .iter()
                        .map(|mk| m.entry(mk, i, j).clone())
                        .collect();
                    SkewSeries::new(series, c)
                })
                .collect()
        })
        .collect()
}

/// Matrix over a series ring as a value of `M_n(R[[x;σ]])`.
pub fn series_matrix_value(a: &[Vec<SkewSeries>]) -> Value {
    Value::List(a.iter().flatten().map(SkewSeries::value).collect())
}

pub fn series_matrix_from_value(
    series: &Ring,
    n: usize,
    v: &Value,
) -> Result<Vec<Vec<SkewSeries>>> {
    let items = v.as_list().ok_or_else(|| Error::Dimension("expected a matrix".into()))?;
    if items.len() != n * n {
        return Err(Error::Dimension(format!("expected {} entries", n * n)));
    }
    items
        .chunks(n)
        .map(|row| row.iter().map(|x| SkewSeries::from_value(series, x)).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::morphism::builtin_morphisms;
    use crate::ring::{make_ring, seeded_rng};

    fn ring(spec: &str, sigma: &str, prec: usize) -> Ring {
        let base = make_ring(spec).unwrap();
        let s = builtin_morphisms(sigma, &base).unwrap().into_endo().unwrap();
        SkewSeriesRing::new(s, prec).unwrap()
    }

    fn ints(r: &Ring, c: &[i64]) -> SkewSeries {
        SkewSeries::new(r, c.iter().map(|&x| Value::int(x)).collect()).unwrap()
    }

    #[test]
    fn commutative_case_matches_polynomial_product() {
        let r = ring("Z/5", "id", 4);
        let p = ints(&r, &[1, 2, 0, 1]);
        let q = ints(&r, &[3, 0, 4, 0]);
        assert_eq!(series_mul(&p, &q).unwrap(), ints(&r, &[3, 1, 4, 1]));
    }

    #[test]
    fn idempotent_over_z4_is_one() {
        let r = ring("Z/4", "id", 6);
        let sol = idempotent_constant_one_solve(&r).unwrap();
        assert!(sol.is_one());
        assert!(sol.steps.iter().all(|s| s.forced == Value::int(0)));
        let all = idempotents_constant_one_brute(&ring("Z/4", "id", 3), 1000).unwrap();
        assert_eq!(all.len(), 1);
    }

    #[test]
    fn right_inverse_examples() {
        let r = ring("Z/5", "id", 5);
        let p = ints(&r, &[1, 4, 0, 0, 0]);
        let q = right_inverse(&p).unwrap();
        assert_eq!(q, ints(&r, &[1, 1, 1, 1, 1]));
        let r = ring("P(Z/2)", "shift", 4);
        let mut rng = seeded_rng(4);
        for _ in 0..20 {
            let mut v = r.sample(&mut rng).as_list().unwrap().to_vec();
            v[0] = series_ring_of(&r).unwrap().base().one();
            let p = SkewSeries::new(&r, v).unwrap();
            let q = right_inverse(&p).unwrap();
            assert!(series_mul(&p, &q).unwrap().is_one());
        }
    }

    #[test]
    fn right_inverse_needs_unit_constant() {
        let r = ring("Z/5", "id", 3);
        assert!(matches!(right_inverse(&ints(&r, &[2, 1])), Err(Error::Precondition(_))));
    }

    #[test]
    fn precision_mismatch() {
        let a = ints(&ring("Z/5", "id", 3), &[1]);
        let b = ints(&ring("Z/5", "id", 4), &[1]);
        assert!(matches!(series_mul(&a, &b), Err(Error::PrecisionMismatch { .. })));
        let c = ints(&ring("Z/4", "id", 3), &[1]);
        assert!(matches!(series_mul(&a, &c), Err(Error::RingMismatch { .. })));
    }

    #[test]
    fn direct_finiteness_over_z4() {
        let r = ring("Z/4", "id", 5);
        let p = ints(&r, &[1, 3, 2]);
        let q = right_inverse(&p).unwrap();
        let rep =
            direct_finiteness_instance(&p, &q, BaseFiniteness::BruteForce { budget: 1000 })
                .unwrap();
        assert!(rep.passed(), "{rep}");
        assert!(rep.check("qp = 1").is_some());
    }

    #[test]
    fn matrix_iso_roundtrip_and_multiplicative() {
        let r = ring("Z/3", "id", 4);
        let mut rng = seeded_rng(9);
        let sample = |rng: &mut rand_chacha::ChaCha8Rng| -> Vec<Vec<SkewSeries>> {
            (0..2)
                .map(|_| {
                    (0..2)
                        .map(|_| SkewSeries::from_value(&r, &r.sample(rng)).unwrap())
                        .collect()
                })
                .collect()
        };
        let m2 = Ring::new(MatrixRing::new(r.clone(), 2));
        for _ in 0..10 {
            let a = sample(&mut rng);
            let b = sample(&mut rng);
            let ia = matrix_series_iso(&a).unwrap();
            assert_eq!(matrix_series_iso_inverse(&ia, &r).unwrap(), a);
            let ab = m2.mul(&series_matrix_value(&a), &series_matrix_value(&b)).unwrap();
            let ab = series_matrix_from_value(&r, 2, &ab).unwrap();
            let lhs = matrix_series_iso(&ab).unwrap();
            let rhs = series_mul(&ia, &matrix_series_iso(&b).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
        }
    }
}
