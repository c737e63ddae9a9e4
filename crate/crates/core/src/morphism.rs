//! Ring endomorphisms and σ-derivations as first-class values, their law checks, and the
//! catalog of named maps.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::free::FreeRing;
use crate::lazy::UMatRing;
use crate::report::{Check, Report};
use crate::ring::poly::coeffs;
use crate::ring::sequence::seq_of;
use crate::ring::{
    seeded_rng, LaurentRing, MatrixRing, PolyRing, Ring, SequenceRing, DEFAULT_WINDOW,
};
use crate::value::Value;

pub type Rule = Arc<dyn Fn(&Value) -> Result<Value> + Send + Sync>;

/// A ring endomorphism `σ: R → R` given by its rule.
#[derive(Clone)]
pub struct EndoMap {
    name: String,
    domain: Ring,
    rule: Rule,
    pub injective_claimed: bool,
    pub surjective_claimed: bool,
    inverse: Option<Arc<EndoMap>>,
}

impl EndoMap {
    pub fn new(
        name: impl Into<String>,
        domain: Ring,
        rule: impl Fn(&Value) -> Result<Value> + Send + Sync + 'static,
    ) -> Self {
        EndoMap {
            name: name.into(),
            domain,
            rule: Arc::new(rule),
            injective_claimed: false,
            surjective_claimed: false,
            inverse: None,
        }
    }

    pub fn identity(domain: Ring) -> Self {
        let id = EndoMap::new("id", domain, |v| Ok(v.clone())).claims(true, true);
        let inv = id.clone();
        id.with_inverse(inv)
    }

    pub fn claims(mut self, injective: bool, surjective: bool) -> Self {
        self.injective_claimed = injective;
        self.surjective_claimed = surjective;
        self
    }

    /// Registers `inverse` as the two-sided inverse, which makes this an automorphism.
    pub fn with_inverse(mut self, inverse: EndoMap) -> Self {
        self.injective_claimed = true;
        self.surjective_claimed = true;
        self.inverse = Some(Arc::new(inverse));
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain(&self) -> &Ring {
        &self.domain
    }

    pub fn inverse(&self) -> Option<&EndoMap> {
        self.inverse.as_deref()
    }

    pub fn is_identity(&self) -> bool {
        self.name == "id"
    }

    pub fn apply(&self, v: &Value) -> Result<Value> {
        (self.rule)(v)
    }

    /// `σ^n(v)`.
    pub fn apply_pow(&self, v: &Value, n: usize) -> Result<Value> {
        if self.is_identity() {
            return Ok(v.clone());
        }
        (0..n).try_fold(v.clone(), |acc, _| self.apply(&acc))
    }
}

impl fmt::Debug for EndoMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "EndoMap({} on {})", self.name, self.domain.id())
    }
}

/// An additive map `δ` with `δ(rs) = δ(r)s + σ(r)δ(s)`.
#[derive(Clone)]
pub struct SigmaDerivation {
    name: String,
    sigma: EndoMap,
    rule: Rule,
    zero: bool,
}

impl SigmaDerivation {
    pub fn new(
        name: impl Into<String>,
        sigma: EndoMap,
        rule: impl Fn(&Value) -> Result<Value> + Send + Sync + 'static,
    ) -> Self {
        SigmaDerivation {
            name: name.into(),
            sigma,
            rule: Arc::new(rule),
            zero: false,
        }
    }

    /// `δ = 0`, giving the skew polynomial ring `R[x;σ]`.
    pub fn zero(sigma: EndoMap) -> Self {
        let z = sigma.domain().zero();
        SigmaDerivation {
            name: "zero".into(),
            sigma,
            rule: Arc::new(move |_| Ok(z.clone())),
            zero: true,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain(&self) -> &Ring {
        self.sigma.domain()
    }

    pub fn sigma(&self) -> &EndoMap {
        &self.sigma
    }

    pub fn is_zero_map(&self) -> bool {
        self.zero
    }

    pub fn apply(&self, v: &Value) -> Result<Value> {
        (self.rule)(v)
    }
}

impl fmt::Debug for SigmaDerivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "SigmaDerivation({} over σ={} on {})",
            self.name,
            self.sigma.name(),
            self.domain().id()
        )
    }
}

fn first_failure<T>(
    samples: &[T],
    mut holds: impl FnMut(&T) -> Result<bool>,
    show: impl Fn(&T) -> String,
) -> Option<String> {
    samples.iter().find_map(|s| match holds(s) {
        Ok(true) => None,
        Ok(false) => Some(show(s)),
        Err(e) => Some(format!("{} (error: {e})", show(s))),
    })
}

fn push_law(report: &mut Report, name: &str, failure: Option<String>, windowed: bool) {
    let mut c = Check::new(name, failure.is_none());
    if windowed {
        c = c.with_window(DEFAULT_WINDOW);
    }
    if let Some(w) = failure {
        c = c.with_witness(w);
    }
    report.push(c);
}

fn sample_pairs(ring: &Ring, seed: u64, count: usize) -> Vec<(Value, Value)> {
    let mut rng = seeded_rng(seed);
    (0..count.max(1))
        .map(|_| (ring.sample(&mut rng), ring.sample(&mut rng)))
        .collect()
}

/// Checks `σ(a+b)=σ(a)+σ(b)`, `σ(ab)=σ(a)σ(b)`, `σ(0)=0`, `σ(1)=1` on sampled pairs, plus
/// both inverse identities when an inverse is registered.
pub fn check_endomorphism(sigma: &EndoMap, seed: u64, count: usize) -> Report {
    let r = sigma.domain();
    let w = DEFAULT_WINDOW;
    let windowed = r.capabilities().windowed_equality;
    let pairs = sample_pairs(r, seed, count);
    let show = |(a, b): &(Value, Value)| format!("({}, {})", r.format(a), r.format(b));
    let mut report = Report::new("endomorphism", seed)
        .param("map", sigma.name())
        .param("ring", r.id())
        .param("count", pairs.len());

    let additive = first_failure(
        &pairs,
        |(a, b)| {
            let lhs = sigma.apply(&r.add(a, b)?)?;
            let rhs = r.add(&sigma.apply(a)?, &sigma.apply(b)?)?;
            Ok(r.equal(&lhs, &rhs, w))
        },
        show,
    );
    push_law(&mut report, "additive", additive, windowed);

    let multiplicative = first_failure(
        &pairs,
        |(a, b)| {
            let lhs = sigma.apply(&r.mul(a, b)?)?;
            let rhs = r.mul(&sigma.apply(a)?, &sigma.apply(b)?)?;
            Ok(r.equal(&lhs, &rhs, w))
        },
        show,
    );
    push_law(&mut report, "multiplicative", multiplicative, windowed);

    let unit = match sigma.apply(&r.one()) {
        Ok(v) if r.equal(&v, &r.one(), w) => None,
        Ok(v) => Some(format!("σ(1) = {}", r.format(&v))),
        Err(e) => Some(format!("error: {e}")),
    };
    push_law(&mut report, "preserves 1", unit, windowed);

    let zero = match sigma.apply(&r.zero()) {
        Ok(v) if r.is_zero(&v, w) => None,
        Ok(v) => Some(format!("σ(0) = {}", r.format(&v))),
        Err(e) => Some(format!("error: {e}")),
    };
    push_law(&mut report, "preserves 0", zero, windowed);

    if let Some(inv) = sigma.inverse() {
        let singles: Vec<Value> = pairs.iter().map(|(a, _)| a.clone()).collect();
        let show1 = |a: &Value| r.format(a);
        let left = first_failure(
            &singles,
            |a| Ok(r.equal(&inv.apply(&sigma.apply(a)?)?, a, w)),
            show1,
        );
        push_law(&mut report, "inverse after map", left, windowed);
        let right = first_failure(
            &singles,
            |a| Ok(r.equal(&sigma.apply(&inv.apply(a)?)?, a, w)),
            show1,
        );
        push_law(&mut report, "map after inverse", right, windowed);
    }
    report
}

/// Checks additivity and the twisted Leibniz law on sampled pairs.
pub fn check_sigma_derivation(delta: &SigmaDerivation, seed: u64, count: usize) -> Report {
    let r = delta.domain();
    let sigma = delta.sigma();
    let w = DEFAULT_WINDOW;
    let windowed = r.capabilities().windowed_equality;
    let pairs = sample_pairs(r, seed, count);
    let show = |(a, b): &(Value, Value)| format!("({}, {})", r.format(a), r.format(b));
    let mut report = Report::new("sigma_derivation", seed)
        .param("map", delta.name())
        .param("sigma", sigma.name())
        .param("ring", r.id())
        .param("count", pairs.len());

    let additive = first_failure(
        &pairs,
        |(a, b)| {
            let lhs = delta.apply(&r.add(a, b)?)?;
            let rhs = r.add(&delta.apply(a)?, &delta.apply(b)?)?;
            Ok(r.equal(&lhs, &rhs, w))
        },
        show,
    );
    push_law(&mut report, "additive", additive, windowed);

    let leibniz = first_failure(
        &pairs,
        |(a, b)| {
            let lhs = delta.apply(&r.mul(a, b)?)?;
            let rhs = r.add(
                &r.mul(&delta.apply(a)?, b)?,
                &r.mul(&sigma.apply(a)?, &delta.apply(b)?)?,
            )?;
            Ok(r.equal(&lhs, &rhs, w))
        },
        show,
    );
    push_law(&mut report, "leibniz", leibniz, windowed);
    report
}

/// A catalog entry.
#[derive(Clone, Debug)]
pub enum Morphism {
    Endo(EndoMap),
    Derivation(SigmaDerivation),
}

impl Morphism {
    pub fn into_endo(self) -> Result<EndoMap> {
        match self {
            Morphism::Endo(e) => Ok(e),
            Morphism::Derivation(d) => Err(Error::Precondition(format!(
                "`{}` is a derivation, not an endomorphism",
                d.name()
            ))),
        }
    }

    pub fn into_derivation(self) -> Result<SigmaDerivation> {
        match self {
            Morphism::Derivation(d) => Ok(d),
            Morphism::Endo(e) => Err(Error::Precondition(format!(
                "`{}` is an endomorphism, not a derivation",
                e.name()
            ))),
        }
    }

    /// Runs the law check matching the morphism's kind.
    pub fn check(&self, seed: u64, count: usize) -> Report {
        match self {
            Morphism::Endo(e) => check_endomorphism(e, seed, count),
            Morphism::Derivation(d) => check_sigma_derivation(d, seed, count),
        }
    }
}

pub const CATALOG: &[&str] = &[
    "id",
    "const_term",
    "y_negate",
    "shift",
    "entrywise(<name>)",
    "inner",
    "umat_shift",
    "laurent_square",
    "d_dy",
    "coeff_shift",
    "zero",
];

fn mismatch(name: &str, ring: &Ring) -> Error {
    Error::MorphismRingMismatch {
        name: name.into(),
        ring: ring.id(),
    }
}

fn poly_of<'a>(name: &str, ring: &'a Ring) -> Result<&'a PolyRing> {
    ring.downcast::<PolyRing>().ok_or_else(|| mismatch(name, ring))
}

/// Constant-term endomorphism of `R[y]`: `Σ a_i y^i ↦ a_0`.
pub fn poly_const_term(ring: &Ring) -> Result<EndoMap> {
    let p = poly_of("const_term", ring)?.clone();
    Ok(EndoMap::new("const_term", ring.clone(), move |v| {
        Ok(match coeffs(v).first() {
            Some(c) => p.constant(c.clone()),
            None => p.from_coeffs(Vec::new()),
        })
    }))
}

/// `d/dy` on `R[y]`, a derivation over the identity.
pub fn poly_derivative(ring: &Ring) -> Result<SigmaDerivation> {
    let p = poly_of("d_dy", ring)?.clone();
    let base = p.base().clone();
    Ok(SigmaDerivation::new(
        "d_dy",
        EndoMap::identity(ring.clone()),
        move |v| {
            let c = coeffs(v);
            let d = c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, a)| base.mul(&base.from_int(&BigInt::from(i)), a))
                .collect::<Result<Vec<_>>>()?;
            Ok(p.from_coeffs(d))
        },
    ))
}

/// `Σ a_i y^i ↦ Σ_{i≥1} a_i y^{i-1}`, a derivation over the constant-term map.
pub fn poly_coeff_shift(ring: &Ring) -> Result<SigmaDerivation> {
    let p = poly_of("coeff_shift", ring)?.clone();
    let sigma = poly_const_term(ring)?;
    Ok(SigmaDerivation::new("coeff_shift", sigma, move |v| {
        Ok(p.from_coeffs(coeffs(v).iter().skip(1).cloned().collect()))
    }))
}

/// `y ↦ -y` on `R[y]`, an involutive automorphism.
pub fn poly_y_negate(ring: &Ring) -> Result<EndoMap> {
    let p = poly_of("y_negate", ring)?.clone();
    let base = p.base().clone();
    let make = move |name: &str| {
        let (p, base) = (p.clone(), base.clone());
        EndoMap::new(name, ring.clone(), move |v| {
            let c = coeffs(v)
                .iter()
                .enumerate()
                .map(|(i, a)| if i % 2 == 1 { base.neg(a) } else { Ok(a.clone()) })
                .collect::<Result<Vec<_>>>()?;
            Ok(p.from_coeffs(c))
        })
    };
    Ok(make("y_negate").with_inverse(make("y_negate")))
}

/// `(r_i) ↦ (r_{i+1})` on `∏_ℕ R`; surjective, not injective.
pub fn sequence_shift(ring: &Ring) -> Result<EndoMap> {
    let s = ring
        .downcast::<SequenceRing>()
        .ok_or_else(|| mismatch("shift", ring))?
        .clone();
    Ok(
        EndoMap::new("shift", ring.clone(), move |v| Ok(Value::Seq(s.shift(seq_of(v)))))
            .claims(false, true),
    )
}

/// `σ*` on `M_k(R)`, applying `inner` to every entry.
pub fn entrywise_lift(ring: &Ring, inner: &EndoMap) -> Result<EndoMap> {
    let name = format!("entrywise({})", inner.name());
    let m = ring
        .downcast::<MatrixRing>()
        .ok_or_else(|| mismatch(&name, ring))?
        .clone();
    inner.domain().ensure_same(m.base())?;
    let lift = |f: EndoMap, name: String| {
        let m = m.clone();
        let (inj, surj) = (f.injective_claimed, f.surjective_claimed);
        EndoMap::new(name, ring.clone(), move |v| m.map(v, |x| f.apply(x))).claims(inj, surj)
    };
    let map = lift(inner.clone(), name.clone());
    Ok(match inner.inverse() {
        Some(inv) => {
            let inv_name = format!("entrywise({})", inv.name());
            map.with_inverse(lift(inv.clone(), inv_name))
        }
        None => map,
    })
}

/// Conjugation `A ↦ uAu⁻¹` on `M_k(R)` with `u = 1 + E_01`.
pub fn inner_automorphism(ring: &Ring) -> Result<EndoMap> {
    let m = ring
        .downcast::<MatrixRing>()
        .ok_or_else(|| mismatch("inner", ring))?
        .clone();
    if m.size() < 2 {
        return Err(mismatch("inner", ring));
    }
    let u = ring.add(&ring.one(), &m.unit(0, 1))?;
    let u_inv = ring.sub(&ring.one(), &m.unit(0, 1))?;
    let conj = |name: &str, a: Value, b: Value| {
        let r = ring.clone();
        EndoMap::new(name, ring.clone(), move |v| r.mul(&r.mul(&a, v)?, &b))
    };
    Ok(conj("inner", u.clone(), u_inv.clone()).with_inverse(conj("inner_inverse", u_inv, u)))
}

/// Resolves a catalog name against a ring. `entrywise(<name>)` resolves `<name>` against the
/// matrix ring's base.
pub fn builtin_morphisms(name: &str, ring: &Ring) -> Result<Morphism> {
    if let Some(inner) = name
        .strip_prefix("entrywise(")
        .and_then(|s| s.strip_suffix(')'))
    {
        let m = ring
            .downcast::<MatrixRing>()
            .ok_or_else(|| mismatch(name, ring))?;
        let inner = builtin_morphisms(inner, m.base())?.into_endo()?;
        return entrywise_lift(ring, &inner).map(Morphism::Endo);
    }
    let m = match name {
        "id" => Morphism::Endo(EndoMap::identity(ring.clone())),
        "const_term" => {
            if let Some(f) = ring.downcast::<FreeRing>() {
                Morphism::Endo(f.const_term_endo(ring)?)
            } else {
                Morphism::Endo(poly_const_term(ring)?)
            }
        }
        "y_negate" => Morphism::Endo(poly_y_negate(ring)?),
        "shift" => Morphism::Endo(sequence_shift(ring)?),
        "inner" => Morphism::Endo(inner_automorphism(ring)?),
        "umat_shift" => {
            let u = ring
                .downcast::<UMatRing>()
                .ok_or_else(|| mismatch(name, ring))?
                .clone();
            Morphism::Endo(
                EndoMap::new("umat_shift", ring.clone(), move |v| u.shift_sigma(v))
                    .claims(true, false),
            )
        }
        "laurent_square" => {
            let l = ring
                .downcast::<LaurentRing>()
                .ok_or_else(|| mismatch(name, ring))?
                .clone();
            Morphism::Endo(
                EndoMap::new("laurent_square", ring.clone(), move |v| {
                    Ok(l.square_substitution(v))
                })
                .claims(true, false),
            )
        }
        "d_dy" => Morphism::Derivation(poly_derivative(ring)?),
        "coeff_shift" => Morphism::Derivation(poly_coeff_shift(ring)?),
        "zero" => Morphism::Derivation(SigmaDerivation::zero(EndoMap::identity(ring.clone()))),
        _ => return Err(Error::UnknownMorphism(name.into())),
    };
    Ok(m)
}

/// Resolves an endomorphism name, then an optional derivation name built over it. `zero`
/// pairs with any σ.
pub fn resolve_pair(
    ring: &Ring,
    sigma: &str,
    delta: Option<&str>,
) -> Result<(EndoMap, SigmaDerivation)> {
    let sigma_map = builtin_morphisms(sigma, ring)?.into_endo()?;
    let delta_map = match delta {
        None | Some("zero") => SigmaDerivation::zero(sigma_map.clone()),
        Some(d) => {
            let d = builtin_morphisms(d, ring)?.into_derivation()?;
            if d.sigma().name() != sigma_map.name() {
                return Err(Error::Precondition(format!(
                    "`{}` is a σ-derivation for σ = {}, not {}",
                    d.name(),
                    d.sigma().name(),
                    sigma_map.name()
                )));
            }
            d
        }
    };
    Ok((sigma_map, delta_map))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::make_ring;

    fn poly(ring: &Ring, c: &[i64]) -> Value {
        let p = ring.downcast::<PolyRing>().unwrap();
        p.from_coeffs(c.iter().map(|&x| Value::int(x)).collect())
    }

    #[test]
    fn const_term_example() {
        let r = make_ring("Poly(Z,y)").unwrap();
        let s = builtin_morphisms("const_term", &r).unwrap().into_endo().unwrap();
        assert_eq!(s.apply(&poly(&r, &[2, 0, 3])).unwrap(), poly(&r, &[2]));
    }

    #[test]
    fn coeff_shift_example() {
        let r = make_ring("Poly(Z,y)").unwrap();
        let d = builtin_morphisms("coeff_shift", &r)
            .unwrap()
            .into_derivation()
            .unwrap();
        assert_eq!(d.apply(&poly(&r, &[2, 0, 3])).unwrap(), poly(&r, &[0, 3]));
    }

    #[test]
    fn const_term_with_d_dy_fails_leibniz() {
        let r = make_ring("Poly(Z,y)").unwrap();
        let sigma = poly_const_term(&r).unwrap();
        let p = r.downcast::<PolyRing>().unwrap().clone();
        let bogus = SigmaDerivation::new("d_dy over const_term", sigma, move |v| {
            let c = coeffs(v);
            Ok(p.from_coeffs(
                c.iter()
                    .enumerate()
                    .skip(1)
                    .map(|(i, a)| Value::Int(BigInt::from(i) * a.as_int().unwrap()))
                    .collect(),
            ))
        });
        // δ(y·y) = 2y but δ(y)y + σ(y)δ(y) = y
        let y = poly(&r, &[0, 1]);
        let lhs = bogus.apply(&r.mul(&y, &y).unwrap()).unwrap();
        assert_eq!(lhs, poly(&r, &[0, 2]));
        let rhs = r
            .add(
                &r.mul(&bogus.apply(&y).unwrap(), &y).unwrap(),
                &r.mul(&bogus.sigma().apply(&y).unwrap(), &bogus.apply(&y).unwrap())
                    .unwrap(),
            )
            .unwrap();
        assert_eq!(rhs, poly(&r, &[0, 1]));
        assert!(!check_sigma_derivation(&bogus, 0, 200).passed());
    }

    #[test]
    fn plus_one_is_not_additive() {
        let z = make_ring("Z").unwrap();
        let r = z.clone();
        let bad = EndoMap::new("plus_one", z, move |v| r.add(v, &r.one()));
        let rep = check_endomorphism(&bad, 0, 10);
        assert_eq!(rep.check("additive").unwrap().status, crate::report::Status::Fail);
        assert!(!rep.passed());
    }

    #[test]
    fn catalog_maps_pass_their_laws() {
        let cases = [
            ("id", "Z/4"),
            ("const_term", "Poly(Z,y)"),
            ("const_term", "Free(u,v)"),
            ("y_negate", "Poly(Z,y)"),
            ("shift", "P(Z/2)"),
            ("entrywise(id)", "M2(Z/2)"),
            ("entrywise(shift)", "M2(P(Z/2))"),
            ("inner", "M2(Z/2)"),
            ("inner", "M3(Z)"),
            ("umat_shift", "UMat(Z/2)"),
            ("laurent_square", "Laurent(Z/5,prec=6)"),
            ("d_dy", "Poly(Z,y)"),
            ("coeff_shift", "Poly(Z,y)"),
            ("zero", "Poly(Z,y)"),
        ];
        for (name, spec) in cases {
            let r = make_ring(spec).unwrap();
            let m = builtin_morphisms(name, &r).unwrap();
            for seed in 0..5 {
                let rep = m.check(seed, 200);
                assert!(rep.passed(), "{name} on {spec} seed {seed}: {rep}");
            }
        }
    }

    #[test]
    fn catalog_errors() {
        let z = make_ring("Z").unwrap();
        assert!(matches!(
            builtin_morphisms("frobnicate", &z),
            Err(Error::UnknownMorphism(_))
        ));
        assert!(matches!(
            builtin_morphisms("shift", &z),
            Err(Error::MorphismRingMismatch { .. })
        ));
        let py = make_ring("Poly(Z,y)").unwrap();
        assert!(resolve_pair(&py, "id", Some("coeff_shift")).is_err());
        assert!(resolve_pair(&py, "const_term", Some("coeff_shift")).is_ok());
    }
}
