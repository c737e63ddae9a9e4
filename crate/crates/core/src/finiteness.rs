//! Direct and stable finiteness: exhaustive checks over finite rings and the one-sided
//! inverse demonstrations for Ore extensions and skew series.

use std::fmt;

use num_bigint::BigUint;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::morphism::{builtin_morphisms, check_sigma_derivation, EndoMap};
use crate::ore::{ore_mul, OrePoly, OreRing};
use crate::report::{Check, Report};
use crate::ring::{make_ring, seeded_rng, MatrixRing, Ring, DEFAULT_WINDOW, FULL};
use crate::series::{
    matrix_series_iso_inverse, matrix_series_target, right_inverse, series_matrix_value,
    series_mul, series_ring_of, BaseFiniteness, SkewSeries, SkewSeriesRing,
};
use crate::value::Value;

pub const DEFAULT_BUDGET: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    /// `r·s = 1` and `s·r ≠ 1`.
    Fails { r: String, s: String },
    Inconclusive { budget: u64, needed: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FinitenessReport {
    pub ring: String,
    pub property: String,
    pub verdict: Verdict,
    /// Pairs examined.
    pub checked: u64,
}

impl FinitenessReport {
    pub fn holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }

    pub fn fails(&self) -> bool {
        matches!(self.verdict, Verdict::Fails { .. })
    }

    pub fn is_inconclusive(&self) -> bool {
        matches!(self.verdict, Verdict::Inconclusive { .. })
    }
}

impl fmt::Display for FinitenessReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.verdict {
            Verdict::Holds => write!(
                f,
                "{} {}: holds ({} pairs)",
                self.ring, self.property, self.checked
            ),
            Verdict::Fails { r, s } => write!(
                f,
                "{} {}: fails, r = {r}, s = {s} with rs = 1, sr != 1",
                self.ring, self.property
            ),
            Verdict::Inconclusive { budget, needed } => write!(
                f,
                "{} {}: inconclusive (needs {needed} pairs, budget {budget})",
                self.ring, self.property
            ),
        }
    }
}

/// Checks `rs = 1 ⇒ sr = 1` over every pair of an enumerable ring.
pub fn directly_finite_brute(ring: &Ring, budget: u64) -> Result<FinitenessReport> {
    let property = "directly_finite".to_string();
    let card = ring
        .cardinality()
        .ok_or_else(|| Error::NotEnumerable(ring.id()))?;
    let pairs = &card * &card;
    if pairs > BigUint::from(budget) {
        return Ok(FinitenessReport {
            ring: ring.id(),
            property,
            verdict: Verdict::Inconclusive {
                budget,
                needed: pairs.to_string(),
            },
            checked: 0,
        });
    }
    let elems = ring.enumerate(budget)?;
    let one = ring.one();
    let mut checked = 0u64;
    for r in &elems {
        for s in &elems {
            checked += 1;
            if ring.equal(&ring.mul(r, s)?, &one, FULL) && !ring.equal(&ring.mul(s, r)?, &one, FULL)
            {
                return Ok(FinitenessReport {
                    ring: ring.id(),
                    property,
                    verdict: Verdict::Fails {
                        r: ring.format(r),
                        s: ring.format(s),
                    },
                    checked,
                });
            }
        }
    }
    Ok(FinitenessReport {
        ring: ring.id(),
        property,
        verdict: Verdict::Holds,
        checked,
    })
}

/// Direct finiteness of `M_k(ring)` for `k = 1..=n`; stops at the first verdict other than
/// holds.
pub fn stably_finite_upto(ring: &Ring, n: usize, budget: u64) -> Result<FinitenessReport> {
    if n == 0 {
        return Err(Error::UnsupportedParameter("n must be ≥ 1".into()));
    }
    let property = format!("stably_finite_upto({n})");
    let mut checked = 0;
    for k in 1..=n {
        let mk = match k {
            1 => ring.clone(),
            _ => Ring::new(MatrixRing::new(ring.clone(), k)),
        };
        let rep = directly_finite_brute(&mk, budget)?;
        checked += rep.checked;
        if !rep.holds() {
            return Ok(FinitenessReport {
                ring: ring.id(),
                property: format!("{property} at M{k}"),
                verdict: rep.verdict,
                checked,
            });
        }
    }
    Ok(FinitenessReport {
        ring: ring.id(),
        property,
        verdict: Verdict::Holds,
        checked,
    })
}

/// `ℤ[y][x; σ, δ]` with `σ` the constant-term map and `δ` the coefficient shift:
/// `xy = 1` but `yx ≠ 1`.
pub fn one_sided_inverse_demo() -> Result<Report> {
    one_sided_inverse_demo_with(0, 200)
}

/// [`one_sided_inverse_demo`] with the derivation law sampled on `count` pairs from `seed`.
pub fn one_sided_inverse_demo_with(seed: u64, count: usize) -> Result<Report> {
    let zy = make_ring("Poly(Z,y)")?;
    let delta = builtin_morphisms("coeff_shift", &zy)?.into_derivation()?;
    let mut report = Report::new("one_sided_inverse", seed)
        .param("base", zy.id())
        .param("count", count);
    let law = check_sigma_derivation(&delta, seed, count);
    let law_ok = law.passed();
    report.absorb("delta is a sigma-derivation", law);
    if !law_ok {
        return Ok(report);
    }
    let s = OreRing::new(delta.sigma().clone(), delta)?;
    report.set_param("ring", s.id());
    let y_val = |k: usize| {
        let mut c = vec![Value::int(0); k];
        c.push(Value::int(1));
        Value::List(c)
    };
    let x = OrePoly::x(&s)?;
    let y = OrePoly::constant(&s, y_val(1))?;
    let y2 = OrePoly::constant(&s, y_val(2))?;
    let one = OrePoly::constant(&s, y_val(0))?;
    let xy = ore_mul(&x, &y)?;
    let yx = ore_mul(&y, &x)?;
    let xy2 = ore_mul(&x, &y2)?;
    report.set_param("xy", xy.to_string());
    report.set_param("yx", yx.to_string());
    report.push(Check::new("x*y = 1", xy == one));
    report.push(
        Check::new("y*x != 1", yx != one && yx.degree() == 1)
            .with_witness(format!("r = {x}, s = {y}")),
    );
    report.push(Check::new("x*y^2 = y", xy2 == y));
    Ok(report)
}

fn one_sided_pair_from(ring: &Ring, rng: &mut impl Rng, poly: bool) -> Result<SkewSeries> {
    let s = series_ring_of(ring)?;
    let base = s.base();
    let n = s.precision();
    let len = if poly { rng.gen_range(1..=n.min(4)) } else { n };
    let mut c = vec![base.one()];
    c.extend((1..len).map(|_| base.sample(rng)));
    SkewSeries::new(ring, c)
}

/// Instance-level check that `pq = 1` forces `qp = 1` in `R[[x;σ]]` mod `x^N`, over `R` and
/// over `M_2(R)` through the entrywise isomorphism. Half of the seeded `p` are polynomials.
pub fn skew_poly_finiteness_demo(
    sigma: &EndoMap,
    prec: usize,
    seed: u64,
    count: usize,
    base_finiteness: BaseFiniteness,
) -> Result<Report> {
    let base = sigma.domain().clone();
    let base_df = match base_finiteness {
        BaseFiniteness::Asserted => true,
        BaseFiniteness::BruteForce { budget } => directly_finite_brute(&base, budget)?.holds(),
    };
    if !base_df {
        return Err(Error::Precondition(format!(
            "{} is not directly finite",
            base.id()
        )));
    }
    let ring = SkewSeriesRing::new(sigma.clone(), prec)?;
    let windowed = base.capabilities().windowed_equality;
    let tag = |c: Check| {
        let c = c.with_precision(prec);
        if windowed {
            c.with_window(DEFAULT_WINDOW)
        } else {
            c
        }
    };
    let mut report = Report::new("skew_poly_finiteness", seed)
        .param("ring", ring.id())
        .param("count", count)
        .param("precision", prec);
    report.push(Check::new("base directly finite", base_df));

    let mut rng = seeded_rng(seed);
    let mut failure = None;
    for t in 0..count.max(1) {
        let p = one_sided_pair_from(&ring, &mut rng, t % 2 == 0)?;
        let q = right_inverse(&p)?;
        let pq = series_mul(&p, &q)?;
        let qp = series_mul(&q, &p)?;
        if failure.is_none() && !(pq.is_one() && qp.is_one()) {
            failure = Some(format!("p = {p}"));
        }
    }
    let mut c = tag(Check::new("pq = 1 implies qp = 1", failure.is_none()));
    if let Some(w) = failure {
        c = c.with_witness(w);
    }
    report.push(c);

    // M2 route: one-sided inverse over M2(R)[[x;σ*]], pulled back to M2(R[[x;σ]])
    let target = matrix_series_target(&ring, 2)?;
    let m2_series = Ring::new(MatrixRing::new(ring.clone(), 2));
    let mut failure = None;
    for t in 0..count.max(1) {
        let p = one_sided_pair_from(&target, &mut rng, t % 2 == 0)?;
        let q = right_inverse(&p)?;
        let qp_ok = series_mul(&q, &p)?.is_one() && series_mul(&p, &q)?.is_one();
        let a = series_matrix_value(&matrix_series_iso_inverse(&p, &ring)?);
        let b = series_matrix_value(&matrix_series_iso_inverse(&q, &ring)?);
        let one = m2_series.one();
        let pulled = m2_series.equal(&m2_series.mul(&a, &b)?, &one, DEFAULT_WINDOW)
            && m2_series.equal(&m2_series.mul(&b, &a)?, &one, DEFAULT_WINDOW);
        if failure.is_none() && !(qp_ok && pulled) {
            failure = Some(format!("p = {p}"));
        }
    }
    let mut c = tag(Check::new("M2 route: pq = 1 implies qp = 1", failure.is_none()));
    if let Some(w) = failure {
        c = c.with_witness(w);
    }
    report.push(c);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_rings_are_directly_finite() {
        for spec in ["Z/4", "Z/6", "M2(Z/2)"] {
            let rep = directly_finite_brute(&make_ring(spec).unwrap(), DEFAULT_BUDGET).unwrap();
            assert!(rep.holds(), "{rep}");
        }
        let rep = directly_finite_brute(&make_ring("M2(Z/2)").unwrap(), DEFAULT_BUDGET).unwrap();
        assert_eq!(rep.checked, 256);
    }

    #[test]
    fn infinite_rings_are_not_enumerable() {
        assert!(matches!(
            directly_finite_brute(&make_ring("Z").unwrap(), 10),
            Err(Error::NotEnumerable(_))
        ));
    }

    #[test]
    fn stable_finiteness_and_budget() {
        let z2 = make_ring("Z/2").unwrap();
        assert!(stably_finite_upto(&z2, 2, DEFAULT_BUDGET).unwrap().holds());
        assert!(stably_finite_upto(&z2, 1, DEFAULT_BUDGET).unwrap().holds());
        let z3 = make_ring("Z/3").unwrap();
        assert!(stably_finite_upto(&z3, 2, 1000).unwrap().is_inconclusive());
    }

    #[test]
    fn one_sided_inverse() {
        let rep = one_sided_inverse_demo().unwrap();
        assert!(rep.passed(), "{rep}");
        assert_eq!(rep.parameters["xy"], "1");
    }

    #[test]
    fn skew_finiteness_instances() {
        let z4 = make_ring("Z/4").unwrap();
        let id = EndoMap::identity(z4);
        let rep = skew_poly_finiteness_demo(&id, 8, 0, 30, BaseFiniteness::BruteForce {
            budget: DEFAULT_BUDGET,
        })
        .unwrap();
        assert!(rep.passed(), "{rep}");
        let p = make_ring("P(Z/2)").unwrap();
        let shift = builtin_morphisms("shift", &p).unwrap().into_endo().unwrap();
        let rep = skew_poly_finiteness_demo(&shift, 8, 0, 30, BaseFiniteness::Asserted).unwrap();
        assert!(rep.passed(), "{rep}");
    }
}
