//! Homomorphisms between free modules `R^n → R^m` given by matrices.
//!
//! [`Side::Left`]: left-module maps written on the right, `v ↦ vM` with `M` of shape n×m.
//! [`Side::Right`]: right-module maps, `v ↦ Mv` with `M` of shape m×n.

use std::collections::{HashMap, HashSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{clear_denominators, nullspace};
use crate::ore::{ore_of, OrePoly};
use crate::report::{Check, Report};
use crate::ring::poly::coeffs;
use crate::ring::{seeded_rng, PolyRing, Ring, FULL};
use crate::value::Value;

pub const DEFAULT_BUDGET: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl std::str::FromStr for Side {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "left" => Ok(Side::Left),
            "right" => Ok(Side::Right),
            _ => Err(Error::UnsupportedParameter(format!(
                "side must be left or right, got `{s}`"
            ))),
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Left => "left",
            Side::Right => "right",
        })
    }
}

#[derive(Clone)]
pub struct ModuleMap {
    ring: Ring,
    rows: usize,
    cols: usize,
    entries: Vec<Value>,
    side: Side,
}

impl fmt::Debug for ModuleMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ModuleMap({}, {}, {})", self.ring.id(), self.side, self.format_matrix())
    }
}

impl ModuleMap {
    pub fn from_rows(ring: &Ring, rows: Vec<Vec<Value>>, side: Side) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if r == 0 || c == 0 || rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("expected a non-empty rectangular matrix".into()));
        }
        let entries: Vec<Value> = rows.into_iter().flatten().collect();
        for e in &entries {
            if !ring.contains(e) {
                return Err(Error::NotAnElement {
                    ring: ring.id(),
                    detail: format!("{e:?}"),
                });
            }
        }
        Ok(ModuleMap {
            ring: ring.clone(),
            rows: r,
            cols: c,
            entries,
            side,
        })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn entry(&self, i: usize, j: usize) -> &Value {
        &self.entries[i * self.cols + j]
    }

    pub fn entries(&self) -> &[Value] {
        &self.entries
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn domain_dim(&self) -> usize {
        match self.side {
            Side::Left => self.rows,
            Side::Right => self.cols,
        }
    }

    pub fn codomain_dim(&self) -> usize {
        match self.side {
            Side::Left => self.cols,
            Side::Right => self.rows,
        }
    }

    pub fn format_matrix(&self) -> String {
        let rows: Vec<String> = (0..self.rows)
            .map(|i| {
                let row: Vec<String> = (0..self.cols)
                    .map(|j| self.ring.format(self.entry(i, j)))
                    .collect();
                format!("[{}]", row.join(", "))
            })
            .collect();
        format!("[{}]", rows.join(", "))
    }

    pub fn format_vector(&self, v: &[Value]) -> String {
        let parts: Vec<String> = v.iter().map(|x| self.ring.format(x)).collect();
        format!("({})", parts.join(", "))
    }
}

/// `vM` or `Mv` per the map's side.
pub fn apply_map(f: &ModuleMap, v: &[Value]) -> Result<Vec<Value>> {
    if v.len() != f.domain_dim() {
        return Err(Error::Dimension(format!(
            "vector of length {} for a map from R^{}",
            v.len(),
            f.domain_dim()
        )));
    }
    let r = &f.ring;
    (0..f.codomain_dim())
        .map(|k| {
            let mut acc = r.zero();
            for (l, x) in v.iter().enumerate() {
                let t = match f.side {
                    Side::Left => r.mul(x, f.entry(l, k))?,
                    Side::Right => r.mul(f.entry(k, l), x)?,
                };
                acc = r.add(&acc, &t)?;
            }
            Ok(acc)
        })
        .collect()
}

/// `g ∘ f`.
pub fn compose(g: &ModuleMap, f: &ModuleMap) -> Result<ModuleMap> {
    f.ring.ensure_same(&g.ring)?;
    if f.side != g.side {
        return Err(Error::Precondition("cannot compose maps of different sides".into()));
    }
    if f.codomain_dim() != g.domain_dim() {
        return Err(Error::Dimension(format!(
            "R^{} → R^{} followed by R^{} → R^{}",
            f.domain_dim(),
            f.codomain_dim(),
            g.domain_dim(),
            g.codomain_dim()
        )));
    }
    let r = &f.ring;
    // left: v ↦ (vF)G = v(FG); right: v ↦ G(Fv) = (GF)v
    let (a, b) = match f.side {
        Side::Left => (f, g),
        Side::Right => (g, f),
    };
    let rows = (0..a.rows)
        .map(|i| {
            (0..b.cols)
                .map(|j| {
                    let mut acc = r.zero();
                    for k in 0..a.cols {
                        acc = r.add(&acc, &r.mul(a.entry(i, k), b.entry(k, j))?)?;
                    }
                    Ok(acc)
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    ModuleMap::from_rows(r, rows, f.side)
}

/// Samples additivity and linearity on the declared side.
pub fn check_linearity(f: &ModuleMap, seed: u64, count: usize) -> Result<Report> {
    let r = &f.ring;
    let mut rng = seeded_rng(seed);
    let n = f.domain_dim();
    let mut report = Report::new("module_map_linearity", seed)
        .param("ring", r.id())
        .param("side", f.side.to_string());
    let (mut additive, mut linear) = (true, true);
    let eq = |a: &[Value], b: &[Value]| a.iter().zip(b).all(|(x, y)| r.equal(x, y, FULL));
    for _ in 0..count.max(1) {
        let u: Vec<Value> = (0..n).map(|_| r.sample(&mut rng)).collect();
        let v: Vec<Value> = (0..n).map(|_| r.sample(&mut rng)).collect();
        let s = r.sample(&mut rng);
        let sum: Vec<Value> = u
            .iter()
            .zip(&v)
            .map(|(a, b)| r.add(a, b))
            .collect::<Result<_>>()?;
        let lhs = apply_map(f, &sum)?;
        let rhs: Vec<Value> = apply_map(f, &u)?
            .iter()
            .zip(apply_map(f, &v)?)
            .map(|(a, b)| r.add(a, &b))
            .collect::<Result<_>>()?;
        additive &= eq(&lhs, &rhs);
        let scale = |w: &[Value]| -> Result<Vec<Value>> {
            w.iter()
                .map(|x| match f.side {
                    Side::Left => r.mul(&s, x),
                    Side::Right => r.mul(x, &s),
                })
                .collect()
        };
        linear &= eq(&apply_map(f, &scale(&u)?)?, &scale(&apply_map(f, &u)?)?);
    }
    report.push(Check::new("additive", additive));
    report.push(Check::new(format!("{}-linear", f.side), linear));
    Ok(report)
}

/// All of `R^n`, first coordinate varying fastest.
fn vectors(elems: &[Value], n: usize) -> Vec<Vec<Value>> {
    let total = elems.len().pow(n as u32);
    (0..total)
        .map(|mut idx| {
            (0..n)
                .map(|_| {
                    let e = elems[idx % elems.len()].clone();
                    idx /= elems.len();
                    e
                })
                .collect()
        })
        .collect()
}

fn enumerable(ring: &Ring, budget: u64) -> Result<Vec<Value>> {
    ring.elements().ok_or_else(|| Error::NotEnumerable(ring.id()))?;
    ring.enumerate(budget)
}

fn ensure_budget(count: u128, budget: u64) -> Result<()> {
    if count > budget as u128 {
        return Err(Error::BudgetExceeded {
            budget,
            needed: count.to_string(),
        });
    }
    Ok(())
}

fn power(base: usize, exp: usize) -> u128 {
    (base as u128).saturating_pow(exp as u32)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Injectivity {
    pub injective: bool,
    pub collision: Option<(Vec<Value>, Vec<Value>)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Surjectivity {
    pub surjective: bool,
    pub unreached: Option<Vec<Value>>,
}

/// Exhaustive over the domain; a collision is reported as two distinct vectors with one image.
pub fn brute_injective(f: &ModuleMap, budget: u64) -> Result<Injectivity> {
    let elems = enumerable(&f.ring, budget)?;
    ensure_budget(power(elems.len(), f.domain_dim()), budget)?;
    let mut seen: HashMap<Vec<Value>, Vec<Value>> = HashMap::new();
    for v in vectors(&elems, f.domain_dim()) {
        let image = apply_map(f, &v)?;
        if let Some(u) = seen.get(&image) {
            return Ok(Injectivity {
                injective: false,
                collision: Some((u.clone(), v)),
            });
        }
        seen.insert(image, v);
    }
    Ok(Injectivity {
        injective: true,
        collision: None,
    })
}

pub fn brute_surjective(f: &ModuleMap, budget: u64) -> Result<Surjectivity> {
    let elems = enumerable(&f.ring, budget)?;
    ensure_budget(
        power(elems.len(), f.domain_dim()) + power(elems.len(), f.codomain_dim()),
        budget,
    )?;
    let image: HashSet<Vec<Value>> = vectors(&elems, f.domain_dim())
        .iter()
        .map(|v| apply_map(f, v))
        .collect::<Result<_>>()?;
    let unreached = vectors(&elems, f.codomain_dim())
        .into_iter()
        .find(|t| !image.contains(t));
    Ok(Surjectivity {
        surjective: unreached.is_none(),
        unreached,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    Exhaustive,
    Randomized { trials: u64, seed: u64 },
}

#[derive(Debug, Clone)]
pub enum SearchOutcome {
    Found(ModuleMap),
    /// Exhaustive search covered every matrix.
    NoneDefinitive,
    NoneWithinBudget,
}

impl SearchOutcome {
    pub fn found(&self) -> Option<&ModuleMap> {
        match self {
            SearchOutcome::Found(m) => Some(m),
            _ => None,
        }
    }

    pub fn is_definitive_none(&self) -> bool {
        matches!(self, SearchOutcome::NoneDefinitive)
    }

    pub fn label(&self) -> &'static str {
        match self {
            SearchOutcome::Found(_) => "found",
            SearchOutcome::NoneDefinitive => "none (definitive)",
            SearchOutcome::NoneWithinBudget => "none within budget",
        }
    }
}

#[derive(Clone, Copy)]
enum Property {
    Mono,
    Epi,
}

fn search(
    ring: &Ring,
    n: usize,
    m: usize,
    side: Side,
    mode: SearchMode,
    budget: u64,
    prop: Property,
) -> Result<SearchOutcome> {
    if n == 0 || m == 0 {
        return Err(Error::UnsupportedParameter("module ranks must be ≥ 1".into()));
    }
    let elems = enumerable(ring, budget)?;
    let (rows, cols) = match side {
        Side::Left => (n, m),
        Side::Right => (m, n),
    };
    let per_check = match prop {
        Property::Mono => power(elems.len(), n),
        Property::Epi => power(elems.len(), n) + power(elems.len(), m),
    };
    let check = |entries: Vec<Value>| -> Result<Option<ModuleMap>> {
        let f = ModuleMap {
            ring: ring.clone(),
            rows,
            cols,
            entries,
            side,
        };
        let ok = match prop {
            Property::Mono => brute_injective(&f, u64::MAX)?.injective,
            Property::Epi => brute_surjective(&f, u64::MAX)?.surjective,
        };
        Ok(ok.then_some(f))
    };
    match mode {
        SearchMode::Exhaustive => {
            let candidates = power(elems.len(), rows * cols);
            ensure_budget(candidates.saturating_mul(per_check), budget)?;
            for entries in vectors(&elems, rows * cols) {
                if let Some(f) = check(entries)? {
                    return Ok(SearchOutcome::Found(f));
                }
            }
            Ok(SearchOutcome::NoneDefinitive)
        }
        SearchMode::Randomized { trials, seed } => {
            let trials = trials.min((budget as u128 / per_check.max(1)) as u64);
            let mut rng = seeded_rng(seed);
            for _ in 0..trials {
                let entries = (0..rows * cols)
                    .map(|_| elems[rng.gen_range(0..elems.len())].clone())
                    .collect();
                if let Some(f) = check(entries)? {
                    return Ok(SearchOutcome::Found(f));
                }
            }
            Ok(SearchOutcome::NoneWithinBudget)
        }
    }
}

/// A monomorphism `R^n → R^m` on the given side, if one exists.
pub fn search_mono(
    ring: &Ring,
    n: usize,
    m: usize,
    side: Side,
    mode: SearchMode,
    budget: u64,
) -> Result<SearchOutcome> {
    search(ring, n, m, side, mode, budget, Property::Mono)
}

/// An epimorphism `R^n → R^m` on the given side, if one exists.
pub fn search_epi(
    ring: &Ring,
    n: usize,
    m: usize,
    side: Side,
    mode: SearchMode,
    budget: u64,
) -> Result<SearchOutcome> {
    search(ring, n, m, side, mode, budget, Property::Epi)
}

/// `ℤ[y]` inside `ring`: either `ring` itself or the coefficient ring of an Ore extension
/// whose map entries all have degree 0.
fn integer_poly_view(f: &ModuleMap) -> Result<(Ring, Vec<Value>)> {
    let is_zy = |r: &Ring| {
        r.downcast::<PolyRing>()
            .is_some_and(|p| p.base().id() == "Z")
    };
    if is_zy(&f.ring) {
        return Ok((f.ring.clone(), f.entries.clone()));
    }
    if let Ok(ore) = ore_of(&f.ring) {
        if is_zy(ore.base()) {
            let entries = f
                .entries
                .iter()
                .map(|e| match coeffs(e) {
                    [] => Ok(ore.base().zero()),
                    [c] => Ok(c.clone()),
                    _ => Err(Error::Precondition(
                        "entries must have degree 0 in the Ore variable".into(),
                    )),
                })
                .collect::<Result<_>>()?;
            return Ok((ore.base().clone(), entries));
        }
    }
    Err(Error::Precondition(format!(
        "bounded_degree_kernel needs a map over Z[y], got {}",
        f.ring.id()
    )))
}

/// A basis of the kernel vectors whose entries are polynomials of degree ≤ `degree`, found by
/// rational elimination on the coefficient system and scaled to primitive integer vectors.
pub fn bounded_degree_kernel(f: &ModuleMap, degree: usize) -> Result<Vec<Vec<Value>>> {
    let (zy, entries) = integer_poly_view(f)?;
    let p = zy.downcast::<PolyRing>().unwrap().clone();
    let g = ModuleMap {
        ring: zy.clone(),
        entries,
        ..f.clone()
    };
    let n = g.domain_dim();
    let unknowns = n * (degree + 1);
    // image of each unknown basis vector y^d·e_j, flattened to integer coordinates
    let images: Vec<Vec<Vec<Value>>> = (0..unknowns)
        .map(|u| {
            let (j, d) = (u / (degree + 1), u % (degree + 1));
            let mut v = vec![zy.zero(); n];
            v[j] = p.monomial(Value::int(1), d);
            apply_map(&g, &v).map(|img| img.iter().map(|c| coeffs(c).to_vec()).collect())
        })
        .collect::<Result<_>>()?;
    let width: Vec<usize> = (0..g.codomain_dim())
        .map(|k| images.iter().map(|im| im[k].len()).max().unwrap_or(0))
        .collect();
    let mut rows = Vec::new();
    for (k, &w) in width.iter().enumerate() {
        for t in 0..w {
            rows.push(
                images
                    .iter()
                    .map(|im| {
                        let c = im[k].get(t).and_then(Value::as_int).cloned().unwrap_or_default();
                        BigRational::from_integer(c)
                    })
                    .collect::<Vec<_>>(),
            );
        }
    }
    let basis = nullspace(&rows, unknowns);
    let out: Vec<Vec<Value>> = basis
        .iter()
        .map(|v| {
            let ints = clear_denominators(v);
            (0..n)
                .map(|j| {
                    let c = (0..=degree)
                        .map(|d| Value::Int(ints[j * (degree + 1) + d].clone()))
                        .collect();
                    p.from_coeffs(c)
                })
                .collect()
        })
        .collect();
    for v in &out {
        let image = apply_map(&g, v)?;
        if image.iter().any(|c| !zy.is_zero(c, FULL)) {
            return Err(Error::Precondition("kernel vector failed re-application".into()));
        }
    }
    Ok(out)
}

fn check_sigma_kills(f: &ModuleMap, a: &Value) -> Result<()> {
    let ore = ore_of(&f.ring)?;
    let sa = ore.sigma().apply(a)?;
    if !ore.base().is_zero(&sa, FULL) {
        return Err(Error::Precondition(format!(
            "σ(a) = {} is not 0",
            ore.base().format(&sa)
        )));
    }
    Ok(())
}

/// `ψ(r) = f(a^k·r)` as a map over the coefficient ring: its matrix is `M_ij·a^k`.
pub fn kernel_lift_map(f: &ModuleMap, a: &Value, k: usize) -> Result<ModuleMap> {
    if f.side != Side::Right {
        return Err(Error::UnsupportedParameter(
            "the kernel construction is for right-module maps".into(),
        ));
    }
    check_sigma_kills(f, a)?;
    let ore = ore_of(&f.ring)?;
    let base = ore.base();
    let ak = OrePoly::constant(&f.ring, base.pow(a, k)?)?;
    let rows = (0..f.rows)
        .map(|i| {
            (0..f.cols)
                .map(|j| {
                    let e = OrePoly::from_value(&f.ring, f.entry(i, j))?;
                    if e.degree() > k {
                        return Err(Error::Precondition(format!(
                            "entry {e} lies outside filtration level {k}"
                        )));
                    }
                    let prod = e.mul(&ak)?;
                    match prod.coeffs() {
                        [] => Ok(base.zero()),
                        [c] => Ok(c.clone()),
                        _ => Err(Error::Precondition(format!(
                            "{e}·a^{k} = {prod} is not in the coefficient ring"
                        ))),
                    }
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    ModuleMap::from_rows(base, rows, Side::Right)
}

/// Verifies that `a^k·b` is a nonzero kernel element of `f`, given a kernel vector `b` of `ψ`.
pub fn kernel_lift_witness(f: &ModuleMap, a: &Value, k: usize, b: &[Value]) -> Result<Report> {
    let ore = ore_of(&f.ring)?;
    let base = ore.base().clone();
    if b.len() != f.domain_dim() {
        return Err(Error::Dimension(format!(
            "b has length {}, expected {}",
            b.len(),
            f.domain_dim()
        )));
    }
    if b.iter().all(|x| base.is_zero(x, FULL)) {
        return Err(Error::Precondition("b must be nonzero".into()));
    }
    let psi = kernel_lift_map(f, a, k)?;
    let ak = base.pow(a, k)?;
    let mut report = Report::new("kernel_lift_witness", 0)
        .param("ring", f.ring.id())
        .param("matrix", f.format_matrix())
        .param("a", base.format(a))
        .param("k", k)
        .param("b", psi.format_vector(b))
        .param("psi", psi.format_matrix());

    // (1) f(a^k r) has degree 0 for sampled r, and agrees with ψ(r)
    let mut rng = seeded_rng(0);
    let lands = (0..20).try_fold(true, |ok, _| -> Result<bool> {
        let r: Vec<Value> = (0..f.domain_dim()).map(|_| base.sample(&mut rng)).collect();
        let lifted: Vec<Value> = r
            .iter()
            .map(|x| Ok(ore.constant(base.mul(&ak, x)?)))
            .collect::<Result<_>>()?;
        let image = apply_map(f, &lifted)?;
        let direct = apply_map(&psi, &r)?;
        Ok(ok && image
            .iter()
            .zip(&direct)
            .all(|(im, d)| f.ring.equal(im, &ore.constant(d.clone()), FULL)))
    })?;
    report.push(Check::new("psi lands in base vectors", lands));

    let psi_b = apply_map(&psi, b)?;
    report.push(
        Check::new("psi(b) = 0", psi_b.iter().all(|x| base.is_zero(x, FULL)))
            .with_witness(psi.format_vector(&psi_b)),
    );

    let akb: Vec<Value> = b.iter().map(|x| base.mul(&ak, x)).collect::<Result<_>>()?;
    report.push(
        Check::new("a^k b != 0", akb.iter().any(|x| !base.is_zero(x, FULL)))
            .with_witness(psi.format_vector(&akb)),
    );

    let lifted: Vec<Value> = akb.iter().map(|x| ore.constant(x.clone())).collect();
    let image = apply_map(f, &lifted)?;
    report.push(
        Check::new(
            "f(a^k b) = 0",
            image.iter().all(|x| f.ring.is_zero(x, FULL)),
        )
        .with_witness(f.format_vector(&image)),
    );
    Ok(report)
}

/// Integer vector helper for tests and the CLI.
pub fn int_vector(v: &[i64]) -> Vec<Value> {
    v.iter().map(|&x| Value::Int(BigInt::from(x))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ore::OreRing;
    use crate::ring::make_ring;

    fn ints(v: &[i64]) -> Vec<Value> {
        int_vector(v)
    }

    #[test]
    fn identity_and_diagonal() {
        let r = make_ring("Z/2").unwrap();
        let id = ModuleMap::from_rows(&r, vec![ints(&[1])], Side::Right).unwrap();
        assert_eq!(apply_map(&id, &ints(&[1])).unwrap(), ints(&[1]));
        let diag = ModuleMap::from_rows(&r, vec![ints(&[1]), ints(&[1])], Side::Right).unwrap();
        assert_eq!(apply_map(&diag, &ints(&[1])).unwrap(), ints(&[1, 1]));
        let inj = brute_injective(&diag, DEFAULT_BUDGET).unwrap();
        assert!(inj.injective);
        let surj = brute_surjective(&diag, DEFAULT_BUDGET).unwrap();
        assert!(!surj.surjective);
        assert_eq!(surj.unreached, Some(ints(&[1, 0])));
        assert!(brute_surjective(&id, DEFAULT_BUDGET).unwrap().surjective);
    }

    #[test]
    fn doubling_collides() {
        let r = make_ring("Z/4").unwrap();
        let f = ModuleMap::from_rows(&r, vec![ints(&[2])], Side::Right).unwrap();
        let inj = brute_injective(&f, DEFAULT_BUDGET).unwrap();
        assert_eq!(inj.collision, Some((ints(&[0]), ints(&[2]))));
    }

    #[test]
    fn side_matters_over_noncommutative_rings() {
        let r = make_ring("M2(Z/2)").unwrap();
        let e01 = Value::List(ints(&[0, 1, 0, 0]));
        let e00 = Value::List(ints(&[1, 0, 0, 0]));
        let left = ModuleMap::from_rows(&r, vec![vec![e01.clone()]], Side::Left).unwrap();
        let right = ModuleMap::from_rows(&r, vec![vec![e01.clone()]], Side::Right).unwrap();
        let v = vec![e00];
        // E00·E01 = E01, E01·E00 = 0
        assert_eq!(apply_map(&left, &v).unwrap(), vec![e01]);
        assert!(r.is_zero(&apply_map(&right, &v).unwrap()[0], FULL));
        assert!(check_linearity(&left, 1, 30).unwrap().passed());
        assert!(check_linearity(&right, 1, 30).unwrap().passed());
    }

    #[test]
    fn composition() {
        let r = make_ring("Z/5").unwrap();
        let mut rng = seeded_rng(2);
        for side in [Side::Left, Side::Right] {
            for _ in 0..10 {
                let mk = |a: usize, b: usize, rng: &mut rand_chacha::ChaCha8Rng| {
                    let rows = (0..a).map(|_| (0..b).map(|_| r.sample(rng)).collect()).collect();
                    ModuleMap::from_rows(&r, rows, side).unwrap()
                };
                let (f, g) = match side {
                    Side::Left => (mk(2, 3, &mut rng), mk(3, 1, &mut rng)),
                    Side::Right => (mk(3, 2, &mut rng), mk(1, 3, &mut rng)),
                };
                let v: Vec<Value> = (0..2).map(|_| r.sample(&mut rng)).collect();
                let gf = compose(&g, &f).unwrap();
                assert_eq!(
                    apply_map(&gf, &v).unwrap(),
                    apply_map(&g, &apply_map(&f, &v).unwrap()).unwrap()
                );
            }
        }
    }

    #[test]
    fn searches_agree_with_cardinality() {
        for spec in ["Z/2", "Z/3"] {
            let r = make_ring(spec).unwrap();
            for side in [Side::Left, Side::Right] {
                let s = |n, m, mono: bool| {
                    let f = if mono { search_mono } else { search_epi };
                    f(&r, n, m, side, SearchMode::Exhaustive, DEFAULT_BUDGET).unwrap()
                };
                assert!(s(2, 1, true).is_definitive_none());
                assert!(s(1, 2, false).is_definitive_none());
                let found = s(1, 2, true);
                let f = found.found().unwrap();
                assert!(brute_injective(f, DEFAULT_BUDGET).unwrap().injective);
                assert!(s(2, 1, false).found().is_some());
            }
        }
    }

    #[test]
    fn exhaustive_budget() {
        let r = make_ring("Z/4").unwrap();
        assert!(matches!(
            search_mono(&r, 3, 2, Side::Right, SearchMode::Exhaustive, 1000),
            Err(Error::BudgetExceeded { .. })
        ));
        let out = search_mono(
            &r,
            3,
            2,
            Side::Right,
            SearchMode::Randomized { trials: 10, seed: 0 },
            DEFAULT_BUDGET,
        )
        .unwrap();
        assert!(matches!(out, SearchOutcome::NoneWithinBudget));
    }

    fn zy_poly(c: &[i64]) -> Value {
        Value::List(ints(c))
    }

    #[test]
    fn kernel_examples() {
        let zy = make_ring("Poly(Z,y)").unwrap();
        let y = zy_poly(&[0, 1]);
        let neg_y = zy_poly(&[0, -1]);
        let f = ModuleMap::from_rows(&zy, vec![vec![y.clone(), neg_y.clone()]], Side::Right).unwrap();
        let k = bounded_degree_kernel(&f, 0).unwrap();
        assert_eq!(k, vec![vec![zy_poly(&[1]), zy_poly(&[1])]]);

        let f = ModuleMap::from_rows(&zy, vec![vec![zy_poly(&[0, 0, 1]), neg_y]], Side::Right)
            .unwrap();
        let k = bounded_degree_kernel(&f, 1).unwrap();
        assert!(k.contains(&vec![zy_poly(&[1]), zy_poly(&[0, 1])]), "{k:?}");

        let f = ModuleMap::from_rows(&zy, vec![vec![y]], Side::Right).unwrap();
        assert!(bounded_degree_kernel(&f, 3).unwrap().is_empty());
    }

    fn one_sided_ring() -> Ring {
        let zy = make_ring("Poly(Z,y)").unwrap();
        OreRing::from_names(&zy, "const_term", Some("coeff_shift")).unwrap()
    }

    #[test]
    fn kernel_construction_instance() {
        let s = one_sided_ring();
        let x = Value::List(vec![zy_poly(&[]), zy_poly(&[1])]);
        let one = Value::List(vec![zy_poly(&[1])]);
        let f = ModuleMap::from_rows(&s, vec![vec![x, one]], Side::Right).unwrap();
        let a = zy_poly(&[0, 1]);
        let b = vec![zy_poly(&[0, -1]), zy_poly(&[1])];
        let rep = kernel_lift_witness(&f, &a, 1, &b).unwrap();
        assert!(rep.passed(), "{rep}");
        let psi = kernel_lift_map(&f, &a, 1).unwrap();
        assert_eq!(psi.entries(), &[zy_poly(&[1]), zy_poly(&[0, 1])]);
        let k = bounded_degree_kernel(&psi, 1).unwrap();
        // primitive with positive leading coordinate, i.e. -b
        assert_eq!(k, vec![vec![zy_poly(&[0, 1]), zy_poly(&[-1])]]);
        assert!(matches!(
            kernel_lift_witness(&f, &a, 1, &[zy_poly(&[]), zy_poly(&[])]),
            Err(Error::Precondition(_))
        ));
    }
}
