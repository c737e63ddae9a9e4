//! Free algebras `ℤ⟨X⟩` and their quotients by monomial relations.
//!
//! Terms are stored in length-lexicographic order over the alphabet's declared order. A
//! relation `w = 0` is a rewrite rule sending any word containing `w` to zero; words are
//! reduced to normal form after every product.

use std::any::Any;
use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, RngCore};

use crate::error::{Error, Result};
use crate::morphism::EndoMap;
use crate::ore::{OrePoly, OreRing};
use crate::report::{Check, Report};
use crate::ring::{Capabilities, Ring, RingImpl};
use crate::value::Value;

pub const DEFAULT_DEGREE_BOUND: usize = 8;

/// A word over an alphabet, letters given as indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word(pub Vec<u8>);

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut w = self.0.clone();
        w.extend_from_slice(&other.0);
        Word(w)
    }

    fn find(&self, pat: &Word) -> Option<usize> {
        if pat.0.is_empty() || pat.0.len() > self.0.len() {
            return None;
        }
        self.0.windows(pat.0.len()).position(|w| w == pat.0.as_slice())
    }
}

/// Integer combination of normal words; zero coefficients are never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FreeTerms(BTreeMap<Word, BigInt>);

impl FreeTerms {
    pub fn terms(&self) -> impl Iterator<Item = (&Word, &BigInt)> {
        self.0.iter()
    }

    pub fn coeff(&self, w: &Word) -> BigInt {
        self.0.get(w).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.keys().map(Word::len).max()
    }

    fn add_term(&mut self, w: Word, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.0.entry(w) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }
}

fn terms_of(v: &Value) -> &FreeTerms {
    match v {
        Value::Free(t) => t,
        _ => panic!("free-algebra payload expected"),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub lhs: Word,
    /// `None` rewrites to zero.
    pub rhs: Option<Word>,
}

/// Length-reducing word rewriting rules, so every reduction terminates.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RewriteSystem {
    rules: Vec<Rule>,
}

impl RewriteSystem {
    pub fn empty() -> Self {
        RewriteSystem::default()
    }

    /// Rules `w → 0` for each word in `zero_words`, spelled over `gens`.
    pub fn monomial(gens: &[char], zero_words: &[String]) -> Result<Self> {
        let rules = zero_words
            .iter()
            .map(|w| {
                Ok(Rule {
                    lhs: spell(gens, w)?,
                    rhs: None,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(rules)
    }

    pub fn new(rules: Vec<Rule>) -> Result<Self> {
        for r in &rules {
            if r.lhs.is_empty() {
                return Err(Error::UnsupportedParameter("empty left-hand side".into()));
            }
            if r.rhs.as_ref().is_some_and(|w| w.len() >= r.lhs.len()) {
                return Err(Error::UnsupportedParameter(
                    "rewrite rules must shorten words".into(),
                ));
            }
        }
        Ok(RewriteSystem { rules })
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    /// Every applicable rewrite of `w` as `(rule index, position)`.
    fn redexes(&self, w: &Word) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (k, r) in self.rules.iter().enumerate() {
            let n = r.lhs.len();
            if n > w.len() {
                continue;
            }
            for i in 0..=w.len() - n {
                if w.0[i..i + n] == r.lhs.0[..] {
                    out.push((k, i));
                }
            }
        }
        out
    }

    fn apply(&self, w: &Word, (k, i): (usize, usize)) -> Option<Word> {
        let r = &self.rules[k];
        let rhs = r.rhs.as_ref()?;
        let mut v = w.0[..i].to_vec();
        v.extend_from_slice(&rhs.0);
        v.extend_from_slice(&w.0[i + r.lhs.len()..]);
        Some(Word(v))
    }

    /// Normal form by leftmost-first reduction; `None` means the word is zero.
    pub fn normal_form(&self, w: &Word) -> Option<Word> {
        let mut w = w.clone();
        loop {
            let first = self
                .rules
                .iter()
                .enumerate()
                .filter_map(|(k, r)| w.find(&r.lhs).map(|i| (i, k)))
                .min();
            match first {
                None => return Some(w),
                Some((i, k)) => w = self.apply(&w, (k, i))?,
            }
        }
    }

    /// Reduction choosing a random redex at every step.
    pub fn normal_form_randomized(&self, w: &Word, rng: &mut dyn RngCore) -> Option<Word> {
        let mut w = w.clone();
        loop {
            let redexes = self.redexes(&w);
            if redexes.is_empty() {
                return Some(w);
            }
            let pick = redexes[rng.gen_range(0..redexes.len())];
            w = self.apply(&w, pick)?;
        }
    }

    pub fn is_normal(&self, w: &Word) -> bool {
        self.rules.iter().all(|r| w.find(&r.lhs).is_none())
    }
}

fn spell(gens: &[char], w: &str) -> Result<Word> {
    w.chars()
        .map(|c| {
            gens.iter()
                .position(|&g| g == c)
                .map(|i| i as u8)
                .ok_or_else(|| Error::UnsupportedParameter(format!("`{c}` is not a generator")))
        })
        .collect::<Result<Vec<_>>>()
        .map(Word)
}

#[derive(Debug, Clone)]
pub struct FreeRing {
    alphabet: Vec<char>,
    rules: RewriteSystem,
    degree_bound: usize,
}

impl FreeRing {
    pub fn new(alphabet: Vec<char>, rules: RewriteSystem) -> Result<Self> {
        if alphabet.is_empty() || alphabet.len() > 26 {
            return Err(Error::UnsupportedParameter(
                "a free algebra needs 1 to 26 generators".into(),
            ));
        }
        let mut sorted = alphabet.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != alphabet.len() {
            return Err(Error::UnsupportedParameter("repeated generator".into()));
        }
        Ok(FreeRing {
            alphabet,
            rules,
            degree_bound: DEFAULT_DEGREE_BOUND,
        })
    }

    pub fn with_degree_bound(mut self, bound: usize) -> Self {
        self.degree_bound = bound;
        self
    }

    pub fn alphabet(&self) -> &[char] {
        &self.alphabet
    }

    pub fn rules(&self) -> &RewriteSystem {
        &self.rules
    }

    pub fn degree_bound(&self) -> usize {
        self.degree_bound
    }

    pub fn word(&self, s: &str) -> Result<Word> {
        spell(&self.alphabet, s)
    }

    pub fn spell(&self, w: &Word) -> String {
        w.0.iter().map(|&i| self.alphabet[i as usize]).collect()
    }

    /// `Σ c·w` from `(coefficient, word)` pairs, reduced.
    pub fn element(&self, terms: &[(i64, &str)]) -> Result<Value> {
        let mut t = FreeTerms::default();
        for &(c, w) in terms {
            let w = self.word(w)?;
            if w.len() > self.degree_bound {
                return Err(Error::DegreeBound {
                    bound: self.degree_bound,
                    length: w.len(),
                });
            }
            if let Some(n) = self.rules.normal_form(&w) {
                t.add_term(n, BigInt::from(c));
            }
        }
        Ok(Value::Free(t))
    }

    pub fn word_value(&self, w: &Word) -> Value {
        let mut t = FreeTerms::default();
        if let Some(n) = self.rules.normal_form(w) {
            t.add_term(n, BigInt::one());
        }
        Value::Free(t)
    }

    /// The augmentation `Σ c_w w ↦ c_ε`, an endomorphism because every relation has
    /// positive length.
    pub fn const_term_endo(&self, ring: &Ring) -> Result<EndoMap> {
        if ring.downcast::<FreeRing>().is_none() {
            return Err(Error::MorphismRingMismatch {
                name: "const_term".into(),
                ring: ring.id(),
            });
        }
        Ok(EndoMap::new("const_term", ring.clone(), |v| {
            let c = terms_of(v).coeff(&Word::empty());
            let mut t = FreeTerms::default();
            t.add_term(Word::empty(), c);
            Ok(Value::Free(t))
        }))
    }

    /// Element of `self` from the same-letter element of `other`.
    pub fn transport(&self, other: &FreeRing, v: &Value) -> Result<Value> {
        let mut t = FreeTerms::default();
        for (w, c) in terms_of(v).terms() {
            let spelled = other.spell(w);
            let w2 = self.word(&spelled)?;
            if let Some(n) = self.rules.normal_form(&w2) {
                t.add_term(n, c.clone());
            }
        }
        Ok(Value::Free(t))
    }
}

impl RingImpl for FreeRing {
    fn descriptor(&self) -> String {
        let gens: Vec<String> = self.alphabet.iter().map(char::to_string).collect();
        let mut s = format!("Free({}", gens.join(","));
        if !self.rules.rules.is_empty() {
            let rels: Vec<String> = self
                .rules
                .rules
                .iter()
                .map(|r| match &r.rhs {
                    None => format!("{}=0", self.spell(&r.lhs)),
                    Some(w) => format!("{}={}", self.spell(&r.lhs), self.spell(w)),
                })
                .collect();
            s.push('|');
            s.push_str(&rels.join(","));
        }
        if self.degree_bound != DEFAULT_DEGREE_BOUND {
            s.push_str(&format!(";deg={}", self.degree_bound));
        }
        s.push(')');
        s
    }

    fn capabilities(&self) -> Capabilities {
        Capabilities::exact(Zero::zero())
    }

    fn zero(&self) -> Value {
        Value::Free(FreeTerms::default())
    }

    fn one(&self) -> Value {
        self.from_int(&BigInt::one())
    }

    fn from_int(&self, n: &BigInt) -> Value {
        let mut t = FreeTerms::default();
        t.add_term(Word::empty(), n.clone());
        Value::Free(t)
    }

    fn add(&self, a: &Value, b: &Value) -> Result<Value> {
        let mut t = terms_of(a).clone();
        for (w, c) in terms_of(b).terms() {
            t.add_term(w.clone(), c.clone());
        }
        Ok(Value::Free(t))
    }

    fn neg(&self, a: &Value) -> Result<Value> {
        Ok(Value::Free(FreeTerms(
            terms_of(a).0.iter().map(|(w, c)| (w.clone(), -c)).collect(),
        )))
    }

    fn mul(&self, a: &Value, b: &Value) -> Result<Value> {
        let mut t = FreeTerms::default();
        for (u, c) in terms_of(a).terms() {
            for (v, d) in terms_of(b).terms() {
                let w = u.concat(v);
                if w.len() > self.degree_bound {
                    return Err(Error::DegreeBound {
                        bound: self.degree_bound,
                        length: w.len(),
                    });
                }
                if let Some(n) = self.rules.normal_form(&w) {
                    t.add_term(n, c * d);
                }
            }
        }
        Ok(Value::Free(t))
    }

    fn equal(&self, a: &Value, b: &Value, _window: usize) -> bool {
        terms_of(a) == terms_of(b)
    }

    fn sample(&self, rng: &mut dyn RngCore) -> Value {
        let mut t = FreeTerms::default();
        for _ in 0..rng.gen_range(0..=3) {
            let len = rng.gen_range(0..=2usize);
            let w = Word(
                (0..len)
                    .map(|_| rng.gen_range(0..self.alphabet.len()) as u8)
                    .collect(),
            );
            let c = BigInt::from(rng.gen_range(-3i64..=3));
            if let Some(n) = self.rules.normal_form(&w) {
                t.add_term(n, c);
            }
        }
        Value::Free(t)
    }

    fn contains(&self, v: &Value) -> bool {
        match v {
            Value::Free(t) => t.0.iter().all(|(w, c)| {
                !c.is_zero()
                    && w.len() <= self.degree_bound
                    && w.0.iter().all(|&i| (i as usize) < self.alphabet.len())
                    && self.rules.is_normal(w)
            }),
            _ => false,
        }
    }

    fn format(&self, a: &Value) -> String {
        let t = terms_of(a);
        if t.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (w, c)) in t.terms().enumerate() {
            let neg = c < &BigInt::zero();
            let mag = if neg { -c } else { c.clone() };
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let word = self.spell(w);
            if w.is_empty() {
                out.push_str(&mag.to_string());
            } else if mag.is_one() {
                out.push_str(&word);
            } else {
                out.push_str(&format!("{mag}*{word}"));
            }
        }
        out
    }

    fn generators(&self) -> Vec<(String, Value)> {
        self.alphabet
            .iter()
            .enumerate()
            .map(|(i, c)| (c.to_string(), self.word_value(&Word(vec![i as u8]))))
            .collect()
    }

    fn unit_inverse(&self, a: &Value) -> Option<Value> {
        let t = terms_of(a);
        let one = BigInt::one();
        match t.0.iter().collect::<Vec<_>>().as_slice() {
            [(w, c)] if w.is_empty() && (*c == &one || *c == &-&one) => Some(a.clone()),
            _ => None,
        }
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}

pub fn free_of(ring: &Ring) -> Result<&FreeRing> {
    ring.downcast::<FreeRing>()
        .ok_or_else(|| Error::Precondition(format!("`{}` is not a free algebra", ring.id())))
}

/// The isomorphism `ℤ⟨u,v,x⟩/(xu, xv) ≅ ℤ⟨u,v⟩[x; σ]` with `σ` the constant-term map.
#[derive(Debug, Clone)]
pub struct MonomialOreIso {
    pub quotient: Ring,
    pub coefficients: Ring,
    pub ore: Ring,
}

impl MonomialOreIso {
    pub fn new() -> Result<Self> {
        let quotient = Ring::new(FreeRing::new(
            vec!['u', 'v', 'x'],
            RewriteSystem::monomial(&['u', 'v', 'x'], &["xu".into(), "xv".into()])?,
        )?);
        let coefficients = Ring::new(FreeRing::new(vec!['u', 'v'], RewriteSystem::empty())?);
        let sigma = free_of(&coefficients)?.const_term_endo(&coefficients)?;
        let ore = OreRing::skew(sigma)?;
        Ok(MonomialOreIso {
            quotient,
            coefficients,
            ore,
        })
    }

    /// Each normal word is `w·x^k` with `w ∈ {u,v}*`; it maps to `(w)x^k`.
    pub fn to_ore(&self, p: &Value) -> Result<OrePoly> {
        let s = free_of(&self.quotient)?;
        let r = free_of(&self.coefficients)?;
        let x = s.word("x")?.0[0];
        let mut by_degree: BTreeMap<usize, FreeTerms> = BTreeMap::new();
        for (w, c) in terms_of(p).terms() {
            let split = w.0.iter().position(|&l| l == x).unwrap_or(w.len());
            if w.0[split..].iter().any(|&l| l != x) {
                return Err(Error::Precondition(format!(
                    "{} is not in normal form",
                    s.spell(w)
                )));
            }
            let head = r.word(&s.spell(&Word(w.0[..split].to_vec())))?;
            by_degree
                .entry(w.len() - split)
                .or_default()
                .add_term(head, c.clone());
        }
        let deg = by_degree.keys().next_back().map_or(0, |d| d + 1);
        let coeffs = (0..deg)
            .map(|k| Value::Free(by_degree.remove(&k).unwrap_or_default()))
            .collect();
        OrePoly::new(&self.ore, coeffs)
    }

    /// `Σ r_k x^k ↦ Σ r_k·x^k` inside the quotient.
    pub fn from_ore(&self, q: &OrePoly) -> Result<Value> {
        self.ore.ensure_same(q.ring())?;
        let s = free_of(&self.quotient)?;
        let r = free_of(&self.coefficients)?;
        let mut acc = self.quotient.zero();
        for (k, rk) in q.coeffs().iter().enumerate() {
            let lifted = s.transport(r, rk)?;
            let xk = s.word_value(&s.word(&"x".repeat(k))?);
            acc = self.quotient.add(&acc, &self.quotient.mul(&lifted, &xk)?)?;
        }
        Ok(acc)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IndependenceCheck {
    pub combination: Value,
    pub combination_is_zero: bool,
    pub both_zero: bool,
}

impl IndependenceCheck {
    /// `au + bv = 0` implies `a = b = 0`.
    pub fn consistent(&self) -> bool {
        !self.combination_is_zero || self.both_zero
    }
}

/// Computes `a·u + b·v` in `ℤ⟨u,v⟩`.
pub fn left_independence_uv(ring: &Ring, a: &Value, b: &Value) -> Result<IndependenceCheck> {
    let f = free_of(ring)?;
    if f.alphabet() != ['u', 'v'] || !f.rules().rules().is_empty() {
        return Err(Error::Precondition(format!(
            "expected Free(u,v), got {}",
            ring.id()
        )));
    }
    let u = f.word_value(&f.word("u")?);
    let v = f.word_value(&f.word("v")?);
    let combination = ring.add(&ring.mul(a, &u)?, &ring.mul(b, &v)?)?;
    Ok(IndependenceCheck {
        combination_is_zero: ring.is_zero(&combination, 0),
        both_zero: ring.is_zero(a, 0) && ring.is_zero(b, 0),
        combination,
    })
}

/// Every element of `ℤ⟨u,v⟩` of degree ≤ `degree` with coefficients in `{−1, 0, 1}`.
pub fn small_elements_uv(ring: &Ring, degree: usize) -> Result<Vec<Value>> {
    let f = free_of(ring)?;
    let mut words = vec![Word::empty()];
    let mut layer = vec![Word::empty()];
    for _ in 0..degree {
        layer = layer
            .iter()
            .flat_map(|w| (0..f.alphabet().len() as u8).map(move |l| w.concat(&Word(vec![l]))))
            .collect();
        words.extend(layer.iter().cloned());
    }
    let mut out = vec![FreeTerms::default()];
    for w in &words {
        out = out
            .into_iter()
            .flat_map(|t| {
                [-1i64, 0, 1].into_iter().map(move |c| {
                    let mut t = t.clone();
                    t.add_term(w.clone(), BigInt::from(c));
                    t
                })
            })
            .collect();
    }
    Ok(out.into_iter().map(Value::Free).collect())
}

/// Covers every pair `(a, b)` from [`small_elements_uv`] of the given degree. Since
/// `au + bv = 0` iff `au = −bv`, the pair scan reduces to intersecting the images
/// `{au}` and `{−bv}`: a nonzero solution exists iff some `a ≠ 0` has `au = 0`, some
/// `b ≠ 0` has `bv = 0`, or the two images share a nonzero value.
pub fn independence_exhaustive(ring: &Ring, degree: usize) -> Result<Report> {
    let f = free_of(ring)?;
    let elems = small_elements_uv(ring, degree)?;
    let u = f.word_value(&f.word("u")?);
    let v = f.word_value(&f.word("v")?);
    let mut left: HashMap<Value, Value> = HashMap::new();
    let mut zero_witness = None;
    for a in &elems {
        let au = ring.mul(a, &u)?;
        if ring.is_zero(&au, 0) && !ring.is_zero(a, 0) && zero_witness.is_none() {
            zero_witness = Some((a.clone(), ring.zero()));
        }
        left.insert(au, a.clone());
    }
    for b in &elems {
        let nbv = ring.neg(&ring.mul(b, &v)?)?;
        if let Some(a) = left.get(&nbv) {
            if (!ring.is_zero(a, 0) || !ring.is_zero(b, 0)) && zero_witness.is_none() {
                zero_witness = Some((a.clone(), b.clone()));
            }
        }
    }
    let n = elems.len() as u64;
    let mut report = Report::new("free_independence", 0)
        .param("ring", ring.id())
        .param("degree", degree)
        .param("elements", n)
        .param("pairs", n * n);
    let mut c = Check::new("au + bv = 0 only for a = b = 0", zero_witness.is_none());
    if let Some((a, b)) = zero_witness {
        c = c.with_witness(format!("a = {}, b = {}", ring.format(&a), ring.format(&b)));
    }
    report.push(c);
    Ok(report)
}
