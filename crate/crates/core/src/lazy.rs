//! ℕ×ℕ matrices.
//!
//! [`LazyMatrix`] holds an entry oracle plus a finite row support per row, so products are
//! finite sums and exact. [`UMatRing`] is the ring of upper-triangular matrices with finitely
//! many nonzero superdiagonals, each an eventually periodic sequence; its values are
//! `Value::Banded` maps from band index to the band `(M(i,i+d))_i`.

use std::any::Any;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use rand::{Rng, RngCore};

use crate::error::{Error, Result};
use crate::morphism::sequence_shift;
use crate::report::{Check, Report};
use crate::ring::{seeded_rng, Capabilities, Ring, RingImpl, Sequence, SequenceRing, FULL};
use crate::series::{
    direct_finiteness_instance, right_inverse, series_mul, series_ring_of, BaseFiniteness,
    SkewSeries, SkewSeriesRing,
};
use crate::value::Value;

pub type EntryFn = Arc<dyn Fn(usize, usize) -> Result<Value> + Send + Sync>;
pub type SupportFn = Arc<dyn Fn(usize) -> Vec<usize> + Send + Sync>;

pub const ISOMETRY_WINDOW: usize = 32;

#[derive(Clone)]
pub struct LazyMatrix {
    base: Ring,
    entry: EntryFn,
    row_support: SupportFn,
    col_support: Option<SupportFn>,
    upper_triangular: bool,
}

impl fmt::Debug for LazyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LazyMatrix({}", self.base.id())?;
        for i in 0..4 {
            let row: Vec<String> = (0..4)
                .map(|j| match self.entry(i, j) {
                    Ok(v) => self.base.format(&v),
                    Err(_) => "?".into(),
                })
                .collect();
            write!(f, " [{} ..]", row.join(" "))?;
        }
        write!(f, " ..)")
    }
}

impl LazyMatrix {
    /// `row_support(i)` must contain every column where row `i` may be nonzero. Upper
    /// triangular matrices get the column support `0..=j` automatically.
    pub fn new(
        base: &Ring,
        entry: impl Fn(usize, usize) -> Result<Value> + Send + Sync + 'static,
        row_support: impl Fn(usize) -> Vec<usize> + Send + Sync + 'static,
        upper_triangular: bool,
    ) -> Self {
        LazyMatrix {
            base: base.clone(),
            entry: Arc::new(entry),
            row_support: Arc::new(row_support),
            col_support: upper_triangular
                .then(|| Arc::new(|j: usize| (0..=j).collect::<Vec<_>>()) as SupportFn),
            upper_triangular,
        }
    }

    /// Replaces the column support with a tighter one.
    pub fn with_col_support(
        mut self,
        col_support: impl Fn(usize) -> Vec<usize> + Send + Sync + 'static,
    ) -> Self {
        self.col_support = Some(Arc::new(col_support));
        self
    }

    pub fn identity(base: &Ring) -> Self {
        let (one, zero) = (base.one(), base.zero());
        LazyMatrix::new(
            base,
            move |i, j| Ok(if i == j { one.clone() } else { zero.clone() }),
            |i| vec![i],
            true,
        )
        .with_col_support(|j| vec![j])
    }

    pub fn zero(base: &Ring) -> Self {
        let zero = base.zero();
        LazyMatrix::new(base, move |_, _| Ok(zero.clone()), |_| Vec::new(), true)
            .with_col_support(|_| Vec::new())
    }

    /// The matrix unit with a single 1 at `(r, c)`.
    pub fn unit(base: &Ring, r: usize, c: usize) -> Self {
        let (one, zero) = (base.one(), base.zero());
        LazyMatrix::new(
            base,
            move |i, j| Ok(if (i, j) == (r, c) { one.clone() } else { zero.clone() }),
            move |i| if i == r { vec![c] } else { Vec::new() },
            r <= c,
        )
        .with_col_support(move |j| if j == c { vec![r] } else { Vec::new() })
    }

    pub fn base(&self) -> &Ring {
        &self.base
    }

    pub fn entry(&self, i: usize, j: usize) -> Result<Value> {
        (self.entry)(i, j)
    }

    pub fn row_support(&self, i: usize) -> Vec<usize> {
        (self.row_support)(i)
    }

    pub fn col_support(&self, j: usize) -> Option<Vec<usize>> {
        self.col_support.as_ref().map(|f| f(j))
    }

    pub fn is_upper_triangular(&self) -> bool {
        self.upper_triangular
    }

    /// The `w×w` leading corner.
    pub fn corner(&self, w: usize) -> Result<Vec<Vec<Value>>> {
        (0..w)
            .map(|i| (0..w).map(|j| self.entry(i, j)).collect())
            .collect()
    }

    /// Samples `(i, j)` with `j` outside the row support and checks the entry vanishes; also
    /// spot-checks the triangularity flag.
    pub fn support_soundness(&self, seed: u64, count: usize, max_index: usize) -> Result<bool> {
        let mut rng = seeded_rng(seed);
        let mut tested = 0;
        let mut attempts = 0;
        while tested < count && attempts < 20 * count {
            attempts += 1;
            let i = rng.gen_range(0..max_index);
            let j = rng.gen_range(0..max_index);
            let outside = !self.row_support(i).contains(&j);
            let below = self.upper_triangular && i > j;
            if outside || below {
                tested += 1;
                if !self.base.is_zero(&self.entry(i, j)?, FULL) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

fn union(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v.dedup();
    v
}

/// `(MN)(i,j) = Σ_{k ∈ supp_M(i)} M(i,k)N(k,j)`.
pub fn lazy_mul(m: &LazyMatrix, n: &LazyMatrix) -> Result<LazyMatrix> {
    m.base.ensure_same(&n.base)?;
    let (a, b) = (m.clone(), n.clone());
    let base = m.base.clone();
    let entry = move |i: usize, j: usize| {
        let mut acc = base.zero();
        for k in a.row_support(i) {
            let x = a.entry(i, k)?;
            if base.is_zero(&x, FULL) {
                continue;
            }
            acc = base.add(&acc, &base.mul(&x, &b.entry(k, j)?)?)?;
        }
        Ok(acc)
    };
    let (a, b) = (m.clone(), n.clone());
    let rows = move |i: usize| {
        union(
            a.row_support(i)
                .into_iter()
                .flat_map(|k| b.row_support(k))
                .collect(),
        )
    };
    let mut out = LazyMatrix::new(
        &m.base,
        entry,
        rows,
        m.upper_triangular && n.upper_triangular,
    );
    out.col_support = match (m.col_support.clone(), n.col_support.clone()) {
        (Some(cm), Some(cn)) => Some(Arc::new(move |j: usize| {
            union(cn(j).into_iter().flat_map(|k| cm(k)).collect())
        })),
        _ => None,
    };
    Ok(out)
}

pub fn lazy_add(m: &LazyMatrix, n: &LazyMatrix) -> Result<LazyMatrix> {
    m.base.ensure_same(&n.base)?;
    let (a, b) = (m.clone(), n.clone());
    let base = m.base.clone();
    let entry = move |i: usize, j: usize| base.add(&a.entry(i, j)?, &b.entry(i, j)?);
    let (a, b) = (m.clone(), n.clone());
    let rows = move |i: usize| {
        let mut v = a.row_support(i);
        v.extend(b.row_support(i));
        union(v)
    };
    let mut out = LazyMatrix::new(
        &m.base,
        entry,
        rows,
        m.upper_triangular && n.upper_triangular,
    );
    out.col_support = match (m.col_support.clone(), n.col_support.clone()) {
        (Some(cm), Some(cn)) => Some(Arc::new(move |j: usize| {
            let mut v = cm(j);
            v.extend(cn(j));
            union(v)
        })),
        _ => None,
    };
    Ok(out)
}

pub fn lazy_neg(m: &LazyMatrix) -> LazyMatrix {
    let a = m.clone();
    let base = m.base.clone();
    LazyMatrix {
        entry: Arc::new(move |i, j| base.neg(&a.entry(i, j)?)),
        ..m.clone()
    }
}

/// Needs a column support, which becomes the row support of the transpose.
pub fn transpose(m: &LazyMatrix) -> Result<LazyMatrix> {
    let cols = m.col_support.clone().ok_or_else(|| {
        Error::Precondition("transpose needs a matrix with a known column support".into())
    })?;
    let a = m.clone();
    Ok(LazyMatrix {
        base: m.base.clone(),
        entry: Arc::new(move |i, j| a.entry(j, i)),
        row_support: cols,
        col_support: Some(m.row_support.clone()),
        upper_triangular: false,
    })
}

/// Compares every entry with `i, j < w`.
pub fn window_eq(m: &LazyMatrix, n: &LazyMatrix, w: usize) -> Result<bool> {
    m.base.ensure_same(&n.base)?;
    for i in 0..w {
        for j in 0..w {
            if !m.base.equal(&m.entry(i, j)?, &n.entry(i, j)?, FULL) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `A(i,2i) = 1` and `B(i,2i+1) = 1`, zero elsewhere.
pub fn isometry_matrices(base: &Ring) -> (LazyMatrix, LazyMatrix) {
    let make = |off: usize| {
        let (one, zero) = (base.one(), base.zero());
        LazyMatrix::new(
            base,
            move |i, j| Ok(if j == 2 * i + off { one.clone() } else { zero.clone() }),
            move |i| vec![2 * i + off],
            true,
        )
        .with_col_support(move |j| {
            if j >= off && (j - off).is_multiple_of(2) {
                vec![(j - off) / 2]
            } else {
                Vec::new()
            }
        })
    };
    (make(0), make(1))
}

/// `A`, `B` together with a report on `AAᵗ = BBᵗ = I`, `ABᵗ = BAᵗ = 0` over the `w×w` corner.
pub fn isometry_witnesses(base: &Ring, w: usize) -> Result<(LazyMatrix, LazyMatrix, Report)> {
    let (a, b) = isometry_matrices(base);
    let (at, bt) = (transpose(&a)?, transpose(&b)?);
    let i = LazyMatrix::identity(base);
    let z = LazyMatrix::zero(base);
    let mut report = Report::new("isometry_witnesses", 0)
        .param("base", base.id())
        .param("window", w);
    for (name, lhs, rhs) in [
        ("A*At = I", lazy_mul(&a, &at)?, &i),
        ("B*Bt = I", lazy_mul(&b, &bt)?, &i),
        ("A*Bt = 0", lazy_mul(&a, &bt)?, &z),
        ("B*At = 0", lazy_mul(&b, &at)?, &z),
    ] {
        report.push(Check::new(name, window_eq(&lhs, rhs, w)?).with_window(w));
    }
    for (name, m) in [("A", &a), ("B", &b)] {
        let ok = m.support_soundness(0, 500, 4 * w)?;
        report.push(Check::new(format!("{name} support sound"), ok));
    }
    Ok((a, b, report))
}

/// `X' = ZAᵗ`, `Y' = ZBᵗ`; equal to `X`, `Y` whenever `Z = XA + YB`.
pub fn recover_coefficients(
    z: &LazyMatrix,
    a: &LazyMatrix,
    b: &LazyMatrix,
) -> Result<(LazyMatrix, LazyMatrix)> {
    Ok((lazy_mul(z, &transpose(a)?)?, lazy_mul(z, &transpose(b)?)?))
}

/// `σ(M)(0,0) = M(0,0)`, `σ(M)(i,j) = M(i−1,j−1)` for `i,j > 0`, zero elsewhere.
pub fn umat_shift_sigma(m: &LazyMatrix) -> Result<LazyMatrix> {
    if !m.upper_triangular {
        return Err(Error::Precondition(
            "the shift endomorphism acts on upper-triangular matrices".into(),
        ));
    }
    let a = m.clone();
    let zero = m.base.zero();
    let entry = move |i: usize, j: usize| match (i, j) {
        (0, 0) => a.entry(0, 0),
        (0, _) | (_, 0) => Ok(zero.clone()),
        _ => a.entry(i - 1, j - 1),
    };
    let a = m.clone();
    let rows = move |i: usize| match i {
        0 => vec![0],
        _ => a.row_support(i - 1).into_iter().map(|j| j + 1).collect(),
    };
    let mut out = LazyMatrix::new(&m.base, entry, rows, true);
    if let Some(cols) = m.col_support.clone() {
        out = out.with_col_support(move |j| match j {
            0 => vec![0],
            _ => cols(j - 1).into_iter().map(|i| i + 1).collect(),
        });
    }
    Ok(out)
}

/// `UM_ℕ(R)` restricted to finitely many nonzero superdiagonals, each eventually periodic.
#[derive(Debug, Clone)]
pub struct UMatRing {
    base: Ring,
    seq: SequenceRing,
    seq_ring: Ring,
}

pub type Bands = BTreeMap<usize, Sequence>;

fn bands_of(v: &Value) -> &Bands {
    match v {
        Value::Banded(b) => b,
        _ => panic!("banded payload expected"),
    }
}

impl UMatRing {
    pub fn new(base: Ring) -> Result<Self> {
        let seq = SequenceRing::new(base.clone())?;
        let seq_ring = Ring::new(seq.clone());
        Ok(UMatRing {
            base,
            seq,
            seq_ring,
        })
    }

    pub fn base(&self) -> &Ring {
        &self.base
    }

    /// `P(R)`, where the bands live.
    pub fn sequence_ring(&self) -> &Ring {
        &self.seq_ring
    }

    pub fn sequences(&self) -> &SequenceRing {
        &self.seq
    }

    /// Drops zero bands.
    pub fn banded(&self, bands: Bands) -> Value {
        Value::Banded(
            bands
                .into_iter()
                .filter(|(_, s)| !self.seq_ring.is_zero(&Value::Seq(s.clone()), FULL))
                .collect(),
        )
    }

    pub fn band(&self, v: &Value, d: usize) -> Sequence {
        bands_of(v)
            .get(&d)
            .cloned()
            .unwrap_or_else(|| self.seq.constant(self.base.zero()))
    }

    pub fn max_band(&self, v: &Value) -> Option<usize> {
        bands_of(v).keys().next_back().copied()
    }

    pub fn entry(&self, v: &Value, i: usize, j: usize) -> Value {
        if j < i {
            return self.base.zero();
        }
        match bands_of(v).get(&(j - i)) {
            Some(s) => s.get(i).clone(),
            None => self.base.zero(),
        }
    }

    /// The single-entry matrix `E` with `E(0,0) = 1`.
    pub fn corner_unit(&self) -> Value {
        let s = self
            .seq
            .make(vec![self.base.one()], vec![self.base.zero()])
            .expect("finite period");
        self.banded(BTreeMap::from([(0, s)]))
    }

    /// Ones on superdiagonal `d`.
    pub fn diagonal_ones(&self, d: usize) -> Value {
        self.banded(BTreeMap::from([(d, self.seq.constant(self.base.one()))]))
    }

    /// `σ` on bands: band 0 gets `M(0,0)` prepended, every other band gets a 0 prepended.
    pub fn shift_sigma(&self, v: &Value) -> Result<Value> {
        let out = bands_of(v)
            .iter()
            .map(|(&d, s)| {
                let head = if d == 0 { s.get(0).clone() } else { self.base.zero() };
                (d, self.seq.prepend(head, s))
            })
            .collect();
        Ok(self.banded(out))
    }

    pub fn to_lazy(&self, v: &Value) -> LazyMatrix {
        let bands = bands_of(v).clone();
        let keys: Vec<usize> = bands.keys().copied().collect();
        let zero = self.base.zero();
        let ks = keys.clone();
        LazyMatrix::new(
            &self.base,
            move |i, j| {
                if j < i {
                    return Ok(zero.clone());
                }
                Ok(bands
                    .get(&(j - i))
                    .map_or_else(|| zero.clone(), |s| s.get(i).clone()))
            },
            move |i| ks.iter().map(|d| i + d).collect(),
            true,
        )
        .with_col_support(move |j| keys.iter().filter(|&&d| d <= j).map(|d| j - d).collect())
    }

    fn seq_val(&self, s: &Sequence) -> Value {
        Value::Seq(s.clone())
    }
}

impl RingImpl for UMatRing {
    fn descriptor(&self) -> String {
        format!("UMat({})", self.base.id())
    }

    fn capabilities(&self) -> Capabilities {
        Capabilities::windowed(self.base.capabilities().characteristic)
    }

    fn zero(&self) -> Value {
        Value::Banded(BTreeMap::new())
    }

    fn one(&self) -> Value {
        self.diagonal_ones(0)
    }

    fn from_int(&self, n: &BigInt) -> Value {
        self.banded(BTreeMap::from([(0, self.seq.constant(self.base.from_int(n)))]))
    }

    fn add(&self, a: &Value, b: &Value) -> Result<Value> {
        let mut out = bands_of(a).clone();
        for (&d, s) in bands_of(b) {
            let sum = match out.get(&d) {
                Some(t) => self.seq.zip(t, s, |x, y| self.base.add(x, y))?,
                None => s.clone(),
            };
            out.insert(d, sum);
        }
        Ok(self.banded(out))
    }

    fn neg(&self, a: &Value) -> Result<Value> {
        let out = bands_of(a)
            .iter()
            .map(|(&d, s)| Ok((d, self.seq.map(s, |x| self.base.neg(x))?)))
            .collect::<Result<Bands>>()?;
        Ok(self.banded(out))
    }

    /// Band `d` of `MN` is `Σ_k M_k ⊙ shift^k(N_{d−k})`.
    fn mul(&self, a: &Value, b: &Value) -> Result<Value> {
        let mut out: Bands = BTreeMap::new();
        for (&k, mk) in bands_of(a) {
            for (&l, nl) in bands_of(b) {
                let shifted = self.seq.shift_by(nl, k);
                let prod = self.seq.zip(mk, &shifted, |x, y| self.base.mul(x, y))?;
                let d = k + l;
                let sum = match out.get(&d) {
                    Some(t) => self.seq.zip(t, &prod, |x, y| self.base.add(x, y))?,
                    None => prod,
                };
                out.insert(d, sum);
            }
        }
        Ok(self.banded(out))
    }

    /// Compares the `window×window` leading corner.
    fn equal(&self, a: &Value, b: &Value, window: usize) -> bool {
        let keys: std::collections::BTreeSet<usize> =
            bands_of(a).keys().chain(bands_of(b).keys()).copied().collect();
        keys.into_iter().filter(|&d| d < window).all(|d| {
            self.seq
                .window_eq(&self.band(a, d), &self.band(b, d), window - d)
        })
    }

    fn sample(&self, rng: &mut dyn RngCore) -> Value {
        let mut out = BTreeMap::new();
        for d in 0..=4 {
            if rng.gen_bool(0.5) {
                out.insert(d, self.seq.sample_seq(rng));
            }
        }
        self.banded(out)
    }

    fn contains(&self, v: &Value) -> bool {
        match v {
            Value::Banded(b) => b.values().all(|s| {
                self.seq.seq_contains(s) && !self.seq_ring.is_zero(&self.seq_val(s), FULL)
            }),
            _ => false,
        }
    }

    fn format(&self, a: &Value) -> String {
        let b = bands_of(a);
        if b.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = b
            .iter()
            .map(|(d, s)| format!("{d}: {}", self.seq.format_seq(s)))
            .collect();
        format!("band{{{}}}", parts.join(", "))
    }

    fn generators(&self) -> Vec<(String, Value)> {
        vec![
            ("E".into(), self.corner_unit()),
            ("S".into(), self.diagonal_ones(1)),
        ]
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}

pub fn umat_of(ring: &Ring) -> Result<&UMatRing> {
    ring.downcast::<UMatRing>()
        .ok_or_else(|| Error::Precondition(format!("`{}` is not UMat(..)", ring.id())))
}

/// Checks the shift endomorphism of `UMat(base)` on sampled banded matrices.
pub fn umat_shift_report(umat: &Ring, seed: u64, count: usize, window: usize) -> Result<Report> {
    let u = umat_of(umat)?;
    let mut rng = seeded_rng(seed);
    let pairs: Vec<(Value, Value)> = (0..count.max(1))
        .map(|_| (umat.sample(&mut rng), umat.sample(&mut rng)))
        .collect();
    let s = |v: &Value| u.shift_sigma(v);
    let mut report = Report::new("umat_shift", seed)
        .param("ring", umat.id())
        .param("count", pairs.len())
        .param("window", window);
    let mut law = |name: &str, f: &dyn Fn(&Value, &Value) -> Result<bool>| -> Result<()> {
        let bad = pairs
            .iter()
            .map(|(a, b)| f(a, b).map(|ok| (!ok).then_some((a, b))))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .next();
        let mut c = Check::new(name, bad.is_none()).with_window(window);
        if let Some((a, b)) = bad {
            c = c.with_witness(format!("({}, {})", umat.format(a), umat.format(b)));
        }
        report.push(c);
        Ok(())
    };
    law("additive", &|a, b| {
        Ok(umat.equal(&s(&umat.add(a, b)?)?, &umat.add(&s(a)?, &s(b)?)?, window))
    })?;
    law("multiplicative", &|a, b| {
        Ok(umat.equal(&s(&umat.mul(a, b)?)?, &umat.mul(&s(a)?, &s(b)?)?, window))
    })?;
    law("injective", &|a, b| {
        // σ(M) determines M: its corner of size w+1 contains M's corner of size w
        let differ = !umat.equal(a, b, window);
        Ok(!differ || !umat.equal(&s(a)?, &s(b)?, window + 1))
    })?;
    law("agrees with entry formula", &|a, _| {
        let lazy = umat_shift_sigma(&u.to_lazy(a))?;
        window_eq(&lazy, &u.to_lazy(&s(a)?), window)
    })?;
    report.push(
        Check::new("preserves 1", umat.equal(&s(&umat.one())?, &umat.one(), window))
            .with_window(window),
    );
    Ok(report)
}

/// `Series(P(base); shift; N)`, the target of θ.
pub fn theta_target(umat: &Ring, prec: usize) -> Result<Ring> {
    let u = umat_of(umat)?;
    SkewSeriesRing::new(sequence_shift(&u.seq_ring)?, prec)
}

/// `θ(M) = Σ_j (M(i,i+j))_i x^j`; bands at or past the precision are an error.
pub fn theta(umat: &Ring, m: &Value, prec: usize) -> Result<SkewSeries> {
    let u = umat_of(umat)?;
    if let Some(d) = u.max_band(m).filter(|&d| d >= prec) {
        return Err(Error::Precondition(format!(
            "band {d} does not fit precision {prec}"
        )));
    }
    theta_mod(umat, m, prec)
}

/// θ followed by truncation at `x^N`, a ring homomorphism onto the truncated series.
pub fn theta_mod(umat: &Ring, m: &Value, prec: usize) -> Result<SkewSeries> {
    let u = umat_of(umat)?;
    let target = theta_target(umat, prec)?;
    let coeffs = (0..prec).map(|d| Value::Seq(u.band(m, d))).collect();
    SkewSeries::new(&target, coeffs)
}

/// Inverse of θ on truncated series: coefficient `j` becomes band `j`.
pub fn theta_inverse(umat: &Ring, p: &SkewSeries) -> Result<Value> {
    let u = umat_of(umat)?;
    let s = series_ring_of(p.ring())?;
    s.base().ensure_same(&u.seq_ring)?;
    let bands = p
        .coeffs()
        .iter()
        .enumerate()
        .map(|(d, c)| {
            c.as_seq()
                .cloned()
                .map(|s| (d, s))
                .ok_or_else(|| Error::NotAnElement {
                    ring: u.seq_ring.id(),
                    detail: c.kind().into(),
                })
        })
        .collect::<Result<Bands>>()?;
    Ok(u.banded(bands))
}

/// θ additivity and multiplicativity on sampled banded pairs, with the band-by-band
/// convolution `Σ_k M_k ⊙ σ^k(N_{j−k})` checked against the entrywise product.
pub fn theta_report(
    umat: &Ring,
    seed: u64,
    count: usize,
    window: usize,
    prec: usize,
) -> Result<Report> {
    let u = umat_of(umat)?;
    let mut rng = seeded_rng(seed);
    let pairs: Vec<(Value, Value)> = (0..count.max(1))
        .map(|_| (umat.sample(&mut rng), umat.sample(&mut rng)))
        .collect();
    let mut report = Report::new("theta", seed)
        .param("ring", umat.id())
        .param("count", pairs.len())
        .param("window", window)
        .param("precision", prec);
    let mut failures: [Option<String>; 4] = Default::default();
    let show = |a: &Value, b: &Value| format!("({}, {})", umat.format(a), umat.format(b));
    for (a, b) in &pairs {
        let (ta, tb) = (theta_mod(umat, a, prec)?, theta_mod(umat, b, prec)?);
        let sum = theta_mod(umat, &umat.add(a, b)?, prec)?;
        if failures[0].is_none() && !sum.eq_within(&ta.add(&tb)?, window) {
            failures[0] = Some(show(a, b));
        }
        let prod = theta_mod(umat, &umat.mul(a, b)?, prec)?;
        let series_prod = series_mul(&ta, &tb)?;
        if failures[1].is_none() && !prod.eq_within(&series_prod, window) {
            failures[1] = Some(show(a, b));
        }
        // (MN)(i,i+j) entrywise from the lazy product versus the series coefficient
        let lazy = lazy_mul(&u.to_lazy(a), &u.to_lazy(b))?;
        'outer: for j in 0..prec {
            let coeff = series_prod.coeff(j).as_seq().unwrap().clone();
            for i in 0..window {
                if !u.base.equal(&lazy.entry(i, i + j)?, coeff.get(i), FULL) {
                    if failures[2].is_none() {
                        failures[2] = Some(format!("{} at ({i},{})", show(a, b), i + j));
                    }
                    break 'outer;
                }
            }
        }
        let back = theta_inverse(umat, &ta)?;
        if failures[3].is_none() && !umat.equal(&back, a, window) && u.max_band(a) < Some(prec) {
            failures[3] = Some(umat.format(a));
        }
    }
    for (name, f) in [
        "theta additive",
        "theta multiplicative",
        "series product matches entrywise product",
        "inverse recovers matrix",
    ]
    .into_iter()
    .zip(failures)
    {
        let mut c = Check::new(name, f.is_none())
            .with_window(window)
            .with_precision(prec);
        if let Some(w) = f {
            c = c.with_witness(w);
        }
        report.push(c);
    }
    Ok(report)
}

/// Pushes a one-sided inverse in `UMat(base)` through θ: builds `p = θ(M)`, its right inverse
/// `q`, checks `pq = qp = 1` and pulls both products back to matrices.
pub fn umat_direct_finiteness_demo_with(
    umat: &Ring,
    m: &Value,
    prec: usize,
    base_finiteness: BaseFiniteness,
) -> Result<Report> {
    let u = umat_of(umat)?;
    let base_df = match base_finiteness {
        BaseFiniteness::Asserted => true,
        BaseFiniteness::BruteForce { budget } => {
            crate::finiteness::directly_finite_brute(&u.base, budget)?.holds()
        }
    };
    if !base_df {
        return Err(Error::Precondition(format!(
            "{} is not directly finite",
            u.base.id()
        )));
    }
    let mut report = Report::new("umat_direct_finiteness", 0)
        .param("ring", umat.id())
        .param("precision", prec)
        .param("matrix", umat.format(m));
    report.push(Check::new("base directly finite", base_df));
    let p = theta(umat, m, prec)?;
    let q = right_inverse(&p)?;
    report.set_param("p", p.to_string());
    report.set_param("q", q.to_string());
    let pq = series_mul(&p, &q)?;
    let qp = series_mul(&q, &p)?;
    report.push(Check::new("pq = 1", pq.is_one()).with_precision(prec));
    report.push(Check::new("qp = 1", qp.is_one()).with_precision(prec));
    let qm = theta_inverse(umat, &q)?;
    let lazy_m = u.to_lazy(m);
    let lazy_q = u.to_lazy(&qm);
    let id = LazyMatrix::identity(&u.base);
    report.push(
        Check::new(
            "M*theta^-1(q) = I",
            window_eq(&lazy_mul(&lazy_m, &lazy_q)?, &id, prec)?,
        )
        .with_window(prec),
    );
    report.push(
        Check::new(
            "theta^-1(q)*M = I",
            window_eq(&lazy_mul(&lazy_q, &lazy_m)?, &id, prec)?,
        )
        .with_window(prec),
    );
    report.absorb(
        "series",
        direct_finiteness_instance(&p, &q, BaseFiniteness::Asserted)?,
    );
    Ok(report)
}

/// The demo for `M = I + (superdiagonal of ones)`.
pub fn umat_direct_finiteness_demo(
    base: &Ring,
    prec: usize,
    base_finiteness: BaseFiniteness,
) -> Result<Report> {
    let umat = Ring::new(UMatRing::new(base.clone())?);
    let u = umat_of(&umat)?;
    let m = umat.add(&umat.one(), &u.diagonal_ones(1))?;
    umat_direct_finiteness_demo_with(&umat, &m, prec, base_finiteness)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::make_ring;

    fn umat(spec: &str) -> Ring {
        make_ring(&format!("UMat({spec})")).unwrap()
    }

    #[test]
    fn superdiagonal_squared() {
        let u = umat("Z/4");
        let s = umat_of(&u).unwrap().to_lazy(&umat_of(&u).unwrap().diagonal_ones(1));
        let s2 = lazy_mul(&s, &s).unwrap();
        for i in 0..16 {
            for j in 0..16 {
                let expected = if j == i + 2 { 1 } else { 0 };
                assert_eq!(s2.entry(i, j).unwrap(), Value::int(expected), "({i},{j})");
            }
        }
        assert!(s2.support_soundness(1, 500, 64).unwrap());
    }

    #[test]
    fn isometry_identities() {
        for spec in ["Z/2", "Z/4", "Z"] {
            let base = make_ring(spec).unwrap();
            for w in [8, 16, 32] {
                let (a, _, rep) = isometry_witnesses(&base, w).unwrap();
                assert!(rep.passed(), "{spec} {w}: {rep}");
                assert_eq!(a.entry(3, 6).unwrap(), Value::int(1));
                assert_eq!(a.entry(3, 7).unwrap(), Value::int(0));
            }
        }
    }

    #[test]
    fn recovery_from_a() {
        let base = make_ring("Z/4").unwrap();
        let (a, b) = isometry_matrices(&base);
        let (x, y) = recover_coefficients(&a, &a, &b).unwrap();
        assert!(window_eq(&x, &LazyMatrix::identity(&base), 32).unwrap());
        assert!(window_eq(&y, &LazyMatrix::zero(&base), 32).unwrap());
        let z = LazyMatrix::zero(&base);
        let (x, y) = recover_coefficients(&z, &a, &b).unwrap();
        assert!(window_eq(&x, &z, 16).unwrap() && window_eq(&y, &z, 16).unwrap());
    }

    #[test]
    fn transpose_needs_column_support() {
        let base = make_ring("Z").unwrap();
        let m = LazyMatrix::new(&base, |_, _| Ok(Value::int(0)), |_| Vec::new(), false);
        assert!(transpose(&m).is_err());
    }

    #[test]
    fn shift_sigma_examples() {
        let u = umat("Z/2");
        let um = umat_of(&u).unwrap();
        let e = um.corner_unit();
        let se = um.shift_sigma(&e).unwrap();
        let lazy = um.to_lazy(&se);
        for i in 0..8 {
            for j in 0..8 {
                let expected = if i == j && i < 2 { 1 } else { 0 };
                assert_eq!(lazy.entry(i, j).unwrap(), Value::int(expected));
            }
        }
        assert!(u.equal(&um.shift_sigma(&u.one()).unwrap(), &u.one(), 16));
        let rep = umat_shift_report(&u, 0, 50, 16).unwrap();
        assert!(rep.passed(), "{rep}");
    }

    #[test]
    fn shift_sigma_lazy_matches_banded() {
        let u = umat("Z/4");
        let um = umat_of(&u).unwrap();
        let e = um.to_lazy(&um.corner_unit());
        let se = umat_shift_sigma(&e).unwrap();
        assert_eq!(se.entry(1, 1).unwrap(), Value::int(1));
        assert_eq!(se.entry(0, 0).unwrap(), Value::int(1));
        assert_eq!(se.entry(2, 2).unwrap(), Value::int(0));
    }

    #[test]
    fn theta_examples() {
        let u = umat("Z/2");
        let um = umat_of(&u).unwrap();
        let te = theta(&u, &um.corner_unit(), 4).unwrap();
        let seqs = um.sequences();
        let e0 = seqs.make(vec![Value::int(1)], vec![Value::int(0)]).unwrap();
        assert_eq!(te.coeff(0), &Value::Seq(e0));
        let s = um.diagonal_ones(1);
        let ts = theta(&u, &s, 8).unwrap();
        let ones = Value::Seq(seqs.constant(Value::int(1)));
        assert_eq!(ts.coeff(1), &ones);
        let ss = theta(&u, &u.mul(&s, &s).unwrap(), 8).unwrap();
        assert!(ss.eq_within(&series_mul(&ts, &ts).unwrap(), 8));
        assert_eq!(ss.coeff(2), &ones);
        assert!(theta(&u, &um.diagonal_ones(5), 4).is_err());
    }

    #[test]
    fn theta_is_a_homomorphism() {
        for spec in ["Z/2", "Z/4", "Z"] {
            let rep = theta_report(&umat(spec), 0, 25, 16, 8).unwrap();
            assert!(rep.passed(), "{spec}: {rep}");
        }
    }

    #[test]
    fn direct_finiteness_demo() {
        let z2 = make_ring("Z/2").unwrap();
        let rep = umat_direct_finiteness_demo(&z2, 8, BaseFiniteness::BruteForce { budget: 100 })
            .unwrap();
        assert!(rep.passed(), "{rep}");
        let z = make_ring("Z").unwrap();
        let rep = umat_direct_finiteness_demo(&z, 8, BaseFiniteness::Asserted).unwrap();
        assert!(rep.passed(), "{rep}");
    }
}
