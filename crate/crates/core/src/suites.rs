//! Named verification suites. Each runs a group of checks with seeded sampling and returns
//! a [`Report`]; `all` runs every suite back to back.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::finiteness::{one_sided_inverse_demo_with, skew_poly_finiteness_demo};
use crate::free::{free_of, independence_exhaustive, MonomialOreIso};
use crate::lazy::{
    lazy_add, lazy_mul, isometry_witnesses, recover_coefficients, theta, theta_report,
    umat_direct_finiteness_demo, umat_of, umat_shift_report, window_eq, LazyMatrix, UMatRing,
    ISOMETRY_WINDOW,
};
use crate::modmap::{
    apply_map, bounded_degree_kernel, brute_injective, brute_surjective, int_vector,
    kernel_lift_map, kernel_lift_witness, search_epi, search_mono, ModuleMap, SearchMode, Side,
};
use crate::morphism::{builtin_morphisms, check_endomorphism, poly_y_negate};
use crate::ore::{
    from_right_coefficients, kernel_sigma_power_check, min_filtration_shift, ore_mul,
    right_coefficients, weyl_ring_n, Filtration, OrePoly, OreRing,
};
use crate::report::{Check, Report};
use crate::ring::laurent::square_substitution_not_surjective;
use crate::ring::{make_ring, seeded_rng, MatrixRing, Ring, DEFAULT_WINDOW, FULL};
use crate::series::{
    direct_finiteness_instance, idempotent_constant_one_solve, idempotents_constant_one_brute,
    matrix_series_iso, matrix_series_iso_inverse, right_inverse, series_matrix_from_value,
    series_matrix_value, series_mul, series_ring_of, BaseFiniteness, SkewSeries,
};
use crate::value::Value;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteParams {
    pub seed: u64,
    pub window: usize,
    pub prec: usize,
    pub count: usize,
    /// Replaces the default coefficient rings of suites that take one.
    pub base: Option<String>,
    pub budget: u64,
}

impl Default for SuiteParams {
    fn default() -> Self {
        SuiteParams {
            seed: 0,
            window: DEFAULT_WINDOW,
            prec: 8,
            count: 100,
            base: None,
            budget: crate::finiteness::DEFAULT_BUDGET,
        }
    }
}

type SuiteFn = fn(&SuiteParams) -> Result<Report>;

/// Name, one-line description and runner of every suite, in `all` order.
pub const SUITES: &[(&str, &str, SuiteFn)] = &[
    ("weyl", "xy - yx = 1 in Weyl rings over Z and Z/2, iterated Weyl rings", weyl),
    (
        "one_sided_inverse",
        "xy = 1, yx != 1 in Z[y][x; const_term, coeff_shift]",
        one_sided_inverse,
    ),
    (
        "kernel_powers",
        "x^i a^i collapses to the coefficient ring when sigma(a) = 0",
        kernel_powers,
    ),
    (
        "right_coefficients",
        "left and right coefficient forms under a sigma automorphism",
        right_coefficients_suite,
    ),
    ("filtration", "the degree filtration of Ore rings", filtration),
    (
        "idempotents",
        "the only idempotent series with constant term 1 is 1",
        idempotents,
    ),
    (
        "skew_finiteness",
        "pq = 1 forces qp = 1 for skew series over directly finite rings",
        skew_finiteness,
    ),
    (
        "matrix_series",
        "M2(R[[x;s]]) and M2(R)[[x;s]] agree entrywise",
        matrix_series,
    ),
    (
        "corner_witnesses",
        "orthogonal isometries A, B of UMat and coefficient recovery",
        corner_witnesses,
    ),
    ("umat_shift", "the shift endomorphism of UMat", umat_shift),
    ("theta", "UMat(R) as skew series over P(R)", theta_suite),
    (
        "umat_finiteness",
        "one-sided inverses in UMat via theta and series inversion",
        umat_finiteness,
    ),
    (
        "monomial_quotient",
        "Z<u,v,x>/(xu, xv) and its Ore presentation",
        monomial_quotient,
    ),
    (
        "free_independence",
        "au + bv = 0 only for a = b = 0 in Z<u,v>",
        free_independence,
    ),
    (
        "rank_search",
        "exhaustive searches for monomorphisms and epimorphisms between free modules",
        rank_search,
    ),
    (
        "kernel_lift",
        "nonzero kernel elements of maps over Ore rings from base kernels",
        kernel_lift,
    ),
];

pub fn suite_names() -> impl Iterator<Item = &'static str> {
    SUITES.iter().map(|(n, _, _)| *n)
}

pub fn run_suite(name: &str, params: &SuiteParams) -> Result<Report> {
    if name == "all" {
        return run_all(params);
    }
    let (_, _, f) = SUITES
        .iter()
        .find(|(n, _, _)| *n == name)
        .ok_or_else(|| Error::UnsupportedParameter(format!("unknown suite `{name}`")))?;
    let mut report = f(params)?;
    report.suite = name.to_string();
    report.seed = params.seed;
    Ok(report)
}

fn run_all(params: &SuiteParams) -> Result<Report> {
    let mut all = Report::new("all", params.seed);
    for name in suite_names() {
        let r = run_suite(name, params)?;
        all.set_param(
            name,
            serde_json::to_value(&r.parameters).expect("parameters serialize"),
        );
        all.absorb(name, r);
    }
    Ok(all)
}

fn bases(p: &SuiteParams, defaults: &[&str]) -> Result<Vec<Ring>> {
    match &p.base {
        Some(b) => Ok(vec![make_ring(b)?]),
        None => defaults.iter().map(|s| make_ring(s)).collect(),
    }
}

fn header(name: &str, p: &SuiteParams) -> Report {
    Report::new(name, p.seed)
        .param("window", p.window)
        .param("precision", p.prec)
        .param("count", p.count)
}

fn weyl(p: &SuiteParams) -> Result<Report> {
    let mut rep = header("weyl", p);
    for base in bases(p, &["Z", "Z/2"])? {
        let w = weyl_ring_n(&base, 1)?;
        let tag = format!("W1({})", base.id());
        rep.absorb(&tag, crate::ore::weyl_relation_check(&w, p.seed, p.count));
        let r = &w.ring;
        let x = w.generator("x").expect("x");
        let y = w.generator("y").expect("y");
        let x3 = r.pow(&x, 3)?;
        let lhs = r.sub(&r.mul(&x3, &y)?, &r.mul(&y, &x3)?)?;
        let rhs = r.mul(&r.int(3), &r.pow(&x, 2)?)?;
        rep.push(
            Check::new(format!("{tag}/x^3*y - y*x^3 = 3*x^2"), r.equal(&lhs, &rhs, FULL))
                .with_witness(r.format(&lhs)),
        );
    }
    let z = make_ring("Z")?;
    for n in 2..=3 {
        let w = weyl_ring_n(&z, n)?;
        rep.absorb(&format!("W{n}(Z)"), crate::ore::weyl_relation_check(&w, p.seed, p.count));
    }
    Ok(rep)
}

fn one_sided_inverse(p: &SuiteParams) -> Result<Report> {
    let mut rep = one_sided_inverse_demo_with(p.seed, p.count.max(200))?;
    rep.suite = "one_sided_inverse".into();
    Ok(rep)
}

fn one_sided_ring() -> Result<Ring> {
    OreRing::from_names(&make_ring("Poly(Z,y)")?, "const_term", Some("coeff_shift"))
}

fn y_power(k: usize) -> Value {
    let mut c = vec![Value::int(0); k];
    c.push(Value::int(1));
    Value::List(c)
}

fn kernel_powers(p: &SuiteParams) -> Result<Report> {
    let s = one_sided_ring()?;
    let mut rep = header("kernel_powers", p).param("ring", s.id());
    let one = OrePoly::constant(&s, y_power(0))?;
    let y = y_power(1);
    for i in 1..=8 {
        let k = kernel_sigma_power_check(&s, &y, i)?;
        rep.push(
            Check::new(format!("x^{i}*y^{i} = 1"), k.in_base && k.value == one)
                .with_witness(k.value.to_string()),
        );
    }
    // x²y² = x(xy)y
    let x = OrePoly::x(&s)?;
    let yp = OrePoly::constant(&s, y.clone())?;
    let chain = ore_mul(&ore_mul(&x, &ore_mul(&x, &yp)?)?, &yp)?;
    let direct = ore_mul(
        &OrePoly::monomial(&s, y_power(0), 2)?,
        &OrePoly::constant(&s, y_power(2))?,
    )?;
    rep.push(Check::new("x*(x*y)*y = x^2*y^2 = 1", chain == direct && direct == one));
    // a = y + y² is also killed by σ
    let a = Value::List(vec![Value::int(0), Value::int(1), Value::int(1)]);
    let all_in_base = (1..=6).try_fold(true, |ok, i| {
        kernel_sigma_power_check(&s, &a, i).map(|k| ok && k.in_base)
    })?;
    rep.push(Check::new("x^i*(y + y^2)^i has degree 0 for i <= 6", all_in_base));
    let rejected = matches!(
        kernel_sigma_power_check(&s, &y_power(0), 1),
        Err(Error::Precondition(_))
    );
    rep.push(Check::new("elements outside ker sigma are rejected", rejected));
    Ok(rep)
}

fn right_coefficients_suite(p: &SuiteParams) -> Result<Report> {
    let zy = make_ring("Poly(Z,y)")?;
    let m2 = make_ring("M2(Z/2)")?;
    let rings = [
        OreRing::skew(poly_y_negate(&zy)?)?,
        weyl_ring_n(&make_ring("Z")?, 1)?.ring,
        OreRing::from_names(&m2, "inner", None)?,
    ];
    let mut rep = header("right_coefficients", p);
    let mut rng = seeded_rng(p.seed);
    for s in &rings {
        let base = ore_of_base(s)?;
        let (mut spans, mut unique) = (None, None);
        for _ in 0..p.count.max(1) {
            let q = OrePoly::from_value(s, &s.sample(&mut rng))?;
            let rc = right_coefficients(&q)?;
            if spans.is_none() && from_right_coefficients(s, &rc)? != q {
                spans = Some(q.to_string());
            }
            let coeffs: Vec<Value> = (0..rng_len(&mut rng)).map(|_| base.sample(&mut rng)).collect();
            let back = right_coefficients(&from_right_coefficients(s, &coeffs)?)?;
            let same = (0..coeffs.len().max(back.len())).all(|i| {
                let z = base.zero();
                base.equal(coeffs.get(i).unwrap_or(&z), back.get(i).unwrap_or(&z), FULL)
            });
            if unique.is_none() && !same {
                unique = Some(format!("{coeffs:?}"));
            }
        }
        for (name, failure) in [("every element is sum x^i s_i", spans), ("right coefficients are unique", unique)] {
            let mut c = Check::new(format!("{}/{name}", s.id()), failure.is_none());
            if let Some(w) = failure {
                c = c.with_witness(w);
            }
            rep.push(c);
        }
    }
    let no_inverse = OreRing::from_names(&zy, "const_term", None)?;
    rep.push(Check::new(
        "non-invertible sigma is rejected",
        matches!(
            right_coefficients(&OrePoly::x(&no_inverse)?),
            Err(Error::NoInverse(_))
        ),
    ));
    let laurent = make_ring("Laurent(Z/5,prec=6)")?;
    rep.absorb(
        "laurent_square",
        square_substitution_not_surjective(&laurent, p.seed, p.count)?,
    );
    Ok(rep)
}

fn rng_len(rng: &mut impl rand::Rng) -> usize {
    rng.gen_range(0..=4)
}

fn ore_of_base(s: &Ring) -> Result<Ring> {
    Ok(crate::ore::ore_of(s)?.base().clone())
}

fn filtration(p: &SuiteParams) -> Result<Report> {
    let zy = make_ring("Poly(Z,y)")?;
    let rings = [
        one_sided_ring()?,
        weyl_ring_n(&make_ring("Z")?, 1)?.ring,
        OreRing::skew(poly_y_negate(&zy)?)?,
    ];
    let mut rep = header("filtration", p);
    for s in &rings {
        rep.absorb(&s.id(), Filtration::canonical(s)?.check_axioms(p.seed, p.count));
    }
    // l = floor(nk/(m−n)) is the least l with n(k+l+1) < m(l+1)
    let mut bad = None;
    for m in 2..=8u64 {
        for n in 1..m {
            for k in 0..=8u64 {
                let l = min_filtration_shift(n, m, k)?;
                let holds = |l: u64| n * (k + l + 1) < m * (l + 1);
                if bad.is_none() && !(holds(l) && (l == 0 || !holds(l - 1))) {
                    bad = Some(format!("n={n}, m={m}, k={k}, l={l}"));
                }
            }
        }
    }
    let mut c = Check::new("filtration shift is least with n(k+l+1) < m(l+1)", bad.is_none());
    if let Some(w) = bad {
        c = c.with_witness(w);
    }
    rep.push(c);
    Ok(rep)
}

fn series_ring(base: &str, sigma: &str, prec: usize) -> Result<Ring> {
    make_ring(&format!("Series({base};sigma={sigma};prec={prec})"))
}

fn idempotents(p: &SuiteParams) -> Result<Report> {
    let mut rep = header("idempotents", p);
    for (base, sigma, prec) in [("Z/2", "id", 3), ("Z/4", "id", 4)] {
        let s = series_ring(base, sigma, prec)?;
        let found = idempotents_constant_one_brute(&s, p.budget)?;
        let ok = found.len() == 1 && found[0].is_one();
        rep.push(
            Check::new(format!("{}: exhaustive search finds only 1", s.id()), ok).with_witness(
                format!(
                    "{} idempotent(s) among {} candidates",
                    found.len(),
                    s.cardinality().map_or(0, |c| {
                        let b = series_ring_of(&s).unwrap().base().cardinality().unwrap();
                        u64::try_from(c / b).unwrap_or(u64::MAX)
                    })
                ),
            ),
        );
    }
    for (base, sigma) in [("Z/4", "id"), ("P(Z/2)", "shift"), ("Z", "id")] {
        let s = series_ring(base, sigma, p.prec)?;
        let solve = idempotent_constant_one_solve(&s)?;
        let forced_zero = solve
            .steps
            .iter()
            .all(|st| series_ring_of(&s).unwrap().base().is_zero(&st.forced, DEFAULT_WINDOW));
        rep.push(
            Check::new(format!("{}: coefficientwise solve gives 1", s.id()), solve.is_one() && forced_zero)
                .with_precision(p.prec),
        );
    }
    Ok(rep)
}

fn skew_finiteness(p: &SuiteParams) -> Result<Report> {
    let brute = BaseFiniteness::BruteForce { budget: p.budget };
    let configs: Vec<(Ring, &str, BaseFiniteness)> = match &p.base {
        Some(b) => {
            let r = make_ring(b)?;
            let bf = if r.cardinality().is_some() {
                brute
            } else {
                BaseFiniteness::Asserted
            };
            vec![(r, "id", bf)]
        }
        None => vec![
            (make_ring("Z/4")?, "id", brute),
            (make_ring("P(Z/2)")?, "shift", BaseFiniteness::Asserted),
            (make_ring("M2(Z/2)")?, "id", brute),
            (make_ring("M2(Z/2)")?, "inner", brute),
        ],
    };
    let mut rep = header("skew_finiteness", p);
    for (base, sigma, bf) in configs {
        let sigma = builtin_morphisms(sigma, &base)?.into_endo()?;
        let tag = format!("{}[[x;{}]]", base.id(), sigma.name());
        rep.absorb(
            &tag,
            skew_poly_finiteness_demo(&sigma, p.prec, p.seed, p.count, bf)?,
        );
    }
    // p = 1 + 2x over Z/4: 2 is nilpotent, q = 1 − 2x
    let s = series_ring("Z/4", "id", p.prec)?;
    let pp = SkewSeries::new(&s, vec![Value::int(1), Value::int(2)])?;
    let q = right_inverse(&pp)?;
    rep.absorb("1+2x over Z/4", direct_finiteness_instance(&pp, &q, brute)?);
    let one = SkewSeries::new(&s, vec![Value::int(1)])?;
    rep.push(Check::new("right inverse of 1 is 1", right_inverse(&one)?.is_one()));
    Ok(rep)
}

fn sample_series_matrix(s: &Ring, rng: &mut impl rand::Rng) -> Result<Vec<Vec<SkewSeries>>> {
    (0..2)
        .map(|_| {
            (0..2)
                .map(|_| SkewSeries::from_value(s, &s.sample(rng)))
                .collect()
        })
        .collect()
}

fn matrix_series(p: &SuiteParams) -> Result<Report> {
    let mut rep = header("matrix_series", p);
    let mut rng = seeded_rng(p.seed);
    for (base, sigma) in [("Z/2", "id"), ("P(Z/2)", "shift")] {
        let s = series_ring(base, sigma, p.prec)?;
        let m2 = Ring::new(MatrixRing::new(s.clone(), 2));
        let (mut mult, mut add, mut inv) = (None, None, None);
        for _ in 0..p.count.max(1) {
            let a = sample_series_matrix(&s, &mut rng)?;
            let b = sample_series_matrix(&s, &mut rng)?;
            let (av, bv) = (series_matrix_value(&a), series_matrix_value(&b));
            let ab = series_matrix_from_value(&s, 2, &m2.mul(&av, &bv)?)?;
            let sum = series_matrix_from_value(&s, 2, &m2.add(&av, &bv)?)?;
            let (ia, ib) = (matrix_series_iso(&a)?, matrix_series_iso(&b)?);
            if mult.is_none() && !matrix_series_iso(&ab)?.eq_within(&series_mul(&ia, &ib)?, p.window)
            {
                mult = Some(m2.format(&av));
            }
            if add.is_none() && !matrix_series_iso(&sum)?.eq_within(&ia.add(&ib)?, p.window) {
                add = Some(m2.format(&av));
            }
            let back = series_matrix_value(&matrix_series_iso_inverse(&ia, &s)?);
            if inv.is_none() && !m2.equal(&back, &av, p.window) {
                inv = Some(m2.format(&av));
            }
        }
        for (name, failure) in [
            ("respects products", mult),
            ("respects sums", add),
            ("inverse recovers matrix", inv),
        ] {
            let mut c = Check::new(format!("{}/{name}", s.id()), failure.is_none())
                .with_precision(p.prec);
            if let Some(w) = failure {
                c = c.with_witness(w);
            }
            rep.push(c);
        }
    }
    Ok(rep)
}

fn corner_witnesses(p: &SuiteParams) -> Result<Report> {
    let mut rep = header("corner_witnesses", p).param("identity_window", ISOMETRY_WINDOW);
    let mut rng = seeded_rng(p.seed);
    for base in bases(p, &["Z/2", "Z/4", "Z"])? {
        let tag = base.id();
        let (a, b, r) = isometry_witnesses(&base, ISOMETRY_WINDOW)?;
        rep.absorb(&tag, r);
        rep.push(Check::new(
            format!("{tag}/A(3,6) = 1, A(3,7) = 0"),
            base.equal(&a.entry(3, 6)?, &base.one(), FULL)
                && base.is_zero(&a.entry(3, 7)?, FULL),
        ));
        let id = LazyMatrix::identity(&base);
        let zero = LazyMatrix::zero(&base);
        let (x, y) = recover_coefficients(&a, &a, &b)?;
        rep.push(
            Check::new(
                format!("{tag}/Z = A recovers (I, 0)"),
                window_eq(&x, &id, ISOMETRY_WINDOW)? && window_eq(&y, &zero, ISOMETRY_WINDOW)?,
            )
            .with_window(ISOMETRY_WINDOW),
        );
        let (x, y) = recover_coefficients(&zero, &a, &b)?;
        rep.push(
            Check::new(
                format!("{tag}/Z = 0 recovers (0, 0)"),
                window_eq(&x, &zero, p.window)? && window_eq(&y, &zero, p.window)?,
            )
            .with_window(p.window),
        );
        let umat = Ring::new(UMatRing::new(base.clone())?);
        let u = umat_of(&umat)?;
        let mut failure = None;
        for _ in 0..p.count.max(1) {
            let (xv, yv) = (umat.sample(&mut rng), umat.sample(&mut rng));
            let (xl, yl) = (u.to_lazy(&xv), u.to_lazy(&yv));
            let z = lazy_add(&lazy_mul(&xl, &a)?, &lazy_mul(&yl, &b)?)?;
            let (x2, y2) = recover_coefficients(&z, &a, &b)?;
            if failure.is_none()
                && !(window_eq(&x2, &xl, p.window)? && window_eq(&y2, &yl, p.window)?)
            {
                failure = Some(format!("X = {}, Y = {}", umat.format(&xv), umat.format(&yv)));
            }
        }
        let mut c = Check::new(format!("{tag}/XA + YB recovers (X, Y)"), failure.is_none())
            .with_window(p.window);
        if let Some(w) = failure {
            c = c.with_witness(w);
        }
        rep.push(c);
    }
    Ok(rep)
}

fn umat_shift(p: &SuiteParams) -> Result<Report> {
    let mut rep = header("umat_shift", p);
    for base in bases(p, &["Z/2", "Z/4"])? {
        let umat = Ring::new(UMatRing::new(base.clone())?);
        let u = umat_of(&umat)?;
        rep.absorb(&umat.id(), umat_shift_report(&umat, p.seed, p.count, p.window)?);
        // σ(E) = diag(1, 1, 0, 0, …)
        let se = u.shift_sigma(&u.corner_unit())?;
        let ok = (0..p.window).all(|i| {
            (0..p.window).all(|j| {
                let want = if i == j && i < 2 { base.one() } else { base.zero() };
                base.equal(&u.entry(&se, i, j), &want, FULL)
            })
        });
        rep.push(
            Check::new(format!("{}/sigma(E) = diag(1,1,0,...)", umat.id()), ok)
                .with_window(p.window)
                .with_witness(umat.format(&se)),
        );
    }
    Ok(rep)
}

fn theta_suite(p: &SuiteParams) -> Result<Report> {
    let mut rep = header("theta", p);
    for base in bases(p, &["Z/2", "Z/4"])? {
        let umat = Ring::new(UMatRing::new(base.clone())?);
        let u = umat_of(&umat)?;
        let tag = umat.id();
        rep.absorb(&tag, theta_report(&umat, p.seed, p.count, p.window, p.prec)?);
        let seqs = u.sequence_ring();
        let ones = Value::Seq(u.sequences().constant(base.one()));
        let s = u.diagonal_ones(1);
        let ts = theta(&umat, &s, p.prec)?;
        let want: Vec<Value> = (0..p.prec)
            .map(|k| if k == 1 { ones.clone() } else { seqs.zero() })
            .collect();
        let matches = |t: &SkewSeries, want: &[Value]| {
            t.coeffs().iter().zip(want).all(|(a, b)| seqs.equal(a, b, p.window))
        };
        rep.push(
            Check::new(format!("{tag}/theta(superdiagonal) = (1,1,...)x"), matches(&ts, &want))
                .with_window(p.window),
        );
        let ss = umat.mul(&s, &s)?;
        let want2: Vec<Value> = (0..p.prec)
            .map(|k| if k == 2 { ones.clone() } else { seqs.zero() })
            .collect();
        let sq = series_mul(&ts, &ts)?;
        rep.push(
            Check::new(
                format!("{tag}/theta(S*S) = theta(S)^2 = (1,1,...)x^2"),
                matches(&theta(&umat, &ss, p.prec)?, &want2) && matches(&sq, &want2),
            )
            .with_window(p.window),
        );
        let te = theta(&umat, &u.corner_unit(), p.prec)?;
        let e0 = te.coeff(0).as_seq().expect("sequence").clone();
        let ok = base.equal(e0.get(0), &base.one(), FULL)
            && (1..p.window).all(|i| base.is_zero(e0.get(i), FULL))
            && te.coeffs()[1..].iter().all(|c| seqs.is_zero(c, p.window));
        rep.push(Check::new(format!("{tag}/theta(E) = (1,0,0,...)"), ok).with_window(p.window));
    }
    Ok(rep)
}

fn umat_finiteness(p: &SuiteParams) -> Result<Report> {
    let mut rep = header("umat_finiteness", p);
    let configs = match &p.base {
        Some(b) => vec![b.as_str()],
        None => vec!["Z/2", "Z"],
    };
    for b in configs {
        let base = make_ring(b)?;
        let bf = if base.cardinality().is_some() {
            BaseFiniteness::BruteForce { budget: p.budget }
        } else {
            BaseFiniteness::Asserted
        };
        let r = umat_direct_finiteness_demo(&base, p.prec, bf)?;
        rep.set_param(&format!("q over {b}"), r.parameters["q"].clone());
        rep.absorb(&format!("UMat({b})"), r);
    }
    // over Z, q = θ(I + S)⁻¹ has coefficients (−1)^k (1,1,…)
    let umat = make_ring("UMat(Z)")?;
    let u = umat_of(&umat)?;
    let m = umat.add(&umat.one(), &u.diagonal_ones(1))?;
    let q = right_inverse(&theta(&umat, &m, p.prec)?)?;
    let seqs = u.sequence_ring();
    let ok = q.coeffs().iter().enumerate().all(|(k, c)| {
        let sign = if k % 2 == 0 { 1 } else { -1 };
        let want = Value::Seq(u.sequences().constant(Value::int(sign)));
        seqs.equal(c, &want, p.window)
    });
    rep.push(
        Check::new("UMat(Z)/q coefficients alternate in sign", ok)
            .with_precision(p.prec)
            .with_window(p.window),
    );
    Ok(rep)
}

fn monomial_quotient(p: &SuiteParams) -> Result<Report> {
    let iso = MonomialOreIso::new()?;
    let s = &iso.quotient;
    let f = free_of(s)?;
    let mut rep = header("monomial_quotient", p).param("ring", s.id());
    let el = |w: &str| f.element(&[(1, w)]);
    let (x, u, v) = (el("x")?, el("u")?, el("v")?);
    rep.push(Check::new("xu = 0", s.is_zero(&el("xu")?, FULL)));
    rep.push(Check::new("xv = 0", s.is_zero(&s.mul(&x, &v)?, FULL)));
    rep.push(Check::new("x*uv = 0", s.is_zero(&s.mul(&x, &el("uv")?)?, FULL)));
    let ux = s.mul(&u, &x)?;
    rep.push(Check::new("u*x = ux", s.equal(&ux, &el("ux")?, FULL) && !s.is_zero(&ux, FULL)));

    // x·w = 0 for nonempty w ∈ {u,v}^{≤4}; x·c = c·x
    let mut words = vec![String::new()];
    let mut bad = None;
    for _ in 0..4 {
        words = words
            .iter()
            .flat_map(|w| [format!("{w}u"), format!("{w}v")])
            .collect();
        for w in &words {
            if bad.is_none() && !s.is_zero(&s.mul(&x, &el(w)?)?, FULL) {
                bad = Some(w.clone());
            }
        }
    }
    let mut c = Check::new("x*w = 0 for every nonempty word w of length <= 4", bad.is_none());
    if let Some(w) = bad {
        c = c.with_witness(w);
    }
    rep.push(c);
    let three = s.int(3);
    rep.push(Check::new(
        "x*3 = 3*x",
        s.equal(&s.mul(&x, &three)?, &s.mul(&three, &x)?, FULL),
    ));

    // normal forms do not depend on the order of rewriting
    let mut rng = seeded_rng(p.seed);
    let mut order_bad = None;
    for _ in 0..p.count.max(1) {
        let len = rand::Rng::gen_range(&mut rng, 0..=6usize);
        let w = crate::free::Word(
            (0..len)
                .map(|_| rand::Rng::gen_range(&mut rng, 0..3u8))
                .collect(),
        );
        if order_bad.is_none()
            && f.rules().normal_form(&w) != f.rules().normal_form_randomized(&w, &mut rng)
        {
            order_bad = Some(f.spell(&w));
        }
    }
    let mut c = Check::new("normal forms are independent of rewrite order", order_bad.is_none());
    if let Some(w) = order_bad {
        c = c.with_witness(w);
    }
    rep.push(c);

    let r = &iso.coefficients;
    let sigma = free_of(r)?.const_term_endo(r)?;
    let sample = f.element(&[(3, "uv"), (1, "u"), (2, "")])?;
    let sample = crate::free::free_of(r)?.transport(f, &sample)?;
    rep.push(Check::new(
        "sigma(3uv + u + 2) = 2",
        r.equal(&sigma.apply(&sample)?, &r.int(2), FULL),
    ));
    rep.absorb("sigma", check_endomorphism(&sigma, p.seed, p.count.max(200)));

    // S ≅ R[x;σ]
    let mut iso_bad: [Option<String>; 3] = Default::default();
    for _ in 0..p.count.max(1) {
        let a = s.sample(&mut rng);
        let b = s.sample(&mut rng);
        let (ia, ib) = (iso.to_ore(&a)?, iso.to_ore(&b)?);
        let show = || format!("({}, {})", s.format(&a), s.format(&b));
        if iso_bad[0].is_none() && iso.to_ore(&s.mul(&a, &b)?)? != ore_mul(&ia, &ib)? {
            iso_bad[0] = Some(show());
        }
        if iso_bad[1].is_none() && iso.to_ore(&s.add(&a, &b)?)? != ia.add(&ib)? {
            iso_bad[1] = Some(show());
        }
        if iso_bad[2].is_none() && !s.equal(&iso.from_ore(&ia)?, &a, FULL) {
            iso_bad[2] = Some(show());
        }
    }
    for (name, failure) in [
        "iso respects products",
        "iso respects sums",
        "iso inverse recovers element",
    ]
    .into_iter()
    .zip(iso_bad)
    {
        let mut c = Check::new(name, failure.is_none());
        if let Some(w) = failure {
            c = c.with_witness(w);
        }
        rep.push(c);
    }
    let uvx2 = iso.to_ore(&el("uvxx")?)?;
    let want = OrePoly::monomial(&iso.ore, free_of(r)?.element(&[(1, "uv")])?, 2)?;
    rep.push(Check::new("uvx^2 maps to (uv)x^2", uvx2 == want));
    let xu = ore_mul(&OrePoly::x(&iso.ore)?, &iso.to_ore(&u)?)?;
    rep.push(Check::new("x*u = 0 in R[x;sigma]", xu.is_zero()));
    Ok(rep)
}

fn free_independence(p: &SuiteParams) -> Result<Report> {
    let r = make_ring("Free(u,v)")?;
    let mut rep = independence_exhaustive(&r, 2)?;
    rep.suite = "free_independence".into();
    let f = free_of(&r)?;
    let a = f.element(&[(1, "v")])?;
    let b = f.element(&[(-1, "u")])?;
    let c = crate::free::left_independence_uv(&r, &a, &b)?;
    rep.push(
        Check::new("v*u - u*v != 0", !c.combination_is_zero).with_witness(r.format(&c.combination)),
    );
    let _ = p;
    Ok(rep)
}

fn rank_search(p: &SuiteParams) -> Result<Report> {
    let mut rep = header("rank_search", p).param("budget", p.budget);
    for r in bases(p, &["Z/2", "Z/3"])? {
        for side in [Side::Left, Side::Right] {
            let tag = format!("{}/{side}", r.id());
            let ex = SearchMode::Exhaustive;
            for n in 1..=2 {
                let mono = search_mono(&r, n + 1, n, side, ex, p.budget)?;
                rep.push(Check::new(
                    format!("{tag}: no mono R^{} -> R^{n}", n + 1),
                    mono.is_definitive_none(),
                ));
                let epi = search_epi(&r, n, n + 1, side, ex, p.budget)?;
                rep.push(Check::new(
                    format!("{tag}: no epi R^{n} -> R^{}", n + 1),
                    epi.is_definitive_none(),
                ));
            }
            let inclusion = search_mono(&r, 1, 2, side, ex, p.budget)?;
            let ok = inclusion
                .found()
                .is_some_and(|f| f.entries() == [r.one(), r.zero()]);
            let mut c = Check::new(format!("{tag}: coordinate inclusion R^1 -> R^2 is mono"), ok);
            if let Some(f) = inclusion.found() {
                c = c.with_witness(f.format_matrix());
            }
            rep.push(c);
        }
    }
    let z2 = make_ring("Z/2")?;
    let diag = ModuleMap::from_rows(&z2, vec![int_vector(&[1]), int_vector(&[1])], Side::Right)?;
    let inj = brute_injective(&diag, p.budget)?;
    let surj = brute_surjective(&diag, p.budget)?;
    rep.push(Check::new(
        "Z/2: r -> (r,r) injective, misses (1,0)",
        inj.injective && surj.unreached == Some(int_vector(&[1, 0])),
    ));
    let z4 = make_ring("Z/4")?;
    let dbl = ModuleMap::from_rows(&z4, vec![int_vector(&[2])], Side::Right)?;
    let inj = brute_injective(&dbl, p.budget)?;
    rep.push(Check::new(
        "Z/4: r -> 2r collides at (0, 2)",
        inj.collision == Some((int_vector(&[0]), int_vector(&[2]))),
    ));
    Ok(rep)
}

fn kernel_lift(p: &SuiteParams) -> Result<Report> {
    let s = one_sided_ring()?;
    let zy = ore_of_base(&s)?;
    let poly = |c: &[i64]| Value::List(int_vector(c));
    let x = Value::List(vec![poly(&[]), poly(&[1])]);
    let one = Value::List(vec![poly(&[1])]);
    let f = ModuleMap::from_rows(&s, vec![vec![x, one]], Side::Right)?;
    let a = poly(&[0, 1]);
    let b = vec![poly(&[0, -1]), poly(&[1])];
    let mut rep = kernel_lift_witness(&f, &a, 1, &b)?;
    rep.suite = "kernel_lift".into();
    rep.seed = p.seed;

    // the kernel of ψ at degree ≤ 1 is spanned by ±b
    let psi = kernel_lift_map(&f, &a, 1)?;
    let k = bounded_degree_kernel(&psi, 1)?;
    let neg_b: Vec<Value> = b.iter().map(|v| zy.neg(v)).collect::<Result<_>>()?;
    rep.push(
        Check::new(
            "bounded-degree kernel of psi rediscovers b",
            k.len() == 1 && (k[0] == b || k[0] == neg_b),
        )
        .with_witness(
            k.iter()
                .map(|v| psi.format_vector(v))
                .collect::<Vec<_>>()
                .join(", "),
        ),
    );
    let lifted: Vec<Value> = k
        .first()
        .map(|v| v.iter().map(|c| s.mul(&Value::List(vec![a.clone()]), &Value::List(vec![c.clone()]))).collect::<Result<Vec<_>>>())
        .transpose()?
        .unwrap_or_default();
    let image_zero = !lifted.is_empty()
        && apply_map(&f, &lifted)?.iter().all(|v| s.is_zero(v, FULL));
    rep.push(Check::new("f(a*k) = 0 for the rediscovered kernel vector k", image_zero));

    let g = ModuleMap::from_rows(&zy, vec![vec![poly(&[0, 0, 1]), poly(&[0, -1])]], Side::Right)?;
    let kg = bounded_degree_kernel(&g, 1)?;
    rep.push(Check::new(
        "kernel of (s,t) -> s*y^2 - t*y contains (1, y)",
        kg.contains(&vec![poly(&[1]), poly(&[0, 1])]),
    ));
    Ok(rep)
}
