//! The fourteen acceptance criteria, each with its time limit. Every criterion runs the
//! library's own check and an independent oracle; one PASS/FAIL line is printed per criterion.

use std::time::{Duration, Instant};

use orelab_cli::Context;
use orelab_core::finiteness::one_sided_inverse_demo_with;
use orelab_core::lazy::{isometry_matrices, theta_mod, umat_of};
use orelab_core::modmap::{search_epi, search_mono, SearchMode};
use orelab_core::ore::OreRing;
use orelab_core::ring::FULL;
use orelab_core::series::{matrix_series_iso, right_inverse, series_mul, SkewSeries};
use orelab_core::suites::{run_suite, SuiteParams};
use orelab_core::{make_ring, seeded_rng, Element, Report, Side, Value};

type Outcome = Result<(), String>;

/// Number, title, time limit in seconds, body.
type Criterion = (u32, &'static str, u64, fn() -> Outcome);

fn ensure(ok: bool, what: impl Into<String>) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn e<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|err| err.to_string())
}

fn suite(name: &str, tweak: impl FnOnce(&mut SuiteParams)) -> Result<Report, String> {
    let mut p = SuiteParams::default();
    tweak(&mut p);
    let r = e(run_suite(name, &p))?;
    if let Some(c) = r.failures().next() {
        return Err(format!("{name}: check `{}` failed", c.name));
    }
    Ok(r)
}

fn has(r: &Report, name: &str) -> Outcome {
    ensure(r.check(name).is_some_and(|c| c.passed()), format!("{}: no passing check `{name}`", r.suite))
}

fn param(r: &Report, key: &str) -> serde_json::Value {
    r.parameters.get(key).cloned().unwrap_or_default()
}

fn ore(base: &str, sigma: &str, delta: Option<&str>) -> Result<Context, String> {
    Ok(Context::new(e(OreRing::from_names(&e(make_ring(base))?, sigma, delta))?))
}

fn val(ctx: &Context, text: &str) -> Result<Element, String> {
    e(ctx.eval_str(text))
}

fn equal(a: &Element, b: &Element) -> bool {
    a.eq_within(b, FULL).unwrap_or(false)
}

fn weyl_relation() -> Outcome {
    for base in ["Poly(Z,y)", "Poly(Z/2,y)"] {
        let w = ore(base, "id", Some("d_dy"))?;
        ensure(equal(&val(&w, "x*y - y*x")?, &val(&w, "1")?), format!("xy - yx != 1 over {base}"))?;
    }
    let w = ore("Poly(Z,y)", "id", Some("d_dy"))?;
    ensure(equal(&val(&w, "x^3*y - y*x^3")?, &val(&w, "3*x^2")?), "x^3 y - y x^3 != 3x^2")?;
    let r = suite("weyl", |_| {})?;
    has(&r, "W1(Z)/x*y - y*x = 1")?;
    has(&r, "W1(Z/2)/x*y - y*x = 1")?;
    has(&r, "W1(Z)/x^3*y - y*x^3 = 3*x^2")
}

fn one_sided_inverse() -> Outcome {
    let r = e(one_sided_inverse_demo_with(0, 200))?;
    ensure(r.passed(), "demo failed")?;
    ensure(param(&r, "count") == 200, "law not checked on 200 pairs")?;
    for c in ["x*y = 1", "y*x != 1", "delta is a sigma-derivation/leibniz", "delta is a sigma-derivation/additive"] {
        has(&r, c)?;
    }
    let s = ore("Poly(Z,y)", "const_term", Some("coeff_shift"))?;
    ensure(equal(&val(&s, "x*y")?, &val(&s, "1")?), "xy != 1")?;
    ensure(!equal(&val(&s, "y*x")?, &val(&s, "1")?), "yx = 1")
}

fn idempotents() -> Outcome {
    // every candidate 1 + a x + b x^2 over Z/2, squared by hand through the ring
    let s = e(make_ring("Series(Z/2;sigma=id;prec=3)"))?;
    let mut found = Vec::new();
    for a in 0..2 {
        for b in 0..2 {
            let p = e(SkewSeries::new(&s, vec![Value::int(1), Value::int(a), Value::int(b)]))?;
            if e(series_mul(&p, &p))? == p {
                found.push((a, b));
            }
        }
    }
    ensure(found == [(0, 0)], format!("idempotents over Z/2 mod x^3: {found:?}"))?;
    let r = suite("idempotents", |_| {})?;
    has(&r, "Series(Z/2;sigma=id;prec=3): exhaustive search finds only 1")?;
    ensure(
        r.check("Series(Z/2;sigma=id;prec=3): exhaustive search finds only 1")
            .and_then(|c| c.witness.as_deref())
            .is_some_and(|w| w.contains("among 4 candidates")),
        "Z/2 search did not cover exactly 4 candidates",
    )?;
    has(&r, "Series(Z/4;sigma=id;prec=8): coefficientwise solve gives 1")?;
    has(&r, "Series(P(Z/2);sigma=shift;prec=8): coefficientwise solve gives 1")
}

fn skew_finiteness() -> Outcome {
    let r = suite("skew_finiteness", |_| {})?;
    ensure(param(&r, "count") == 100, "not 100 pairs")?;
    for cfg in ["Z/4[[x;id]]", "P(Z/2)[[x;shift]]", "M2(Z/2)[[x;id]]", "M2(Z/2)[[x;inner]]"] {
        has(&r, &format!("{cfg}/pq = 1 implies qp = 1"))?;
    }
    // independent pass: the ring's own product on seeded unit-constant series
    for spec in [
        "Series(Z/4;sigma=id;prec=8)",
        "Series(P(Z/2);sigma=shift;prec=8)",
        "Series(M2(Z/2);sigma=id;prec=8)",
        "Series(M2(Z/2);sigma=inner;prec=8)",
    ] {
        let s = e(make_ring(spec))?;
        let base_one = e(make_ring(&spec[7..spec.find(';').unwrap()]))?.one();
        let mut rng = seeded_rng(0);
        for i in 0..100 {
            let mut c = SkewSeries::from_value(&s, &s.sample(&mut rng)).unwrap().coeffs().to_vec();
            c[0] = base_one.clone();
            let p = e(SkewSeries::new(&s, c))?;
            let q = e(right_inverse(&p))?;
            let qp = e(s.mul(&q.value(), &p.value()))?;
            ensure(s.equal(&qp, &s.one(), 16), format!("{spec}: qp != 1 at sample {i}"))?;
        }
    }
    Ok(())
}

fn corner_witnesses() -> Outcome {
    for base in ["Z/2", "Z/4", "Z"] {
        let ring = e(make_ring(base))?;
        let (a, b) = isometry_matrices(&ring);
        // rows below 32 are supported well inside the first 72 columns
        let ok_support = (0..32).all(|i| {
            a.row_support(i).iter().chain(b.row_support(i).iter()).all(|&k| k < 72)
        });
        ensure(ok_support, format!("{base}: row support leaves the 72-column corner"))?;
        let ca = e(a.corner(72))?;
        let cb = e(b.corner(72))?;
        let gram = |x: &Vec<Vec<Value>>, y: &Vec<Vec<Value>>, i: usize, j: usize| -> Result<Value, String> {
            let mut acc = ring.zero();
            for k in 0..72 {
                acc = e(ring.add(&acc, &e(ring.mul(&x[i][k], &y[j][k]))?))?;
            }
            Ok(acc)
        };
        for i in 0..32 {
            for j in 0..32 {
                let delta = if i == j { ring.one() } else { ring.zero() };
                ensure(ring.equal(&gram(&ca, &ca, i, j)?, &delta, FULL), format!("{base}: AAt({i},{j})"))?;
                ensure(ring.equal(&gram(&cb, &cb, i, j)?, &delta, FULL), format!("{base}: BBt({i},{j})"))?;
                ensure(ring.is_zero(&gram(&ca, &cb, i, j)?, FULL), format!("{base}: ABt({i},{j})"))?;
                ensure(ring.is_zero(&gram(&cb, &ca, i, j)?, FULL), format!("{base}: BAt({i},{j})"))?;
            }
        }
        let r = suite("corner_witnesses", |p| p.base = Some(base.into()))?;
        ensure(param(&r, "count") == 100 && param(&r, "window") == 16, "recovery not on 100 pairs, window 16")?;
        has(&r, &format!("{base}/XA + YB recovers (X, Y)"))?;
    }
    Ok(())
}

fn theta_homomorphism() -> Outcome {
    let r = suite("theta", |p| p.window = 8)?;
    ensure(param(&r, "count") == 100 && param(&r, "window") == 8, "theta not run on 100 pairs at window 8")?;
    for base in ["Z/2", "Z/4"] {
        has(&r, &format!("UMat({base})/theta additive"))?;
        has(&r, &format!("UMat({base})/theta multiplicative"))?;
        // entry sums of the product against the series coefficients
        let umat = e(make_ring(&format!("UMat({base})")))?;
        let u = e(umat_of(&umat))?;
        let bz = u.base().clone();
        let mut rng = seeded_rng(7);
        for _ in 0..100 {
            let (m, n) = (umat.sample(&mut rng), umat.sample(&mut rng));
            ensure(u.max_band(&m).unwrap_or(0) <= 4 && u.max_band(&n).unwrap_or(0) <= 4, "band above 4")?;
            let prod = e(series_mul(&e(theta_mod(&umat, &m, 8))?, &e(theta_mod(&umat, &n, 8))?))?;
            for d in 0..8 {
                let Some(seq) = prod.coeff(d).as_seq() else {
                    return Err("series coefficient is not a sequence".into());
                };
                for i in 0..8 {
                    let mut acc = bz.zero();
                    for k in i..=i + d {
                        acc = e(bz.add(&acc, &e(bz.mul(&u.entry(&m, i, k), &u.entry(&n, k, i + d)))?))?;
                    }
                    ensure(bz.equal(seq.get(i), &acc, FULL), format!("UMat({base}): (MN)({i},{}) differs", i + d))?;
                }
            }
        }
    }
    Ok(())
}

fn matrix_series() -> Outcome {
    let r = suite("matrix_series", |_| {})?;
    ensure(param(&r, "count") == 100 && param(&r, "precision") == 8, "not 100 pairs at precision 8")?;
    has(&r, "Series(Z/2;sigma=id;prec=8)/respects products")?;
    let s = e(make_ring("Series(Z/2;sigma=id;prec=8)"))?;
    let mut rng = seeded_rng(11);
    let mut draw = || -> Result<Vec<Vec<SkewSeries>>, String> {
        (0..2)
            .map(|_| (0..2).map(|_| e(SkewSeries::from_value(&s, &s.sample(&mut rng)))).collect())
            .collect()
    };
    for _ in 0..100 {
        let (a, b) = (draw()?, draw()?);
        let mut ab = Vec::new();
        for row_a in &a {
            let mut row = Vec::new();
            for j in 0..2 {
                let (l, r) = (e(series_mul(&row_a[0], &b[0][j]))?, e(series_mul(&row_a[1], &b[1][j]))?);
                row.push(e(l.add(&r))?);
            }
            ab.push(row);
        }
        let lhs = e(matrix_series_iso(&ab))?;
        let rhs = e(series_mul(&e(matrix_series_iso(&a))?, &e(matrix_series_iso(&b))?))?;
        ensure(lhs == rhs, "iso(AB) != iso(A) iso(B)")?;
    }
    Ok(())
}

fn kernel_powers() -> Outcome {
    let s = ore("Poly(Z,y)", "const_term", Some("coeff_shift"))?;
    let one = val(&s, "1")?;
    for i in 1..=8 {
        ensure(equal(&val(&s, &format!("x^{i}*y^{i}"))?, &one), format!("x^{i} y^{i} != 1"))?;
    }
    ensure(equal(&val(&s, "x*(x*y)*y")?, &val(&s, "x^2*y^2")?), "x(xy)y != x^2 y^2")?;
    let r = suite("kernel_powers", |_| {})?;
    (1..=8).try_for_each(|i| has(&r, &format!("x^{i}*y^{i} = 1")))
}

fn kernel_lift() -> Outcome {
    let r = suite("kernel_lift", |_| {})?;
    for c in ["psi lands in base vectors", "psi(b) = 0", "a^k b != 0", "f(a^k b) = 0",
              "bounded-degree kernel of psi rediscovers b"] {
        has(&r, c)?;
    }
    // f(s, t) = x*s + t at a^k b = (y*(-y), y*1)
    let s = ore("Poly(Z,y)", "const_term", Some("coeff_shift"))?;
    ensure(val(&s, "x*(y*(-y)) + y*1")?.is_zero(FULL), "f(a b) != 0")?;
    ensure(!val(&s, "y*(-y)")?.is_zero(FULL), "a b = 0")
}

/// Exhaustive over Z/p by hand: left maps v -> vM with M of shape n x m.
fn maps_mod_p(p: u64, n: usize, m: usize) -> Vec<Vec<u64>> {
    let len = n * m;
    (0..p.pow(len as u32))
        .map(|mut code| {
            (0..len)
                .map(|_| {
                    let d = code % p;
                    code /= p;
                    d
                })
                .collect()
        })
        .collect()
}

fn image(p: u64, n: usize, m: usize, mat: &[u64]) -> Vec<Vec<u64>> {
    maps_mod_p(p, 1, n)
        .iter()
        .map(|v| (0..m).map(|j| (0..n).map(|i| v[i] * mat[i * m + j]).sum::<u64>() % p).collect())
        .collect()
}

fn rank_conditions() -> Outcome {
    for p in [2u64, 3] {
        let mono_21 = maps_mod_p(p, 2, 1).iter().any(|mat| {
            let mut im = image(p, 2, 1, mat);
            im.sort();
            im.dedup();
            im.len() == (p * p) as usize
        });
        let epi_12 = maps_mod_p(p, 1, 2).iter().any(|mat| {
            let mut im = image(p, 1, 2, mat);
            im.sort();
            im.dedup();
            im.len() == (p * p) as usize
        });
        ensure(!mono_21 && !epi_12, format!("Z/{p}: oracle found a forbidden map"))?;
        let mut inclusion = image(p, 1, 2, &[1, 0]);
        inclusion.sort();
        inclusion.dedup();
        ensure(inclusion.len() == p as usize, format!("Z/{p}: inclusion not injective"))?;

        let ring = e(make_ring(&format!("Z/{p}")))?;
        for side in [Side::Left, Side::Right] {
            let budget = 1_000_000;
            ensure(e(search_mono(&ring, 2, 1, side, SearchMode::Exhaustive, budget))?.is_definitive_none(), "mono 2->1")?;
            ensure(e(search_epi(&ring, 1, 2, side, SearchMode::Exhaustive, budget))?.is_definitive_none(), "epi 1->2")?;
            ensure(e(search_mono(&ring, 1, 2, side, SearchMode::Exhaustive, budget))?.found().is_some(), "mono 1->2")?;
        }
    }
    let r = suite("rank_search", |_| {})?;
    has(&r, "Z/2/left: coordinate inclusion R^1 -> R^2 is mono")?;
    has(&r, "Z/3/right: no epi R^1 -> R^2")
}

fn monomial_quotient_and_shift() -> Outcome {
    let r = suite("monomial_quotient", |_| {})?;
    for c in ["xu = 0", "xv = 0", "normal forms are independent of rewrite order", "sigma/multiplicative",
              "iso respects products", "iso respects sums"] {
        has(&r, c)?;
    }
    let q = Context::new(e(make_ring("Free(u,v,x|xu=0,xv=0)"))?);
    for w in ["x*u", "x*v", "x*u*v", "x*v*x*u", "xuvx"] {
        ensure(val(&q, w)?.is_zero(FULL), format!("{w} != 0"))?;
    }
    ensure(equal(&val(&q, "u*x*x")?, &val(&q, "uxx")?), "ux*x != uxx")?;

    let r = suite("umat_shift", |_| {})?;
    ensure(param(&r, "window") == 16, "shift not checked on window 16")?;
    for base in ["Z/2", "Z/4"] {
        has(&r, &format!("UMat({base})/preserves 1"))?;
        has(&r, &format!("UMat({base})/multiplicative"))?;
        let u = Context::new(e(make_ring(&format!("UMat({base})")))?);
        ensure(equal(&val(&u, "sigma(1)")?, &val(&u, "1")?), "sigma(I) != I")?;
        let mut rng = seeded_rng(3);
        for _ in 0..100 {
            let ring = u.ring();
            let (m, n) = (ring.sample(&mut rng), ring.sample(&mut rng));
            let um = e(umat_of(ring))?;
            let lhs = e(um.shift_sigma(&e(ring.mul(&m, &n))?))?;
            let rhs = e(ring.mul(&e(um.shift_sigma(&m))?, &e(um.shift_sigma(&n))?))?;
            // entrywise on the 16-window
            for i in 0..16 {
                for j in i..16 {
                    ensure(um.base().equal(&um.entry(&lhs, i, j), &um.entry(&rhs, i, j), FULL), "sigma(MN) != sigma(M)sigma(N)")?;
                }
            }
        }
    }
    Ok(())
}

fn free_independence() -> Outcome {
    let r = suite("free_independence", |_| {})?;
    has(&r, "au + bv = 0 only for a = b = 0")?;
    // words of length <= 2 over {u, v}: 1 + 2 + 4 = 7 coefficients in {-1, 0, 1}
    ensure(param(&r, "degree") == 2 && param(&r, "elements") == 3u64.pow(7), "enumeration is not the full degree-2 box")?;
    ensure(param(&r, "pairs") == 3u64.pow(14), "not every pair covered")
}

fn umat_finiteness() -> Outcome {
    let r = suite("umat_finiteness", |_| {})?;
    for base in ["Z/2", "Z"] {
        has(&r, &format!("UMat({base})/qp = 1"))?;
        has(&r, &format!("UMat({base})/pq = 1"))?;
        let u = Context::new(e(make_ring(&format!("UMat({base})")))?).with_precision(8);
        let inv = "1 - S + S^2 - S^3 + S^4 - S^5 + S^6 - S^7";
        for text in [format!("theta(1 + S)*theta({inv})"), format!("theta({inv})*theta(1 + S)")] {
            ensure(equal(&val(&u, &text)?, &val(&u, "theta(1)")?), format!("{base}: {text} != 1 mod x^8"))?;
        }
    }
    Ok(())
}

fn determinism() -> Outcome {
    let dir = e(tempfile::tempdir())?;
    let mut outputs = Vec::new();
    for i in 0..2 {
        let path = dir.path().join(format!("run{i}.json"));
        let status = e(std::process::Command::new(env!("CARGO_BIN_EXE_orelab"))
            .args(["suite", "all", "--seed", "0", "--json"])
            .arg(&path)
            .stdout(std::process::Stdio::null())
            .status())?;
        ensure(status.code() == Some(0), format!("run {i} exited with {status}"))?;
        outputs.push(e(std::fs::read(&path))?);
    }
    ensure(!outputs[0].is_empty() && outputs[0] == outputs[1], "reports differ between runs")
}

#[test]
fn acceptance_criteria() {
    let criteria: &[Criterion] = &[
        (1, "Weyl relation over Z and Z/2, x^3 y - y x^3 = 3x^2", 1, weyl_relation),
        (2, "one-sided inverse xy = 1, yx != 1, derivation law on 200 pairs", 1, one_sided_inverse),
        (3, "only idempotent series with constant term 1 is 1", 1, idempotents),
        (4, "right inverses are two-sided over directly finite bases", 10, skew_finiteness),
        (5, "corner isometries and coefficient recovery", 10, corner_witnesses),
        (6, "theta is additive and multiplicative on window 8", 10, theta_homomorphism),
        (7, "matrix-series isomorphism respects products", 5, matrix_series),
        (8, "x^i y^i = 1 for i <= 8", 1, kernel_powers),
        (9, "kernel lift witness and bounded-degree rediscovery", 1, kernel_lift),
        (10, "no mono R^2 -> R^1, no epi R^1 -> R^2, inclusion is mono", 30, rank_conditions),
        (11, "monomial quotient and UMat shift", 20, monomial_quotient_and_shift),
        (12, "au + bv = 0 only for a = b = 0 up to degree 2", 30, free_independence),
        (13, "UMat one-sided inverse through theta", 1, umat_finiteness),
        (14, "suite all --seed 0 is byte-deterministic", 300, determinism),
    ];
    let mut failed = Vec::new();
    let total = Instant::now();
    for &(n, title, limit, f) in criteria {
        let start = Instant::now();
        let result = f();
        let took = start.elapsed();
        let result = result.and_then(|()| {
            ensure(took <= Duration::from_secs(limit), format!("took {took:.2?}, limit {limit}s"))
        });
        match &result {
            Ok(()) => println!("criterion {n:>2}: PASS  {:>8.3}s / {limit}s  {title}", took.as_secs_f64()),
            Err(why) => {
                println!("criterion {n:>2}: FAIL  {:>8.3}s / {limit}s  {title}: {why}", took.as_secs_f64());
                failed.push(n);
            }
        }
    }
    let took = total.elapsed();
    println!("all criteria: {:.3}s / 300s", took.as_secs_f64());
    assert!(took <= Duration::from_secs(300), "total runtime {took:?}");
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
