use super::{seeded_rng, Ring, DEFAULT_WINDOW};
use crate::error::Result;
use crate::report::{Check, Report};
use crate::value::Value;

type Law = fn(&Ring, &Value, &Value, &Value, usize) -> Result<bool>;

const LAWS: &[(&str, Law)] = &[
    ("associativity(+)", |r, a, b, c, w| {
        Ok(r.equal(&r.add(&r.add(a, b)?, c)?, &r.add(a, &r.add(b, c)?)?, w))
    }),
    ("associativity(*)", |r, a, b, c, w| {
        Ok(r.equal(&r.mul(&r.mul(a, b)?, c)?, &r.mul(a, &r.mul(b, c)?)?, w))
    }),
    ("commutativity(+)", |r, a, b, _, w| {
        Ok(r.equal(&r.add(a, b)?, &r.add(b, a)?, w))
    }),
    ("left distributivity", |r, a, b, c, w| {
        let lhs = r.mul(a, &r.add(b, c)?)?;
        let rhs = r.add(&r.mul(a, b)?, &r.mul(a, c)?)?;
        Ok(r.equal(&lhs, &rhs, w))
    }),
    ("right distributivity", |r, a, b, c, w| {
        let lhs = r.mul(&r.add(a, b)?, c)?;
        let rhs = r.add(&r.mul(a, c)?, &r.mul(b, c)?)?;
        Ok(r.equal(&lhs, &rhs, w))
    }),
    ("multiplicative unit", |r, a, _, _, w| {
        let one = r.one();
        Ok(r.equal(&r.mul(&one, a)?, a, w) && r.equal(&r.mul(a, &one)?, a, w))
    }),
    ("additive unit", |r, a, _, _, w| {
        Ok(r.equal(&r.add(a, &r.zero())?, a, w))
    }),
    ("additive inverse", |r, a, _, _, w| {
        Ok(r.is_zero(&r.add(a, &r.neg(a)?)?, w))
    }),
];

/// Samples `count` triples and checks every ring axiom on each.
pub fn ring_axioms_check(ring: &Ring, seed: u64, count: usize) -> Report {
    ring_axioms_check_windowed(ring, seed, count, DEFAULT_WINDOW)
}

pub fn ring_axioms_check_windowed(ring: &Ring, seed: u64, count: usize, window: usize) -> Report {
    let count = count.max(1);
    let mut rng = seeded_rng(seed);
    let triples: Vec<[Value; 3]> = (0..count)
        .map(|_| [ring.sample(&mut rng), ring.sample(&mut rng), ring.sample(&mut rng)])
        .collect();
    let mut report = Report::new("ring_axioms", seed)
        .param("ring", ring.id())
        .param("count", count)
        .param("window", window);
    for (name, law) in LAWS {
        let failure = triples.iter().find_map(|[a, b, c]| match law(ring, a, b, c, window) {
            Ok(true) => None,
            Ok(false) => Some(format!(
                "({}, {}, {})",
                ring.format(a),
                ring.format(b),
                ring.format(c)
            )),
            Err(e) => Some(format!("error: {e}")),
        });
        let mut check = Check::new(*name, failure.is_none());
        if ring.capabilities().windowed_equality {
            check = check.with_window(window);
        }
        if let Some(w) = failure {
            check = check.with_witness(w);
        }
        report.push(check);
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::make_ring;

    #[test]
    fn builtin_rings_pass() {
        for spec in ["Z/4", "M2(Z/2)", "Z", "Poly(Z,y)", "P(Z/2)", "UMat(Z/2)", "Free(u,v)"] {
            let r = make_ring(spec).unwrap();
            let rep = ring_axioms_check(&r, 1, 100);
            assert!(rep.passed(), "{spec}: {rep}");
            assert_eq!(rep.checks.len(), 8);
        }
    }

    #[test]
    fn deterministic_given_seed() {
        let r = make_ring("M2(Z/4)").unwrap();
        assert_eq!(ring_axioms_check(&r, 5, 30), ring_axioms_check(&r, 5, 30));
    }
}
