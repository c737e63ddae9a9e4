//! Seeded inputs shared by the benchmarks.

use orelab_core::ore::OrePoly;
use orelab_core::series::{series_ring_of, SkewSeries};
use orelab_core::{make_ring, seeded_rng, OreRing, Ring, Value};

pub fn ring(spec: &str) -> Ring {
    make_ring(spec).expect("valid descriptor")
}

/// `base[x;σ,δ]` built from catalog names.
pub fn ore(base: &str, sigma: &str, delta: Option<&str>) -> Ring {
    OreRing::from_names(&ring(base), sigma, delta).expect("valid Ore data")
}

/// An Ore polynomial with `degree + 1` sampled coefficients.
pub fn ore_poly(ring: &Ring, degree: usize, seed: u64) -> OrePoly {
    let o = ring.downcast::<OreRing>().expect("Ore ring");
    let mut rng = seeded_rng(seed);
    let coeffs = (0..=degree).map(|_| o.base().sample(&mut rng)).collect();
    OrePoly::new(ring, coeffs).expect("coefficients in the base")
}

/// A sampled series with constant term 1, hence right invertible.
pub fn unit_series(ring: &Ring, seed: u64) -> SkewSeries {
    let s = series_ring_of(ring).expect("series ring");
    let mut rng = seeded_rng(seed);
    let mut c: Vec<Value> = (0..s.precision()).map(|_| s.base().sample(&mut rng)).collect();
    c[0] = s.base().one();
    SkewSeries::new(ring, c).expect("coefficients in the base")
}

pub fn sample_pair(ring: &Ring, seed: u64) -> (Value, Value) {
    let mut rng = seeded_rng(seed);
    (ring.sample(&mut rng), ring.sample(&mut rng))
}
