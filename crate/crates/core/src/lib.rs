//! Computation kernel for Ore extensions `R[x;σ,δ]`, skew power series `R[[x;σ]]`,
//! upper-triangular ℕ×ℕ matrices and free rings, with randomized and exhaustive checks of
//! rank conditions and finiteness properties.

pub mod error;
pub mod finiteness;
pub mod free;
pub mod lazy;
pub mod linalg;
pub mod modmap;
pub mod morphism;
pub mod ore;
pub mod report;
pub mod ring;
pub mod series;
pub mod suites;
pub mod value;

pub use error::{Error, Result};
pub use modmap::{ModuleMap, Side};
pub use morphism::{builtin_morphisms, EndoMap, Morphism, SigmaDerivation};
pub use ore::{ore_mul, OrePoly, OreRing};
pub use report::{Check, Report, Status};
pub use ring::{make_ring, seeded_rng, Element, Ring, RingImpl, DEFAULT_WINDOW};
pub use series::{series_mul, SkewSeries, SkewSeriesRing};
pub use value::Value;
