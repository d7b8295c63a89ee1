//! Exact combinatorics of r-Stirling, r-Lah and generalized Eulerian numbers,
//! the discrete probability distributions built from them, and seeded samplers
//! for the random structures they describe (colored Ewens permutations, Hoppe
//! forests, incomplete partitions, r-compositions, Lah-distributed statistics).
//!
//! The crate is organized in layers:
//!
//! * [`rational`], [`poly`], [`series`] — exact arbitrary-precision scalars,
//!   univariate polynomials and truncated power series;
//! * [`numbers`] — the combinatorial number families, all exact;
//! * [`distributions`] — finite probability mass functions with exact rational
//!   weights (plus log-space float mirrors for large sizes);
//! * [`rng`], [`structures`], [`samplers`] — reproducible counter-based random
//!   generation of the combinatorial structures themselves;
//! * [`oracles`] — brute-force enumeration engines used as ground truth;
//! * [`stats`], [`verify`] — Monte Carlo goodness-of-fit and the verification
//!   suites wired into the CLI and the acceptance tests.

pub mod distributions;
pub mod error;
pub mod float;
pub mod numbers;
pub mod oracles;
pub mod pmf;
pub mod poly;
pub mod rational;
pub mod rng;
pub mod samplers;
pub mod series;
pub mod stats;
pub mod structures;
pub mod verify;

pub use error::{Error, Result};
pub use rational::Rational;
