//! holoext: a numerical laboratory for norm-preserving extension of bounded
//! holomorphic functions.
//!
//! The library turns a small amount of function theory into executable,
//! certificate-producing experiments:
//!
//! - [`domains`]: a fixed domain zoo (bidisk, ball, symmetrized bidisk,
//!   diagonal ellipsoids) with membership predicates, defining functions,
//!   boundary samplers, and boundary convexity tests.
//! - [`hyperbolic`]: pseudo-hyperbolic geometry of the disk, closed-form
//!   Kobayashi geodesics and left inverses in the ball, a seeded
//!   multi-start Caratheodory search, and the Royden-Wong boundary checks.
//! - [`pick`]: reproducing-kernel Grams, Pick matrices, PSD tests, and
//!   minimal interpolation norms by bisection.
//! - [`model`]: the finite commuting model tuple on the span of kernel
//!   functions, with Gram-weighted operator norms, von Neumann and
//!   subordination checks.
//! - [`lab`]: variety sampling, totally-geodesic tests, extension-failure
//!   certificate searches, and retract verification.
//! - [`io`]: the JSON surface shared with the CLI (and fuzzed).
//!
//! Everything is deterministic given inputs and a seed; searches may run
//! restarts in parallel but merge with a scheduling-independent rule.

pub mod domains;
pub mod error;
pub mod hyperbolic;
pub mod io;
pub mod lab;
pub mod linalg;
pub mod model;
pub mod pick;
pub mod point;
pub mod poly;
mod rng;
mod search;

pub use error::{Error, Result};
pub use point::Point;
