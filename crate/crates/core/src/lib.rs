//! Circular and Jacobi β-ensembles through Verblunsky coefficients and
//! Prüfer phases.
//!
//! A sample of either ensemble is encoded by a random sequence of independent
//! Verblunsky coefficients. The unwrapped phase `ψ_k(θ)` of the associated
//! Blaschke product is computed by a one-line recursion, and the number of
//! points in an interval is a floor of the terminal phase at its endpoints.
//! Counting therefore costs O(n) per endpoint, with no eigenvalue solve.
//!
//! ```
//! use beta_ensemble::ensembles::{count_in_arc, EnsembleSpec};
//! use beta_ensemble::rng::stream;
//!
//! let spec = EnsembleSpec::circular(1000, 2.0).unwrap();
//! let path = spec.draw_path(&mut stream(42, 0)).unwrap();
//! let c = count_in_arc(&path, 0.0, std::f64::consts::FRAC_PI_2).unwrap();
//! assert!(c.count <= 1000);
//! ```

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod acceptance;
pub mod cli;
pub mod diagnostics;
pub mod distributions;
pub mod ensembles;
pub mod error;
pub mod prufer;
pub mod quadrature;
pub mod rng;
pub mod statistics;
pub mod szego;

pub use error::{Error, Result};
