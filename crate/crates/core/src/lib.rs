//! Percolation backbone exponent.
//!
//! The exponent ξ(κ) comes from a transcendental equation in `exponent`, and
//! `moment` gives the moment formula it is read off from. `lcft_constants` and
//! `quadrature` hold the boundary Liouville constants and the integral
//! identities behind that formula. `lattice`, `arms` and `mc_estimator` measure
//! arm exponents of critical site percolation on the triangular lattice by
//! simulation. `numtheory` covers the cyclotomic side, `verify` bundles the
//! numerical checks into suites, and `cli` is the `backbone` command line.
#![allow(clippy::excessive_precision)]

pub mod error;
pub mod arms;
pub mod cli;
pub mod exponent;
pub mod lattice;
pub mod lcft_constants;
pub mod mc_estimator;
pub mod moment;
pub mod numtheory;
pub mod quadrature;
pub mod specialfn;
pub mod verify;

pub use error::{Error, Result};
