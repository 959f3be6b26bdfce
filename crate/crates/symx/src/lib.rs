//! Symmetry-expansion error mitigation at desk scale.
//!
//! The crate simulates noisy Fermi-Hubbard style circuits exactly with
//! dense density matrices, evaluates every bias and sampling-cost metric of
//! the symmetry-expansion framework (of which symmetry verification and the
//! unmitigated estimate are special cases), predicts those metrics
//! analytically from detectable error fractions, and searches subsets of a
//! symmetry group for small-bias expansion schemes.
//!
//! Module map:
//! - [`pauli`], [`state`], [`linalg`]: signed Pauli words, dense states and
//!   observables, small-matrix eigensolver.
//! - [`hubbard`]: parametrised trotter-style circuits, Hamiltonian and
//!   number-parity symmetries.
//! - [`noise`], [`simulator`]: depolarising / bit-flip channels and exact
//!   noisy evolution.
//! - [`expansion`]: expansion operators, bias decomposition, costs,
//!   crossover sample counts.
//! - [`analytic`]: Poisson-model predictions and the small-bias scheme
//!   search.
//! - [`sampling`]: shot-level Monte-Carlo verification of the variance
//!   formulas.
//! - [`subspace`]: Rayleigh-Ritz subspace expansion over a symmetry set.
//! - [`distillation`]: copy-permutation expansion demo.

pub mod analytic;
pub mod distillation;
pub mod error;
pub mod expansion;
pub mod hubbard;
pub mod linalg;
pub mod noise;
pub mod pauli;
pub mod sampling;
pub mod simulator;
pub mod state;
pub mod subspace;

pub use error::{Error, Result};
