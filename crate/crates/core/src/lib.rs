//! Two-state mediated Bayesian persuasion.
//!
//! A sender commits to an experiment `X` (a column-stochastic map from states
//! to experiment realizations), a mediator simultaneously commits to a
//! garbling `Σ` of those realizations, and a receiver updates on the composite
//! `B = ΣX`. This crate computes the set of receiver posteriors the sender can
//! reach through a fixed garbling, best responses of both designers, pure
//! strategy equilibria, and informativeness and welfare comparisons against
//! the unmediated benchmark.
//!
//! Conventions used throughout:
//!
//! * matrices are column-stochastic; rows are realizations, columns are the
//!   conditioning states (or realizations);
//! * with two states the columns are ordered `(state 1, state 2)` and a
//!   [`Belief`](info::Belief) is the probability of state 2;
//! * algebraic identities are checked to [`TOL`].
//!
//! ```
//! use mediated_persuasion::info::{induced_tau, StochasticMatrix};
//!
//! let sigma = StochasticMatrix::new(&[vec![6.0 / 7.0, 3.0 / 7.0], vec![1.0 / 7.0, 4.0 / 7.0]]).unwrap();
//! let tau = induced_tau(&sigma, 0.5).unwrap();
//! assert!((tau.atoms()[0].belief - 1.0 / 3.0).abs() < 1e-12);
//! assert!((tau.atoms()[1].prob - 5.0 / 14.0).abs() < 1e-12);
//! ```

pub mod cli;
pub mod error;
pub mod feasible;
pub mod fixtures;
pub mod info;
pub mod payoffs;
pub mod solver;

pub use error::{Error, Result};

/// Tolerance for algebraic identities (column sums, Bayes plausibility, witnesses).
pub const TOL: f64 = 1e-9;

/// Beliefs this close to a utility breakpoint take the breakpoint's value.
pub const KNOT_TOL: f64 = 1e-9;
