//! Utilities over posterior beliefs and their concave envelopes.

mod action;
mod concave;
mod utility;

pub use action::{induce_belief_utilities, ActionGame, InducedUtilities};
pub use concave::{concavify, Coincidence, Concavification, DEFAULT_GRID};
pub use utility::{Affine, ClosedSide, Piece, PiecewiseUtility};

use crate::info::BeliefDistribution;

/// `E_τ u(β)`.
pub fn expected_utility(u: &PiecewiseUtility, tau: &BeliefDistribution) -> f64 {
    tau.atoms().iter().map(|a| a.prob * u.eval(a.belief)).sum()
}

pub fn eval_utility(u: &PiecewiseUtility, beta: f64) -> f64 {
    u.eval(beta)
}
