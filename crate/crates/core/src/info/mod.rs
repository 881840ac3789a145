//! Information structures, Bayes updating and informativeness orders.

mod belief;
pub(crate) mod lp;
mod matrix;
mod order;

pub use belief::{
    bayes_plausible_weights, induced_tau, posterior_after_signal, signal_probabilities, transport, Atom, Belief,
    BeliefDistribution,
};
pub(crate) use belief::check_belief;
pub use matrix::{compose, validate_stochastic, Dense, StochasticMatrix};
pub use order::{
    blackwell_compare, garbling, garbling_lp, garbling_rank, garbling_residual, is_mps, mps_residual,
    stochastic_violation, BlackwellOrder, GarblingRank, MpsVerdict,
};
