//! Best responses, equilibria and outcome comparisons.

mod bp;
mod compare;
mod equilibrium;
mod mediator;
mod sender;

use serde::Serialize;

pub use bp::{bp_solve, bp_solve_with, BpSolution};
pub use compare::{compare_outcomes, ComparisonReport, Informativeness, Welfare};
pub use equilibrium::{
    check_equilibrium, check_equilibrium_with, search_equilibria, Deviation, EquilibriumCertificate, OutcomeCluster,
    SearchOutcome, Values, Verdict,
};
pub use mediator::{mediator_best_response, mediator_best_response_with, MediatorResponse};
pub use sender::{sender_best_response, sender_best_response_with, SenderOptions, SenderResponse};

use crate::info::check_belief;
use crate::payoffs::{PiecewiseUtility, DEFAULT_GRID};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Player {
    Sender,
    Mediator,
}

/// Resolutions and tolerances for equilibrium work.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SearchConfig {
    /// Step of the `(x, y)` and `(σ₁, σ₂)` grids.
    pub grid: f64,
    /// A profile is verified when neither designer gains more than this.
    pub tol_dev: f64,
    /// Looser gap admitted on the search grid before refinement.
    pub tol_search: f64,
    /// Outcomes whose supports differ by at most this are one cluster.
    pub cluster_tol: f64,
    /// Times the grid step is halved while refining a cluster representative.
    pub refine_levels: usize,
    /// Uniform grid used when concavifying.
    pub concavify_grid: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            grid: 0.02,
            tol_dev: 1e-6,
            tol_search: 1e-3,
            cluster_tol: 0.02,
            refine_levels: 5,
            concavify_grid: DEFAULT_GRID,
        }
    }
}

/// A complete game: prior, belief-based utilities of the three players and
/// search settings.
#[derive(Clone, Debug, PartialEq)]
pub struct GameSpec {
    pub prior: f64,
    pub sender: PiecewiseUtility,
    pub mediator: PiecewiseUtility,
    pub receiver: PiecewiseUtility,
    pub search: SearchConfig,
    pub seed: u64,
}

impl GameSpec {
    pub fn new(prior: f64, sender: PiecewiseUtility, mediator: PiecewiseUtility, receiver: PiecewiseUtility) -> Result<Self> {
        let prior = check_belief(prior)?;
        Ok(Self { prior, sender, mediator, receiver, search: SearchConfig::default(), seed: 0 })
    }

    pub fn with_search(mut self, search: SearchConfig) -> Result<Self> {
        let n = 1.0 / search.grid;
        if !(search.grid > 0.0 && search.grid <= 0.5) || (n - n.round()).abs() > 1e-9 {
            return Err(Error::InvalidArgument(format!("grid step {} must divide 1", search.grid)));
        }
        if !(search.tol_dev >= 0.0 && search.tol_search >= 0.0 && search.cluster_tol >= 0.0) {
            return Err(Error::InvalidArgument("tolerances must be nonnegative".into()));
        }
        self.search = search;
        Ok(self)
    }
}
