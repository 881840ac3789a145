use serde::Serialize;

use crate::feasible::reconstruct_experiment;
use crate::info::{check_belief, BeliefDistribution, StochasticMatrix};
use crate::payoffs::{concavify, expected_utility, PiecewiseUtility, DEFAULT_GRID};
use crate::{Result, TOL};

/// Optimal unmediated persuasion.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BpSolution {
    pub tau: BeliefDistribution,
    pub x: StochasticMatrix,
    pub value: f64,
    /// Set when a support point only approaches the optimum (open end of a
    /// piece); the value is then a supremum reached to within the grid.
    pub epsilon_optimal: bool,
}

pub fn bp_solve(u_s: &PiecewiseUtility, prior: f64) -> Result<BpSolution> {
    bp_solve_with(u_s, prior, DEFAULT_GRID)
}

/// Concavifies the sender's utility on `[0, 1]` and splits the prior onto the
/// ends of the envelope segment above it. Babbles when the utility already
/// touches its envelope at the prior.
pub fn bp_solve_with(u_s: &PiecewiseUtility, prior: f64, grid: usize) -> Result<BpSolution> {
    let prior = check_belief(prior)?;
    let env = concavify(u_s, 0.0, 1.0, grid)?;
    let (lo, hi) = env.supporting_segment(prior);
    let flat = u_s.eval(prior) >= env.value(prior) - TOL;
    if flat || hi - lo <= TOL || prior <= 0.0 || prior >= 1.0 {
        return Ok(BpSolution {
            tau: BeliefDistribution::point(prior)?,
            x: StochasticMatrix::uninformative(2, 2),
            value: u_s.eval(prior),
            epsilon_optimal: false,
        });
    }
    let tau = BeliefDistribution::binary(lo, hi, prior)?;
    let x = reconstruct_experiment(&StochasticMatrix::identity(2), prior, &tau)?;
    let flagged = |b: f64| env.unattained.iter().any(|&t| (t - b).abs() <= 1e-9);
    Ok(BpSolution { value: expected_utility(u_s, &tau), epsilon_optimal: flagged(lo) || flagged(hi), tau, x })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kg() {
        let u = PiecewiseUtility::step(&[0.5], &[0.0, 1.0]).unwrap();
        let s = bp_solve(&u, 0.3).unwrap();
        assert!((s.value - 0.6).abs() < 1e-12);
        let a = s.tau.atoms();
        assert_eq!((a[0].belief, a[1].belief), (0.0, 0.5));
        assert!((a[0].prob - 0.4).abs() < 1e-12);
        let x = StochasticMatrix::binary(4.0 / 7.0, 0.0).unwrap();
        assert!(s.x.max_abs_diff(&x) < 1e-12);
    }

    #[test]
    fn concave_babbles() {
        let u = PiecewiseUtility::from_points(&[(0.0, 0.0), (0.4, 1.0), (1.0, 0.2)], Default::default(), &[]).unwrap();
        let s = bp_solve(&u, 0.7).unwrap();
        assert!(s.tau.is_degenerate());
        assert!(s.x.is_uninformative());
    }

    #[test]
    fn three_steps_below_the_chord() {
        // With k₃ ≤ 2k₂ − k₁ the middle step stays on the envelope.
        let u = PiecewiseUtility::step(&[1.0 / 3.0, 2.0 / 3.0], &[0.0, 1.0, 1.5]).unwrap();
        let s = bp_solve(&u, 0.5).unwrap();
        let a = s.tau.atoms();
        assert!((a[0].belief - 1.0 / 3.0).abs() < 1e-12 && (a[1].belief - 2.0 / 3.0).abs() < 1e-12);
        let x = StochasticMatrix::binary(2.0 / 3.0, 1.0 / 3.0).unwrap();
        assert!(s.x.max_abs_diff(&x) < 1e-12);
    }
}
