use serde::Serialize;

use crate::feasible::posterior_pair;
use crate::info::{check_belief, BeliefDistribution, Dense, StochasticMatrix};
use crate::payoffs::{concavify, expected_utility, PiecewiseUtility, DEFAULT_GRID};
use crate::{Error, Result, TOL};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MediatorResponse {
    pub sigma: StochasticMatrix,
    pub tau: BeliefDistribution,
    pub value: f64,
}

pub fn mediator_best_response(u_m: &PiecewiseUtility, x: &StochasticMatrix, prior: f64) -> Result<MediatorResponse> {
    mediator_best_response_with(u_m, x, prior, DEFAULT_GRID)
}

/// Mediator's optimal garbling of a binary experiment.
///
/// Garblings of `x` reach exactly the Bayes-plausible distributions on the
/// posterior interval `[β_L, β_H]` of `x`, so the mediator concavifies `u_m`
/// there. Among optimal garblings the most informative one is returned: the
/// widest envelope segment above the prior, or `x` itself when that segment
/// spans the whole interval.
pub fn mediator_best_response_with(
    u_m: &PiecewiseUtility,
    x: &StochasticMatrix,
    prior: f64,
    grid: usize,
) -> Result<MediatorResponse> {
    let prior = check_belief(prior)?;
    if !x.is_binary() {
        return Err(Error::DimensionMismatch(format!("expected a 2x2 experiment, found {}x{}", x.rows(), x.cols())));
    }
    let pair = posterior_pair(x, prior).filter(|p| (p.b1 - p.b2).abs() > TOL && x.inverse().is_some());
    let Some(pair) = pair else {
        return Ok(MediatorResponse {
            sigma: StochasticMatrix::identity(2),
            tau: BeliefDistribution::point(prior)?,
            value: u_m.eval(prior),
        });
    };
    let (bl, bh) = (pair.b1.min(pair.b2), pair.b1.max(pair.b2));
    let env = concavify(u_m, bl, bh, grid)?;
    let (lo, hi) = env.supporting_segment(prior);
    if hi - lo <= TOL {
        return Ok(MediatorResponse {
            sigma: StochasticMatrix::uninformative(2, 2),
            tau: BeliefDistribution::point(prior)?,
            value: u_m.eval(prior),
        });
    }
    let tau = BeliefDistribution::binary(lo, hi, prior)?;
    let (p_lo, p_hi) = (tau.atoms()[0].prob, tau.atoms()[1].prob);
    // Keep x's signal orientation so that no garbling needed maps to the identity.
    let rows = if pair.b1 <= pair.b2 { [(lo, p_lo), (hi, p_hi)] } else { [(hi, p_hi), (lo, p_lo)] };
    let b = Dense::from_fn(2, 2, |s, w| {
        let (beta, p) = rows[s];
        if w == 1 {
            beta * p / prior
        } else {
            (1.0 - beta) * p / (1.0 - prior)
        }
    });
    let inv = x.inverse().expect("checked above");
    let sigma = StochasticMatrix::from_dense(&b.mul(&inv)?, 1e-7)
        .ok_or_else(|| Error::Solver("garbling of the experiment left the simplex".into()))?;
    let sigma = if sigma.max_abs_diff(&StochasticMatrix::identity(2)) <= 1e-9 { StochasticMatrix::identity(2) } else { sigma };
    Ok(MediatorResponse { value: expected_utility(u_m, &tau), sigma, tau })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v_shape() -> PiecewiseUtility {
        PiecewiseUtility::from_points(&[(0.0, 1.0), (0.5, 0.5), (1.0, 1.0)], Default::default(), &[]).unwrap()
    }

    #[test]
    fn kg_case_two_keeps_identity() {
        let x = StochasticMatrix::binary(4.0 / 7.0, 0.0).unwrap();
        let r = mediator_best_response(&v_shape(), &x, 0.3).unwrap();
        assert_eq!(r.sigma, StochasticMatrix::identity(2));
        assert!((r.value - 0.7).abs() < 1e-12);
    }

    #[test]
    fn two_outcome_mediator_garbles_revelation() {
        let u = PiecewiseUtility::from_points(
            &[(0.0, 0.0), (1.0 / 3.0, 1.0), (0.5, 0.5), (2.0 / 3.0, 1.0), (1.0, 0.0)],
            Default::default(),
            &[],
        )
        .unwrap();
        let r = mediator_best_response(&u, &StochasticMatrix::identity(2), 0.5).unwrap();
        let expect = StochasticMatrix::binary(2.0 / 3.0, 1.0 / 3.0).unwrap();
        assert!(r.sigma.max_abs_diff(&expect) < 1e-9, "{}", r.sigma);
        assert!((r.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn uninformative_experiment() {
        let r = mediator_best_response(&v_shape(), &StochasticMatrix::uninformative(2, 2), 0.3).unwrap();
        assert_eq!(r.sigma, StochasticMatrix::identity(2));
        assert!((r.value - 0.7).abs() < 1e-12);
    }

    #[test]
    fn concave_mediator_babbles() {
        let u = PiecewiseUtility::from_points(&[(0.0, 0.0), (0.5, 1.0), (1.0, 0.0)], Default::default(), &[]).unwrap();
        let r = mediator_best_response(&u, &StochasticMatrix::identity(2), 0.5).unwrap();
        assert!(r.tau.is_degenerate());
        assert!(r.sigma.is_uninformative());
    }
}
