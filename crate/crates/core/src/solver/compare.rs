use serde::Serialize;

use super::{GameSpec, Values};
use crate::info::{is_mps, BeliefDistribution, Dense};
use crate::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Informativeness {
    MpMoreInformative,
    BpMoreInformative,
    Equivalent,
    Unranked,
}

/// Mediated minus unmediated payoffs.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Welfare {
    pub sender: f64,
    pub mediator: f64,
    pub receiver: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub informativeness: Informativeness,
    /// Transition matrix witnessing the spread, when one side spreads the other.
    pub witness: Option<Dense>,
    pub mediated: Values,
    pub unmediated: Values,
    pub welfare: Welfare,
    pub receiver_benefits: bool,
}

/// Ranks a mediated outcome against the unmediated one by mean-preserving
/// spread and reports payoff differences.
pub fn compare_outcomes(game: &GameSpec, mediated: &BeliefDistribution, unmediated: &BeliefDistribution) -> Result<ComparisonReport> {
    let mp_spreads = is_mps(mediated, unmediated)?;
    let bp_spreads = is_mps(unmediated, mediated)?;
    let (informativeness, witness) = match (mp_spreads.holds, bp_spreads.holds) {
        (true, true) => (Informativeness::Equivalent, mp_spreads.witness),
        (true, false) => (Informativeness::MpMoreInformative, mp_spreads.witness),
        (false, true) => (Informativeness::BpMoreInformative, bp_spreads.witness),
        (false, false) => (Informativeness::Unranked, None),
    };
    let m = Values::of(game, mediated);
    let u = Values::of(game, unmediated);
    let welfare = Welfare { sender: m.sender - u.sender, mediator: m.mediator - u.mediator, receiver: m.receiver - u.receiver };
    Ok(ComparisonReport {
        informativeness,
        witness,
        mediated: m,
        unmediated: u,
        receiver_benefits: welfare.receiver > crate::TOL,
        welfare,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::payoffs::PiecewiseUtility;

    #[test]
    fn revelation_spreads_kg() {
        let s = PiecewiseUtility::step(&[0.5], &[0.0, 1.0]).unwrap();
        let r = PiecewiseUtility::from_points(&[(0.0, 1.0), (0.5, 0.5), (1.0, 1.0)], Default::default(), &[]).unwrap();
        let g = GameSpec::new(0.3, s, r.clone(), r).unwrap();
        let full = BeliefDistribution::binary(0.0, 1.0, 0.3).unwrap();
        let kg = BeliefDistribution::binary(0.0, 0.5, 0.3).unwrap();
        let c = compare_outcomes(&g, &full, &kg).unwrap();
        assert_eq!(c.informativeness, Informativeness::MpMoreInformative);
        assert!(c.witness.is_some());
        assert!(c.receiver_benefits);
        assert!((c.welfare.sender + 0.3).abs() < 1e-12);
    }
}
