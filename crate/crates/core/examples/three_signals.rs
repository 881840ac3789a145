//! A three-signal garbling reaches posteriors that its two-signal
//! restriction cannot.

use mediated_persuasion::feasible::sample_feasible_general;
use mediated_persuasion::fixtures;
use mediated_persuasion::info::StochasticMatrix;

fn main() -> mediated_persuasion::Result<()> {
    let s = fixtures::scenario(fixtures::THREE_SIGNALS);
    let sigma = s.sigma()?;
    let cloud = sample_feasible_general(sigma, s.prior, 0.02)?;
    println!("3 signals: {} experiments, beliefs in [{:.4}, {:.4}]", cloud.len(), cloud.min_belief(), cloud.max_belief());

    // Keep the first two inputs and outputs, renormalising the columns.
    let r = sigma.to_rows();
    let keep = |j: usize| r[0][j] + r[1][j];
    let restricted = StochasticMatrix::new(&[
        vec![r[0][0] / keep(0), r[0][1] / keep(1)],
        vec![r[1][0] / keep(0), r[1][1] / keep(1)],
    ])?;
    let two = sample_feasible_general(&restricted, s.prior, 0.02)?;
    println!("2 signals: {} experiments, beliefs in [{:.4}, {:.4}]", two.len(), two.min_belief(), two.max_belief());
    Ok(())
}
