//! Equilibrium check with a certificate. A refuted check names the player
//! who deviates and the outcome the deviation induces.

use mediated_persuasion::cli::format::format_matrix;
use mediated_persuasion::fixtures;
use mediated_persuasion::info::{BeliefDistribution, StochasticMatrix};
use mediated_persuasion::solver::{check_equilibrium, Verdict};

fn main() -> mediated_persuasion::Result<()> {
    let game = fixtures::scenario(fixtures::THREE_STEP).game()?;
    let c = check_equilibrium(&game, &StochasticMatrix::identity(2), &fixtures::three_step_sigma())?;
    println!("outcome {}", show(&c.tau));
    println!("values {:?}", c.values);
    match &c.verdict {
        Verdict::Verified { tol } => println!("verified at {tol:e}"),
        Verdict::Refuted { deviation } => {
            println!("refuted: {:?} gains {:.6}", deviation.player, deviation.gain);
            println!("  deviation {}", format_matrix(&deviation.matrix));
            println!("  induces {}", show(&deviation.tau));
        }
    }
    Ok(())
}

fn show(t: &BeliefDistribution) -> String {
    let parts: Vec<String> = t.atoms().iter().map(|a| format!("{:.4} w.p. {:.4}", a.belief, a.prob)).collect();
    parts.join(", ")
}
