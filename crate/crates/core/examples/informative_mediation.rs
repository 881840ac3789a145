//! A mediator who garbles can end up with a more informative outcome than
//! the sender would choose alone.

use mediated_persuasion::fixtures;
use mediated_persuasion::info::{induced_tau, BeliefDistribution, StochasticMatrix};
use mediated_persuasion::solver::{bp_solve, check_equilibrium, compare_outcomes};

fn main() -> mediated_persuasion::Result<()> {
    let game = fixtures::scenario(fixtures::INFORMATIVE).game()?;
    let x = StochasticMatrix::identity(2);
    let sigma = fixtures::informative_sigma();

    let cert = check_equilibrium(&game, &x, &sigma)?;
    println!("verified {} (gaps {:.1e}, {:.1e})", cert.is_verified(), cert.sender_gap, cert.mediator_gap);

    let mediated = induced_tau(&sigma.compose(&x)?, game.prior)?;
    let alone = bp_solve(&game.sender, game.prior)?.tau;
    let r = compare_outcomes(&game, &mediated, &alone)?;
    println!("mediated   {}", show(&mediated));
    println!("unmediated {}", show(&alone));
    println!("{:?}", r.informativeness);
    println!("welfare change {:?}, receiver better off: {}", r.welfare, r.receiver_benefits);
    Ok(())
}

fn show(t: &BeliefDistribution) -> String {
    let parts: Vec<String> = t.atoms().iter().map(|a| format!("{:.4} w.p. {:.4}", a.belief, a.prob)).collect();
    parts.join(", ")
}
