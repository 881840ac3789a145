//! Grid search for equilibria of a game with exactly two equilibrium
//! outcomes: babbling and a garbled version of full revelation.
//!
//! Set `MP_THREADS` to cap the worker pool.

use std::time::Instant;

use mediated_persuasion::cli::format::format_matrix;
use mediated_persuasion::fixtures;
use mediated_persuasion::solver::{bp_solve, check_equilibrium, search_equilibria};
use mediated_persuasion::info::StochasticMatrix;

fn main() -> mediated_persuasion::Result<()> {
    let game = fixtures::scenario(fixtures::TWO_OUTCOMES).game()?;
    let start = Instant::now();
    let out = search_equilibria(&game)?;
    println!(
        "{} profiles, {} kept, {} anchored, {:.1?}",
        out.profiles,
        out.kept,
        out.anchored,
        start.elapsed()
    );
    for c in &out.clusters {
        let r = &c.representative;
        let atoms: Vec<_> = r.tau.atoms().iter().map(|a| (a.belief, a.prob)).collect();
        println!("outcome {atoms:.4?}  members {}  babbling {}", c.members, c.is_babbling());
        println!("  X = {}  Σ = {}", format_matrix(&r.x), format_matrix(&r.sigma));
    }
    println!("{} clusters did not verify", out.unverified.len());

    // The unmediated optimum is not an equilibrium: the mediator garbles it.
    let bp = bp_solve(&game.sender, game.prior)?;
    let c = check_equilibrium(&game, &bp.x, &StochasticMatrix::identity(2))?;
    println!("benchmark with Σ = I: sender gap {:.4}, mediator gap {:.4}", c.sender_gap, c.mediator_gap);
    Ok(())
}
