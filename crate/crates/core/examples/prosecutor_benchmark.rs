//! Unmediated benchmark: a prosecutor who always wants a conviction and a
//! judge who convicts once guilt is at least as likely as innocence.
//!
//! ```text
//! cargo run --example prosecutor_benchmark
//! ```

use mediated_persuasion::cli::format::{format_matrix, format_number};
use mediated_persuasion::fixtures;
use mediated_persuasion::solver::bp_solve;

fn main() -> mediated_persuasion::Result<()> {
    let s = fixtures::scenario(fixtures::PROSECUTOR);
    let sender = s.sender.as_ref().expect("fixture has a sender");
    let bp = bp_solve(sender, s.prior)?;
    println!("prior {}", format_number(s.prior));
    for a in bp.tau.atoms() {
        println!("  posterior {:<8} with probability {}", format_number(a.belief), format_number(a.prob));
    }
    println!("conviction rate {}", format_number(bp.value));
    println!("experiment {}", format_matrix(&bp.x));
    Ok(())
}
