//! Blackwell comparison of garblings, with the garbling that witnesses it.

use mediated_persuasion::cli::format::{format_dense, format_matrix};
use mediated_persuasion::fixtures;
use mediated_persuasion::info::{blackwell_compare, BlackwellOrder};

fn main() -> mediated_persuasion::Result<()> {
    for (name, text) in [("ranked", fixtures::RANKED), ("unranked", fixtures::UNRANKED)] {
        let (a, b) = fixtures::pair(text);
        let verdict = blackwell_compare(&a, &b)?;
        println!("{name}: {}  vs  {}  ->  {}", format_matrix(&a), format_matrix(&b), verdict.label());
        if let BlackwellOrder::Dominates { gamma } | BlackwellOrder::DominatedBy { gamma } = &verdict {
            println!("  gamma {}", format_dense(gamma));
        }
    }
    Ok(())
}
