//! Which posterior pairs can a sender induce when a fixed garbling sits
//! between the sender's experiment and the receiver?

use mediated_persuasion::cli::format::format_matrix;
use mediated_persuasion::feasible::{membership, wing_polygons, Wing, DEFAULT_POINTS};
use mediated_persuasion::fixtures;

fn main() -> mediated_persuasion::Result<()> {
    let s = fixtures::scenario(fixtures::BUTTERFLY);
    let sigma = s.sigma()?;
    let set = wing_polygons(sigma, s.prior, DEFAULT_POINTS)?;
    for (w, name) in [(Wing::Natural, "natural"), (Wing::Perverse, "perverse")] {
        let poly = set.wing(w);
        println!("{name} wing: {} vertices", poly.len());
        for (b1, b2) in poly.iter().step_by((poly.len() / 6).max(1)) {
            println!("  ({b1:.4}, {b2:.4})");
        }
    }

    // Full revelation is out of reach once the signal is garbled.
    for (b1, b2) in [(0.0, 1.0), (0.2, 0.4), (0.45, 0.2)] {
        match membership(sigma, s.prior, b1, b2)? {
            Some(x) => println!("({b1}, {b2}) via X = {}", format_matrix(&x)),
            None => println!("({b1}, {b2}) not inducible"),
        }
    }
    Ok(())
}
