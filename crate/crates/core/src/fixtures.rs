//! Worked examples shipped with the crate, as scenario files.
//!
//! Columns of every garbling are ordered `(state 1, state 2)` and beliefs are
//! probabilities of state 2.

use crate::cli::Scenario;
use crate::cli::format::parse_matrix;
use crate::info::StochasticMatrix;

pub const PROSECUTOR: &str = include_str!("../fixtures/prosecutor.json");
pub const BUTTERFLY: &str = include_str!("../fixtures/butterfly.json");
pub const THREE_SIGNALS: &str = include_str!("../fixtures/three_signals.json");
pub const TWO_OUTCOMES: &str = include_str!("../fixtures/two_outcomes.json");
pub const INFORMATIVE: &str = include_str!("../fixtures/informative.json");
pub const THREE_STEP: &str = include_str!("../fixtures/three_step.json");
pub const RANKED: &str = include_str!("../fixtures/ranked.txt");
pub const UNRANKED: &str = include_str!("../fixtures/unranked.txt");

/// All scenario fixtures by file stem.
pub const SCENARIOS: [(&str, &str); 6] =
    [("prosecutor", PROSECUTOR), ("butterfly", BUTTERFLY), ("three_signals", THREE_SIGNALS), ("two_outcomes", TWO_OUTCOMES), ("informative", INFORMATIVE), ("three_step", THREE_STEP)];

pub fn scenario(text: &str) -> Scenario {
    Scenario::from_json(text).expect("shipped fixtures parse")
}

/// The two matrices of a pair file.
pub fn pair(text: &str) -> (StochasticMatrix, StochasticMatrix) {
    let mut it = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
    let a = parse_matrix(it.next().expect("first matrix")).expect("shipped fixtures parse");
    let b = parse_matrix(it.next().expect("second matrix")).expect("shipped fixtures parse");
    (a, b)
}

/// Garbling under which the revealing experiment is an equilibrium of the
/// three-step fixture.
pub fn three_step_sigma() -> StochasticMatrix {
    parse_matrix("6/7,3/7;1/7,4/7").expect("valid")
}

/// Signal of the informative mediated equilibrium with two-point sender peaks.
pub fn informative_sigma() -> StochasticMatrix {
    parse_matrix("1/100,1/2;99/100,1/2").expect("valid")
}
