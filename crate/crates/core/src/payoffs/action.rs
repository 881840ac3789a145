use super::utility::{Affine, Piece, PiecewiseUtility};
use crate::{Error, Result};

/// Payoffs `u(action, state)` over two states for the three players.
#[derive(Clone, Debug, PartialEq)]
pub struct ActionGame {
    pub actions: Vec<String>,
    pub sender: Vec<[f64; 2]>,
    pub mediator: Vec<[f64; 2]>,
    pub receiver: Vec<[f64; 2]>,
}

/// Belief-based utilities after compiling away the receiver's choice.
#[derive(Clone, Debug, PartialEq)]
pub struct InducedUtilities {
    pub sender: PiecewiseUtility,
    pub mediator: PiecewiseUtility,
    pub receiver: PiecewiseUtility,
}

fn line(p: [f64; 2]) -> Affine {
    Affine::new(p[1] - p[0], p[0])
}

impl ActionGame {
    pub fn new(
        actions: Vec<String>,
        sender: Vec<[f64; 2]>,
        mediator: Vec<[f64; 2]>,
        receiver: Vec<[f64; 2]>,
    ) -> Result<Self> {
        let n = actions.len();
        if n < 2 {
            return Err(Error::InvalidUtility("an action game needs at least two actions".into()));
        }
        if sender.len() != n || mediator.len() != n || receiver.len() != n {
            return Err(Error::InvalidUtility("payoff tables must list every action".into()));
        }
        if [&sender, &mediator, &receiver].iter().any(|t| t.iter().flatten().any(|v| !v.is_finite())) {
            return Err(Error::InvalidUtility("non-finite payoff".into()));
        }
        Ok(Self { actions, sender, mediator, receiver })
    }

    /// Receiver's choice at `beta`: among her maximizers, the sender's
    /// favorite, then the lowest index.
    pub fn receiver_action(&self, beta: f64) -> usize {
        let vals: Vec<f64> = self.receiver.iter().map(|&p| line(p).at(beta)).collect();
        let best = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let scale = 1.0 + best.abs();
        let mut choice = None::<usize>;
        for (a, &v) in vals.iter().enumerate() {
            if best - v > 1e-12 * scale {
                continue;
            }
            choice = match choice {
                Some(c) if line(self.sender[c]).at(beta) >= line(self.sender[a]).at(beta) => Some(c),
                _ => Some(a),
            };
        }
        choice.expect("at least one action")
    }

    /// Belief-based utilities with the sender-favored tie-break. Breakpoints
    /// sit at beliefs where the receiver is indifferent between two actions.
    pub fn induce(&self) -> InducedUtilities {
        let mut knots = vec![0.0, 1.0];
        for a in 0..self.receiver.len() {
            for b in a + 1..self.receiver.len() {
                let (f, g) = (line(self.receiver[a]), line(self.receiver[b]));
                let ds = f.slope - g.slope;
                if ds.abs() > 1e-15 {
                    let t = (g.intercept - f.intercept) / ds;
                    if t > 0.0 && t < 1.0 {
                        knots.push(t);
                    }
                }
            }
        }
        knots.sort_by(f64::total_cmp);
        knots.dedup_by(|x, y| (*x - *y).abs() <= 1e-12);

        let at_knots: Vec<usize> = knots.iter().map(|&t| self.receiver_action(t)).collect();
        let on_segments: Vec<usize> = knots.windows(2).map(|w| self.receiver_action(0.5 * (w[0] + w[1]))).collect();
        let build = |table: &[[f64; 2]]| {
            from_choices(&knots, &at_knots, &on_segments, table).expect("breakpoints partition [0, 1]")
        };
        InducedUtilities {
            sender: build(&self.sender),
            mediator: build(&self.mediator),
            receiver: build(&self.receiver),
        }
    }
}

fn from_choices(knots: &[f64], at_knots: &[usize], on_segments: &[usize], table: &[[f64; 2]]) -> Result<PiecewiseUtility> {
    let mut pieces = Vec::with_capacity(2 * knots.len());
    for (k, &t) in knots.iter().enumerate() {
        pieces.push(Piece::Point { at: t, value: line(table[at_knots[k]]).at(t) });
    }
    for (s, w) in knots.windows(2).enumerate() {
        pieces.push(Piece::Interval {
            lo: w[0],
            hi: w[1],
            lo_closed: false,
            hi_closed: false,
            f: line(table[on_segments[s]]),
        });
    }
    PiecewiseUtility::from_pieces(&pieces).map(|u| u.simplify())
}

/// Induced belief utilities for `g`; see [`ActionGame::induce`].
pub fn induce_belief_utilities(g: &ActionGame) -> InducedUtilities {
    g.induce()
}
