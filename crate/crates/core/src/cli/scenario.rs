//! Scenario files.
//!
//! ```json
//! {
//!   "prior": 0.3,
//!   "sigma": [["2/3", "1/4"], ["1/3", "3/4"]],
//!   "utilities": {
//!     "sender": { "type": "pwl", "points": [[0, 0], [0.5, 0], [0.5, 1], [1, 1]] },
//!     "mediator": { "type": "actions", "actions": ["a", "b"],
//!                   "payoffs": { "mediator": [[1, 0], [0, 1]], "receiver": [[1, 0], [0, 1]] } }
//!   },
//!   "search": { "grid": 0.02, "tol_dev": 1e-6, "tol_search": 1e-3 },
//!   "seed": 7
//! }
//! ```
//!
//! Numbers may be written as strings holding fractions. Unknown keys are
//! rejected. A repeated `β` in `points` marks a jump; `closed_side` says which
//! side owns it.

use std::path::Path;

use serde::Deserialize;

use super::format::parse_number;
use crate::info::StochasticMatrix;
use crate::payoffs::{ActionGame, ClosedSide, PiecewiseUtility};
use crate::solver::{GameSpec, SearchConfig};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Num(pub f64);

impl<'de> Deserialize<'de> for Num {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            F(f64),
            S(String),
        }
        match Raw::deserialize(d)? {
            Raw::F(v) => Ok(Num(v)),
            Raw::S(s) => parse_number(&s).map(Num).map_err(serde::de::Error::custom),
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub prior: Num,
    #[serde(default)]
    pub sigma: Option<Vec<Vec<Num>>>,
    #[serde(default)]
    pub utilities: Option<Utilities>,
    #[serde(default)]
    pub search: Option<SearchSection>,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Utilities {
    pub sender: Option<UtilitySpec>,
    pub mediator: Option<UtilitySpec>,
    pub receiver: Option<UtilitySpec>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum UtilitySpec {
    Pwl {
        points: Vec<[Num; 2]>,
        #[serde(default)]
        singletons: Vec<[Num; 2]>,
        #[serde(default)]
        closed_side: Side,
    },
    Actions {
        actions: Vec<String>,
        payoffs: Payoffs,
    },
}

#[derive(Clone, Copy, Debug, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Left,
    #[default]
    Right,
}

/// Payoff per action and state. A missing sender table defaults to the
/// player's own; a missing mediator table to the receiver's.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Payoffs {
    pub sender: Option<Vec<[Num; 2]>>,
    pub mediator: Option<Vec<[Num; 2]>>,
    pub receiver: Vec<[Num; 2]>,
}

#[derive(Clone, Copy, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchSection {
    pub grid: Option<Num>,
    pub tol_dev: Option<Num>,
    pub tol_search: Option<Num>,
    pub cluster_tol: Option<Num>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Role {
    Sender,
    Mediator,
    Receiver,
}

fn table(t: &[[Num; 2]]) -> Vec<[f64; 2]> {
    t.iter().map(|r| [r[0].0, r[1].0]).collect()
}

impl UtilitySpec {
    pub fn build(&self, role: Role) -> Result<PiecewiseUtility> {
        match self {
            UtilitySpec::Pwl { points, singletons, closed_side } => {
                let pts: Vec<(f64, f64)> = points.iter().map(|p| (p[0].0, p[1].0)).collect();
                let single: Vec<(f64, f64)> = singletons.iter().map(|p| (p[0].0, p[1].0)).collect();
                let side = match closed_side {
                    Side::Left => ClosedSide::Left,
                    Side::Right => ClosedSide::Right,
                };
                PiecewiseUtility::from_points(&pts, side, &single)
            }
            UtilitySpec::Actions { actions, payoffs } => {
                let receiver = table(&payoffs.receiver);
                let own = match role {
                    Role::Sender => payoffs.sender.as_deref(),
                    Role::Mediator => Some(payoffs.mediator.as_deref().unwrap_or(&payoffs.receiver)),
                    Role::Receiver => Some(payoffs.receiver.as_slice()),
                }
                .ok_or_else(|| Error::Scenario(format!("actions utility for {role:?} lacks its payoff table")))?;
                let own = table(own);
                let sender = payoffs.sender.as_deref().map(table).unwrap_or_else(|| own.clone());
                let mediator = payoffs.mediator.as_deref().map(table).unwrap_or_else(|| receiver.clone());
                let induced = ActionGame::new(actions.clone(), sender, mediator, receiver)?.induce();
                Ok(match role {
                    Role::Sender => induced.sender,
                    Role::Mediator => induced.mediator,
                    Role::Receiver => induced.receiver,
                })
            }
        }
    }
}

/// A parsed and validated scenario.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub prior: f64,
    pub sigma: Option<StochasticMatrix>,
    pub sender: Option<PiecewiseUtility>,
    pub mediator: Option<PiecewiseUtility>,
    pub receiver: Option<PiecewiseUtility>,
    pub search: SearchConfig,
    pub seed: u64,
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: ScenarioFile = serde_json::from_str(text).map_err(|e| Error::Scenario(e.to_string()))?;
        raw.validate()
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Scenario(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// The full game; every utility must be present. A missing receiver
    /// utility falls back to the mediator's.
    pub fn game(&self) -> Result<GameSpec> {
        let need = |u: &Option<PiecewiseUtility>, who: &str| {
            u.clone().ok_or_else(|| Error::Scenario(format!("scenario has no {who} utility")))
        };
        let sender = need(&self.sender, "sender")?;
        let mediator = need(&self.mediator, "mediator")?;
        let receiver = self.receiver.clone().unwrap_or_else(|| mediator.clone());
        let mut g = GameSpec::new(self.prior, sender, mediator, receiver)?.with_search(self.search)?;
        g.seed = self.seed;
        Ok(g)
    }

    pub fn sigma(&self) -> Result<&StochasticMatrix> {
        self.sigma.as_ref().ok_or_else(|| Error::Scenario("scenario has no sigma".into()))
    }
}

impl ScenarioFile {
    fn validate(self) -> Result<Scenario> {
        let prior = crate::info::Belief::new(self.prior.0)?.value();
        let sigma = match &self.sigma {
            Some(rows) => Some(StochasticMatrix::new(
                &rows.iter().map(|r| r.iter().map(|n| n.0).collect()).collect::<Vec<Vec<f64>>>(),
            )?),
            None => None,
        };
        let (mut sender, mut mediator, mut receiver) = (None, None, None);
        if let Some(u) = &self.utilities {
            sender = u.sender.as_ref().map(|s| s.build(Role::Sender)).transpose()?;
            mediator = u.mediator.as_ref().map(|s| s.build(Role::Mediator)).transpose()?;
            receiver = u.receiver.as_ref().map(|s| s.build(Role::Receiver)).transpose()?;
        }
        let mut search = SearchConfig::default();
        if let Some(s) = self.search {
            if let Some(v) = s.grid {
                search.grid = v.0;
            }
            if let Some(v) = s.tol_dev {
                search.tol_dev = v.0;
            }
            if let Some(v) = s.tol_search {
                search.tol_search = v.0;
            }
            if let Some(v) = s.cluster_tol {
                search.cluster_tol = v.0;
            }
        }
        Ok(Scenario { prior, sigma, sender, mediator, receiver, search, seed: self.seed })
    }
}
