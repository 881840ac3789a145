use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use super::{mediator_best_response_with, sender_best_response_with, GameSpec, Player, SenderOptions};
use crate::feasible::pair_from_uv;
use crate::info::{induced_tau, transport, BeliefDistribution, StochasticMatrix};
use crate::payoffs::{expected_utility, PiecewiseUtility};
use crate::Result;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Values {
    pub sender: f64,
    pub mediator: f64,
    pub receiver: f64,
}

impl Values {
    pub fn of(game: &GameSpec, tau: &BeliefDistribution) -> Self {
        Self {
            sender: expected_utility(&game.sender, tau),
            mediator: expected_utility(&game.mediator, tau),
            receiver: expected_utility(&game.receiver, tau),
        }
    }
}

/// A profitable unilateral deviation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Deviation {
    pub player: Player,
    /// The deviating player's new matrix (`X` for the sender, `Σ` for the mediator).
    pub matrix: StochasticMatrix,
    pub tau: BeliefDistribution,
    pub gain: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Verdict {
    Verified { tol: f64 },
    Refuted { deviation: Deviation },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EquilibriumCertificate {
    pub x: StochasticMatrix,
    pub sigma: StochasticMatrix,
    pub tau: BeliefDistribution,
    pub values: Values,
    pub sender_gap: f64,
    pub mediator_gap: f64,
    pub verdict: Verdict,
}

impl EquilibriumCertificate {
    pub fn is_verified(&self) -> bool {
        matches!(self.verdict, Verdict::Verified { .. })
    }

    pub fn max_gap(&self) -> f64 {
        self.sender_gap.max(self.mediator_gap)
    }
}

pub fn check_equilibrium(game: &GameSpec, x: &StochasticMatrix, sigma: &StochasticMatrix) -> Result<EquilibriumCertificate> {
    check_equilibrium_with(game, x, sigma, 1, game.search.tol_dev)
}

/// Best-response gaps of both designers at `(x, σ)`. `refine` multiplies the
/// density of every deviation grid; the verdict uses tolerance `tol`.
pub fn check_equilibrium_with(
    game: &GameSpec,
    x: &StochasticMatrix,
    sigma: &StochasticMatrix,
    refine: usize,
    tol: f64,
) -> Result<EquilibriumCertificate> {
    let refine = refine.max(1);
    let b = sigma.compose(x)?;
    let tau = induced_tau(&b, game.prior)?;
    let values = Values::of(game, &tau);
    let sbr = sender_best_response_with(&game.sender, sigma, game.prior, SenderOptions::default().refined(refine))?;
    let mbr = mediator_best_response_with(&game.mediator, x, game.prior, game.search.concavify_grid * refine)?;
    let sender_gap = (sbr.value - values.sender).max(0.0);
    let mediator_gap = (mbr.value - values.mediator).max(0.0);
    let verdict = if sender_gap <= tol && mediator_gap <= tol {
        Verdict::Verified { tol }
    } else if sender_gap >= mediator_gap {
        Verdict::Refuted { deviation: Deviation { player: Player::Sender, matrix: sbr.x, tau: sbr.tau, gain: sender_gap } }
    } else {
        Verdict::Refuted {
            deviation: Deviation { player: Player::Mediator, matrix: mbr.sigma, tau: mbr.tau, gain: mediator_gap },
        }
    };
    Ok(EquilibriumCertificate { x: x.clone(), sigma: sigma.clone(), tau, values, sender_gap, mediator_gap, verdict })
}

/// One equilibrium outcome found by the search.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OutcomeCluster {
    /// Outcome of the first profile that opened the cluster.
    pub anchor: BeliefDistribution,
    /// Profiles that passed the search tolerance.
    pub members: usize,
    /// Smallest grid gap among members, before refinement.
    pub grid_gap: f64,
    /// Representative after local refinement, checked at `tol_dev`.
    pub representative: EquilibriumCertificate,
}

impl OutcomeCluster {
    pub fn is_babbling(&self) -> bool {
        self.anchor.is_degenerate()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchOutcome {
    /// Grid profiles swept.
    pub profiles: usize,
    /// Grid profiles within `tol_search`.
    pub kept: usize,
    /// Best-response anchored profiles within `tol_search`.
    pub anchored: usize,
    /// Clusters whose representative verifies at `tol_dev`.
    pub clusters: Vec<OutcomeCluster>,
    /// Clusters refinement could not bring within `tol_dev`.
    pub unverified: Vec<OutcomeCluster>,
}

/// Two-point outcome `(low, high, P(low))`; babbling is `(π, π, 1)`.
type Outcome = (f64, f64, f64);

fn outcome_tau(o: Outcome, prior: f64) -> BeliefDistribution {
    BeliefDistribution::binary(o.0, o.1, prior)
        .or_else(|_| BeliefDistribution::point(prior))
        .expect("prior is a valid belief")
}

fn outcome_distance(a: Outcome, b: Outcome) -> f64 {
    transport(&[(a.0, a.2), (a.1, 1.0 - a.2)], &[(b.0, b.2), (b.1, 1.0 - b.2)])
}

#[derive(Clone, Copy, Debug)]
struct Profile {
    x: f64,
    y: f64,
    s1: f64,
    s2: f64,
    out: Outcome,
    gap: f64,
}

struct Cluster {
    anchor: Outcome,
    members: usize,
    best: Profile,
}

/// Sweeps the `(x, y, σ₁, σ₂)` grid for approximate equilibria.
///
/// Best-response values are computed once per grid experiment and grid
/// garbling; each profile then only needs its own outcome. Equilibria whose
/// strategies are off the grid (a garbling entry of 2/3, say) are caught by
/// best-response anchored profiles: every grid experiment paired with the
/// mediator's exact reply, and every grid garbling with the sender's.
///
/// Profiles within `tol_search` of both best responses are clustered by
/// outcome: earth mover's distance at most `cluster_tol` from a cluster's
/// first profile. The best member of each cluster is refined by
/// best-response steps and pattern search, then re-checked at `tol_dev`;
/// verified representatives within `cluster_tol` of each other are merged.
pub fn search_equilibria(game: &GameSpec) -> Result<SearchOutcome> {
    let cfg = game.search;
    let n = (1.0 / cfg.grid).round() as usize;
    let axis: Vec<f64> = (0..=n).map(|i| i as f64 / n as f64).collect();
    let k = axis.len();
    let prior = game.prior;
    let binary = |i: usize| StochasticMatrix::binary(axis[i / k], axis[i % k]).expect("grid");
    let sbr = |sigma: &StochasticMatrix| sender_best_response_with(&game.sender, sigma, prior, SenderOptions::default());
    let mbr = |x: &StochasticMatrix| mediator_best_response_with(&game.mediator, x, prior, cfg.concavify_grid);

    let sender_br: Vec<_> = (0..k * k).into_par_iter().map(|i| sbr(&binary(i))).collect::<Result<_>>()?;
    let mediator_br: Vec<_> = (0..k * k).into_par_iter().map(|i| mbr(&binary(i))).collect::<Result<_>>()?;

    let per_experiment: Vec<Vec<Cluster>> = (0..k * k)
        .into_par_iter()
        .map(|xi| {
            let (x, y) = (axis[xi / k], axis[xi % k]);
            let mut local = ClusterSet::new(cfg.cluster_tol, prior);
            for si in 0..k * k {
                let (s1, s2) = (axis[si / k], axis[si % k]);
                let (out, vs, vm) = outcome(&game.sender, &game.mediator, prior, x, y, s1, s2);
                let gs = (sender_br[si].value - vs).max(0.0);
                let gm = (mediator_br[xi].value - vm).max(0.0);
                if gs <= cfg.tol_search && gm <= cfg.tol_search {
                    local.add(Profile { x, y, s1, s2, out, gap: gs.max(gm) }, 1);
                }
            }
            local.clusters
        })
        .collect();

    let corner = |m: &StochasticMatrix| (m.get(0, 0), m.get(0, 1));
    // Many experiments share a mediator reply (identity, babbling); answer each once.
    let key = |m: &StochasticMatrix| (m.get(0, 0).to_bits(), m.get(0, 1).to_bits());
    let mut replies: HashMap<(u64, u64), usize> = HashMap::new();
    let mut distinct: Vec<&StochasticMatrix> = Vec::new();
    for r in &mediator_br {
        replies.entry(key(&r.sigma)).or_insert_with(|| {
            distinct.push(&r.sigma);
            distinct.len() - 1
        });
    }
    let reply_value: Vec<f64> =
        distinct.par_iter().map(|m| sbr(m).map(|r| r.value)).collect::<Result<_>>()?;
    let anchored: Vec<Option<Profile>> = (0..2 * k * k)
        .into_par_iter()
        .map(|i| {
            let (x, y, s1, s2) = if i < k * k {
                let (s1, s2) = corner(&mediator_br[i].sigma);
                (axis[i / k], axis[i % k], s1, s2)
            } else {
                let j = i - k * k;
                let (x, y) = corner(&sender_br[j].x);
                (x, y, axis[j / k], axis[j % k])
            };
            let (out, vs, vm) = outcome(&game.sender, &game.mediator, prior, x, y, s1, s2);
            let (gs, gm) = if i < k * k {
                let best = reply_value[replies[&key(&mediator_br[i].sigma)]];
                ((best - vs).max(0.0), (mediator_br[i].value - vm).max(0.0))
            } else {
                let j = i - k * k;
                ((sender_br[j].value - vs).max(0.0), (mbr(&sender_br[j].x)?.value - vm).max(0.0))
            };
            Ok((gs <= cfg.tol_search && gm <= cfg.tol_search).then_some(Profile { x, y, s1, s2, out, gap: gs.max(gm) }))
        })
        .collect::<Result<_>>()?;

    let mut global = ClusterSet::new(cfg.cluster_tol, prior);
    let mut kept = 0;
    for chunk in per_experiment {
        for c in chunk {
            kept += c.members;
            global.merge(c);
        }
    }
    let mut anchored_kept = 0;
    for p in anchored.into_iter().flatten() {
        anchored_kept += 1;
        global.add(p, 1);
    }

    let refined = global
        .clusters
        .par_iter()
        .map(|c| {
            let rep = refine(game, c.best, c.anchor)?;
            Ok(OutcomeCluster {
                anchor: outcome_tau(c.anchor, prior),
                members: c.members,
                grid_gap: c.best.gap,
                representative: rep,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let (verified, unverified): (Vec<_>, Vec<_>) = refined.into_iter().partition(|c| c.representative.is_verified());
    // Grid anchors are rough; certified outcomes within `cluster_tol` are one.
    let mut clusters: Vec<OutcomeCluster> = Vec::new();
    for c in verified {
        let tau = &c.representative.tau;
        match clusters.iter_mut().find(|m| m.representative.tau.transport_distance(tau) <= cfg.cluster_tol + 1e-12) {
            Some(m) => {
                m.members += c.members;
                m.grid_gap = m.grid_gap.min(c.grid_gap);
            }
            None => clusters.push(c),
        }
    }
    Ok(SearchOutcome { profiles: k * k * k * k, kept, anchored: anchored_kept, clusters, unverified })
}

/// Outcome and designer values at a profile, without allocation.
fn outcome(
    us: &PiecewiseUtility,
    um: &PiecewiseUtility,
    prior: f64,
    x: f64,
    y: f64,
    s1: f64,
    s2: f64,
) -> (Outcome, f64, f64) {
    let babble = ((prior, prior, 1.0), us.eval(prior), um.eval(prior));
    let d = s1 - s2;
    let (u, v) = (s2 + d * x, s2 + d * y);
    if (u - v).abs() <= 1e-12 {
        return babble;
    }
    match pair_from_uv(u, v, prior) {
        Some(p) => {
            let vs = p.prob1 * us.eval(p.b1) + p.prob2 * us.eval(p.b2);
            let vm = p.prob1 * um.eval(p.b1) + p.prob2 * um.eval(p.b2);
            let out = if p.b1 <= p.b2 { (p.b1, p.b2, p.prob1) } else { (p.b2, p.b1, p.prob2) };
            (out, vs, vm)
        }
        // One signal never fires: the receiver learns nothing.
        None => babble,
    }
}

/// Greedy clustering with a one-dimensional hash on `E|β − π|`, which moves
/// by at most the transport distance.
struct ClusterSet {
    tol: f64,
    prior: f64,
    clusters: Vec<Cluster>,
    cells: HashMap<i64, Vec<usize>>,
}

impl ClusterSet {
    fn new(tol: f64, prior: f64) -> Self {
        Self { tol, prior, clusters: Vec::new(), cells: HashMap::new() }
    }

    fn cell(&self, o: Outcome) -> i64 {
        let spread = 2.0 * o.2 * (self.prior - o.0).max(0.0);
        (spread / self.tol.max(1e-9)).floor() as i64
    }

    fn find(&self, o: Outcome) -> Option<usize> {
        let c = self.cell(o);
        let mut hit: Option<usize> = None;
        for d in -1..=1 {
            for &idx in self.cells.get(&(c + d)).into_iter().flatten() {
                if hit.is_some_and(|h| h < idx) {
                    continue;
                }
                if outcome_distance(self.clusters[idx].anchor, o) <= self.tol + 1e-12 {
                    hit = Some(idx);
                }
            }
        }
        hit
    }

    fn push(&mut self, c: Cluster) {
        let idx = self.clusters.len();
        let cell = self.cell(c.anchor);
        self.clusters.push(c);
        self.cells.entry(cell).or_default().push(idx);
    }

    fn add(&mut self, p: Profile, members: usize) {
        match self.find(p.out) {
            Some(i) => {
                let c = &mut self.clusters[i];
                c.members += members;
                if p.gap < c.best.gap {
                    c.best = p;
                }
            }
            None => self.push(Cluster { anchor: p.out, members, best: p }),
        }
    }

    fn merge(&mut self, c: Cluster) {
        match self.find(c.anchor) {
            Some(i) => {
                let g = &mut self.clusters[i];
                g.members += c.members;
                if c.best.gap < g.best.gap {
                    g.best = c.best;
                }
            }
            None => self.push(c),
        }
    }
}

/// Best-response steps, then pattern search on `(x, y, σ₁, σ₂)` minimising
/// the larger gap with the step halved `refine_levels` times. Moves must keep
/// the outcome within the cluster tolerance of `anchor`.
fn refine(game: &GameSpec, start: Profile, anchor: Outcome) -> Result<EquilibriumCertificate> {
    let cfg = game.search;
    let anchor = outcome_tau(anchor, game.prior);
    let check = |p: [f64; 4]| -> Result<EquilibriumCertificate> {
        let x = StochasticMatrix::binary(p[0], p[1])?;
        let sigma = StochasticMatrix::binary(p[2], p[3])?;
        check_equilibrium_with(game, &x, &sigma, 1, cfg.tol_dev)
    };
    let near = |c: &EquilibriumCertificate| c.tau.transport_distance(&anchor) <= cfg.cluster_tol + 1e-12;
    let mut at = [start.x, start.y, start.s1, start.s2];
    let mut cert = check(at)?;
    // Alternate exact replies while they help.
    for _ in 0..4 {
        if cert.max_gap() <= cfg.tol_dev {
            break;
        }
        let x = StochasticMatrix::binary(at[0], at[1])?;
        let sigma = StochasticMatrix::binary(at[2], at[3])?;
        let m = mediator_best_response_with(&game.mediator, &x, game.prior, cfg.concavify_grid)?.sigma;
        let s = sender_best_response_with(&game.sender, &sigma, game.prior, SenderOptions::default())?.x;
        let mut moved = false;
        for p in [[at[0], at[1], m.get(0, 0), m.get(0, 1)], [s.get(0, 0), s.get(0, 1), at[2], at[3]]] {
            let c = check(p)?;
            if near(&c) && c.max_gap() < cert.max_gap() - 1e-12 {
                at = p;
                cert = c;
                moved = true;
            }
        }
        if !moved {
            break;
        }
    }
    let mut step = cfg.grid;
    for _ in 0..cfg.refine_levels {
        if cert.max_gap() <= cfg.tol_dev {
            break;
        }
        step *= 0.5;
        let mut improved = true;
        while improved && cert.max_gap() > cfg.tol_dev {
            improved = false;
            for dim in 0..4 {
                for sign in [-1.0, 1.0] {
                    let mut p = at;
                    p[dim] = (p[dim] + sign * step).clamp(0.0, 1.0);
                    if p == at {
                        continue;
                    }
                    let c = check(p)?;
                    if near(&c) && c.max_gap() < cert.max_gap() - 1e-12 {
                        at = p;
                        cert = c;
                        improved = true;
                    }
                }
            }
        }
    }
    Ok(cert)
}
