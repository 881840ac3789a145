use serde::Serialize;

use super::lp::{feasible_point, Equality};
use super::{BeliefDistribution, Dense, StochasticMatrix};
use crate::{Error, Result, TOL};

const LP_SLACK: f64 = 1e-10;

/// Outcome of a mean-preserving-spread test.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MpsVerdict {
    pub holds: bool,
    /// Markov matrix `T` (spread atoms × contracted atoms): column `j` spreads
    /// contracted atom `j` over the spread's support.
    pub witness: Option<Dense>,
}

/// Is `spread` a mean-preserving spread of `contracted`?
///
/// Supports with at most two atoms on the spread side use the exact
/// interval-containment criterion; larger supports go through a small linear
/// feasibility problem. Either way a validated witness accompanies `true`.
pub fn is_mps(spread: &BeliefDistribution, contracted: &BeliefDistribution) -> Result<MpsVerdict> {
    let (mf, mg) = (spread.mean(), contracted.mean());
    if (mf - mg).abs() > TOL {
        return Err(Error::BarycenterMismatch { expected: mg, found: mf });
    }
    let witness = if spread.len() <= 2 { two_point_witness(spread, contracted) } else { lp_witness(spread, contracted) };
    let witness = witness.filter(|t| mps_residual(t, spread, contracted) <= TOL);
    Ok(MpsVerdict { holds: witness.is_some(), witness })
}

fn two_point_witness(f: &BeliefDistribution, g: &BeliefDistribution) -> Option<Dense> {
    let (lo, hi) = f.span();
    if g.atoms().iter().any(|a| a.belief < lo - TOL || a.belief > hi + TOL) {
        return None;
    }
    if f.len() == 1 {
        return Some(Dense::from_fn(1, g.len(), |_, _| 1.0));
    }
    Some(Dense::from_fn(2, g.len(), |i, j| {
        let y = g.atoms()[j].belief.clamp(lo, hi);
        let up = (y - lo) / (hi - lo);
        if i == 0 {
            1.0 - up
        } else {
            up
        }
    }))
}

fn lp_witness(f: &BeliefDistribution, g: &BeliefDistribution) -> Option<Dense> {
    let (kf, kg) = (f.len(), g.len());
    let var = |i: usize, j: usize| i * kg + j;
    let mut rows = Vec::with_capacity(2 * kg + kf);
    for j in 0..kg {
        rows.push(Equality { terms: (0..kf).map(|i| (var(i, j), 1.0)).collect(), rhs: 1.0 });
        rows.push(Equality {
            terms: (0..kf).map(|i| (var(i, j), f.atoms()[i].belief)).collect(),
            rhs: g.atoms()[j].belief,
        });
    }
    for i in 0..kf {
        rows.push(Equality { terms: (0..kg).map(|j| (var(i, j), g.atoms()[j].prob)).collect(), rhs: f.atoms()[i].prob });
    }
    let t = feasible_point(kf * kg, &rows, LP_SLACK)?;
    Some(normalize_columns(Dense::from_fn(kf, kg, |i, j| t[var(i, j)])))
}

/// Largest violation of the two spread conditions by `t`.
pub fn mps_residual(t: &Dense, spread: &BeliefDistribution, contracted: &BeliefDistribution) -> f64 {
    let (f, g) = (spread.atoms(), contracted.atoms());
    if t.rows() != f.len() || t.cols() != g.len() {
        return f64::INFINITY;
    }
    let mut worst = stochastic_violation(t);
    for (j, a) in g.iter().enumerate() {
        let m: f64 = (0..f.len()).map(|i| t.get(i, j) * f[i].belief).sum();
        worst = worst.max((m - a.belief).abs());
    }
    for (i, a) in f.iter().enumerate() {
        let p: f64 = (0..g.len()).map(|j| t.get(i, j) * g[j].prob).sum();
        worst = worst.max((p - a.prob).abs());
    }
    worst
}

/// Largest deviation of `t` from column-stochasticity.
pub fn stochastic_violation(t: &Dense) -> f64 {
    let mut worst: f64 = 0.0;
    for j in 0..t.cols() {
        let mut sum = 0.0;
        for i in 0..t.rows() {
            let v = t.get(i, j);
            worst = worst.max(-v).max(v - 1.0);
            sum += v;
        }
        worst = worst.max((sum - 1.0).abs());
    }
    worst
}

fn normalize_columns(mut t: Dense) -> Dense {
    for j in 0..t.cols() {
        let s: f64 = (0..t.rows()).map(|i| t.get(i, j)).sum();
        if s > 0.0 {
            for i in 0..t.rows() {
                let v = t.get(i, j) / s;
                t.set(i, j, v);
            }
        }
    }
    t
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum BlackwellOrder {
    /// `gamma · s1 = s2`.
    Dominates { gamma: Dense },
    /// `gamma · s2 = s1`.
    DominatedBy { gamma: Dense },
    Equivalent { forward: Dense, backward: Dense },
    Unranked,
}

impl BlackwellOrder {
    pub fn label(&self) -> &'static str {
        match self {
            Self::Dominates { .. } => "dominates",
            Self::DominatedBy { .. } => "dominated",
            Self::Equivalent { .. } => "equivalent",
            Self::Unranked => "unranked",
        }
    }
}

/// Blackwell comparison of two structures over the same conditioning space.
pub fn blackwell_compare(s1: &StochasticMatrix, s2: &StochasticMatrix) -> Result<BlackwellOrder> {
    if s1.cols() != s2.cols() {
        return Err(Error::DimensionMismatch(format!("{} versus {} conditioning columns", s1.cols(), s2.cols())));
    }
    let forward = garbling(s1, s2);
    let backward = garbling(s2, s1);
    Ok(match (forward, backward) {
        (Some(forward), Some(backward)) => BlackwellOrder::Equivalent { forward, backward },
        (Some(gamma), None) => BlackwellOrder::Dominates { gamma },
        (None, Some(gamma)) => BlackwellOrder::DominatedBy { gamma },
        (None, None) => BlackwellOrder::Unranked,
    })
}

/// A column-stochastic `Γ` with `Γ·from = to`, if one exists. Uses the closed
/// form `to·from⁻¹` when `from` is square and invertible.
pub fn garbling(from: &StochasticMatrix, to: &StochasticMatrix) -> Option<Dense> {
    if from.cols() != to.cols() {
        return None;
    }
    if from.is_square() {
        if let Some(inv) = from.inverse() {
            return garbling_closed_form(&inv, to, from);
        }
    }
    garbling_lp(from, to)
}

fn garbling_closed_form(inv: &Dense, to: &StochasticMatrix, from: &StochasticMatrix) -> Option<Dense> {
    let g = to.as_dense().mul(inv).ok()?;
    if (0..g.rows()).any(|i| (0..g.cols()).any(|j| g.get(i, j) < -TOL)) {
        return None;
    }
    let g = normalize_columns(Dense::from_fn(g.rows(), g.cols(), |i, j| g.get(i, j).max(0.0)));
    (garbling_residual(&g, from, to) <= TOL).then_some(g)
}

/// Linear-feasibility search for `Γ ≥ 0` with unit column sums and `Γ·from = to`.
pub fn garbling_lp(from: &StochasticMatrix, to: &StochasticMatrix) -> Option<Dense> {
    if from.cols() != to.cols() {
        return None;
    }
    let (r, k, n) = (to.rows(), from.rows(), from.cols());
    let var = |a: usize, b: usize| a * k + b;
    let mut rows = Vec::with_capacity(k + r * n);
    for b in 0..k {
        rows.push(Equality { terms: (0..r).map(|a| (var(a, b), 1.0)).collect(), rhs: 1.0 });
    }
    for a in 0..r {
        for j in 0..n {
            rows.push(Equality { terms: (0..k).map(|b| (var(a, b), from.get(b, j))).collect(), rhs: to.get(a, j) });
        }
    }
    let t = feasible_point(r * k, &rows, LP_SLACK)?;
    let g = normalize_columns(Dense::from_fn(r, k, |a, b| t[var(a, b)]));
    (garbling_residual(&g, from, to) <= TOL).then_some(g)
}

/// `max(‖Γ·from − to‖_max, stochasticity violation of Γ)`.
pub fn garbling_residual(gamma: &Dense, from: &StochasticMatrix, to: &StochasticMatrix) -> f64 {
    match gamma.mul(from.as_dense()) {
        Ok(p) if p.rows() == to.rows() && p.cols() == to.cols() => {
            p.max_abs_diff(to.as_dense()).max(stochastic_violation(gamma))
        }
        _ => f64::INFINITY,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum GarblingRank {
    FullRank,
    Deficient(usize),
}

pub fn garbling_rank(s: &StochasticMatrix) -> GarblingRank {
    let r = s.rank();
    if r == s.rows().min(s.cols()) {
        GarblingRank::FullRank
    } else {
        GarblingRank::Deficient(r)
    }
}
