//! Posterior pairs the sender can induce through a fixed binary garbling.
//!
//! Write the garbling as `Σ = [[σ₁, σ₂], [1−σ₁, 1−σ₂]]` and the experiment
//! as `X = [[x, y], [1−x, 1−y]]`. The composite's first row is
//! `(σ₂ + (σ₁−σ₂)x, σ₂ + (σ₁−σ₂)y)`, so its two entries `(u, v)` range
//! independently over `I = [min σ, max σ]`. The feasible set is the image of
//! the square `I²` under the Bayes map; the four experiment families that fix
//! one column at a vertex of the simplex trace the four edges of the square,
//! and the diagonal `u = v` collapses onto the prior point.

mod general;
pub mod hull;
mod reports;

use serde::Serialize;

pub use general::{sample_feasible_general, PosteriorCloud};
pub use reports::{nesting_report, symmetry_report, NestingReport, NestingViolation, SymmetryReport};

use crate::info::{bayes_plausible_weights, check_belief, induced_tau, BeliefDistribution, Dense, StochasticMatrix};
use crate::{Error, Result, TOL};
use hull::Point;

pub const DEFAULT_POINTS: usize = 256;
pub const MAX_POINTS: usize = 1 << 14;

/// The four extreme experiment families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Family {
    /// `[[1, p], [0, 1−p]]`
    X1,
    /// `[[0, p], [1, 1−p]]`
    X2,
    /// `[[p, 1], [1−p, 0]]`
    X3,
    /// `[[p, 0], [1−p, 1]]`
    X4,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::X1, Family::X2, Family::X3, Family::X4];

    /// `(x, y)`: first-row entries of the family member at `p`.
    pub fn first_row(self, p: f64) -> (f64, f64) {
        match self {
            Family::X1 => (1.0, p),
            Family::X2 => (0.0, p),
            Family::X3 => (p, 1.0),
            Family::X4 => (p, 0.0),
        }
    }

    pub fn experiment(self, p: f64) -> StochasticMatrix {
        let (x, y) = self.first_row(p);
        StochasticMatrix::binary(x, y).expect("family members are stochastic")
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::X1 => "X1",
            Family::X2 => "X2",
            Family::X3 => "X3",
            Family::X4 => "X4",
        }
    }
}

/// Posterior pair ordered by signal, with the signal probabilities.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PosteriorPair {
    pub b1: f64,
    pub b2: f64,
    pub prob1: f64,
    pub prob2: f64,
}

impl PosteriorPair {
    pub fn point(&self) -> Point {
        (self.b1, self.b2)
    }

    pub fn tau(&self, prior: f64) -> Result<BeliefDistribution> {
        BeliefDistribution::new([(self.b1, self.prob1), (self.b2, self.prob2)], prior)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CurveSample {
    pub p: f64,
    #[serde(flatten)]
    pub pair: PosteriorPair,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundaryCurve {
    pub family: Family,
    pub samples: Vec<CurveSample>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Wing {
    /// Signal 1 lowers the belief: `b1 ≤ π ≤ b2`.
    Natural,
    /// Signal 1 raises the belief: `b2 ≤ π ≤ b1`.
    Perverse,
}

impl Wing {
    pub fn of(b1: f64, b2: f64) -> Wing {
        if b1 <= b2 {
            Wing::Natural
        } else {
            Wing::Perverse
        }
    }
}

/// The two convex wings of `F(Σ, π)`, counterclockwise.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FeasibleSet {
    pub garbling: StochasticMatrix,
    pub prior: f64,
    pub left: Vec<Point>,
    pub right: Vec<Point>,
    pub origin: Point,
}

impl FeasibleSet {
    pub fn wing(&self, w: Wing) -> &[Point] {
        match w {
            Wing::Natural => &self.left,
            Wing::Perverse => &self.right,
        }
    }
}

/// A full-rank binary garbling in first-row coordinates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BinaryGarbling {
    pub s1: f64,
    pub s2: f64,
}

impl BinaryGarbling {
    pub fn new(sigma: &StochasticMatrix) -> Result<Self> {
        if !sigma.is_binary() {
            return Err(Error::DimensionMismatch(format!("expected a 2x2 garbling, found {}x{}", sigma.rows(), sigma.cols())));
        }
        let g = Self { s1: sigma.get(0, 0), s2: sigma.get(0, 1) };
        if (g.s1 - g.s2).abs() <= TOL {
            return Err(Error::SingularGarbling);
        }
        Ok(g)
    }

    /// The interval `I` both composite entries range over.
    pub fn interval(&self) -> (f64, f64) {
        (self.s1.min(self.s2), self.s1.max(self.s2))
    }

    pub fn uv(&self, x: f64, y: f64) -> (f64, f64) {
        let d = self.s1 - self.s2;
        (self.s2 + d * x, self.s2 + d * y)
    }

    pub fn xy(&self, u: f64, v: f64) -> (f64, f64) {
        let d = self.s1 - self.s2;
        ((u - self.s2) / d, (v - self.s2) / d)
    }
}

/// Posterior pair of the composite whose first row is `(u, v)`; `None` when
/// a signal has zero probability.
pub fn pair_from_uv(u: f64, v: f64, prior: f64) -> Option<PosteriorPair> {
    let prob1 = (1.0 - prior) * u + prior * v;
    let prob2 = 1.0 - prob1;
    if prob1 <= 0.0 || prob2 <= 0.0 {
        return None;
    }
    Some(PosteriorPair {
        b1: (prior * v / prob1).clamp(0.0, 1.0),
        b2: (prior * (1.0 - v) / prob2).clamp(0.0, 1.0),
        prob1,
        prob2,
    })
}

/// Posterior pair of `b` (2×2) ordered by signal.
pub fn posterior_pair(b: &StochasticMatrix, prior: f64) -> Option<PosteriorPair> {
    if !b.is_binary() {
        return None;
    }
    pair_from_uv(b.get(0, 0), b.get(0, 1), prior)
}

/// Samples the four boundary families at `n_points` equispaced parameters.
/// Samples with a zero-probability signal are skipped.
pub fn boundary_curves(sigma: &StochasticMatrix, prior: f64, n_points: usize) -> Result<Vec<BoundaryCurve>> {
    let prior = check_belief(prior)?;
    let g = BinaryGarbling::new(sigma)?;
    if n_points < 2 {
        return Err(Error::InvalidArgument("boundary sampling needs at least two points".into()));
    }
    Ok(Family::ALL
        .iter()
        .map(|&family| BoundaryCurve {
            family,
            samples: (0..n_points)
                .filter_map(|i| {
                    let p = i as f64 / (n_points - 1) as f64;
                    let (x, y) = family.first_row(p);
                    let (u, v) = g.uv(x, y);
                    pair_from_uv(u, v, prior).map(|pair| CurveSample { p, pair })
                })
                .collect(),
        })
        .collect())
}

/// An experiment `X` with `p(ΣX) = τ`, following the constructive proof:
/// build the composite from `b(s|ω) = β(ω|s)τ(β)/π(ω)` and return `Σ⁻¹B`.
///
/// `τ = {(π, 1)}` gets the all-`½` experiment. A two-point `τ` is tried with
/// the lower belief on signal 1 first, then the other way round.
pub fn reconstruct_experiment(sigma: &StochasticMatrix, prior: f64, tau: &BeliefDistribution) -> Result<StochasticMatrix> {
    BinaryGarbling::new(sigma)?;
    let prior = check_belief(prior)?;
    if (tau.prior() - prior).abs() > TOL {
        return Err(Error::BarycenterMismatch { expected: prior, found: tau.prior() });
    }
    if tau.is_degenerate() {
        return Ok(StochasticMatrix::uninformative(2, 2));
    }
    if tau.len() > 2 {
        return Err(Error::InvalidArgument("a binary experiment induces at most two beliefs".into()));
    }
    if prior <= 0.0 || prior >= 1.0 {
        return Err(Error::DegeneratePrior(prior));
    }
    let (lo, hi) = (tau.atoms()[0], tau.atoms()[1]);
    for (a, b) in [(lo, hi), (hi, lo)] {
        if let Some(x) = reconstruct_ordered(sigma, prior, [(a.belief, a.prob), (b.belief, b.prob)]) {
            return Ok(x);
        }
    }
    Err(Error::NotSigmaPlausible)
}

fn reconstruct_ordered(sigma: &StochasticMatrix, prior: f64, signals: [(f64, f64); 2]) -> Option<StochasticMatrix> {
    let b = Dense::from_fn(2, 2, |s, w| {
        let (beta, p) = signals[s];
        if w == 1 {
            beta * p / prior
        } else {
            (1.0 - beta) * p / (1.0 - prior)
        }
    });
    let x = sigma.inverse()?.mul(&b).ok()?;
    StochasticMatrix::from_dense(&x, TOL)
}

/// Is the signal-ordered pair `(b1, b2)` inducible through `sigma`? Returns
/// the inducing experiment. Pairs of either wing are accepted; a pair that
/// does not straddle the prior is not.
pub fn membership(sigma: &StochasticMatrix, prior: f64, b1: f64, b2: f64) -> Result<Option<StochasticMatrix>> {
    BinaryGarbling::new(sigma)?;
    let prior = check_belief(prior)?;
    check_belief(b1)?;
    check_belief(b2)?;
    let at_prior = |b: f64| (b - prior).abs() <= TOL;
    if at_prior(b1) && at_prior(b2) {
        return Ok(Some(StochasticMatrix::uninformative(2, 2)));
    }
    if at_prior(b1) || at_prior(b2) || prior <= 0.0 || prior >= 1.0 {
        return Ok(None);
    }
    let (p1, p2) = if b1 <= b2 {
        match bayes_plausible_weights(b1, b2, prior) {
            Ok(w) => w,
            Err(_) => return Ok(None),
        }
    } else {
        match bayes_plausible_weights(b2, b1, prior) {
            Ok((lo, hi)) => (hi, lo),
            Err(_) => return Ok(None),
        }
    };
    Ok(reconstruct_ordered(sigma, prior, [(b1, p1), (b2, p2)]))
}

/// Whether `tau` (at most two atoms) can be induced through `sigma` at all.
pub fn is_sigma_plausible(sigma: &StochasticMatrix, prior: f64, tau: &BeliefDistribution) -> Result<bool> {
    match reconstruct_experiment(sigma, prior, tau) {
        Ok(_) => Ok(true),
        Err(Error::NotSigmaPlausible) => Ok(false),
        Err(e) => Err(e),
    }
}

/// Wing polygons from hulls of the boundary samples, doubling the sampling
/// density from `n_points` until successive wing areas agree to `1e-6`.
pub fn wing_polygons(sigma: &StochasticMatrix, prior: f64, n_points: usize) -> Result<FeasibleSet> {
    let mut n = n_points.max(2);
    let mut set = wings_at(sigma, prior, n)?;
    while n < MAX_POINTS {
        n *= 2;
        let finer = wings_at(sigma, prior, n)?;
        let change = (hull::area(&finer.left) - hull::area(&set.left)).abs()
            + (hull::area(&finer.right) - hull::area(&set.right)).abs();
        set = finer;
        if change < 1e-6 {
            break;
        }
    }
    Ok(set)
}

fn wings_at(sigma: &StochasticMatrix, prior: f64, n_points: usize) -> Result<FeasibleSet> {
    let g = BinaryGarbling::new(sigma)?;
    let prior = check_belief(prior)?;
    let origin = (prior, prior);
    let (lo, hi) = g.interval();
    // Natural wing: the triangle v ≤ u, bounded by the edges v = lo and u = hi.
    // Perverse wing: v ≥ u, bounded by u = lo and v = hi.
    let edge = |fixed_u: Option<f64>, fixed_v: Option<f64>| -> Vec<Point> {
        (0..n_points)
            .filter_map(|i| {
                let t = lo + (hi - lo) * i as f64 / (n_points - 1) as f64;
                let (u, v) = (fixed_u.unwrap_or(t), fixed_v.unwrap_or(t));
                pair_from_uv(u, v, prior).map(|p| p.point())
            })
            .collect()
    };
    let mut left = edge(None, Some(lo));
    left.extend(edge(Some(hi), None));
    left.push(origin);
    let mut right = edge(Some(lo), None);
    right.extend(edge(None, Some(hi)));
    right.push(origin);
    Ok(FeasibleSet {
        garbling: sigma.clone(),
        prior,
        left: hull::convex_hull(&left),
        right: hull::convex_hull(&right),
        origin,
    })
}

/// Induced posteriors of `sigma` itself at `prior` (the identity experiment).
pub fn garbling_posteriors(sigma: &StochasticMatrix, prior: f64) -> Result<BeliefDistribution> {
    induced_tau(sigma, prior)
}
