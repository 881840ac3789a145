use serde::Serialize;

use super::StochasticMatrix;
use crate::{Error, Result, TOL};

/// Probability of the target (second-listed) state.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct Belief(f64);

impl Belief {
    pub fn new(value: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&value) {
            return Err(Error::InvalidBelief(value));
        }
        Ok(Self(value))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl From<Belief> for f64 {
    fn from(b: Belief) -> f64 {
        b.0
    }
}

pub(crate) fn check_belief(value: f64) -> Result<f64> {
    Belief::new(value).map(Belief::value)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Atom {
    pub belief: f64,
    pub prob: f64,
}

/// Finite distribution over posteriors that averages to `prior`.
///
/// Canonical form: beliefs strictly increasing (atoms within `TOL` merged at
/// their probability-weighted mean), zero-probability atoms dropped.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BeliefDistribution {
    atoms: Vec<Atom>,
    prior: f64,
}

impl BeliefDistribution {
    pub fn new(atoms: impl IntoIterator<Item = (f64, f64)>, prior: f64) -> Result<Self> {
        let prior = check_belief(prior)?;
        let mut raw: Vec<Atom> = Vec::new();
        for (belief, prob) in atoms {
            check_belief(belief)?;
            if !prob.is_finite() || prob < -TOL {
                return Err(Error::InvalidDistribution(format!("probability {prob}")));
            }
            if prob > TOL {
                raw.push(Atom { belief, prob });
            }
        }
        if raw.is_empty() {
            return Err(Error::InvalidDistribution("no atom with positive probability".into()));
        }
        let total: f64 = raw.iter().map(|a| a.prob).sum();
        if (total - 1.0).abs() > TOL {
            return Err(Error::InvalidDistribution(format!("probabilities sum to {total}")));
        }
        raw.sort_by(|a, b| a.belief.total_cmp(&b.belief));
        let mut atoms: Vec<Atom> = Vec::with_capacity(raw.len());
        for a in raw {
            match atoms.last_mut() {
                Some(last) if (a.belief - last.belief).abs() <= TOL => {
                    let p = last.prob + a.prob;
                    last.belief = (last.belief * last.prob + a.belief * a.prob) / p;
                    last.prob = p;
                }
                _ => atoms.push(a),
            }
        }
        let mean: f64 = atoms.iter().map(|a| a.belief * a.prob).sum();
        if (mean - prior).abs() > TOL {
            return Err(Error::BarycenterMismatch { expected: prior, found: mean });
        }
        Ok(Self { atoms, prior })
    }

    /// The uninformative outcome `{(prior, 1)}`.
    pub fn point(prior: f64) -> Result<Self> {
        Self::new([(prior, 1.0)], prior)
    }

    /// Two-point distribution on `lo ≤ prior ≤ hi` with Bayes-plausible weights.
    pub fn binary(lo: f64, hi: f64, prior: f64) -> Result<Self> {
        let (p1, p2) = bayes_plausible_weights(lo, hi, prior)?;
        Self::new([(lo, p1), (hi, p2)], prior)
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn prior(&self) -> f64 {
        self.prior
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn is_degenerate(&self) -> bool {
        self.atoms.len() == 1
    }

    /// Smallest and largest belief in the support.
    pub fn span(&self) -> (f64, f64) {
        (self.atoms[0].belief, self.atoms[self.atoms.len() - 1].belief)
    }

    pub fn mean(&self) -> f64 {
        self.atoms.iter().map(|a| a.belief * a.prob).sum()
    }

    /// Max-norm distance between supports of equal size; infinite otherwise.
    pub fn support_distance(&self, other: &BeliefDistribution) -> f64 {
        if self.len() != other.len() {
            return f64::INFINITY;
        }
        self.atoms
            .iter()
            .zip(&other.atoms)
            .map(|(a, b)| (a.belief - b.belief).abs())
            .fold(0.0, f64::max)
    }

    /// Earth mover's distance `∫|F − G|` between the two CDFs.
    pub fn transport_distance(&self, other: &BeliefDistribution) -> f64 {
        let a: Vec<(f64, f64)> = self.atoms.iter().map(|a| (a.belief, a.prob)).collect();
        let b: Vec<(f64, f64)> = other.atoms.iter().map(|a| (a.belief, a.prob)).collect();
        transport(&a, &b)
    }

    /// Max-norm distance over both beliefs and probabilities.
    pub fn distance(&self, other: &BeliefDistribution) -> f64 {
        if self.len() != other.len() {
            return f64::INFINITY;
        }
        self.atoms
            .iter()
            .zip(&other.atoms)
            .map(|(a, b)| (a.belief - b.belief).abs().max((a.prob - b.prob).abs()))
            .fold(0.0, f64::max)
    }
}

/// Earth mover's distance between two sorted `(belief, prob)` lists.
pub fn transport(a: &[(f64, f64)], b: &[(f64, f64)]) -> f64 {
    let (mut i, mut j) = (0, 0);
    let (mut fa, mut fb) = (0.0f64, 0.0f64);
    let mut last = f64::NAN;
    let mut total = 0.0;
    while i < a.len() || j < b.len() {
        let x = match (a.get(i), b.get(j)) {
            (Some(p), Some(q)) => p.0.min(q.0),
            (Some(p), None) => p.0,
            (None, Some(q)) => q.0,
            (None, None) => unreachable!(),
        };
        if last.is_finite() {
            total += (fa - fb).abs() * (x - last);
        }
        while i < a.len() && a[i].0 <= x {
            fa += a[i].1;
            i += 1;
        }
        while j < b.len() && b[j].0 <= x {
            fb += b[j].1;
            j += 1;
        }
        last = x;
    }
    total
}

/// Unconditional probability of each signal under `b` at `prior`.
pub fn signal_probabilities(b: &StochasticMatrix, prior: f64) -> Result<Vec<f64>> {
    require_two_states(b)?;
    Ok((0..b.rows()).map(|i| (1.0 - prior) * b.get(i, 0) + prior * b.get(i, 1)).collect())
}

/// Posterior on the target state after observing `signal`.
pub fn posterior_after_signal(b: &StochasticMatrix, prior: f64, signal: usize) -> Result<f64> {
    let prior = check_belief(prior)?;
    require_two_states(b)?;
    if signal >= b.rows() {
        return Err(Error::InvalidArgument(format!("signal {signal} out of range for {} rows", b.rows())));
    }
    let num = prior * b.get(signal, 1);
    let den = num + (1.0 - prior) * b.get(signal, 0);
    if den <= 0.0 {
        return Err(Error::ZeroProbabilitySignal { signal });
    }
    Ok((num / den).clamp(0.0, 1.0))
}

/// The distribution of posteriors induced by `b` at `prior`.
pub fn induced_tau(b: &StochasticMatrix, prior: f64) -> Result<BeliefDistribution> {
    let prior = check_belief(prior)?;
    let probs = signal_probabilities(b, prior)?;
    let mut atoms = Vec::with_capacity(b.rows());
    for (s, &p) in probs.iter().enumerate() {
        if p > 0.0 {
            atoms.push((posterior_after_signal(b, prior, s)?, p));
        }
    }
    BeliefDistribution::new(atoms, prior)
}

/// Weights `(p1, p2)` with `p1·b1 + p2·b2 = prior`.
pub fn bayes_plausible_weights(b1: f64, b2: f64, prior: f64) -> Result<(f64, f64)> {
    for v in [b1, b2, prior] {
        check_belief(v)?;
    }
    if b1 > prior + TOL || prior > b2 + TOL {
        return Err(Error::PriorOutsideSupport { lo: b1, hi: b2, prior });
    }
    if b2 - b1 <= TOL {
        return Ok((0.5, 0.5));
    }
    let p2 = ((prior - b1) / (b2 - b1)).clamp(0.0, 1.0);
    Ok((1.0 - p2, p2))
}

fn require_two_states(b: &StochasticMatrix) -> Result<()> {
    if b.cols() != 2 {
        return Err(Error::DimensionMismatch(format!("expected two state columns, found {}", b.cols())));
    }
    Ok(())
}
