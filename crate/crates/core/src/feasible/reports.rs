use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{membership, posterior_pair, BinaryGarbling};
use crate::info::{garbling, Dense, StochasticMatrix};
use crate::{Result, TOL};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NestingViolation {
    /// First row of the sampled experiment.
    pub x: f64,
    pub y: f64,
    pub b1: f64,
    pub b2: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NestingReport {
    pub samples: usize,
    pub nested: bool,
    pub violations: Vec<NestingViolation>,
    /// `Γ` with `Γ·s1 = s2`, when `s1` dominates.
    pub gamma: Option<Dense>,
    pub witnesses_checked: usize,
    pub witness_failures: usize,
}

fn random_experiments(n: usize, seed: u64) -> Vec<(f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| (rng.gen::<f64>(), rng.gen::<f64>())).collect()
}

/// Pushes `n_samples` random experiments through `s2` and tests each
/// posterior pair for membership in `F(s1, π)`. When `s1` Blackwell-dominates
/// `s2` via `Γ`, also checks that `Y = s1⁻¹·Γ·s1·X` is an experiment
/// inducing the same pair through `s1`.
pub fn nesting_report(s1: &StochasticMatrix, s2: &StochasticMatrix, prior: f64, n_samples: usize, seed: u64) -> Result<NestingReport> {
    BinaryGarbling::new(s1)?;
    BinaryGarbling::new(s2)?;
    let gamma = garbling(s1, s2);
    let lift = match (&gamma, s1.inverse()) {
        (Some(g), Some(inv)) => Some(inv.mul(g)?.mul(s1.as_dense())?),
        _ => None,
    };
    let draws = random_experiments(n_samples, seed);
    let outcomes: Vec<(Option<NestingViolation>, Option<bool>)> = draws
        .par_iter()
        .map(|&(x, y)| {
            let xm = StochasticMatrix::binary(x, y).expect("unit draws");
            let b = s2.compose(&xm).expect("2x2");
            let Some(pair) = posterior_pair(&b, prior) else { return (None, None) };
            let member = matches!(membership(s1, prior, pair.b1, pair.b2), Ok(Some(_)));
            let violation = (!member).then_some(NestingViolation { x, y, b1: pair.b1, b2: pair.b2 });
            let witness = lift.as_ref().map(|l| {
                l.mul(xm.as_dense())
                    .ok()
                    .and_then(|yd| StochasticMatrix::from_dense(&yd, TOL))
                    .and_then(|ym| posterior_pair(&s1.compose(&ym).ok()?, prior))
                    .is_some_and(|q| (q.b1 - pair.b1).abs() <= TOL && (q.b2 - pair.b2).abs() <= TOL)
            });
            (violation, witness)
        })
        .collect();
    let violations: Vec<_> = outcomes.iter().filter_map(|o| o.0).collect();
    let checked: Vec<bool> = outcomes.iter().filter_map(|o| o.1).collect();
    Ok(NestingReport {
        samples: n_samples,
        nested: violations.is_empty(),
        violations,
        gamma,
        witnesses_checked: checked.len(),
        witness_failures: checked.iter().filter(|ok| !**ok).count(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SymmetryReport {
    pub samples: usize,
    pub symmetric: bool,
    /// A feasible `(b1, b2)` whose swap `(b2, b1)` is not feasible.
    pub witness: Option<(f64, f64)>,
}

/// Samples feasible pairs and tests whether the swapped pair is feasible too.
pub fn symmetry_report(sigma: &StochasticMatrix, prior: f64, n_samples: usize, seed: u64) -> Result<SymmetryReport> {
    BinaryGarbling::new(sigma)?;
    let draws = random_experiments(n_samples, seed);
    let failures: Vec<Option<(f64, f64)>> = draws
        .par_iter()
        .map(|&(x, y)| {
            let b = sigma.compose(&StochasticMatrix::binary(x, y).expect("unit draws")).expect("2x2");
            let pair = posterior_pair(&b, prior)?;
            let swapped = matches!(membership(sigma, prior, pair.b2, pair.b1), Ok(Some(_)));
            (!swapped).then_some((pair.b1, pair.b2))
        })
        .collect();
    let witness = failures.into_iter().flatten().next();
    Ok(SymmetryReport { samples: n_samples, symmetric: witness.is_none(), witness })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(a: f64, b: f64) -> StochasticMatrix {
        StochasticMatrix::binary(a, b).unwrap()
    }

    #[test]
    fn ranked_pair_nests() {
        let r = nesting_report(&m(0.9, 0.01), &m(2.0 / 3.0, 0.25), 0.3, 2000, 7).unwrap();
        assert!(r.nested);
        assert_eq!(r.witnesses_checked, 2000);
        assert_eq!(r.witness_failures, 0);
    }

    #[test]
    fn unranked_pair_fails_both_ways() {
        let (a, b) = (m(2.0 / 3.0, 1.0 / 3.0), m(0.8, 0.5));
        assert!(!nesting_report(&a, &b, 0.3, 2000, 1).unwrap().nested);
        assert!(!nesting_report(&b, &a, 0.3, 2000, 1).unwrap().nested);
    }

    #[test]
    fn identical_sets_nest() {
        let s = m(0.7, 0.2);
        let r = nesting_report(&s, &s, 0.5, 500, 3).unwrap();
        assert!(r.nested && r.witness_failures == 0);
    }

    #[test]
    fn symmetry() {
        assert!(symmetry_report(&m(2.0 / 3.0, 1.0 / 3.0), 0.5, 1000, 11).unwrap().symmetric);
        assert!(symmetry_report(&StochasticMatrix::identity(2), 0.5, 1000, 11).unwrap().symmetric);
        let r = symmetry_report(&m(2.0 / 3.0, 0.25), 0.5, 1000, 11).unwrap();
        assert!(!r.symmetric && r.witness.is_some());
    }
}
