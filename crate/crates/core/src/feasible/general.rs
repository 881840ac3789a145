use rayon::prelude::*;

use crate::info::{check_belief, BeliefDistribution, StochasticMatrix};
use crate::{Error, Result};

/// Posterior supports induced by a grid of `m×2` experiments through an
/// `m`-signal garbling. Storage is flat: sample `i` owns entries
/// `i·m .. (i+1)·m` of both vectors, one per signal, in signal order; a
/// signal with zero probability has belief `NaN` and probability 0.
#[derive(Clone, Debug, PartialEq)]
pub struct PosteriorCloud {
    pub signals: usize,
    pub prior: f64,
    pub beliefs: Vec<f64>,
    pub probs: Vec<f64>,
    /// Column grid shared by both experiment columns; sample `i` uses
    /// columns `i / n` (state 1) and `i % n` (state 2).
    pub columns: Vec<Vec<f64>>,
}

impl PosteriorCloud {
    pub fn len(&self) -> usize {
        self.probs.len() / self.signals.max(1)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn sample(&self, i: usize) -> (&[f64], &[f64]) {
        let r = i * self.signals..(i + 1) * self.signals;
        (&self.beliefs[r.clone()], &self.probs[r])
    }

    /// The sample's support in canonical form.
    pub fn support(&self, i: usize) -> Result<BeliefDistribution> {
        let (b, p) = self.sample(i);
        BeliefDistribution::new(b.iter().zip(p).filter(|(_, &p)| p > 0.0).map(|(&b, &p)| (b, p)), self.prior)
    }

    /// The experiment behind sample `i`, `m×2`.
    pub fn experiment(&self, i: usize) -> StochasticMatrix {
        let n = self.columns.len();
        let (a, b) = (&self.columns[i / n], &self.columns[i % n]);
        let rows: Vec<Vec<f64>> = (0..self.signals).map(|r| vec![a[r], b[r]]).collect();
        StochasticMatrix::new(&rows).expect("grid columns are distributions")
    }

    /// Every attained posterior (signals with positive probability).
    pub fn attained(&self) -> impl Iterator<Item = f64> + '_ {
        self.beliefs.iter().zip(&self.probs).filter(|(_, &p)| p > 0.0).map(|(&b, _)| b)
    }

    pub fn min_belief(&self) -> f64 {
        self.attained().fold(f64::INFINITY, f64::min)
    }

    pub fn max_belief(&self) -> f64 {
        self.attained().fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Points of the `(m−1)`-simplex whose coordinates are multiples of `1/n`.
fn simplex_grid(m: usize, n: usize) -> Vec<Vec<f64>> {
    fn rec(m: usize, left: usize, n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<f64>>) {
        if cur.len() == m - 1 {
            cur.push(left);
            out.push(cur.iter().map(|&k| k as f64 / n as f64).collect());
            cur.pop();
            return;
        }
        for k in 0..=left {
            cur.push(k);
            rec(m, left - k, n, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(m, n, n, &mut Vec::with_capacity(m), &mut out);
    out
}

/// Enumerates experiments `X` (`m×2`, both columns on a simplex grid of
/// step `resolution`) and records the posteriors of `ΣX` at `prior`.
pub fn sample_feasible_general(sigma: &StochasticMatrix, prior: f64, resolution: f64) -> Result<PosteriorCloud> {
    let prior = check_belief(prior)?;
    let m = sigma.cols();
    if m < 2 || sigma.rows() < m {
        return Err(Error::DimensionMismatch(format!("need an m×m garbling with m ≥ 2, found {}x{}", sigma.rows(), m)));
    }
    if !(resolution > 0.0 && resolution <= 1.0) {
        return Err(Error::InvalidArgument(format!("grid resolution {resolution}")));
    }
    let n = (1.0 / resolution).round().max(1.0) as usize;
    let columns = simplex_grid(m, n);
    // Σ applied to each grid column once.
    let pushed: Vec<Vec<f64>> = columns
        .iter()
        .map(|c| (0..sigma.rows()).map(|s| (0..m).map(|k| sigma.get(s, k) * c[k]).sum()).collect())
        .collect();
    let signals = sigma.rows();
    let chunks: Vec<(Vec<f64>, Vec<f64>)> = pushed
        .par_iter()
        .map(|state1| {
            let mut beliefs = Vec::with_capacity(pushed.len() * signals);
            let mut probs = Vec::with_capacity(pushed.len() * signals);
            for state2 in &pushed {
                for s in 0..signals {
                    let p = (1.0 - prior) * state1[s] + prior * state2[s];
                    if p > 0.0 {
                        beliefs.push((prior * state2[s] / p).clamp(0.0, 1.0));
                        probs.push(p);
                    } else {
                        beliefs.push(f64::NAN);
                        probs.push(0.0);
                    }
                }
            }
            (beliefs, probs)
        })
        .collect();
    let mut beliefs = Vec::with_capacity(columns.len() * columns.len() * signals);
    let mut probs = Vec::with_capacity(beliefs.capacity());
    for (b, p) in chunks {
        beliefs.extend(b);
        probs.extend(p);
    }
    Ok(PosteriorCloud { signals, prior, beliefs, probs, columns })
}
