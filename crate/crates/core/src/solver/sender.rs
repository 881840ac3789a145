use serde::Serialize;

use crate::feasible::{pair_from_uv, BinaryGarbling, PosteriorPair, Wing};
use crate::info::{check_belief, BeliefDistribution, StochasticMatrix};
use crate::payoffs::PiecewiseUtility;
use crate::{Error, Result, TOL};

/// Sampling density of the sender's candidate set, on top of the exact
/// arrangement vertices.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SenderOptions {
    /// Cells per edge of the composite square for boundary samples.
    pub boundary: usize,
    /// Cells per side of the interior grid.
    pub interior: usize,
    /// Distance of the probes placed next to vertices.
    pub offset: f64,
}

impl Default for SenderOptions {
    fn default() -> Self {
        Self { boundary: 64, interior: 32, offset: 1e-7 }
    }
}

impl SenderOptions {
    /// Every sample of `self` is also a sample of the refined options.
    pub fn refined(self, factor: usize) -> Self {
        Self { boundary: self.boundary * factor, interior: self.interior * factor, offset: self.offset }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SenderResponse {
    pub x: StochasticMatrix,
    pub tau: BeliefDistribution,
    pub value: f64,
    /// Posteriors by signal; `None` for babbling.
    pub pair: Option<PosteriorPair>,
}

pub fn sender_best_response(u_s: &PiecewiseUtility, sigma: &StochasticMatrix, prior: f64) -> Result<SenderResponse> {
    sender_best_response_with(u_s, sigma, prior, SenderOptions::default())
}

/// Line `a·u + b·v = c` in composite coordinates, normalised so `a² + b² = 1`.
#[derive(Clone, Copy, Debug)]
struct Line {
    a: f64,
    b: f64,
    c: f64,
}

impl Line {
    fn new(a: f64, b: f64, c: f64) -> Option<Line> {
        let n = a.hypot(b);
        (n > 1e-15).then(|| Line { a: a / n, b: b / n, c: c / n })
    }

    fn residual(&self, p: (f64, f64)) -> f64 {
        self.a * p.0 + self.b * p.1 - self.c
    }

    fn meet(&self, o: &Line) -> Option<(f64, f64)> {
        let det = self.a * o.b - self.b * o.a;
        if det.abs() < 1e-12 {
            return None;
        }
        Some(((self.c * o.b - self.b * o.c) / det, (self.a * o.c - self.c * o.a) / det))
    }
}

struct Candidate {
    u: f64,
    v: f64,
    value: f64,
    pair: PosteriorPair,
    babbling: bool,
}

/// Sender's optimal experiment against a fixed binary garbling.
///
/// In composite coordinates `(u, v) ∈ I²` the expected utility is linear on
/// every cell cut out by the lines where a posterior crosses a breakpoint of
/// `u_s` (or the prior, 0, 1) and the square's edges. The candidate set holds
/// every vertex of that arrangement, probes just inside each cell and edge
/// next to every vertex (for optima approached across an open end), edge
/// midpoints, plus boundary and interior grids as a guard.
///
/// Ties within `1e-12` (relative) go to babbling, then to the pair with the
/// lowest low posterior, then the highest high posterior, then the natural
/// wing, then the smallest `(u, v)`.
pub fn sender_best_response_with(
    u_s: &PiecewiseUtility,
    sigma: &StochasticMatrix,
    prior: f64,
    opts: SenderOptions,
) -> Result<SenderResponse> {
    let prior = check_belief(prior)?;
    if !sigma.is_binary() {
        return Err(Error::DimensionMismatch(format!("expected a 2x2 garbling, found {}x{}", sigma.rows(), sigma.cols())));
    }
    let babble = || -> Result<SenderResponse> {
        Ok(SenderResponse {
            x: StochasticMatrix::uninformative(2, 2),
            tau: BeliefDistribution::point(prior)?,
            value: u_s.eval(prior),
            pair: None,
        })
    };
    let g = match BinaryGarbling::new(sigma) {
        Ok(g) => g,
        Err(Error::SingularGarbling) => return babble(),
        Err(e) => return Err(e),
    };
    if prior <= 0.0 || prior >= 1.0 {
        return babble();
    }
    let (lo, hi) = g.interval();

    let mut lines = vec![
        Line::new(1.0, 0.0, lo).unwrap(),
        Line::new(1.0, 0.0, hi).unwrap(),
        Line::new(0.0, 1.0, lo).unwrap(),
        Line::new(0.0, 1.0, hi).unwrap(),
    ];
    let mut levels: Vec<f64> = u_s.knots().to_vec();
    levels.push(prior);
    for &t in &levels {
        lines.extend(Line::new(-t * (1.0 - prior), prior * (1.0 - t), 0.0));
        lines.extend(Line::new(t * (1.0 - prior), -prior * (1.0 - t), t - prior));
    }

    let inside = |p: (f64, f64)| p.0 >= lo - 1e-12 && p.0 <= hi + 1e-12 && p.1 >= lo - 1e-12 && p.1 <= hi + 1e-12;
    let clamp = |p: (f64, f64)| (p.0.clamp(lo, hi), p.1.clamp(lo, hi));
    let mut vertices: Vec<(f64, f64)> = vec![(lo, lo), (lo, hi), (hi, lo), (hi, hi)];
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            if let Some(p) = lines[i].meet(&lines[j]) {
                if inside(p) {
                    vertices.push(clamp(p));
                }
            }
        }
    }

    let d = opts.offset;
    let mut probes: Vec<(f64, f64)> = vertices.clone();
    const DIRS: [(f64, f64); 8] =
        [(1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0), (1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)];
    for &(u, v) in &vertices {
        for (du, dv) in DIRS {
            probes.push((u + d * du, v + d * dv));
        }
    }
    for line in &lines {
        let dir = (-line.b, line.a);
        let mut on: Vec<f64> = vertices
            .iter()
            .filter(|&&p| line.residual(p).abs() <= 1e-10)
            .map(|&p| p.0 * dir.0 + p.1 * dir.1)
            .collect();
        on.sort_by(f64::total_cmp);
        on.dedup_by(|a, b| (*a - *b).abs() <= 1e-12);
        let at = |s: f64| (line.a * line.c + s * dir.0, line.b * line.c + s * dir.1);
        for w in on.windows(2) {
            let (s0, s1) = (w[0], w[1]);
            let mid = at(0.5 * (s0 + s1));
            probes.push(mid);
            probes.push((mid.0 + d * line.a, mid.1 + d * line.b));
            probes.push((mid.0 - d * line.a, mid.1 - d * line.b));
            if s1 - s0 > 2.0 * d {
                probes.push(at(s0 + d));
                probes.push(at(s1 - d));
            }
        }
    }
    let nb = opts.boundary.max(1);
    for i in 0..=nb {
        let t = lo + (hi - lo) * i as f64 / nb as f64;
        probes.extend([(t, lo), (t, hi), (lo, t), (hi, t)]);
    }
    let ni = opts.interior.max(1);
    for i in 0..=ni {
        for j in 0..=ni {
            probes.push((lo + (hi - lo) * i as f64 / ni as f64, lo + (hi - lo) * j as f64 / ni as f64));
        }
    }
    let mid = 0.5 * (lo + hi);
    probes.push((mid, mid));

    let mut best: Option<Candidate> = None;
    for p in probes {
        if !inside(p) {
            continue;
        }
        let (u, v) = clamp(p);
        let Some(pair) = pair_from_uv(u, v, prior) else { continue };
        let value = pair.prob1 * u_s.eval(pair.b1) + pair.prob2 * u_s.eval(pair.b2);
        let babbling = (pair.b1 - prior).abs() <= TOL && (pair.b2 - prior).abs() <= TOL;
        let cand = Candidate { u, v, value, pair, babbling };
        best = Some(match best {
            None => cand,
            Some(cur) => {
                if prefer(&cand, &cur) {
                    cand
                } else {
                    cur
                }
            }
        });
    }
    let best = best.expect("the square's centre is always a candidate");
    if best.babbling {
        return babble();
    }
    let (x, y) = g.xy(best.u, best.v);
    let x = StochasticMatrix::binary(x.clamp(0.0, 1.0), y.clamp(0.0, 1.0))?;
    Ok(SenderResponse { tau: best.pair.tau(prior)?, x, value: best.value, pair: Some(best.pair) })
}

fn prefer(a: &Candidate, b: &Candidate) -> bool {
    let tol = 1e-12 * (1.0 + a.value.abs().max(b.value.abs()));
    if a.value > b.value + tol {
        return true;
    }
    if a.value < b.value - tol {
        return false;
    }
    if a.babbling != b.babbling {
        return a.babbling;
    }
    let span = |c: &Candidate| (c.pair.b1.min(c.pair.b2), c.pair.b1.max(c.pair.b2));
    let ((alo, ahi), (blo, bhi)) = (span(a), span(b));
    if (alo - blo).abs() > 1e-12 {
        return alo < blo;
    }
    if (ahi - bhi).abs() > 1e-12 {
        return ahi > bhi;
    }
    let (wa, wb) = (Wing::of(a.pair.b1, a.pair.b2), Wing::of(b.pair.b1, b.pair.b2));
    if wa != wb {
        return wa == Wing::Natural;
    }
    (a.u, a.v) < (b.u, b.v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::bp_solve;

    fn m(a: f64, b: f64) -> StochasticMatrix {
        StochasticMatrix::binary(a, b).unwrap()
    }

    #[test]
    fn identity_matches_bp_for_kg() {
        let u = PiecewiseUtility::step(&[0.5], &[0.0, 1.0]).unwrap();
        let br = sender_best_response(&u, &StochasticMatrix::identity(2), 0.3).unwrap();
        let bp = bp_solve(&u, 0.3).unwrap();
        assert!((br.value - bp.value).abs() < 1e-9);
        assert!(br.tau.distance(&bp.tau) < 1e-9);
    }

    #[test]
    fn two_outcome_sender_reveals() {
        let u = PiecewiseUtility::from_points(
            &[(0.0, 5.0), (0.25, 7.0), (0.5, 4.0), (0.75, 7.0), (1.0, 5.0)],
            Default::default(),
            &[],
        )
        .unwrap();
        let br = sender_best_response(&u, &m(2.0 / 3.0, 1.0 / 3.0), 0.5).unwrap();
        assert!(br.x.max_abs_diff(&StochasticMatrix::identity(2)) < 1e-9, "{:?}", br.x);
        let a = br.tau.atoms();
        assert!((a[0].belief - 1.0 / 3.0).abs() < 1e-9 && (a[1].belief - 2.0 / 3.0).abs() < 1e-9);
    }

    #[test]
    fn singular_garbling_babbles() {
        let u = PiecewiseUtility::affine(1.0, 0.0);
        let br = sender_best_response(&u, &StochasticMatrix::uninformative(2, 2), 0.4).unwrap();
        assert!(br.tau.is_degenerate());
        assert!((br.value - 0.4).abs() < 1e-12);
    }

    #[test]
    fn step_optimum_on_a_breakpoint_line() {
        // Sender wants the high posterior exactly at 2/3 under Σ*.
        let u = PiecewiseUtility::step(&[1.0 / 3.0, 2.0 / 3.0], &[0.0, 1.0, 5.0]).unwrap();
        let br = sender_best_response(&u, &m(6.0 / 7.0, 3.0 / 7.0), 0.5).unwrap();
        assert!((br.value - 45.0 / 14.0).abs() < 1e-9, "{}", br.value);
    }
}
