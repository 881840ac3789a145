#![allow(dead_code)]

use std::io::Write;

use mediated_persuasion::payoffs::{ActionGame, ClosedSide, PiecewiseUtility};
use mediated_persuasion::solver::{GameSpec, SearchConfig};
use rand::Rng;

/// Goes straight to the process stderr so the line shows up even when the
/// harness captures test output.
pub fn report(id: usize, name: &str, pass: bool, detail: &str) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    let _ = writeln!(std::io::stderr(), "criterion {id:>2} [{verdict}] {name}: {detail}");
}

/// Grid used by the property sweeps over many random games.
pub const PROPERTY_GRID: f64 = 0.04;

pub fn property_search() -> SearchConfig {
    SearchConfig { grid: PROPERTY_GRID, ..SearchConfig::default() }
}

/// Concave utility through `n` equal pieces with decreasing slopes.
pub fn random_concave(rng: &mut impl Rng, n: usize) -> PiecewiseUtility {
    let mut slopes: Vec<f64> = (0..n).map(|_| rng.gen_range(-4.0..4.0)).collect();
    slopes.sort_by(|a, b| b.total_cmp(a));
    curve_from_slopes(rng.gen_range(-1.0..1.0), &slopes)
}

/// Convex utility through `n` equal pieces with increasing slopes.
pub fn random_convex(rng: &mut impl Rng, n: usize) -> PiecewiseUtility {
    let mut slopes: Vec<f64> = (0..n).map(|_| rng.gen_range(-4.0..4.0)).collect();
    slopes.sort_by(f64::total_cmp);
    curve_from_slopes(rng.gen_range(-1.0..1.0), &slopes)
}

fn curve_from_slopes(start: f64, slopes: &[f64]) -> PiecewiseUtility {
    let n = slopes.len();
    let mut pts = vec![(0.0, start)];
    for (i, s) in slopes.iter().enumerate() {
        let (x0, y0) = pts[i];
        let x1 = (i + 1) as f64 / n as f64;
        pts.push((x1, y0 + s * (x1 - x0)));
    }
    PiecewiseUtility::from_points(&pts, ClosedSide::Right, &[]).unwrap()
}

/// Continuous utility through random values at a few random breakpoints.
pub fn random_pwl(rng: &mut impl Rng, knots: usize) -> PiecewiseUtility {
    let mut xs: Vec<f64> = (0..knots).map(|_| rng.gen_range(0.05..0.95)).collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup_by(|a, b| (*a - *b).abs() < 0.02);
    let mut pts = vec![(0.0, rng.gen_range(-1.0..1.0))];
    pts.extend(xs.into_iter().map(|x| (x, rng.gen_range(-1.0..1.0))));
    pts.push((1.0, rng.gen_range(-1.0..1.0)));
    PiecewiseUtility::from_points(&pts, ClosedSide::Right, &[]).unwrap()
}

/// Monotone sender step at `c`.
pub fn sender_step(rng: &mut impl Rng, c: f64) -> PiecewiseUtility {
    let k1 = rng.gen_range(-1.0..1.0);
    let k2 = k1 + rng.gen_range(0.2..2.0);
    PiecewiseUtility::step(&[c], &[k1, k2]).unwrap()
}

/// Two-action game: the receiver switches to the sender's preferred action
/// at `c`. Returns the game and `c`.
pub fn canonical_two_action(rng: &mut impl Rng) -> (ActionGame, f64) {
    let (r1, r2) = (rng.gen_range(0.2..2.0), rng.gen_range(0.2..2.0));
    let k1 = rng.gen_range(-1.0..1.0);
    let k2 = k1 + rng.gen_range(0.2..2.0);
    let g = ActionGame::new(
        vec!["a1".into(), "a2".into()],
        vec![[k1, k1], [k2, k2]],
        vec![[0.0, 0.0], [0.0, 0.0]],
        vec![[r1, 0.0], [0.0, r2]],
    )
    .unwrap();
    (g, r1 / (r1 + r2))
}

pub fn game(prior: f64, s: PiecewiseUtility, m: PiecewiseUtility, r: PiecewiseUtility, search: SearchConfig) -> GameSpec {
    GameSpec::new(prior, s, m, r).unwrap().with_search(search).unwrap()
}
