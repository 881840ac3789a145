use serde::Serialize;

use super::utility::{Affine, PiecewiseUtility};
use crate::{Error, Result, KNOT_TOL, TOL};

pub const DEFAULT_GRID: usize = 2048;

/// Part of the domain where the envelope touches the utility.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Coincidence {
    pub lo: f64,
    pub hi: f64,
}

impl Coincidence {
    pub fn is_point(&self) -> bool {
        self.hi - self.lo <= KNOT_TOL
    }

    pub fn contains(&self, beta: f64) -> bool {
        beta >= self.lo - KNOT_TOL && beta <= self.hi + KNOT_TOL
    }
}

/// Upper concave envelope of a utility on a sub-interval of `[0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Concavification {
    /// Hull vertices, increasing in belief; no three collinear.
    pub vertices: Vec<(f64, f64)>,
    /// The envelope as a utility on `[0, 1]`; outside the domain it extends
    /// the first and last hull segments.
    pub envelope: PiecewiseUtility,
    pub coincident_set: Vec<Coincidence>,
    /// Beliefs where a one-sided limit of the utility rises above the
    /// envelope: the supremum is approached but not attained there.
    pub unattained: Vec<f64>,
    pub domain: (f64, f64),
}

impl Concavification {
    pub fn value(&self, beta: f64) -> f64 {
        let v = &self.vertices;
        if v.len() == 1 {
            return v[0].1;
        }
        let k = v.partition_point(|p| p.0 <= beta).clamp(1, v.len() - 1);
        Affine::through(v[k - 1].0, v[k - 1].1, v[k].0, v[k].1).at(beta)
    }

    pub fn is_coincident(&self, beta: f64) -> bool {
        self.coincident_set.iter().any(|c| c.contains(beta))
    }

    /// Hull vertices around `beta`: `(beta, beta)` when `beta` is itself a
    /// vertex, otherwise the endpoints of the hull segment that contains it.
    pub fn supporting_segment(&self, beta: f64) -> (f64, f64) {
        let v = &self.vertices;
        if let Some(p) = v.iter().find(|p| (p.0 - beta).abs() <= 1e-12) {
            return (p.0, p.0);
        }
        let k = v.partition_point(|p| p.0 <= beta).clamp(1, v.len() - 1);
        (v[k - 1].0, v[k].0)
    }
}

/// Upper concave envelope of `u` restricted to `[lo, hi]`.
///
/// Candidates are the domain ends, every breakpoint of `u` inside the
/// domain, and a uniform grid of `grid` cells. Only attained values enter the
/// hull, so open ends of pieces never lift the envelope.
pub fn concavify(u: &PiecewiseUtility, lo: f64, hi: f64, grid: usize) -> Result<Concavification> {
    if !(0.0..=1.0).contains(&lo) || !(0.0..=1.0).contains(&hi) || lo > hi || lo.is_nan() || hi.is_nan() {
        return Err(Error::EmptyDomain { lo, hi });
    }
    if hi - lo <= KNOT_TOL {
        let x = 0.5 * (lo + hi);
        let y = u.eval(x);
        return Ok(Concavification {
            vertices: vec![(x, y)],
            envelope: PiecewiseUtility::constant(y),
            coincident_set: vec![Coincidence { lo: x, hi: x }],
            unattained: Vec::new(),
            domain: (lo, hi),
        });
    }
    let grid = grid.max(1);
    let mut xs: Vec<f64> = (0..=grid).map(|i| lo + (hi - lo) * i as f64 / grid as f64).collect();
    xs.extend(u.knots().iter().copied().filter(|&t| t > lo && t < hi));
    xs.sort_by(f64::total_cmp);
    xs.dedup_by(|a, b| (*a - *b).abs() <= KNOT_TOL);
    let last = xs.len() - 1;
    xs[0] = lo;
    xs[last] = hi;
    let pts: Vec<(f64, f64)> = xs.iter().map(|&x| (x, u.eval(x))).collect();
    let vertices = upper_hull(&pts);

    let mut out = Concavification {
        envelope: PiecewiseUtility::constant(0.0),
        vertices,
        coincident_set: Vec::new(),
        unattained: Vec::new(),
        domain: (lo, hi),
    };
    out.envelope = envelope_utility(&out.vertices);

    let touches = |x: f64, y: f64| out.value(x) - y <= TOL * (1.0 + y.abs());
    let mut runs: Vec<Coincidence> = Vec::new();
    let mut open: Option<Coincidence> = None;
    for (i, &(x, y)) in pts.iter().enumerate() {
        let here = touches(x, y);
        let continues = here
            && i + 1 < pts.len()
            && touches(pts[i + 1].0, pts[i + 1].1)
            && touches(x, u.right_limit(x))
            && touches(pts[i + 1].0, u.left_limit(pts[i + 1].0));
        match (&mut open, here) {
            (Some(run), true) => run.hi = x,
            (None, true) => open = Some(Coincidence { lo: x, hi: x }),
            (_, false) => {}
        }
        if !continues {
            if let Some(run) = open.take() {
                runs.push(run);
            }
        }
    }
    out.coincident_set = runs;

    for &t in u.knots() {
        if t < lo - KNOT_TOL || t > hi + KNOT_TOL {
            continue;
        }
        let mut limits = Vec::new();
        if t > lo + KNOT_TOL {
            limits.push(u.left_limit(t));
        }
        if t < hi - KNOT_TOL {
            limits.push(u.right_limit(t));
        }
        if limits.iter().any(|&l| l - out.value(t) > TOL * (1.0 + l.abs())) {
            out.unattained.push(t);
        }
    }
    Ok(out)
}

/// Upper hull by monotone chain over points sorted by `x`; collinear points dropped.
fn upper_hull(pts: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut hull: Vec<(f64, f64)> = Vec::with_capacity(pts.len());
    for &p in pts {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0);
            let scale = (p.0 - a.0) * (1.0 + a.1.abs().max(b.1.abs()).max(p.1.abs()));
            if cross >= -1e-12 * scale {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    hull
}

fn envelope_utility(v: &[(f64, f64)]) -> PiecewiseUtility {
    if v.len() == 1 {
        return PiecewiseUtility::constant(v[0].1);
    }
    let first = Affine::through(v[0].0, v[0].1, v[1].0, v[1].1);
    let n = v.len();
    let last = Affine::through(v[n - 2].0, v[n - 2].1, v[n - 1].0, v[n - 1].1);
    let mut pts: Vec<(f64, f64)> = Vec::with_capacity(n + 2);
    if v[0].0 > KNOT_TOL {
        pts.push((0.0, first.at(0.0)));
    }
    pts.extend(v.iter().copied());
    if v[n - 1].0 < 1.0 - KNOT_TOL {
        pts.push((1.0, last.at(1.0)));
    }
    pts[0].0 = 0.0;
    let m = pts.len() - 1;
    pts[m].0 = 1.0;
    PiecewiseUtility::from_points(&pts, Default::default(), &[]).expect("hull vertices increase").simplify()
}

#[cfg(test)]
mod tests {
    use super::super::utility::ClosedSide;
    use super::*;

    fn v_shape() -> PiecewiseUtility {
        PiecewiseUtility::from_points(&[(0.0, 1.0), (0.5, 0.5), (1.0, 1.0)], ClosedSide::Right, &[]).unwrap()
    }

    #[test]
    fn affine_is_its_own_envelope() {
        let c = concavify(&PiecewiseUtility::affine(2.0, -1.0), 0.0, 1.0, 64).unwrap();
        assert_eq!(c.vertices.len(), 2);
        assert_eq!(c.coincident_set, vec![Coincidence { lo: 0.0, hi: 1.0 }]);
        assert!((c.value(0.3) + 0.4).abs() < 1e-12);
    }

    #[test]
    fn v_shape_full_and_half() {
        let c = concavify(&v_shape(), 0.0, 1.0, 64).unwrap();
        assert!((c.value(0.5) - 1.0).abs() < 1e-12);
        assert_eq!(c.coincident_set.len(), 2);
        assert!(c.coincident_set.iter().all(Coincidence::is_point));
        assert_eq!(c.supporting_segment(0.3), (0.0, 1.0));

        let half = concavify(&v_shape(), 0.0, 0.5, 64).unwrap();
        assert!((half.value(0.3) - 0.7).abs() < 1e-12);
        assert_eq!(half.coincident_set, vec![Coincidence { lo: 0.0, hi: 0.5 }]);
    }

    #[test]
    fn kg_step() {
        let u = PiecewiseUtility::step(&[0.5], &[0.0, 1.0]).unwrap();
        let c = concavify(&u, 0.0, 1.0, 2048).unwrap();
        assert!((c.value(0.3) - 0.6).abs() < 1e-12);
        assert_eq!(c.supporting_segment(0.3), (0.0, 0.5));
        assert!(c.unattained.is_empty());
    }

    #[test]
    fn open_end_is_flagged() {
        let u = PiecewiseUtility::step(&[0.5], &[1.0, 0.0]).unwrap();
        let c = concavify(&u, 0.0, 1.0, 16).unwrap();
        assert_eq!(c.unattained, vec![0.5]);
        assert!((c.value(0.5) - 8.0 / 9.0).abs() < 1e-12);
    }

    #[test]
    fn singleton_lifts_envelope() {
        let u = PiecewiseUtility::constant(0.0).with_point(0.2, 1.0).unwrap();
        let c = concavify(&u, 0.0, 1.0, 16).unwrap();
        assert!((c.value(0.2) - 1.0).abs() < 1e-12);
        assert!(c.is_coincident(0.2) && !c.is_coincident(0.1));
    }
}
