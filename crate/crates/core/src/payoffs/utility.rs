use crate::{Error, Result, KNOT_TOL};

/// Affine function `slope·β + intercept`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Affine {
    pub slope: f64,
    pub intercept: f64,
}

impl Affine {
    pub fn new(slope: f64, intercept: f64) -> Self {
        Self { slope, intercept }
    }

    pub fn through(x0: f64, y0: f64, x1: f64, y1: f64) -> Self {
        let slope = (y1 - y0) / (x1 - x0);
        Self { slope, intercept: y0 - slope * x0 }
    }

    pub fn at(&self, beta: f64) -> f64 {
        self.slope * beta + self.intercept
    }

    fn same_as(&self, other: &Affine) -> bool {
        (self.slope - other.slope).abs() <= 1e-12 && (self.intercept - other.intercept).abs() <= 1e-12
    }
}

/// One piece of a utility: an interval with independently open or closed
/// ends, or a single point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Piece {
    Interval { lo: f64, hi: f64, lo_closed: bool, hi_closed: bool, f: Affine },
    Point { at: f64, value: f64 },
}

/// Which side of a jump owns the breakpoint.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ClosedSide {
    Left,
    #[default]
    Right,
}

/// Utility over the posterior `β ∈ [0, 1]`.
///
/// Stored canonically as breakpoints `0 = t₀ < … < t_k = 1`, the value taken
/// at each breakpoint, and one affine function per open segment between
/// consecutive breakpoints. Steps, jumps and isolated point values all fit.
#[derive(Clone, Debug, PartialEq)]
pub struct PiecewiseUtility {
    knots: Vec<f64>,
    at_knot: Vec<f64>,
    segments: Vec<Affine>,
}

impl PiecewiseUtility {
    fn from_parts(knots: Vec<f64>, at_knot: Vec<f64>, segments: Vec<Affine>) -> Result<Self> {
        let ok = knots.len() >= 2
            && knots.len() == at_knot.len()
            && segments.len() + 1 == knots.len()
            && knots[0] == 0.0
            && knots[knots.len() - 1] == 1.0
            && knots.windows(2).all(|w| w[1] > w[0]);
        if !ok {
            return Err(Error::InvalidUtility("breakpoints must increase from 0 to 1".into()));
        }
        let finite = at_knot.iter().all(|v| v.is_finite())
            && segments.iter().all(|f| f.slope.is_finite() && f.intercept.is_finite());
        if !finite {
            return Err(Error::InvalidUtility("non-finite value".into()));
        }
        Ok(Self { knots, at_knot, segments })
    }

    pub fn affine(slope: f64, intercept: f64) -> Self {
        let f = Affine::new(slope, intercept);
        Self { knots: vec![0.0, 1.0], at_knot: vec![f.at(0.0), f.at(1.0)], segments: vec![f] }
    }

    pub fn constant(value: f64) -> Self {
        Self::affine(0.0, value)
    }

    /// Right-continuous step: `levels[0]` below `cutoffs[0]`, `levels[i]` on
    /// `[cutoffs[i-1], cutoffs[i])`, the last level up to and including 1.
    pub fn step(cutoffs: &[f64], levels: &[f64]) -> Result<Self> {
        if levels.len() != cutoffs.len() + 1 {
            return Err(Error::InvalidUtility("a step needs one more level than cutoffs".into()));
        }
        let mut knots = vec![0.0];
        knots.extend_from_slice(cutoffs);
        knots.push(1.0);
        let mut at_knot = vec![levels[0]];
        at_knot.extend_from_slice(&levels[1..]);
        at_knot.push(levels[levels.len() - 1]);
        let segments = levels.iter().map(|&v| Affine::new(0.0, v)).collect();
        Self::from_parts(knots, at_knot, segments)
    }

    /// Builds from an exact partition of `[0, 1]`. Point pieces take
    /// precedence over interval ends; otherwise every belief must be covered
    /// exactly once.
    pub fn from_pieces(pieces: &[Piece]) -> Result<Self> {
        let mut cuts: Vec<f64> = vec![0.0, 1.0];
        for p in pieces {
            match *p {
                Piece::Interval { lo, hi, .. } => {
                    if !(0.0..=1.0).contains(&lo) || !(0.0..=1.0).contains(&hi) || lo >= hi {
                        return Err(Error::InvalidUtility(format!("bad interval [{lo}, {hi}]")));
                    }
                    cuts.extend([lo, hi]);
                }
                Piece::Point { at, value } => {
                    if !(0.0..=1.0).contains(&at) || !value.is_finite() {
                        return Err(Error::InvalidUtility(format!("bad point piece at {at}")));
                    }
                    cuts.push(at);
                }
            }
        }
        cuts.sort_by(f64::total_cmp);
        cuts.dedup_by(|a, b| (*a - *b).abs() <= KNOT_TOL);
        let n = cuts.len();
        cuts[0] = 0.0;
        cuts[n - 1] = 1.0;

        let near = |a: f64, b: f64| (a - b).abs() <= KNOT_TOL;
        let mut segments = Vec::with_capacity(n - 1);
        for w in cuts.windows(2) {
            let mid = 0.5 * (w[0] + w[1]);
            let covering: Vec<Affine> = pieces
                .iter()
                .filter_map(|p| match *p {
                    Piece::Interval { lo, hi, f, .. } if lo < mid && mid < hi => Some(f),
                    _ => None,
                })
                .collect();
            match covering.as_slice() {
                [f] => segments.push(*f),
                [] => return Err(Error::InvalidUtility(format!("gap in ({}, {})", w[0], w[1]))),
                _ => return Err(Error::InvalidUtility(format!("overlap in ({}, {})", w[0], w[1]))),
            }
        }
        let mut at_knot = Vec::with_capacity(n);
        for &t in &cuts {
            let points: Vec<f64> = pieces
                .iter()
                .filter_map(|p| match *p {
                    Piece::Point { at, value } if near(at, t) => Some(value),
                    _ => None,
                })
                .collect();
            if points.len() > 1 {
                return Err(Error::InvalidUtility(format!("two point pieces at {t}")));
            }
            let closed: Vec<f64> = pieces
                .iter()
                .filter_map(|p| match *p {
                    Piece::Interval { lo, lo_closed: true, f, .. } if near(lo, t) => Some(f.at(t)),
                    Piece::Interval { hi, hi_closed: true, f, .. } if near(hi, t) => Some(f.at(t)),
                    Piece::Interval { lo, hi, f, .. } if lo < t - KNOT_TOL && t + KNOT_TOL < hi => Some(f.at(t)),
                    _ => None,
                })
                .collect();
            match (points.first(), closed.as_slice()) {
                (Some(&v), [] | [_]) => at_knot.push(v),
                (None, [v]) => at_knot.push(*v),
                (None, []) => return Err(Error::InvalidUtility(format!("belief {t} is not covered"))),
                _ => return Err(Error::InvalidUtility(format!("belief {t} is covered twice"))),
            }
        }
        Self::from_parts(cuts, at_knot, segments)
    }

    /// Linear interpolation through `(β, v)` points sorted by `β`, spanning
    /// `[0, 1]`. A repeated `β` marks a jump; `closed_side` says which of the
    /// two values the jump point itself takes. `singletons` then override the
    /// value at isolated beliefs.
    pub fn from_points(points: &[(f64, f64)], closed_side: ClosedSide, singletons: &[(f64, f64)]) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidUtility("need at least two points".into()));
        }
        if points.windows(2).any(|w| w[1].0 < w[0].0) {
            return Err(Error::InvalidUtility("points must be sorted by belief".into()));
        }
        if points[0].0 != 0.0 || points[points.len() - 1].0 != 1.0 {
            return Err(Error::InvalidUtility("points must start at 0 and end at 1".into()));
        }
        let mut knots: Vec<f64> = Vec::new();
        let mut at_knot: Vec<f64> = Vec::new();
        let mut segments = Vec::new();
        let mut i = 0;
        while i < points.len() {
            let (t, v) = points[i];
            let mut j = i;
            while j + 1 < points.len() && points[j + 1].0 == t {
                j += 1;
            }
            if j > i + 1 {
                return Err(Error::InvalidUtility(format!("belief {t} repeated more than twice")));
            }
            if let Some(&prev) = knots.last() {
                let (_, pv) = points[i - 1];
                segments.push(Affine::through(prev, pv, t, v));
            }
            let value = match (j > i, closed_side) {
                (false, _) | (true, ClosedSide::Left) => v,
                (true, ClosedSide::Right) => points[j].1,
            };
            knots.push(t);
            at_knot.push(value);
            i = j + 1;
        }
        let mut u = Self::from_parts(knots, at_knot, segments)?;
        for &(at, value) in singletons {
            u = u.with_point(at, value)?;
        }
        Ok(u)
    }

    /// Same utility but taking `value` exactly at `at`.
    pub fn with_point(mut self, at: f64, value: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&at) || !value.is_finite() {
            return Err(Error::InvalidUtility(format!("bad point value at {at}")));
        }
        if let Some(k) = self.knot_index(at) {
            self.at_knot[k] = value;
            return Ok(self);
        }
        let s = self.segment_index(at);
        self.knots.insert(s + 1, at);
        self.at_knot.insert(s + 1, value);
        let f = self.segments[s];
        self.segments.insert(s + 1, f);
        Ok(self)
    }

    fn knot_index(&self, beta: f64) -> Option<usize> {
        let i = self.knots.partition_point(|&t| t < beta - KNOT_TOL);
        (i < self.knots.len() && (self.knots[i] - beta).abs() <= KNOT_TOL).then_some(i)
    }

    fn segment_index(&self, beta: f64) -> usize {
        let i = self.knots.partition_point(|&t| t <= beta);
        i.clamp(1, self.segments.len()) - 1
    }

    pub fn eval(&self, beta: f64) -> f64 {
        match self.knot_index(beta) {
            Some(k) => self.at_knot[k],
            None => self.segments[self.segment_index(beta)].at(beta),
        }
    }

    /// Limit from the left; at 0 the value itself.
    pub fn left_limit(&self, beta: f64) -> f64 {
        match self.knot_index(beta) {
            Some(0) => self.at_knot[0],
            Some(k) => self.segments[k - 1].at(self.knots[k]),
            None => self.eval(beta),
        }
    }

    /// Limit from the right; at 1 the value itself.
    pub fn right_limit(&self, beta: f64) -> f64 {
        match self.knot_index(beta) {
            Some(k) if k == self.knots.len() - 1 => self.at_knot[k],
            Some(k) => self.segments[k].at(self.knots[k]),
            None => self.eval(beta),
        }
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    /// Breakpoints strictly inside `(0, 1)`.
    pub fn interior_knots(&self) -> &[f64] {
        &self.knots[1..self.knots.len() - 1]
    }

    pub fn segments(&self) -> &[Affine] {
        &self.segments
    }

    pub fn knot_values(&self) -> &[f64] {
        &self.at_knot
    }

    /// Drops breakpoints where nothing changes.
    pub fn simplify(&self) -> Self {
        let mut knots = vec![self.knots[0]];
        let mut at_knot = vec![self.at_knot[0]];
        let mut segments: Vec<Affine> = vec![self.segments[0]];
        for k in 1..self.knots.len() - 1 {
            let (l, r) = (self.segments[k - 1], self.segments[k]);
            let t = self.knots[k];
            if l.same_as(&r) && (self.at_knot[k] - l.at(t)).abs() <= 1e-12 {
                continue;
            }
            knots.push(t);
            at_knot.push(self.at_knot[k]);
            segments.push(r);
        }
        knots.push(1.0);
        at_knot.push(self.at_knot[self.at_knot.len() - 1]);
        Self { knots, at_knot, segments }
    }

    /// `a·self + b·other + c`, on the union of breakpoints.
    pub fn combine(&self, a: f64, other: &PiecewiseUtility, b: f64, c: f64) -> Self {
        let mut knots: Vec<f64> = self.knots.iter().chain(&other.knots).copied().collect();
        knots.sort_by(f64::total_cmp);
        knots.dedup_by(|x, y| (*x - *y).abs() <= KNOT_TOL);
        let at_knot = knots.iter().map(|&t| a * self.eval(t) + b * other.eval(t) + c).collect();
        let segments = knots
            .windows(2)
            .map(|w| {
                let mid = 0.5 * (w[0] + w[1]);
                let (f, g) = (self.segments[self.segment_index(mid)], other.segments[other.segment_index(mid)]);
                Affine::new(a * f.slope + b * g.slope, a * f.intercept + b * g.intercept + c)
            })
            .collect();
        Self { knots, at_knot, segments }.simplify()
    }

    pub fn is_affine(&self) -> bool {
        let s = self.simplify();
        s.segments.len() == 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kg_sender() -> PiecewiseUtility {
        PiecewiseUtility::step(&[0.5], &[0.0, 1.0]).unwrap()
    }

    #[test]
    fn step_closed_on_the_right() {
        let u = kg_sender();
        assert_eq!(u.eval(0.5), 1.0);
        assert_eq!(u.eval(0.5 - 1e-6), 0.0);
        assert_eq!(u.eval(1.0), 1.0);
        assert_eq!(u.left_limit(0.5), 0.0);
        assert_eq!(u.right_limit(0.5), 1.0);
    }

    #[test]
    fn jumps_and_singletons_from_points() {
        let pts = [(0.0, 0.0), (0.2, 0.0), (0.2, -100.0), (0.955, -100.0), (0.955, 0.0), (1.0, 0.0)];
        let u = PiecewiseUtility::from_points(&pts, ClosedSide::Right, &[(0.2, 1.0), (0.5, 1.0)]).unwrap();
        assert_eq!(u.eval(0.2), 1.0);
        assert_eq!(u.eval(0.5), 1.0);
        assert_eq!(u.eval(0.35), -100.0);
        assert_eq!(u.eval(0.1), 0.0);
        assert_eq!(u.eval(0.955), 0.0);
        let left = PiecewiseUtility::from_points(&pts, ClosedSide::Left, &[]).unwrap();
        assert_eq!(left.eval(0.955), -100.0);
        assert_eq!(left.eval(0.2), 0.0);
    }

    #[test]
    fn interpolates() {
        let u = PiecewiseUtility::from_points(&[(0.0, 5.0), (0.25, 7.0), (0.5, 4.0), (1.0, 5.0)], ClosedSide::Right, &[])
            .unwrap();
        assert!((u.eval(0.125) - 6.0).abs() < 1e-12);
        assert!((u.eval(0.75) - 4.5).abs() < 1e-12);
    }

    #[test]
    fn pieces_must_partition() {
        let f = Affine::new(0.0, 1.0);
        let gap = [
            Piece::Interval { lo: 0.0, hi: 0.4, lo_closed: true, hi_closed: true, f },
            Piece::Interval { lo: 0.5, hi: 1.0, lo_closed: true, hi_closed: true, f },
        ];
        assert!(PiecewiseUtility::from_pieces(&gap).is_err());
        let overlap = [
            Piece::Interval { lo: 0.0, hi: 0.5, lo_closed: true, hi_closed: true, f },
            Piece::Interval { lo: 0.5, hi: 1.0, lo_closed: true, hi_closed: true, f },
        ];
        assert!(PiecewiseUtility::from_pieces(&overlap).is_err());
        let hole = [
            Piece::Interval { lo: 0.0, hi: 0.5, lo_closed: true, hi_closed: false, f },
            Piece::Interval { lo: 0.5, hi: 1.0, lo_closed: false, hi_closed: true, f },
        ];
        assert!(PiecewiseUtility::from_pieces(&hole).is_err());
        let mut patched = hole.to_vec();
        patched.push(Piece::Point { at: 0.5, value: 3.0 });
        let u = PiecewiseUtility::from_pieces(&patched).unwrap();
        assert_eq!(u.eval(0.5), 3.0);
        assert_eq!(u.eval(0.6), 1.0);
    }

    #[test]
    fn simplify_and_combine() {
        let u = PiecewiseUtility::affine(1.0, 0.0).with_point(0.3, 0.3).unwrap();
        assert_eq!(u.knots().len(), 3);
        assert!(u.is_affine());
        let v = kg_sender().combine(2.0, &PiecewiseUtility::affine(1.0, 0.0), -1.0, 0.5);
        assert!((v.eval(0.25) - 0.25).abs() < 1e-12);
        assert!((v.eval(0.5) - 2.0).abs() < 1e-12);
    }
}
