use std::fmt;

use serde::{Serialize, Serializer};

use crate::{Error, Result, TOL};

/// Dense real matrix used for intermediate algebra (inverses, witnesses).
#[derive(Clone, Debug, PartialEq)]
pub struct Dense {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Dense {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.data[i * cols + j] = f(i, j);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn mul(&self, rhs: &Dense) -> Result<Dense> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(Dense::from_fn(self.rows, rhs.cols, |i, j| {
            (0..self.cols).map(|k| self.get(i, k) * rhs.get(k, j)).sum()
        }))
    }

    /// Gauss-Jordan inverse with partial pivoting; `None` when a pivot falls below `TOL`.
    pub fn inverse(&self) -> Option<Dense> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Dense::from_fn(n, n, |i, j| if i == j { 1.0 } else { 0.0 });
        for col in 0..n {
            let pivot = (col..n).max_by(|&r, &s| a.get(r, col).abs().total_cmp(&a.get(s, col).abs()))?;
            if a.get(pivot, col).abs() < TOL {
                return None;
            }
            for j in 0..n {
                a.data.swap(col * n + j, pivot * n + j);
                inv.data.swap(col * n + j, pivot * n + j);
            }
            let p = a.get(col, col);
            for j in 0..n {
                a.data[col * n + j] /= p;
                inv.data[col * n + j] /= p;
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a.get(r, col);
                if f == 0.0 {
                    continue;
                }
                for j in 0..n {
                    a.data[r * n + j] -= f * a.data[col * n + j];
                    inv.data[r * n + j] -= f * inv.data[col * n + j];
                }
            }
        }
        Some(inv)
    }

    /// Numerical rank by row reduction with pivot tolerance `tol`.
    pub fn rank(&self, tol: f64) -> usize {
        let mut a = self.clone();
        let (m, n) = (self.rows, self.cols);
        let mut rank = 0;
        for col in 0..n {
            if rank == m {
                break;
            }
            let pivot = (rank..m)
                .max_by(|&r, &s| a.get(r, col).abs().total_cmp(&a.get(s, col).abs()))
                .unwrap();
            if a.get(pivot, col).abs() <= tol {
                continue;
            }
            for j in 0..n {
                a.data.swap(rank * n + j, pivot * n + j);
            }
            for r in rank + 1..m {
                let f = a.get(r, col) / a.get(rank, col);
                for j in col..n {
                    a.data[r * n + j] -= f * a.data[rank * n + j];
                }
            }
            rank += 1;
        }
        rank
    }

    pub fn max_abs_diff(&self, other: &Dense) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.cols).map(|r| r.to_vec()).collect()
    }
}

impl Serialize for Dense {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_rows().serialize(s)
    }
}

/// Column-stochastic matrix: an experiment, a garbling, or their composite.
///
/// Rows are realizations and columns the conditioning states (or
/// realizations). Every entry lies in `[0, 1]`, every column sums to one and
/// there are at least as many rows as columns.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(into = "Vec<Vec<f64>>")]
pub struct StochasticMatrix {
    inner: Dense,
}

impl From<StochasticMatrix> for Vec<Vec<f64>> {
    fn from(m: StochasticMatrix) -> Self {
        m.inner.to_rows()
    }
}

impl StochasticMatrix {
    /// Validates a row-major matrix. Negative entries within `TOL` of zero are
    /// flushed to zero; anything else must satisfy the invariants exactly to `TOL`.
    pub fn new(raw: &[Vec<f64>]) -> Result<Self> {
        let rows = raw.len();
        let cols = raw.first().map_or(0, Vec::len);
        if rows == 0 || cols == 0 {
            return Err(Error::MalformedMatrix("empty matrix".into()));
        }
        if let Some(i) = raw.iter().position(|r| r.len() != cols) {
            return Err(Error::MalformedMatrix(format!("row {i} has {} entries, expected {cols}", raw[i].len())));
        }
        let mut data = Vec::with_capacity(rows * cols);
        for (i, row) in raw.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if !v.is_finite() {
                    return Err(Error::MalformedMatrix(format!("non-finite entry at ({i}, {j})")));
                }
                if v < -TOL {
                    return Err(Error::NegativeEntry { row: i, col: j, value: v });
                }
                data.push(v.max(0.0));
            }
        }
        let inner = Dense { rows, cols, data };
        let worst = (0..cols)
            .map(|j| (j, (0..rows).map(|i| inner.get(i, j)).sum::<f64>() - 1.0))
            .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
            .unwrap();
        if worst.1.abs() > TOL {
            return Err(Error::ColumnSumMismatch { column: worst.0, deviation: worst.1 });
        }
        if rows < cols {
            return Err(Error::TooFewRealizations { rows, cols });
        }
        Ok(Self { inner })
    }

    /// Accepts a dense result of stochastic algebra, clamping entries within
    /// `tol` of `[0, 1]` and renormalising columns. Returns `None` if any entry
    /// or column sum is further off than `tol`.
    pub fn from_dense(d: &Dense, tol: f64) -> Option<Self> {
        let mut out = d.clone();
        for v in &mut out.data {
            if *v < -tol || *v > 1.0 + tol || !v.is_finite() {
                return None;
            }
            *v = v.clamp(0.0, 1.0);
        }
        for j in 0..out.cols {
            let s: f64 = (0..out.rows).map(|i| out.get(i, j)).sum();
            if (s - 1.0).abs() > tol || s <= 0.0 {
                return None;
            }
            for i in 0..out.rows {
                let v = out.get(i, j) / s;
                out.set(i, j, v);
            }
        }
        if out.rows < out.cols {
            return None;
        }
        Some(Self { inner: out })
    }

    pub fn identity(n: usize) -> Self {
        Self { inner: Dense::from_fn(n, n, |i, j| if i == j { 1.0 } else { 0.0 }) }
    }

    /// Every column uniform over the `rows` realizations.
    pub fn uninformative(rows: usize, cols: usize) -> Self {
        Self { inner: Dense::from_fn(rows, cols, |_, _| 1.0 / rows as f64) }
    }

    /// The 2×2 matrix `[[a, b], [1 - a, 1 - b]]`.
    pub fn binary(a: f64, b: f64) -> Result<Self> {
        Self::new(&[vec![a, b], vec![1.0 - a, 1.0 - b]])
    }

    pub fn rows(&self) -> usize {
        self.inner.rows
    }

    pub fn cols(&self) -> usize {
        self.inner.cols
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.inner.get(i, j)
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows()).map(|i| self.get(i, j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.inner.to_rows()
    }

    pub fn as_dense(&self) -> &Dense {
        &self.inner
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn is_binary(&self) -> bool {
        self.rows() == 2 && self.cols() == 2
    }

    /// `self · rhs`: garble `rhs` through `self`.
    pub fn compose(&self, rhs: &StochasticMatrix) -> Result<StochasticMatrix> {
        let prod = self.inner.mul(&rhs.inner)?;
        Ok(StochasticMatrix::from_dense(&prod, TOL).expect("product of stochastic matrices is stochastic"))
    }

    pub fn inverse(&self) -> Option<Dense> {
        self.inner.inverse()
    }

    pub fn rank(&self) -> usize {
        self.inner.rank(TOL)
    }

    pub fn max_abs_diff(&self, other: &StochasticMatrix) -> f64 {
        if self.rows() != other.rows() || self.cols() != other.cols() {
            return f64::INFINITY;
        }
        self.inner.max_abs_diff(&other.inner)
    }

    /// True when all columns coincide: the structure carries no information.
    pub fn is_uninformative(&self) -> bool {
        (1..self.cols()).all(|j| (0..self.rows()).all(|i| (self.get(i, j) - self.get(i, 0)).abs() <= TOL))
    }
}

impl fmt::Display for StochasticMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .to_rows()
            .iter()
            .map(|r| r.iter().map(|v| format!("{v}")).collect::<Vec<_>>().join(","))
            .collect();
        write!(f, "{}", rows.join(";"))
    }
}

/// Validates a raw row-major matrix as column-stochastic.
pub fn validate_stochastic(raw: &[Vec<f64>]) -> Result<StochasticMatrix> {
    StochasticMatrix::new(raw)
}

/// The composite `B = ΣX`.
pub fn compose(sigma: &StochasticMatrix, x: &StochasticMatrix) -> Result<StochasticMatrix> {
    sigma.compose(x)
}
