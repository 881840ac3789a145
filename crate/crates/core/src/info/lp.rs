//! Small linear feasibility problems: find `t ∈ [0, 1]^n` with `A t = b`.

use minilp::{ComparisonOp, OptimizationDirection, Problem};

/// Sparse equality row: `Σ coef·t[var] = rhs`.
pub(crate) struct Equality {
    pub terms: Vec<(usize, f64)>,
    pub rhs: f64,
}

/// Minimizes the L1 violation of `rows` over the unit box. Returns the point
/// when the optimal violation is at most `slack_tol`.
pub(crate) fn feasible_point(n_vars: usize, rows: &[Equality], slack_tol: f64) -> Option<Vec<f64>> {
    let mut problem = Problem::new(OptimizationDirection::Minimize);
    let vars: Vec<_> = (0..n_vars).map(|_| problem.add_var(0.0, (0.0, 1.0))).collect();
    for row in rows {
        let plus = problem.add_var(1.0, (0.0, f64::INFINITY));
        let minus = problem.add_var(1.0, (0.0, f64::INFINITY));
        let mut expr: Vec<_> = row.terms.iter().map(|&(v, c)| (vars[v], c)).collect();
        expr.push((plus, 1.0));
        expr.push((minus, -1.0));
        problem.add_constraint(expr.as_slice(), ComparisonOp::Eq, row.rhs);
    }
    let solution = problem.solve().ok()?;
    if solution.objective() > slack_tol {
        return None;
    }
    Some(vars.iter().map(|&v| solution[v].clamp(0.0, 1.0)).collect())
}
