//! Dense front end to the `minilp` simplex solver.

use microlp::{ComparisonOp, OptimizationDirection, Problem};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cmp {
    Le,
    Ge,
    Eq,
}

/// `maximize c.x` subject to dense row constraints and per-variable bounds.
#[derive(Clone, Debug, Default)]
pub struct LinearProgram {
    objective: Vec<f64>,
    bounds: Vec<(f64, f64)>,
    rows: Vec<(Vec<f64>, Cmp, f64)>,
}

impl LinearProgram {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a variable and returns its index.
    pub fn var(&mut self, objective: f64, lo: f64, hi: f64) -> usize {
        self.objective.push(objective);
        self.bounds.push((lo, hi));
        self.objective.len() - 1
    }

    /// Adds `row . vars cmp rhs`; `row` may be shorter than the variable list.
    pub fn constrain(&mut self, row: Vec<f64>, cmp: Cmp, rhs: f64) {
        self.rows.push((row, cmp, rhs));
    }

    /// Optimal value and point, or `None` when infeasible or unbounded.
    pub fn maximize(&self) -> Option<(f64, Vec<f64>)> {
        let mut p = Problem::new(OptimizationDirection::Maximize);
        let vars: Vec<_> = self
            .objective
            .iter()
            .zip(&self.bounds)
            .map(|(&c, &b)| p.add_var(c, b))
            .collect();
        for (row, cmp, rhs) in &self.rows {
            let expr: Vec<_> = row
                .iter()
                .enumerate()
                .filter(|(_, c)| **c != 0.0)
                .map(|(i, &c)| (vars[i], c))
                .collect();
            let op = match cmp {
                Cmp::Le => ComparisonOp::Le,
                Cmp::Ge => ComparisonOp::Ge,
                Cmp::Eq => ComparisonOp::Eq,
            };
            p.add_constraint(expr, op, *rhs);
        }
        let sol = p.solve().ok()?;
        Some((sol.objective(), vars.iter().map(|&v| *sol.var_value(v)).collect()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_lp() {
        // max x + y s.t. x + 2y <= 4, 3x + y <= 6, x, y >= 0  ->  (8/5, 6/5)
        let mut lp = LinearProgram::new();
        lp.var(1.0, 0.0, f64::INFINITY);
        lp.var(1.0, 0.0, f64::INFINITY);
        lp.constrain(vec![1.0, 2.0], Cmp::Le, 4.0);
        lp.constrain(vec![3.0, 1.0], Cmp::Le, 6.0);
        let (v, x) = lp.maximize().unwrap();
        assert!((v - 2.8).abs() < 1e-9);
        assert!((x[0] - 1.6).abs() < 1e-9 && (x[1] - 1.2).abs() < 1e-9);
    }

    #[test]
    fn infeasible() {
        let mut lp = LinearProgram::new();
        lp.var(1.0, f64::NEG_INFINITY, f64::INFINITY);
        lp.constrain(vec![1.0], Cmp::Ge, 2.0);
        lp.constrain(vec![1.0], Cmp::Le, 1.0);
        assert!(lp.maximize().is_none());
    }
}
