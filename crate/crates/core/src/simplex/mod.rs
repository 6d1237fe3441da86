//! LP kernel and branch-and-bound layer.
//!
//! [`LpSolver`] keeps a factorized basis alive across row additions and bound
//! changes, which is what the cutting-plane engine leans on. The free
//! functions [`solve_lp`], [`add_rows_and_reoptimize`] and [`solve_ilp`] wrap it
//! for one-shot use.

mod bnb;
mod dual;
mod lpfile;
mod lu;

pub use bnb::{branch_and_bound, IlpOptions, IlpOutcome, RowCallback};
pub use dual::VarStatus;
pub use lpfile::write_lp_format;

use crate::error::Result;
use dual::{DualSimplex, Outcome};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

/// A sparse linear row `sum a_j x_j (<=|>=|=) rhs` over column indices.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub terms: Vec<(usize, f64)>,
    pub sense: Sense,
    pub rhs: f64,
}

impl Row {
    pub fn new(terms: Vec<(usize, f64)>, sense: Sense, rhs: f64) -> Self {
        Row { terms, sense, rhs }
    }

    /// Amount by which `x` violates the row (non-positive when satisfied).
    pub fn violation(&self, x: &[f64]) -> f64 {
        let act: f64 = self.terms.iter().map(|&(j, a)| a * x[j]).sum();
        match self.sense {
            Sense::Le => act - self.rhs,
            Sense::Ge => self.rhs - act,
            Sense::Eq => (act - self.rhs).abs(),
        }
    }
}

/// Minimize `c^T x + constant` subject to boxed variables and the active rows.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    pub objective: Vec<f64>,
    pub constant: f64,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub rows: Vec<Row>,
    pub active: Vec<bool>,
}

impl LinearProgram {
    /// `n` variables in `[0,1]` with the given costs.
    pub fn unit_box(objective: Vec<f64>) -> Self {
        let n = objective.len();
        LinearProgram {
            objective,
            constant: 0.0,
            lower: vec![0.0; n],
            upper: vec![1.0; n],
            rows: Vec::new(),
            active: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn push_row(&mut self, row: Row) {
        self.rows.push(row);
        self.active.push(true);
    }

    pub fn active_rows(&self) -> impl Iterator<Item = &Row> {
        self.rows
            .iter()
            .zip(self.active.iter().chain(std::iter::repeat(&true)))
            .filter(|(_, &a)| a)
            .map(|(r, _)| r)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    /// Branch-and-bound stopped at a node or time limit; `values` holds the incumbent.
    Interrupted,
}

/// Opaque warm-start token.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Basis(Vec<VarStatus>);

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub status: LpStatus,
    pub values: Vec<f64>,
    pub objective_value: f64,
    pub basis: Basis,
}

/// A stateful solver that keeps its factorization across modifications.
#[derive(Debug, Clone)]
pub struct LpSolver {
    inner: DualSimplex,
    constant: f64,
    last: Option<Outcome>,
}

impl LpSolver {
    pub fn new(lp: &LinearProgram) -> Result<Self> {
        let mut inner = DualSimplex::new(lp.objective.clone(), lp.lower.clone(), lp.upper.clone())?;
        let rows: Vec<Row> = lp.active_rows().cloned().collect();
        inner.add_rows(&rows)?;
        Ok(LpSolver {
            inner,
            constant: lp.constant,
            last: None,
        })
    }

    pub fn num_vars(&self) -> usize {
        self.inner.num_structurals()
    }

    pub fn num_rows(&self) -> usize {
        self.inner.num_rows()
    }

    pub fn add_rows(&mut self, rows: &[Row]) -> Result<()> {
        self.last = None;
        self.inner.add_rows(rows)
    }

    pub fn set_bounds(&mut self, j: usize, lo: f64, hi: f64) {
        self.last = None;
        self.inner.set_bounds(j, lo, hi);
    }

    pub fn bounds(&self, j: usize) -> (f64, f64) {
        self.inner.bounds(j)
    }

    pub fn solve(&mut self) -> Result<LpStatus> {
        let out = self.inner.solve()?;
        self.last = Some(out);
        Ok(match out {
            Outcome::Optimal => LpStatus::Optimal,
            Outcome::Infeasible => LpStatus::Infeasible,
        })
    }

    pub fn values(&self) -> Vec<f64> {
        self.inner.values()
    }

    pub fn objective(&self) -> f64 {
        self.inner.objective() + self.constant
    }

    pub fn basis(&self) -> Basis {
        Basis(self.inner.basis())
    }

    pub fn load_basis(&mut self, basis: &Basis) -> bool {
        self.inner.load_basis(&basis.0)
    }

    /// Total simplex iterations performed so far.
    pub fn iterations(&self) -> u64 {
        self.inner.iterations
    }

    pub fn max_row_violation(&self) -> f64 {
        self.inner.max_row_violation()
    }

    fn snapshot(&self, status: LpStatus) -> LpSolution {
        LpSolution {
            status,
            values: self.values(),
            objective_value: if status == LpStatus::Infeasible {
                f64::INFINITY
            } else {
                self.objective()
            },
            basis: self.basis(),
        }
    }

    /// Solves and packages the result.
    pub fn solve_to_solution(&mut self) -> Result<LpSolution> {
        let status = self.solve()?;
        Ok(self.snapshot(status))
    }
}

/// Solves the LP over its active rows, optionally from a recorded basis.
pub fn solve_lp(lp: &LinearProgram, warm: Option<&Basis>) -> Result<LpSolution> {
    let mut solver = LpSolver::new(lp)?;
    if let Some(b) = warm {
        solver.load_basis(b);
    }
    solver.solve_to_solution()
}

/// Adds `new_rows` to `lp` and reoptimizes from the basis of `prior`.
pub fn add_rows_and_reoptimize(
    lp: &mut LinearProgram,
    new_rows: &[Row],
    prior: &LpSolution,
) -> Result<LpSolution> {
    let mut solver = LpSolver::new(lp)?;
    solver.load_basis(&prior.basis);
    solver.add_rows(new_rows)?;
    for r in new_rows {
        lp.push_row(r.clone());
    }
    solver.solve_to_solution()
}

/// Branch-and-bound over `integer_vars` with an optional lazy-row callback.
pub fn solve_ilp(
    lp: &LinearProgram,
    integer_vars: &[usize],
    callback: Option<&mut dyn FnMut(&[f64]) -> Vec<Row>>,
) -> Result<LpSolution> {
    let mut solver = LpSolver::new(lp)?;
    let out = match callback {
        Some(cb) => {
            let mut integral_only = |x: &[f64], integral: bool| if integral { cb(x) } else { Vec::new() };
            bnb::branch_and_bound(&mut solver, integer_vars, Some(&mut integral_only), &IlpOptions::default())?
        }
        None => bnb::branch_and_bound(&mut solver, integer_vars, None, &IlpOptions::default())?,
    };
    Ok(out.solution)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn approx(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-9
    }

    #[test]
    fn single_lower_bound_row() {
        let mut lp = LinearProgram::unit_box(vec![1.0]);
        lp.push_row(Row::new(vec![(0, 1.0)], Sense::Ge, 0.3));
        let sol = solve_lp(&lp, None).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!(approx(sol.objective_value, 0.3));
    }

    #[test]
    fn vertex_of_simplex_constraint() {
        let mut lp = LinearProgram::unit_box(vec![-1.0, -1.0]);
        lp.push_row(Row::new(vec![(0, 1.0), (1, 1.0)], Sense::Le, 1.0));
        let sol = solve_lp(&lp, None).unwrap();
        assert!(approx(sol.objective_value, -1.0));
        let frac = sol.values.iter().filter(|v| **v > 1e-9 && **v < 1.0 - 1e-9).count();
        assert_eq!(frac, 0);
    }

    #[test]
    fn fractional_sum_and_its_integer_hull() {
        let mut lp = LinearProgram::unit_box(vec![-1.0, -1.0]);
        lp.push_row(Row::new(vec![(0, 2.0), (1, 2.0)], Sense::Le, 3.0));
        let sol = solve_lp(&lp, None).unwrap();
        assert!(approx(sol.objective_value, -1.5));
        let ilp = solve_ilp(&lp, &[0, 1], None).unwrap();
        assert_eq!(ilp.status, LpStatus::Optimal);
        assert!(approx(ilp.objective_value, -1.0));
    }

    #[test]
    fn warm_reoptimization_after_row_addition() {
        let mut lp = LinearProgram::unit_box(vec![1.0]);
        lp.push_row(Row::new(vec![(0, 1.0)], Sense::Ge, 0.3));
        let prior = solve_lp(&lp, None).unwrap();
        let same = add_rows_and_reoptimize(
            &mut lp.clone(),
            &[Row::new(vec![(0, 1.0)], Sense::Le, 0.9)],
            &prior,
        )
        .unwrap();
        assert!(approx(same.objective_value, 0.3));
        let tighter =
            add_rows_and_reoptimize(&mut lp, &[Row::new(vec![(0, 1.0)], Sense::Ge, 0.5)], &prior)
                .unwrap();
        assert!(approx(tighter.objective_value, 0.5));
        assert_eq!(lp.rows.len(), 2);
    }

    #[test]
    fn contradictory_rows_are_infeasible() {
        let mut lp = LinearProgram::unit_box(vec![1.0, 1.0]);
        lp.push_row(Row::new(vec![(0, 1.0), (1, 1.0)], Sense::Ge, 1.5));
        lp.push_row(Row::new(vec![(0, 1.0), (1, -1.0)], Sense::Eq, 0.9));
        let sol = solve_lp(&lp, None).unwrap();
        assert_eq!(sol.status, LpStatus::Infeasible);
        let mut lp = LinearProgram::unit_box(vec![1.0]);
        lp.push_row(Row::new(vec![(0, 1.0)], Sense::Ge, 2.0));
        assert_eq!(solve_lp(&lp, None).unwrap().status, LpStatus::Infeasible);
    }

    #[test]
    fn constant_is_reported() {
        let mut lp = LinearProgram::unit_box(vec![2.0]);
        lp.constant = -5.0;
        let sol = solve_lp(&lp, None).unwrap();
        assert!(approx(sol.objective_value, -5.0));
    }

    #[test]
    fn integral_lp_optimum_needs_no_branching() {
        let mut lp = LinearProgram::unit_box(vec![-1.0, 2.0, -3.0]);
        lp.push_row(Row::new(vec![(0, 1.0), (2, 1.0)], Sense::Le, 1.0));
        let mut solver = LpSolver::new(&lp).unwrap();
        let out = bnb::branch_and_bound(&mut solver, &[0, 1, 2], None, &IlpOptions::default()).unwrap();
        assert_eq!(out.nodes, 1);
        assert!(approx(out.solution.objective_value, -3.0));
    }

    #[test]
    fn lazy_rows_veto_integral_candidates() {
        // min -x0 - x1, lazily forbid x0 = x1 = 1
        let lp = LinearProgram::unit_box(vec![-1.0, -1.0]);
        let mut calls = 0;
        let mut cb = |x: &[f64]| {
            calls += 1;
            if x[0] + x[1] > 1.5 {
                vec![Row::new(vec![(0, 1.0), (1, 1.0)], Sense::Le, 1.0)]
            } else {
                vec![]
            }
        };
        let sol = solve_ilp(&lp, &[0, 1], Some(&mut cb)).unwrap();
        assert!(approx(sol.objective_value, -1.0));
        assert!(calls >= 2);
    }
}
