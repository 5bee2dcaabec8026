use nalgebra::DMatrix;

use super::simplex::{solve_lp_with, BasisVar, LinearProgram, LpOptions, LpSolution, LpStatus, Sense};
use crate::error::{Error, Result};

/// New columns within this coordinate infinity-norm of an existing column
/// are rejected.
pub const DEDUP_TOL: f64 = 1e-9;

/// A restricted master problem: fixed rows, a growing list of columns with
/// caller-defined tags (for example the state each column came from).
#[derive(Debug, Clone)]
pub struct MasterProblem<T> {
    sense: Sense,
    rhs: Vec<f64>,
    columns: Vec<Vec<f64>>,
    costs: Vec<f64>,
    tags: Vec<T>,
    basis: Option<Vec<BasisVar>>,
    options: LpOptions,
}

impl<T> MasterProblem<T> {
    pub fn new(sense: Sense, rhs: Vec<f64>) -> Self {
        Self {
            sense,
            rhs,
            columns: Vec::new(),
            costs: Vec::new(),
            tags: Vec::new(),
            basis: None,
            options: LpOptions::default(),
        }
    }

    pub fn with_options(mut self, options: LpOptions) -> Self {
        self.options = options;
        self
    }

    pub fn sense(&self) -> Sense {
        self.sense
    }

    pub fn rhs(&self) -> &[f64] {
        &self.rhs
    }

    /// Replaces the right-hand side, keeping columns and the warm-start basis.
    pub fn set_rhs(&mut self, rhs: Vec<f64>) {
        assert_eq!(rhs.len(), self.rhs.len(), "row count is fixed");
        self.rhs = rhs;
    }

    pub fn len(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    pub fn columns(&self) -> &[Vec<f64>] {
        &self.columns
    }

    pub fn costs(&self) -> &[f64] {
        &self.costs
    }

    pub fn tags(&self) -> &[T] {
        &self.tags
    }

    /// Adds a column unless it duplicates an existing one. Returns whether
    /// it was added.
    pub fn add_column(&mut self, column: Vec<f64>, cost: f64, tag: T) -> bool {
        assert_eq!(column.len(), self.rhs.len(), "column length must equal row count");
        let duplicate = self.columns.iter().any(|c| {
            c.iter()
                .zip(&column)
                .all(|(a, b)| (a - b).abs() <= DEDUP_TOL)
        });
        if duplicate {
            return false;
        }
        self.columns.push(column);
        self.costs.push(cost);
        self.tags.push(tag);
        true
    }

    /// Reduced cost of a candidate column in minimization convention:
    /// negative means the column can improve the master.
    pub fn reduced_cost(&self, column: &[f64], cost: f64, duals: &[f64]) -> f64 {
        let ya: f64 = column.iter().zip(duals).map(|(a, y)| a * y).sum();
        match self.sense {
            Sense::Minimize => cost - ya,
            Sense::Maximize => ya - cost,
        }
    }

    pub fn to_lp(&self) -> LinearProgram {
        let m = self.rhs.len();
        let a = DMatrix::from_fn(m, self.columns.len(), |i, j| self.columns[j][i]);
        LinearProgram::new(self.sense, self.costs.clone(), a, self.rhs.clone())
            .expect("master columns have consistent shape")
    }

    /// Solves the current master, warm-starting from the previous basis.
    pub fn solve(&mut self) -> LpSolution {
        let sol = solve_lp_with(&self.to_lp(), &self.options, self.basis.as_deref());
        if sol.is_optimal() {
            self.basis = Some(sol.basis.clone());
        }
        sol
    }
}

#[derive(Debug, Clone)]
pub struct PricedColumn<T> {
    pub column: Vec<f64>,
    pub cost: f64,
    pub tag: T,
}

#[derive(Debug, Clone)]
pub struct PricingOutcome<T> {
    pub columns: Vec<PricedColumn<T>>,
    /// Most negative reduced cost seen by the pricing search (minimization
    /// convention); non-negative means no improving column was found.
    pub best_reduced_cost: f64,
}

impl<T> PricingOutcome<T> {
    pub fn empty() -> Self {
        Self {
            columns: Vec::new(),
            best_reduced_cost: 0.0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ColumnGenerationResult {
    pub solution: LpSolution,
    /// Pricing rounds that added at least one column.
    pub rounds: usize,
    pub converged: bool,
    /// Master objective after the initial solve and after each round.
    pub objective_trace: Vec<f64>,
    /// Best reduced cost reported by the last pricing call.
    pub pricing_residual: f64,
}

/// Alternates master solves and pricing until pricing finds no column with
/// reduced cost below `-tol`, or `max_rounds` rounds have added columns.
pub fn column_generation<T, F>(
    master: &mut MasterProblem<T>,
    mut pricing: F,
    tol: f64,
    max_rounds: usize,
) -> Result<ColumnGenerationResult>
where
    F: FnMut(&LpSolution, &MasterProblem<T>) -> PricingOutcome<T>,
{
    let mut solution = master.solve();
    if solution.status != LpStatus::Optimal {
        return Err(Error::Lp(solution.status));
    }
    let mut trace = vec![solution.objective];
    let mut rounds = 0;
    loop {
        let outcome = pricing(&solution, master);
        let residual = outcome.best_reduced_cost;
        let mut added = false;
        for pc in outcome.columns {
            if master.reduced_cost(&pc.column, pc.cost, &solution.duals) < -tol {
                added |= master.add_column(pc.column, pc.cost, pc.tag);
            }
        }
        if !added {
            return Ok(ColumnGenerationResult {
                solution,
                rounds,
                converged: true,
                objective_trace: trace,
                pricing_residual: residual,
            });
        }
        if rounds == max_rounds {
            return Ok(ColumnGenerationResult {
                solution,
                rounds,
                converged: false,
                objective_trace: trace,
                pricing_residual: residual,
            });
        }
        rounds += 1;
        solution = master.solve();
        if solution.status != LpStatus::Optimal {
            return Err(Error::Lp(solution.status));
        }
        trace.push(solution.objective);
    }
}
